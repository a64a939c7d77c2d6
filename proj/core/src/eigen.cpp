#include "pkn/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pkn {

namespace {

constexpr double kConvergence = 1e-14;
constexpr int kMaxSweeps = 60;

double offdiag_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

/*
 * One two-sided rotation zeroing a(p,q).  The 2x2 Hermitian block
 * [[app, b],[conj(b), aqq]] is phase-reduced to a real symmetric block and
 * rotated with the classic stable tangent choice.  The combined unitary is
 *   J = [[c, s], [-conj(w) s, conj(w) c]],  w = b / |b|,
 * applied as a <- J* a J on rows/cols p, q and accumulated as v <- v J.
 */
void rotate(Matrix& a, Matrix* v, std::size_t p, std::size_t q) {
    const cplx b = a(p, q);
    const double ab = std::abs(b);
    if (ab == 0.0) return;
    const cplx w = b / ab;
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * ab);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const std::size_t n = a.rows();
    const cplx wc = std::conj(w);
    // left: rows p, q of a <- J* a
    for (std::size_t j = 0; j < n; ++j) {
        const cplx xp = a(p, j);
        const cplx xq = a(q, j);
        a(p, j) = c * xp - w * s * xq;
        a(q, j) = s * xp + w * c * xq;
    }
    // right: cols p, q of a <- a J
    for (std::size_t i = 0; i < n; ++i) {
        const cplx xp = a(i, p);
        const cplx xq = a(i, q);
        a(i, p) = c * xp - wc * s * xq;
        a(i, q) = s * xp + wc * c * xq;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = cplx{a(p, p).real(), 0.0};
    a(q, q) = cplx{a(q, q).real(), 0.0};
    if (v) {
        for (std::size_t i = 0; i < v->rows(); ++i) {
            const cplx xp = (*v)(i, p);
            const cplx xq = (*v)(i, q);
            (*v)(i, p) = c * xp - wc * s * xq;
            (*v)(i, q) = s * xp + wc * c * xq;
        }
    }
}

// Runs sweeps until converged; returns the working copy diagonalized in place.
void jacobi(Matrix& a, Matrix* v) {
    const std::size_t n = a.rows();
    const double target = kConvergence * std::max(frobenius_norm(a), 1e-300);
    if (n == 1) {
        a(0, 0) = cplx{a(0, 0).real(), 0.0};
        return;
    }
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (offdiag_norm(a) <= target) return;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
    }
    if (offdiag_norm(a) <= target) return;
    throw std::runtime_error("jacobi eigen iteration failed to converge");
}

Matrix symmetrized(const Matrix& a, double tol) {
    if (!a.square()) throw std::invalid_argument("hermitian eigen needs a square matrix");
    if (!is_hermitian(a, tol))
        throw std::invalid_argument("matrix is not hermitian within tolerance");
    Matrix h = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return h;
}

std::vector<std::size_t> descending_order(const std::vector<double>& vals) {
    std::vector<std::size_t> idx(vals.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t i, std::size_t j) { return vals[i] > vals[j]; });
    return idx;
}

}  // namespace

HermitianEigen hermitian_eigen(const Matrix& a, double hermitian_tol) {
    Matrix h = symmetrized(a, hermitian_tol);
    const std::size_t n = h.rows();
    Matrix v = Matrix::identity(n);
    jacobi(h, &v);

    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = h(i, i).real();
    const auto order = descending_order(vals);

    HermitianEigen out{std::vector<double>(n), Matrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = vals[order[k]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

std::vector<double> hermitian_eigenvalues(const Matrix& a, double hermitian_tol) {
    Matrix h = symmetrized(a, hermitian_tol);
    jacobi(h, nullptr);
    std::vector<double> vals(h.rows());
    for (std::size_t i = 0; i < h.rows(); ++i) vals[i] = h(i, i).real();
    std::stable_sort(vals.begin(), vals.end(), std::greater<>());
    return vals;
}

}  // namespace pkn
