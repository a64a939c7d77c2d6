#include "pkn/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pkn {

namespace {

constexpr double kConvergence = 1e-14;
constexpr int kMaxSweeps = 60;

// Rotates columns p, q of w (and v, when accumulated) so that they become
// orthogonal; the rotation diagonalizes their 2x2 Gram block.  Returns the
// squared off-diagonal Gram mass |<w_p, w_q>|^2 seen before rotating.
double orthogonalize_pair(Matrix& w, Matrix* v, std::size_t p, std::size_t q) {
    const std::size_t m = w.rows();
    double app = 0.0, aqq = 0.0;
    cplx apq = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        app += std::norm(w(i, p));
        aqq += std::norm(w(i, q));
        apq += std::conj(w(i, p)) * w(i, q);
    }
    const double ab = std::abs(apq);
    if (ab == 0.0) return 0.0;
    const cplx ph = apq / ab;
    const double tau = (aqq - app) / (2.0 * ab);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const cplx phc = std::conj(ph);
    for (std::size_t i = 0; i < m; ++i) {
        const cplx xp = w(i, p);
        const cplx xq = w(i, q);
        w(i, p) = c * xp - phc * s * xq;
        w(i, q) = s * xp + phc * c * xq;
    }
    if (v) {
        for (std::size_t i = 0; i < v->rows(); ++i) {
            const cplx xp = (*v)(i, p);
            const cplx xq = (*v)(i, q);
            (*v)(i, p) = c * xp - phc * s * xq;
            (*v)(i, q) = s * xp + phc * c * xq;
        }
    }
    return ab * ab;
}

// Orthogonalizes the columns of w in place; v (if given) accumulates the
// applied right rotations so w_out = w_in * v holds.
void hestenes_sweeps(Matrix& w, Matrix* v) {
    const std::size_t n = w.cols();
    if (n <= 1) return;
    const double total = frobenius_norm(w);
    // convergence measured on the implicit Gram matrix, scale ||w||_F^2
    const double target = kConvergence * std::max(total * total, 1e-300);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * orthogonalize_pair(w, v, p, q);
        if (std::sqrt(off) <= target) return;
    }
    // the mass recorded above is pre-rotation; re-check before giving up
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) {
            cplx g = 0.0;
            for (std::size_t i = 0; i < w.rows(); ++i) g += std::conj(w(i, p)) * w(i, q);
            off += 2.0 * std::norm(g);
        }
    if (std::sqrt(off) > target)
        throw std::runtime_error("jacobi svd iteration failed to converge");
}

std::vector<double> column_norms(const Matrix& w) {
    std::vector<double> sigma(w.cols());
    for (std::size_t j = 0; j < w.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < w.rows(); ++i) s += std::norm(w(i, j));
        sigma[j] = std::sqrt(s);
    }
    return sigma;
}

std::vector<std::size_t> descending_order(const std::vector<double>& vals) {
    std::vector<std::size_t> idx(vals.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t i, std::size_t j) { return vals[i] > vals[j]; });
    return idx;
}

// a must be tall (rows >= cols)
Svd svd_tall(const Matrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    Matrix w = a;
    Matrix v = Matrix::identity(n);
    hestenes_sweeps(w, &v);

    std::vector<double> sigma = column_norms(w);
    const auto order = descending_order(sigma);
    const double drop = 1e-15 * sigma[order[0]];

    Svd out{Matrix(m, m), std::vector<double>(n), Matrix(n, n)};
    std::size_t rank = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        for (std::size_t i = 0; i < n; ++i) out.right(i, k) = v(i, j);
        if (sigma[j] > drop) {
            out.values[k] = sigma[j];
            rank = k + 1;
            for (std::size_t i = 0; i < m; ++i) out.left(i, k) = w(i, j) / sigma[j];
        } else {
            out.values[k] = 0.0;
        }
    }
    if (rank < m) {
        if (rank == 0) {
            out.left = Matrix::identity(m);
        } else {
            Matrix full = orthonormal_completion(get_block(out.left, 0, 0, m, rank));
            for (std::size_t k = rank; k < m; ++k)
                for (std::size_t i = 0; i < m; ++i) out.left(i, k) = full(i, k);
        }
    }
    return out;
}

// Scales each left singular vector so its largest-modulus entry (first on
// ties) is real positive, compensating the paired right vector.
void fix_phases(Svd& s) {
    const std::size_t m = s.left.rows();
    const std::size_t n = s.right.rows();
    for (std::size_t j = 0; j < m; ++j) {
        std::size_t imax = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double a = std::abs(s.left(i, j));
            if (a > best * (1.0 + 1e-12)) {
                best = a;
                imax = i;
            }
        }
        if (best <= 0.0) continue;
        const cplx top = s.left(imax, j);
        const cplx phase = std::conj(top) / std::abs(top);
        for (std::size_t i = 0; i < m; ++i) s.left(i, j) *= phase;
        if (j < s.values.size() && s.values[j] > 0.0 && j < n)
            for (std::size_t i = 0; i < n; ++i) s.right(i, j) *= phase;
    }
}

}  // namespace

Svd svd(const Matrix& a) {
    Svd out = a.rows() >= a.cols() ? svd_tall(a) : [&] {
        Svd t = svd_tall(adjoint(a));
        return Svd{std::move(t.right), std::move(t.values), std::move(t.left)};
    }();
    fix_phases(out);
    return out;
}

std::vector<double> singular_values(const Matrix& a) {
    Matrix w = a.rows() >= a.cols() ? a : adjoint(a);
    hestenes_sweeps(w, nullptr);
    std::vector<double> sigma = column_norms(w);
    std::stable_sort(sigma.begin(), sigma.end(), std::greater<>());
    return sigma;
}

Matrix orthonormal_completion(const Matrix& cols, double tol) {
    const std::size_t m = cols.rows();
    const std::size_t r = cols.cols();
    if (r > m) throw std::invalid_argument("more columns than rows");
    {
        Matrix g = adjoint(cols) * cols;
        if (frobenius_norm(g - Matrix::identity(r)) > tol)
            throw std::invalid_argument("columns are not orthonormal within tolerance");
    }
    Matrix out(m, m);
    set_block(out, 0, 0, cols);
    std::vector<bool> used(m, false);
    Vec v(m);
    for (std::size_t k = r; k < m; ++k) {
        // candidate = standard basis vector with the largest residual after
        // two orthogonalization passes against everything placed so far
        std::size_t best_idx = m;
        double best_norm = -1.0;
        Vec best(m);
        for (std::size_t cand = 0; cand < m; ++cand) {
            if (used[cand]) continue;
            for (std::size_t i = 0; i < m; ++i) v[i] = (i == cand) ? 1.0 : 0.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t c = 0; c < k; ++c) {
                    cplx proj = 0.0;
                    for (std::size_t i = 0; i < m; ++i) proj += std::conj(out(i, c)) * v[i];
                    for (std::size_t i = 0; i < m; ++i) v[i] -= proj * out(i, c);
                }
            }
            const double nv = vnorm(v);
            if (nv > best_norm + 1e-12) {
                best_norm = nv;
                best_idx = cand;
                best = v;
            }
        }
        if (best_idx == m || best_norm <= 1e-8)
            throw std::runtime_error("orthonormal completion failed");
        used[best_idx] = true;
        for (std::size_t i = 0; i < m; ++i) out(i, k) = best[i] / best_norm;
    }
    return out;
}

int rank_tol(const Matrix& a, double tol) {
    if (tol < 0.0) throw std::invalid_argument("rank tolerance must be nonnegative");
    std::vector<double> s = singular_values(a);
    if (s.empty() || s[0] == 0.0) return 0;
    const double cut = tol * s[0];
    int r = 0;
    for (double x : s)
        if (x > cut) ++r;
    return r;
}

Matrix nearest_unitary(const Matrix& a) {
    if (!a.square()) throw std::invalid_argument("nearest unitary needs a square matrix");
    Svd s = svd(a);
    return s.left * adjoint(s.right);
}

}  // namespace pkn
