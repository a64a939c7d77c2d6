#include "pkn/tensor.hpp"

#include <cmath>
#include <stdexcept>

#include "pkn/svd.hpp"

namespace pkn {

TensorShape::TensorShape(std::vector<int> d) : dims(std::move(d)) {
    if (dims.empty()) throw std::invalid_argument("tensor shape needs at least one factor");
    for (int n : dims)
        if (n < 2) throw std::invalid_argument("tensor factors must have dimension >= 2");
}

std::size_t TensorShape::total() const {
    std::size_t t = 1;
    for (int n : dims) t *= static_cast<std::size_t>(n);
    return t;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{0.0, 0.0}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return r;
}

Matrix kron_multi(std::span<const Matrix> factors) {
    if (factors.empty()) throw std::invalid_argument("kron of an empty factor list");
    Matrix r = factors[0];
    for (std::size_t i = 1; i < factors.size(); ++i) r = kron(r, factors[i]);
    return r;
}

Vec vec(const Matrix& x) {
    Vec v(x.rows() * x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j)
        for (std::size_t i = 0; i < x.rows(); ++i) v[i + x.rows() * j] = x(i, j);
    return v;
}

Matrix unvec(std::span<const cplx> v, std::size_t rows, std::size_t cols) {
    if (v.size() != rows * cols) throw std::invalid_argument("unvec length mismatch");
    Matrix x(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) x(i, j) = v[i + rows * j];
    return x;
}

namespace {

void require_bipartite(const TensorShape& shape) {
    if (shape.factors() != 2)
        throw std::invalid_argument("operation needs a two-factor shape");
}

void require_matching(const Matrix& x, const TensorShape& shape) {
    if (x.rows() != shape.total() || x.cols() != shape.total())
        throw std::invalid_argument("matrix does not match tensor shape");
}

}  // namespace

Matrix partial_trace_first(const Matrix& x, const TensorShape& shape) {
    require_bipartite(shape);
    require_matching(x, shape);
    const std::size_t m = static_cast<std::size_t>(shape.dims[0]);
    const std::size_t n = static_cast<std::size_t>(shape.dims[1]);
    Matrix r(n, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) r(a, b) += x(i * n + a, i * n + b);
    return r;
}

Matrix partial_trace_second(const Matrix& x, const TensorShape& shape) {
    require_bipartite(shape);
    require_matching(x, shape);
    const std::size_t m = static_cast<std::size_t>(shape.dims[0]);
    const std::size_t n = static_cast<std::size_t>(shape.dims[1]);
    Matrix r(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            cplx t = 0.0;
            for (std::size_t a = 0; a < n; ++a) t += x(i * n + a, j * n + a);
            r(i, j) = t;
        }
    return r;
}

Matrix partial_transpose(const Matrix& x, const TensorShape& shape,
                         const std::vector<bool>& flags) {
    require_matching(x, shape);
    if (flags.size() != shape.factors())
        throw std::invalid_argument("one transpose flag per factor required");
    const std::size_t N = shape.total();
    const std::size_t m = shape.factors();

    // mixed-radix digits, factor 0 most significant (matches kron layout)
    std::vector<std::size_t> radix(m);
    for (std::size_t f = 0; f < m; ++f) radix[f] = static_cast<std::size_t>(shape.dims[f]);

    std::vector<std::size_t> rdig(m), cdig(m);
    Matrix out(N, N);
    for (std::size_t r = 0; r < N; ++r) {
        std::size_t rr = r;
        for (std::size_t f = m; f-- > 0;) {
            rdig[f] = rr % radix[f];
            rr /= radix[f];
        }
        for (std::size_t c = 0; c < N; ++c) {
            std::size_t cc = c;
            for (std::size_t f = m; f-- > 0;) {
                cdig[f] = cc % radix[f];
                cc /= radix[f];
            }
            std::size_t ro = 0, co = 0;
            for (std::size_t f = 0; f < m; ++f) {
                const std::size_t rd = flags[f] ? cdig[f] : rdig[f];
                const std::size_t cd = flags[f] ? rdig[f] : cdig[f];
                ro = ro * radix[f] + rd;
                co = co * radix[f] + cd;
            }
            out(ro, co) = x(r, c);
        }
    }
    return out;
}

Superoperator::Superoperator(TensorShape shape_, Matrix mat_)
    : shape(std::move(shape_)), mat(std::move(mat_)) {
    const std::size_t n2 = shape.total() * shape.total();
    if (mat.rows() != n2 || mat.cols() != n2)
        throw std::invalid_argument("superoperator matrix must be N^2 x N^2");
}

Superoperator superop_of_sandwich(const Matrix& u, const Matrix& v,
                                  const TensorShape& shape) {
    const std::size_t N = shape.total();
    if (u.rows() != N || u.cols() != N || v.rows() != N || v.cols() != N)
        throw std::invalid_argument("sandwich factors must be N x N");
    return Superoperator(shape, kron(transpose(v), u));
}

Matrix apply_superop(const Superoperator& s, const Matrix& x) {
    const std::size_t N = s.shape.total();
    if (x.rows() != N || x.cols() != N)
        throw std::invalid_argument("matrix does not match superoperator shape");
    return unvec(matvec(s.mat, vec(x)), N, N);
}

Matrix transpose_superop_mat(std::size_t n) {
    // vec(x^T)[i + n*j] = x(j, i) = vec(x)[j + n*i]
    Matrix p(n * n, n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p(i + n * j, j + n * i) = 1.0;
    return p;
}

Matrix reshuffle(const Superoperator& s) {
    const std::size_t N = s.shape.total();
    Matrix r(N * N, N * N);
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = 0; b < N; ++b)
            for (std::size_t c = 0; c < N; ++c)
                for (std::size_t d = 0; d < N; ++d)
                    r(a * N + b, c * N + d) = s.mat(a * N + c, b * N + d);
    return r;
}

KronRankOne nearest_kron_rank1(const Superoperator& s) {
    const std::size_t N = s.shape.total();
    Matrix r = reshuffle(s);
    Svd dec = svd(r);

    const double total = frobenius_norm(r);
    const double s1 = dec.values[0];
    // relative Frobenius error of the rank-one truncation, summed over the
    // singular-value tail; the equivalent sqrt(1 - (s1/total)^2) cancels
    // catastrophically on near-rank-one inputs
    double residual = 0.0;
    if (total > 0.0) {
        double tail = 0.0;
        for (std::size_t i = 1; i < dec.values.size(); ++i)
            tail += dec.values[i] * dec.values[i];
        residual = std::sqrt(tail) / total;
    }

    // R ~ s1 * f g^*; f = rm-vec(b^T), conj(g) = rm-vec(a), split sqrt(s1) each
    const double scale = std::sqrt(s1);
    Matrix a(N, N), bt(N, N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            bt(i, j) = scale * dec.left(i * N + j, 0);
            a(i, j) = scale * std::conj(dec.right(i * N + j, 0));
        }
    Matrix b = transpose(bt);

    // phase convention: largest-modulus entry of a real positive
    double best = -1.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            const double v = std::abs(a(i, j));
            if (v > best * (1.0 + 1e-12)) {
                best = v;
                bi = i;
                bj = j;
            }
        }
    if (best > 0.0) {
        const cplx ph = std::conj(a(bi, bj)) / std::abs(a(bi, bj));
        a *= ph;
        b *= std::conj(ph);
    }
    return KronRankOne{std::move(a), std::move(b), residual};
}

}  // namespace pkn
