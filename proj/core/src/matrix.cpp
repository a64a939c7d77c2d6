#include "pkn/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace pkn {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void require_same_shape(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix shape mismatch");
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {
    require(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    require(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
    require(data_.size() == rows * cols, "matrix entry count mismatch");
    for (const cplx& z : data_)
        require(std::isfinite(z.real()) && std::isfinite(z.imag()),
                "matrix entries must be finite");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::unit(std::size_t rows, std::size_t cols, std::size_t i, std::size_t j) {
    require(i < rows && j < cols, "unit matrix index out of range");
    Matrix m(rows, cols);
    m(i, j) = 1.0;
    return m;
}

Matrix Matrix::diag(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::diag(std::span<const cplx> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    require(rows.size() > 0, "matrix dimensions must be positive");
    std::size_t ncols = rows.begin()->size();
    std::vector<cplx> entries;
    entries.reserve(rows.size() * ncols);
    for (const auto& row : rows) {
        require(row.size() == ncols, "ragged rows");
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return Matrix(rows.size(), ncols, std::move(entries));
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    require_same_shape(*this, rhs);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    require_same_shape(*this, rhs);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(cplx s) {
    for (cplx& z : data_) z *= s;
    return *this;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix r = a;
    r += b;
    return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    Matrix r = a;
    r -= b;
    return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "matrix product shape mismatch");
    Matrix r(a.rows(), b.cols());
    // i-k-j order: streams through rows of b for row-major locality
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
        }
    }
    return r;
}

Matrix operator*(cplx s, const Matrix& a) {
    Matrix r = a;
    r *= s;
    return r;
}

Matrix operator*(double s, const Matrix& a) { return cplx{s, 0.0} * a; }

Matrix adjoint(const Matrix& a) {
    Matrix r(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = std::conj(a(i, j));
    return r;
}

Matrix transpose(const Matrix& a) {
    Matrix r(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
    return r;
}

Matrix conjugate(const Matrix& a) {
    Matrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = std::conj(a(i, j));
    return r;
}

cplx trace(const Matrix& a) {
    require(a.square(), "trace needs a square matrix");
    cplx t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (const cplx& z : a.data()) s += std::norm(z);
    return std::sqrt(s);
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (const cplx& z : a.data()) m = std::max(m, std::abs(z));
    return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

double unitarity_residual(const Matrix& a) {
    require(a.square(), "unitarity residual needs a square matrix");
    return frobenius_norm(adjoint(a) * a - Matrix::identity(a.rows()));
}

bool is_hermitian(const Matrix& a, double rel_tol) {
    if (!a.square()) return false;
    return frobenius_norm(a - adjoint(a)) <= rel_tol * (1.0 + frobenius_norm(a));
}

Matrix get_block(const Matrix& a, std::size_t r0, std::size_t c0,
                 std::size_t rows, std::size_t cols) {
    require(r0 + rows <= a.rows() && c0 + cols <= a.cols(), "block out of range");
    Matrix r(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) r(i, j) = a(r0 + i, c0 + j);
    return r;
}

void set_block(Matrix& a, std::size_t r0, std::size_t c0, const Matrix& block) {
    require(r0 + block.rows() <= a.rows() && c0 + block.cols() <= a.cols(),
            "block out of range");
    for (std::size_t i = 0; i < block.rows(); ++i)
        for (std::size_t j = 0; j < block.cols(); ++j) a(r0 + i, c0 + j) = block(i, j);
}

Matrix get_column(const Matrix& a, std::size_t j) {
    require(j < a.cols(), "column out of range");
    Matrix r(a.rows(), 1);
    for (std::size_t i = 0; i < a.rows(); ++i) r(i, 0) = a(i, j);
    return r;
}

void set_column(Matrix& a, std::size_t j, std::span<const cplx> col) {
    require(j < a.cols() && col.size() == a.rows(), "column shape mismatch");
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, j) = col[i];
}

cplx vdot(std::span<const cplx> x, std::span<const cplx> y) {
    if (x.size() != y.size()) throw std::invalid_argument("vector length mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

double vnorm(std::span<const cplx> x) {
    double s = 0.0;
    for (const cplx& z : x) s += std::norm(z);
    return std::sqrt(s);
}

Vec matvec(const Matrix& a, std::span<const cplx> x) {
    require(x.size() == a.cols(), "matvec shape mismatch");
    Vec y(a.rows(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

}  // namespace pkn
