#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace pkn {

using cplx = std::complex<double>;
using Vec = std::vector<cplx>;

/**
 * Dense complex matrix with row-major storage.
 *
 * Invariants: rows >= 1, cols >= 1, entry count == rows*cols, and every
 * entry finite.  Constructors taking user data enforce all of them and
 * throw std::invalid_argument on violation.
 */
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols);  // zero-filled
    Matrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

    static Matrix identity(std::size_t n);
    // E_ij: single 1 at (i, j)
    static Matrix unit(std::size_t rows, std::size_t cols, std::size_t i, std::size_t j);
    static Matrix diag(std::span<const double> d);
    static Matrix diag(std::span<const cplx> d);
    static Matrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const cplx> data() const { return data_; }
    std::span<cplx> data() { return data_; }

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(cplx s);

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<cplx> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);  // matrix product
Matrix operator*(cplx s, const Matrix& a);
Matrix operator*(double s, const Matrix& a);

Matrix adjoint(const Matrix& a);
Matrix transpose(const Matrix& a);
Matrix conjugate(const Matrix& a);

cplx trace(const Matrix& a);
double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);

// ||a*a - I||_F, the unitarity defect of a square matrix
double unitarity_residual(const Matrix& a);
bool is_hermitian(const Matrix& a, double rel_tol);

Matrix get_block(const Matrix& a, std::size_t r0, std::size_t c0,
                 std::size_t rows, std::size_t cols);
void set_block(Matrix& a, std::size_t r0, std::size_t c0, const Matrix& block);
Matrix get_column(const Matrix& a, std::size_t j);
void set_column(Matrix& a, std::size_t j, std::span<const cplx> col);

// column vector helpers
cplx vdot(std::span<const cplx> x, std::span<const cplx> y);  // sum conj(x_i) y_i
double vnorm(std::span<const cplx> x);
Vec matvec(const Matrix& a, std::span<const cplx> x);

}  // namespace pkn
