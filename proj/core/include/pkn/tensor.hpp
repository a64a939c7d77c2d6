#pragma once

#include <span>
#include <vector>

#include "pkn/matrix.hpp"

namespace pkn {

/// Factor dimensions of a tensor-product space.  Every factor must be at
/// least 2; total() is the product.
struct TensorShape {
    std::vector<int> dims;
    explicit TensorShape(std::vector<int> dims);
    std::size_t factors() const { return dims.size(); }
    std::size_t total() const;
    bool operator==(const TensorShape&) const = default;
};

Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron_multi(std::span<const Matrix> factors);

/// Column-stacking vectorization: vec(x)[i + rows*j] = x(i, j), so that
/// vec(u x v) = (v^T (x) u) vec(x).
Vec vec(const Matrix& x);
Matrix unvec(std::span<const cplx> v, std::size_t rows, std::size_t cols);

/// Bipartite partial traces on M_m (x) M_n.
Matrix partial_trace_first(const Matrix& x, const TensorShape& shape);   // -> M_n
Matrix partial_trace_second(const Matrix& x, const TensorShape& shape);  // -> M_m

/// Transposes the flagged factors; pure index permutation, O(N^2).
Matrix partial_transpose(const Matrix& x, const TensorShape& shape,
                         const std::vector<bool>& flags);

/// Linear map on M_N represented on column-stacked coordinates by an
/// N^2 x N^2 matrix.
struct Superoperator {
    TensorShape shape;
    Matrix mat;
    Superoperator(TensorShape shape, Matrix mat);
};

/// Superoperator of x -> u x v; mat = v^T (x) u.
Superoperator superop_of_sandwich(const Matrix& u, const Matrix& v,
                                  const TensorShape& shape);

Matrix apply_superop(const Superoperator& s, const Matrix& x);

/// Permutation matrix P with P vec(x) = vec(x^T), on M_n.
Matrix transpose_superop_mat(std::size_t n);

/**
 * Realignment R of an N^2 x N^2 superoperator matrix:
 *   R[a*N + b, c*N + d] = mat[a*N + c, b*N + d].
 * A sandwich map x -> u x v realigns to the rank-one R = f g^T where f, g
 * are the row-major vectorizations of v^T and u.  The map is an involution:
 * reshuffle(reshuffle(s)) returns s.mat exactly.
 */
Matrix reshuffle(const Superoperator& s);

/// Best Kronecker rank-one factorization s.mat ~ b^T (x) a, from the dominant
/// singular pair of the realignment; residual is the relative Frobenius error
/// sqrt(1 - s_1^2 / ||R||_F^2).  Scale is balanced (||a||_F = ||b||_F) and the
/// largest-modulus entry of a is made real positive.
struct KronRankOne {
    Matrix a;
    Matrix b;
    double residual;
};
KronRankOne nearest_kron_rank1(const Superoperator& s);

}  // namespace pkn
