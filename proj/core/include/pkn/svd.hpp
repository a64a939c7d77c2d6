#pragma once

#include <vector>

#include "pkn/matrix.hpp"

namespace pkn {

/**
 * Singular value decomposition a = left * S * right^*, where S is the
 * rows x cols rectangular diagonal of `values`.  left and right are square
 * unitary; values has length min(rows, cols), sorted descending, all >= 0.
 * Each left singular vector is scaled so its largest-modulus entry is real
 * positive (first such entry on ties), with the matching right vector
 * compensated.
 */
struct Svd {
    Matrix left;
    std::vector<double> values;
    Matrix right;
};

/// One-sided (Hestenes) Jacobi on columns; wide inputs go through the
/// adjoint.  Same sweep cap and convergence policy as the eigensolver.
Svd svd(const Matrix& a);

/// Singular values only, sorted descending.
std::vector<double> singular_values(const Matrix& a);

/// Extends a matrix with orthonormal columns (validated within `tol`) to a
/// square unitary; the input columns are copied unchanged into the result.
Matrix orthonormal_completion(const Matrix& cols, double tol = 1e-8);

/// Number of singular values exceeding tol * s_1; 0 for the zero matrix.
int rank_tol(const Matrix& a, double tol);

/// Closest unitary in Frobenius norm (singular values snapped to 1).
Matrix nearest_unitary(const Matrix& a);

}  // namespace pkn
