#pragma once

#include <vector>

#include "pkn/matrix.hpp"

namespace pkn {

/// Eigendecomposition of a Hermitian matrix: a = vectors * diag(values) * vectors^*.
/// values are real and sorted descending; vectors is unitary.
struct HermitianEigen {
    std::vector<double> values;
    Matrix vectors;
};

/// Cyclic Jacobi with complex rotations.  Converges when the off-diagonal
/// Frobenius mass drops below 1e-14 * ||a||_F; throws std::runtime_error if
/// 60 sweeps do not get there.  Ties in the descending sort keep encounter
/// order.  Throws std::invalid_argument unless ||a - a*||_F <= tol * ||a||_F.
HermitianEigen hermitian_eigen(const Matrix& a, double hermitian_tol = 1e-9);

/// Eigenvalues only (no vector accumulation), sorted descending.
std::vector<double> hermitian_eigenvalues(const Matrix& a, double hermitian_tol = 1e-9);

}  // namespace pkn
