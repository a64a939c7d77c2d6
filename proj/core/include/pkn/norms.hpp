#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pkn/matrix.hpp"

namespace pkn {

/// Parameters of the norm: sum of the p-th powers of the k largest singular
/// values, to the 1/p.  Requires finite p >= 1 and k >= 1; k larger than the
/// number of singular values is clamped at evaluation time.
struct PkParams {
    double p;
    int k;
    PkParams(double p, int k);
};

double pk_norm(const Matrix& a, const PkParams& params);
double pk_norm_pth_power(const Matrix& a, const PkParams& params);

/// Same evaluation from precomputed singular values (descending).
double pk_from_singular_values(std::span<const double> values, const PkParams& params);
double pk_pth_power_from_singular_values(std::span<const double> values,
                                         const PkParams& params);

/**
 * Sum of the gamma-th powers of the k largest eigenvalues of a Hermitian
 * matrix.  For non-integer gamma the matrix must be positive semidefinite:
 * eigenvalues in [-1e-10 * ||a||_F, 0) are clamped to zero, anything below
 * that is an error.  gamma >= 0, 1 <= k <= n.
 */
double top_k_eigen_sum(const Matrix& a, int k, double gamma);

/// Extremal trace characterization of partial eigenvalue sums: over
/// isometries W (n x k), tr(W* a W) is maximized by the top-k eigenvectors
/// and minimized by the bottom-k.  Sampled check with Haar isometries.
struct KyFanExtremalReport {
    double top_sum;          // sum of k largest eigenvalues
    double bottom_sum;       // sum of k smallest
    double max_sampled;      // largest tr(W* a W) observed
    double min_sampled;
    double top_attained_gap;     // top_sum - trace at the top-k eigenvector isometry
    double bottom_attained_gap;  // trace at the bottom-k isometry - bottom_sum
    std::int64_t samples;
    std::int64_t violations;  // samples outside [bottom_sum - tol, top_sum + tol]
    bool holds;
};
KyFanExtremalReport kyfan_extremal_check(const Matrix& a, int k, int trials,
                                         std::uint64_t seed, double tol = 1e-9);

/// True iff every descending prefix sum of x is at most the matching prefix
/// sum of y (within tol).
bool weak_majorization(std::span<const double> x, std::span<const double> y,
                       double tol = 1e-12);

}  // namespace pkn
