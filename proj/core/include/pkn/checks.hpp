#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pkn/matrix.hpp"
#include "pkn/norms.hpp"

namespace pkn {

/// Outcome of a checked statement.  Implication checks report `vacuous`
/// when the hypothesis fails; plain inequalities use holds/violated only.
enum class CheckStatus { holds, violated, vacuous };

/// Named inputs (and derived quantities) of a failed or interesting check.
struct Witness {
    std::vector<std::pair<std::string, double>> scalars;
    std::vector<std::pair<std::string, Matrix>> matrices;
};

/// slack = checked_lhs - checked_rhs for inequalities of the form
/// lhs >= rhs; holds means slack >= -tol at the tolerance used.
struct IneqReport {
    CheckStatus status;
    double slack;
    std::optional<Witness> witness;
    bool holds() const { return status == CheckStatus::holds; }
};

/// (a+b)^gamma + (a-b)^gamma >= 2 a^gamma for -a <= b <= a, gamma >= 1.
IneqReport scalar_convexity_check(double a, double b, double gamma, double tol = 1e-12);

/// x^* a^gamma x >= (x^* a x)^gamma ||x||^(2(1-gamma)) for PSD a, gamma >= 1.
IneqReport psd_power_quadform_check(const Matrix& a, std::span<const cplx> x,
                                    double gamma, double tol = 1e-9);

/// a and b are orthogonal when a^* b = 0 and a b^* = 0 (scaled residuals).
bool orthogonal(const Matrix& a, const Matrix& b, double tol = 1e-9);

/// Normalized orthogonality defect max(||a^* b||_F, ||a b^*||_F) scaled by
/// 1 / (1 + ||a||_F ||b||_F).
double orthogonality_defect(const Matrix& a, const Matrix& b);

/**
 * For an orthogonal pair, builds unitaries u, v such that u a v is supported
 * on the leading split x split block and u b v on the trailing complement,
 * with split = rank(a).  Requires that not both inputs are zero.
 */
struct BlockDiagonalization {
    Matrix u;
    Matrix v;
    std::size_t split;
};
BlockDiagonalization simultaneous_block_diagonalize(const Matrix& a, const Matrix& b,
                                                    double rank_tolerance = 1e-10);

/// If (a+b) is orthogonal to c and a is orthogonal to b, then both a and b
/// are orthogonal to c.  Conclusion residuals are allowed a proportional
/// factor of 10 over the hypothesis tolerance.
IneqReport orthogonality_cancellation_check(const Matrix& a, const Matrix& b,
                                            const Matrix& c, double tol = 1e-9);

/**
 * Top-k eigenvalue power sums under a Hermitian split: for c, d Hermitian
 * with c+d and c-d both PSD, gamma >= 1, 1 <= k <= n,
 *   sum_k lambda^gamma(c+d) + sum_k lambda^gamma(c-d) >= 2 sum_k lambda^gamma(c).
 */
IneqReport eigen_power_sum_ineq(const Matrix& c, const Matrix& d, double gamma, int k,
                                double tol = 1e-9);

/// Fixed four-dimensional instance (c+d = diag(1,1,3,3), c-d = diag(3,3,1,1))
/// on which the inequality above reverses for gamma in (0,1): with k = 2 the
/// two sides are 4*3^gamma and 4*2^gamma, so slack = lhs - rhs > 0 measures
/// the failure of the gamma >= 1 statement below the threshold.
IneqReport power_sum_reversal_instance(double gamma, int k = 2);

/// ||a+b||^p + ||a-b||^p >= 2 sum_k lambda^(p/2)(a^* a + b^* b) for p > 2
/// (p-th powers of the (p,k)-norm; k clamped to the dimension).
IneqReport pk_parallelogram_lower_bound(const Matrix& a, const Matrix& b,
                                        const PkParams& params, double tol = 1e-9);

/// If nonzero a, b are orthogonal and the norm is additive on a + b
/// (||a+b||^p = ||a||^p + ||b||^p), then rank(a+b) <= k.  Needs k >= 2.
IneqReport rank_bound_check(const Matrix& a, const Matrix& b,
                                  const PkParams& params, double tol = 1e-9);

/// Default grid {2^-20, ..., 2^-1} plus {0.1, ..., 0.9}.
std::vector<double> default_alpha_grid();

/**
 * Structure forced on a PSD perturbation: a, b PSD, gamma > 1.  Hypothesis
 * (sampled on the grid): for every alpha,
 *   sum_k lambda^gamma(a + alpha b) <= sum_k lambda^gamma(a) + alpha^gamma sum_k lambda^gamma(b).
 * Conclusion: if lambda_k(a) = 0, then a and b are orthogonal; otherwise,
 * with ell the number of trailing eigenvalues tied with lambda_k(a), the
 * compression of b onto the top k+ell eigenvectors of a vanishes
 * (u^* b u = 0_(k+ell) (+) b_hat).
 */
struct PerturbationReport {
    bool grid_sampled = true;  // hypothesis checked on a finite grid only
    bool hypothesis_holds;
    double hypothesis_min_slack;  // min over the grid of rhs - lhs
    int conclusion_case;          // 1: lambda_k (s_k) vanishes, 2: positive
    std::size_t tie_count;        // ell
    bool conclusion_holds;
    double conclusion_residual;
    CheckStatus implication;  // vacuous when the hypothesis fails
};
PerturbationReport psd_perturbation_structure(const Matrix& a, const Matrix& b,
                                              double gamma, int k,
                                              std::span<const double> alpha_grid,
                                              double tol = 1e-9);

/**
 * Singular-value analogue, via both Gram sides: t, s square, p > 2.
 * Hypothesis for every x on the grid, with gamma = p/2:
 *   sum_k lambda^gamma(t^* t + x^2 s^* s) <= sum_k lambda^gamma(t^* t) + sum_k lambda^gamma(x^2 s^* s)
 * and the same with t t^*, s s^*.  Conclusion: if s_k(t) = 0 then t and s are
 * orthogonal; otherwise u^* s v = 0_(k+ell) (+) s_hat for the singular bases
 * u, v of t, with ell counting ties with s_k(t).
 */
PerturbationReport singular_perturbation_structure(const Matrix& t, const Matrix& s,
                                                   double p, int k,
                                                   std::span<const double> x_grid,
                                                   double tol = 1e-9);

}  // namespace pkn
