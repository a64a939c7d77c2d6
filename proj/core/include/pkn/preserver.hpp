#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pkn/checks.hpp"
#include "pkn/matrix.hpp"
#include "pkn/norms.hpp"
#include "pkn/tensor.hpp"

namespace pkn {

/**
 * Norm-preserving map in canonical form: x -> u * t(x) * v, where t
 * transposes the flagged tensor factors and u, v are unitary on the full
 * product space.
 */
struct CanonicalPreserver {
    TensorShape shape;
    Matrix u;
    Matrix v;
    std::vector<bool> flags;  // true = that factor is transposed

    // u, v must be unitary within 1e-10; one flag per factor
    CanonicalPreserver(TensorShape shape, Matrix u, Matrix v, std::vector<bool> flags);
};

Matrix apply_canonical(const CanonicalPreserver& cp, const Matrix& x);

/// Matrix on column-stacked coordinates agreeing with apply_canonical on
/// every basis element.
Superoperator to_superoperator(const CanonicalPreserver& cp);

/// Haar unitaries and fair-coin flags, deterministic per seed.
CanonicalPreserver sample_canonical(const TensorShape& shape, std::uint64_t seed);

/// min over unit-modulus c of ||a.mat - c b.mat||_F / ||b.mat||_F.  The
/// sandwich representation carries a free global phase; the minimizer is the
/// closed form c = phase of tr(b.mat^* a.mat).
double preserver_distance(const Superoperator& a, const Superoperator& b);

/**
 * Sampled norm-preservation check on tensor products.  Trial t draws one
 * Ginibre factor per tensor slot from derive_rng(seed, t), forms the product
 * x, and compares the (p,k)-norms of x and phi(x); deviation is relative to
 * the input norm.
 */
struct PreservationReport {
    PkParams params{1.0, 1};
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    double tol = 0.0;
    double max_deviation = 0.0;
    std::int64_t worst_trial = -1;
    bool preserved = false;
    std::optional<Witness> first_violation;
};

PreservationReport verify_preservation(const Superoperator& phi, const PkParams& params,
                                       std::int64_t trials, std::uint64_t seed,
                                       double tol = 1e-9);

/// Same trials evaluated against every parameter set at once, reusing one
/// pair of singular-value computations per trial.
std::vector<PreservationReport> verify_preservation_sweep(
    const Superoperator& phi, std::span<const PkParams> params_list,
    std::int64_t trials, std::uint64_t seed, double tol = 1e-9);

struct StageDiagnostic {
    std::string stage;
    int depth;  // factor-peeling recursion depth, 0 outermost
    double residual;
};

/// Structural rejection: the input failed a reconstruction stage.
class DecompositionError : public std::runtime_error {
public:
    DecompositionError(std::string stage, int depth, double residual);
    std::string stage;
    int depth;
    double residual;
};

struct DecompositionResult {
    CanonicalPreserver preserver;
    double residual;  // preserver_distance(to_superoperator(preserver), input)
    std::vector<StageDiagnostic> diagnostics;
};

/**
 * Recovers (u, v, flags) from a superoperator acting as a canonical
 * preserver on a two-factor space.  Stages: basis images phi(E_tt) must be
 * rank one with unit singular value; their singular vectors must form
 * orthonormal families; after conjugating those away, each diagonal block
 * map on the second factor must be a unitary sandwich or a sandwich of the
 * transpose (detected through the rank of the realigned superoperator),
 * with conjugate-pair factors and one flag shared by all blocks; the induced
 * map on the first factor is recovered the same way.  Throws
 * DecompositionError when a structural check fails and std::invalid_argument
 * on precondition violations (two factors, p > 2).
 */
DecompositionResult decompose_bipartite(const Superoperator& phi, const PkParams& params);

/// Same recovery for m >= 2 factors: peels the trailing factor per recursion
/// level with the grouping (n_1...n_{m-1}, n_m).
DecompositionResult decompose_multipartite(const Superoperator& phi, const PkParams& params);

}  // namespace pkn
