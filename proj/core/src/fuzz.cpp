#include "pkn/fuzz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pkn/eigen.hpp"
#include "pkn/norms.hpp"
#include "pkn/rng.hpp"
#include "pkn/svd.hpp"

namespace pkn {

namespace {

constexpr double kSuiteTol = 1e-9;

// Per-instance outcome: slack is the margin by which the checked statement
// held (negative = violation); vacuous instances carry no slack.
struct Outcome {
    double slack = 0.0;
    bool vacuous = false;
    bool violated = false;
    std::optional<Witness> witness;
};

Outcome from_report(const IneqReport& rep) {
    Outcome o;
    o.slack = rep.slack;
    o.vacuous = rep.status == CheckStatus::vacuous;
    o.violated = rep.status == CheckStatus::violated;
    if (o.violated) o.witness = rep.witness;
    return o;
}

std::size_t random_dim(Rng& rng, std::size_t lo = 2, std::size_t hi = 6) {
    return lo + static_cast<std::size_t>(rng.integer(hi - lo + 1));
}

// a = u (da (+) 0) v, b = u (0_ra (+) db (+) 0) v: orthogonal by disjoint
// diagonal supports, conjugated into general position
struct OrthogonalPair {
    Matrix a;
    Matrix b;
    std::size_t rank_a;
    std::size_t rank_b;
};
OrthogonalPair random_orthogonal_pair(Rng& rng, std::size_t n, std::size_t ra,
                                      std::size_t rb) {
    Matrix da(n, n), db(n, n);
    for (std::size_t i = 0; i < ra; ++i) da(i, i) = rng.uniform(0.5, 2.0);
    for (std::size_t i = 0; i < rb; ++i) db(ra + i, ra + i) = rng.uniform(0.5, 2.0);
    Matrix u = random_unitary(n, rng);
    Matrix v = random_unitary(n, rng);
    return OrthogonalPair{u * (da * v), u * (db * v), ra, rb};
}

Vec random_vector(Rng& rng, std::size_t n) {
    Vec x(n);
    for (auto& z : x) z = rng.complex_gaussian();
    return x;
}

// ---- suite instance generators ------------------------------------------

Outcome instance_scalar_convexity(Rng& rng) {
    const double a = 10.0 * rng.uniform();
    const double b = a * (2.0 * rng.uniform() - 1.0);
    const double gamma = rng.uniform(1.0, 4.0);
    return from_report(scalar_convexity_check(a, b, gamma, kSuiteTol));
}

Outcome instance_psd_quadform(Rng& rng) {
    const std::size_t n = random_dim(rng);
    const Matrix a = random_psd(n, rng);
    const Vec x = random_vector(rng, n);
    const double gamma = rng.uniform(1.0, 4.0);
    return from_report(psd_power_quadform_check(a, x, gamma, kSuiteTol));
}

Outcome instance_extremal_trace(Rng& rng) {
    const std::size_t n = random_dim(rng);
    const Matrix a = random_hermitian(n, rng);
    const int k = 1 + static_cast<int>(rng.integer(n));
    const std::uint64_t sub_seed = rng.integer(std::numeric_limits<std::uint64_t>::max());
    KyFanExtremalReport rep = kyfan_extremal_check(a, k, 16, sub_seed, kSuiteTol);
    Outcome o;
    o.slack = std::min(rep.top_sum - rep.max_sampled, rep.min_sampled - rep.bottom_sum);
    o.violated = !rep.holds;
    if (o.violated) {
        Witness w;
        w.scalars = {{"top_sum", rep.top_sum},
                     {"bottom_sum", rep.bottom_sum},
                     {"max_sampled", rep.max_sampled},
                     {"min_sampled", rep.min_sampled}};
        w.matrices = {{"a", a}};
        o.witness = std::move(w);
    }
    return o;
}

Outcome instance_block_diagonalize(Rng& rng) {
    const std::size_t n = random_dim(rng);
    const std::size_t ra = 1 + rng.integer(n - 1);
    const std::size_t rb = 1 + rng.integer(n - ra);
    OrthogonalPair pair = random_orthogonal_pair(rng, n, ra, rb);
    BlockDiagonalization bd = simultaneous_block_diagonalize(pair.a, pair.b);

    const Matrix ta = bd.u * (pair.a * bd.v);
    const Matrix tb = bd.u * (pair.b * bd.v);
    double leak = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const bool inside = i < bd.split && j < bd.split;
            if (!inside) leak += std::norm(ta(i, j));
            if (i < bd.split || j < bd.split) leak += std::norm(tb(i, j));
        }
    const double resid =
        std::max({std::sqrt(leak) / (1.0 + frobenius_norm(pair.a) + frobenius_norm(pair.b)),
                  unitarity_residual(bd.u), unitarity_residual(bd.v)});
    Outcome o;
    o.slack = 1e-10 - resid;
    o.violated = o.slack < 0.0;
    if (o.violated) {
        Witness w;
        w.scalars = {{"residual", resid}, {"split", static_cast<double>(bd.split)}};
        w.matrices = {{"a", pair.a}, {"b", pair.b}};
        o.witness = std::move(w);
    }
    return o;
}

Outcome instance_orthogonality_cancellation(Rng& rng) {
    const std::size_t n = 3 + static_cast<std::size_t>(rng.integer(4));  // 3..6
    std::size_t ra = 1 + rng.integer(n - 2);
    std::size_t rb = 1 + rng.integer(n - ra - 1);
    std::size_t rc = 1 + rng.integer(n - ra - rb);
    Matrix da(n, n), db(n, n), dc(n, n);
    for (std::size_t i = 0; i < ra; ++i) da(i, i) = rng.uniform(0.5, 2.0);
    for (std::size_t i = 0; i < rb; ++i) db(ra + i, ra + i) = rng.uniform(0.5, 2.0);
    for (std::size_t i = 0; i < rc; ++i) dc(ra + rb + i, ra + rb + i) = rng.uniform(0.5, 2.0);
    Matrix u = random_unitary(n, rng);
    Matrix v = random_unitary(n, rng);
    return from_report(orthogonality_cancellation_check(u * (da * v), u * (db * v),
                                                        u * (dc * v), kSuiteTol));
}

Outcome instance_eigen_power_sum(Rng& rng) {
    const std::size_t n = random_dim(rng);
    const Matrix p = random_psd(n, rng);
    const Matrix q = random_psd(n, rng);
    const Matrix c = 0.5 * (p + q);
    const Matrix d = 0.5 * (p - q);
    const double gamma = rng.uniform(1.0, 4.0);
    const int k = 1 + static_cast<int>(rng.integer(n));
    return from_report(eigen_power_sum_ineq(c, d, gamma, k, kSuiteTol));
}

Outcome instance_power_sum_reversal(Rng& rng) {
    const double gamma = rng.uniform(0.001, 0.999);
    IneqReport rep = power_sum_reversal_instance(gamma);
    Outcome o = from_report(rep);
    // here a violation means the strict reversal failed to appear
    o.violated = rep.status != CheckStatus::holds;
    return o;
}

Outcome instance_parallelogram(Rng& rng) {
    const std::size_t n = random_dim(rng);
    const Matrix a = ginibre(n, n, rng);
    const Matrix b = ginibre(n, n, rng);
    const double p = rng.uniform(2.0 + 1e-6, 6.0);
    const int k = 1 + static_cast<int>(rng.integer(n));
    return from_report(pk_parallelogram_lower_bound(a, b, PkParams(p, k), kSuiteTol));
}

Outcome instance_rank_bound(Rng& rng) {
    const std::size_t n = random_dim(rng);
    const int k = 2 + static_cast<int>(rng.integer(n - 1));
    const double p = rng.uniform(1.0, 6.0);
    if (rng.uniform() < 0.25) {
        // unconstructed pair: hypothesis almost surely fails (vacuous)
        const Matrix a = ginibre(n, n, rng);
        const Matrix b = ginibre(n, n, rng);
        return from_report(rank_bound_check(a, b, PkParams(p, k), kSuiteTol));
    }
    const std::size_t ra = 1 + rng.integer(static_cast<std::size_t>(k) - 1);
    const std::size_t rb = 1 + rng.integer(std::min(static_cast<std::size_t>(k) - ra,
                                                    n - ra));
    OrthogonalPair pair = random_orthogonal_pair(rng, n, ra, rb);
    return from_report(rank_bound_check(pair.a, pair.b, PkParams(p, k), kSuiteTol));
}

Outcome perturbation_outcome(const PerturbationReport& rep) {
    Outcome o;
    o.slack = std::min(rep.hypothesis_min_slack,
                       10.0 * kSuiteTol - rep.conclusion_residual);
    o.vacuous = rep.implication == CheckStatus::vacuous;
    o.violated = rep.implication == CheckStatus::violated;
    if (o.violated) {
        Witness w;
        w.scalars = {{"hypothesis_min_slack", rep.hypothesis_min_slack},
                     {"conclusion_residual", rep.conclusion_residual},
                     {"case", static_cast<double>(rep.conclusion_case)},
                     {"ties", static_cast<double>(rep.tie_count)}};
        o.witness = std::move(w);
    }
    return o;
}

Outcome instance_psd_perturbation(Rng& rng) {
    const std::size_t n = random_dim(rng);
    const double gamma = rng.uniform(1.0 + 1e-6, 4.0);
    const std::vector<double> grid = default_alpha_grid();

    const bool disjoint = rng.uniform() < 0.5;
    if (disjoint) {
        // case 1: a has rank < k, b lives on the complementary support
        const int k = 2 + static_cast<int>(rng.integer(n - 1));
        const std::size_t ra = 1 + rng.integer(std::min<std::size_t>(k - 1, n - 1));
        const std::size_t nb = n - ra;
        Matrix u = random_unitary(n, rng);
        Matrix da(n, n);
        for (std::size_t i = 0; i < ra; ++i) da(i, i) = rng.uniform(0.5, 2.0);
        Matrix bblock = random_psd(nb, rng);
        Matrix db(n, n);
        set_block(db, ra, ra, bblock);
        const Matrix a = u * (da * adjoint(u));
        const Matrix b = u * (db * adjoint(u));
        return perturbation_outcome(
            psd_perturbation_structure(a, b, gamma, k, grid, kSuiteTol));
    }
    // case 2: lambda_k(a) > 0 with a tie run; b compressed onto the strictly
    // smaller trailing eigenspace and scaled to keep the top k intact
    const int k = 1 + static_cast<int>(rng.integer(n - 1));            // k <= n-1
    const std::size_t ell = rng.integer(n - static_cast<std::size_t>(k));  // k+ell < n
    const std::size_t head = static_cast<std::size_t>(k) + ell;
    const double v = rng.uniform(1.0, 2.0);
    Matrix da(n, n);
    for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(k); ++i)
        da(i, i) = v * rng.uniform(1.5, 3.0);
    for (std::size_t i = static_cast<std::size_t>(k) - 1; i < head; ++i) da(i, i) = v;
    for (std::size_t i = head; i < n; ++i) da(i, i) = v * rng.uniform(0.0, 0.5);
    Matrix bblock = random_psd(n - head, rng);
    const double top = hermitian_eigenvalues(bblock)[0];
    if (top > 0.0) bblock *= cplx{0.4 * v / top, 0.0};
    Matrix db(n, n);
    set_block(db, head, head, bblock);
    Matrix u = random_unitary(n, rng);
    const Matrix a = u * (da * adjoint(u));
    const Matrix b = u * (db * adjoint(u));
    return perturbation_outcome(psd_perturbation_structure(a, b, gamma, k, grid, kSuiteTol));
}

Outcome instance_singular_perturbation(Rng& rng) {
    const std::size_t n = random_dim(rng);
    const double p = rng.uniform(2.0 + 1e-6, 6.0);
    const std::vector<double> grid = default_alpha_grid();

    const bool disjoint = rng.uniform() < 0.5;
    Matrix u = random_unitary(n, rng);
    Matrix v = random_unitary(n, rng);
    if (disjoint) {
        // s_k(t) = 0 branch: rank(t) < k, s on complementary row/col support
        const int k = 2 + static_cast<int>(rng.integer(n - 1));
        const std::size_t ra = 1 + rng.integer(std::min<std::size_t>(k - 1, n - 1));
        Matrix dt(n, n);
        for (std::size_t i = 0; i < ra; ++i) dt(i, i) = rng.uniform(0.5, 2.0);
        Matrix sblock = ginibre(n - ra, n - ra, rng);
        Matrix ds(n, n);
        set_block(ds, ra, ra, sblock);
        return perturbation_outcome(singular_perturbation_structure(
            u * (dt * v), u * (ds * v), p, k, grid, kSuiteTol));
    }
    const int k = 1 + static_cast<int>(rng.integer(n - 1));
    const std::size_t ell = rng.integer(n - static_cast<std::size_t>(k));
    const std::size_t head = static_cast<std::size_t>(k) + ell;
    const double val = rng.uniform(1.0, 2.0);
    Matrix dt(n, n);
    for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(k); ++i)
        dt(i, i) = val * rng.uniform(1.5, 3.0);
    for (std::size_t i = static_cast<std::size_t>(k) - 1; i < head; ++i) dt(i, i) = val;
    for (std::size_t i = head; i < n; ++i) dt(i, i) = val * rng.uniform(0.0, 0.5);
    Matrix sblock = ginibre(n - head, n - head, rng);
    const std::vector<double> sv = singular_values(sblock);
    if (sv[0] > 0.0) sblock *= cplx{0.4 * val / sv[0], 0.0};
    Matrix ds(n, n);
    set_block(ds, head, head, sblock);
    return perturbation_outcome(singular_perturbation_structure(
        u * (dt * v), u * (ds * v), p, k, grid, kSuiteTol));
}

using InstanceFn = Outcome (*)(Rng&);

const std::vector<std::pair<std::string, InstanceFn>>& suites() {
    static const std::vector<std::pair<std::string, InstanceFn>> table = {
        {"scalar-convexity", &instance_scalar_convexity},
        {"psd-power-quadform", &instance_psd_quadform},
        {"extremal-trace", &instance_extremal_trace},
        {"block-diagonalize", &instance_block_diagonalize},
        {"orthogonality-cancellation", &instance_orthogonality_cancellation},
        {"eigen-power-sum", &instance_eigen_power_sum},
        {"power-sum-reversal", &instance_power_sum_reversal},
        {"parallelogram", &instance_parallelogram},
        {"rank-bound", &instance_rank_bound},
        {"psd-perturbation", &instance_psd_perturbation},
        {"singular-perturbation", &instance_singular_perturbation},
    };
    return table;
}

Histogram build_histogram(std::vector<double> slacks) {
    Histogram h;
    if (slacks.empty()) return h;
    const auto [lo_it, hi_it] = std::minmax_element(slacks.begin(), slacks.end());
    double lo = *lo_it, hi = *hi_it;
    if (lo == hi) hi = lo + 1.0;
    constexpr int bins = 16;
    h.edges.resize(bins + 1);
    h.counts.assign(bins, 0);
    for (int i = 0; i <= bins; ++i) h.edges[i] = lo + (hi - lo) * i / bins;
    for (double s : slacks) {
        int b = static_cast<int>((s - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        ++h.counts[b];
    }
    return h;
}

}  // namespace

const std::vector<std::string>& fuzz_suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [name, fn] : suites()) n.push_back(name);
        return n;
    }();
    return names;
}

FuzzSummary run_fuzz_suite(const std::string& suite, std::int64_t trials,
                           std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("trials must be positive");
    InstanceFn fn = nullptr;
    for (const auto& [name, f] : suites())
        if (name == suite) fn = f;
    if (!fn) throw std::invalid_argument("unknown fuzz suite: " + suite);

    FuzzSummary sum;
    sum.suite = suite;
    sum.trials = trials;
    sum.seed = seed;
    sum.min_slack = std::numeric_limits<double>::infinity();
    sum.max_slack = -std::numeric_limits<double>::infinity();
    std::vector<double> slacks;
    slacks.reserve(static_cast<std::size_t>(trials));
    for (std::int64_t i = 0; i < trials; ++i) {
        Rng rng = derive_rng(seed, static_cast<std::uint64_t>(i));
        Outcome o = fn(rng);
        if (o.vacuous) {
            ++sum.vacuous;
            continue;
        }
        slacks.push_back(o.slack);
        sum.min_slack = std::min(sum.min_slack, o.slack);
        sum.max_slack = std::max(sum.max_slack, o.slack);
        if (o.violated) {
            ++sum.violations;
            if (!sum.first_violation) sum.first_violation = std::move(o.witness);
        }
    }
    if (slacks.empty()) {
        sum.min_slack = 0.0;
        sum.max_slack = 0.0;
    }
    sum.histogram = build_histogram(std::move(slacks));
    return sum;
}

}  // namespace pkn
