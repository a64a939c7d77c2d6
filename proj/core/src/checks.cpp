#include "pkn/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pkn/eigen.hpp"
#include "pkn/svd.hpp"

namespace pkn {

namespace {

constexpr double kTieRel = 1e-8;        // eigenvalue/singular-value tie detection
constexpr double kConclusionFactor = 10.0;  // proportional slop for implied facts

double scaled_tol(double tol, double lhs, double rhs) {
    return tol * (1.0 + std::abs(lhs) + std::abs(rhs));
}

// top-k sum of lambda^gamma with tiny negatives clamped; throws when a
// fractional power meets a genuinely negative eigenvalue
double powersum_top_k(const std::vector<double>& ev, int k, double gamma,
                      double clamp_floor) {
    const bool integer_gamma = gamma == std::nearbyint(gamma);
    double s = 0.0;
    for (int i = 0; i < k; ++i) {
        double lambda = ev[static_cast<std::size_t>(i)];
        if (lambda < 0.0 && !integer_gamma) {
            if (lambda < clamp_floor)
                throw std::invalid_argument(
                    "fractional power of a matrix with negative eigenvalues");
            lambda = 0.0;
        }
        s += std::pow(lambda, gamma);
    }
    return s;
}

void require_psd(const std::vector<double>& ev, double tol, const char* what) {
    if (!ev.empty() && ev.back() < -tol)
        throw std::invalid_argument(std::string(what) + " is not positive semidefinite");
}

}  // namespace

IneqReport scalar_convexity_check(double a, double b, double gamma, double tol) {
    if (!(a >= 0.0) || std::abs(b) > a * (1.0 + 1e-12) + 1e-300)
        throw std::invalid_argument("requires -a <= b <= a with a >= 0");
    if (!(gamma >= 1.0)) throw std::invalid_argument("gamma must be at least 1");
    const double lhs = std::pow(a + b, gamma) + std::pow(std::max(a - b, 0.0), gamma);
    const double rhs = 2.0 * std::pow(a, gamma);
    const double slack = lhs - rhs;
    IneqReport rep{CheckStatus::holds, slack, std::nullopt};
    if (slack < -scaled_tol(tol, lhs, rhs)) {
        rep.status = CheckStatus::violated;
        Witness w;
        w.scalars = {{"a", a}, {"b", b}, {"gamma", gamma}, {"lhs", lhs}, {"rhs", rhs}};
        rep.witness = std::move(w);
    }
    return rep;
}

IneqReport psd_power_quadform_check(const Matrix& a, std::span<const cplx> x,
                                    double gamma, double tol) {
    if (!(gamma >= 1.0)) throw std::invalid_argument("gamma must be at least 1");
    if (x.size() != a.rows()) throw std::invalid_argument("vector length mismatch");
    const double xn = vnorm(x);
    if (xn == 0.0) throw std::invalid_argument("vector must be nonzero");

    HermitianEigen eig = hermitian_eigen(a);
    const double floor = -tol * (1.0 + frobenius_norm(a));
    require_psd(eig.values, -floor, "matrix");

    // x^* a^gamma x through the eigenbasis; tiny negatives clamped
    Vec y = matvec(adjoint(eig.vectors), x);
    double lhs = 0.0;
    double quad = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double lambda = std::max(eig.values[i], 0.0);
        const double w = std::norm(y[i]);
        lhs += std::pow(lambda, gamma) * w;
        quad += lambda * w;
    }
    const double rhs = std::pow(quad, gamma) * std::pow(xn, 2.0 * (1.0 - gamma));
    const double slack = lhs - rhs;
    IneqReport rep{CheckStatus::holds, slack, std::nullopt};
    if (slack < -scaled_tol(tol, lhs, rhs)) {
        rep.status = CheckStatus::violated;
        Witness w;
        w.scalars = {{"gamma", gamma}, {"lhs", lhs}, {"rhs", rhs}};
        w.matrices = {{"a", a}};
        rep.witness = std::move(w);
    }
    return rep;
}

double orthogonality_defect(const Matrix& a, const Matrix& b) {
    const double scale = 1.0 + frobenius_norm(a) * frobenius_norm(b);
    const double r1 = frobenius_norm(adjoint(a) * b);
    const double r2 = frobenius_norm(a * adjoint(b));
    return std::max(r1, r2) / scale;
}

bool orthogonal(const Matrix& a, const Matrix& b, double tol) {
    return orthogonality_defect(a, b) <= tol;
}

BlockDiagonalization simultaneous_block_diagonalize(const Matrix& a, const Matrix& b,
                                                    double rank_tolerance) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("shape mismatch");
    if (!a.square()) throw std::invalid_argument("square matrices required");
    if (frobenius_norm(a) == 0.0 && frobenius_norm(b) == 0.0)
        throw std::invalid_argument("at least one input must be nonzero");
    if (!orthogonal(a, b, 1e-8))
        throw std::invalid_argument("inputs are not orthogonal within tolerance");

    const std::size_t n = a.rows();
    Svd da = svd(a);
    Svd db = svd(b);
    const auto rank_of = [&](const Svd& d) {
        std::size_t r = 0;
        const double cut = rank_tolerance * (d.values.empty() ? 0.0 : d.values[0]);
        for (double s : d.values)
            if (s > cut && s > 0.0) ++r;
        return r;
    };
    const std::size_t ra = rank_of(da);
    const std::size_t rb = rank_of(db);

    // columns: range of a, then range of b (orthogonal across since a _|_ b),
    // then anything completing the basis; same on the right singular side
    const auto assemble = [&](const Matrix& ca, const Matrix& cb) {
        Matrix cols(n, std::max<std::size_t>(ra + rb, 1));
        for (std::size_t j = 0; j < ra; ++j)
            for (std::size_t i = 0; i < n; ++i) cols(i, j) = ca(i, j);
        for (std::size_t j = 0; j < rb; ++j) {
            // one stabilizing orthogonalization pass against the a-columns
            Vec v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = cb(i, j);
            for (std::size_t c = 0; c < ra; ++c) {
                cplx proj = 0.0;
                for (std::size_t i = 0; i < n; ++i) proj += std::conj(ca(i, c)) * v[i];
                for (std::size_t i = 0; i < n; ++i) v[i] -= proj * ca(i, c);
            }
            const double nv = vnorm(v);
            for (std::size_t i = 0; i < n; ++i) cols(i, ra + j) = v[i] / nv;
        }
        if (ra + rb == 0) return Matrix::identity(n);
        return orthonormal_completion(get_block(cols, 0, 0, n, ra + rb));
    };

    Matrix w_left = assemble(da.left, db.left);
    Matrix w_right = assemble(da.right, db.right);
    return BlockDiagonalization{adjoint(w_left), w_right, ra};
}

IneqReport orthogonality_cancellation_check(const Matrix& a, const Matrix& b,
                                            const Matrix& c, double tol) {
    const double h1 = orthogonality_defect(a + b, c);
    const double h2 = orthogonality_defect(a, b);
    if (h1 > tol || h2 > tol) {
        IneqReport rep{CheckStatus::vacuous, 0.0, std::nullopt};
        return rep;
    }
    const double allowed = kConclusionFactor * tol;
    const double ra = orthogonality_defect(a, c);
    const double rb = orthogonality_defect(b, c);
    const double worst = std::max(ra, rb);
    IneqReport rep{worst <= allowed ? CheckStatus::holds : CheckStatus::violated,
                   allowed - worst, std::nullopt};
    if (rep.status == CheckStatus::violated) {
        Witness w;
        w.scalars = {{"defect_a_c", ra},
                     {"defect_b_c", rb},
                     {"norm_adj_a_c", frobenius_norm(adjoint(a) * c)},
                     {"norm_a_adj_c", frobenius_norm(a * adjoint(c))},
                     {"norm_adj_b_c", frobenius_norm(adjoint(b) * c)},
                     {"norm_b_adj_c", frobenius_norm(b * adjoint(c))}};
        w.matrices = {{"a", a}, {"b", b}, {"c", c}};
        rep.witness = std::move(w);
    }
    return rep;
}

IneqReport eigen_power_sum_ineq(const Matrix& c, const Matrix& d, double gamma, int k,
                                double tol) {
    if (!(gamma >= 1.0)) throw std::invalid_argument("gamma must be at least 1");
    if (!is_hermitian(c, 1e-8) || !is_hermitian(d, 1e-8))
        throw std::invalid_argument("hermitian inputs required");
    if (c.rows() != d.rows()) throw std::invalid_argument("shape mismatch");
    const std::size_t n = c.rows();
    if (k < 1 || static_cast<std::size_t>(k) > n) throw std::invalid_argument("k out of range");

    const Matrix sum = c + d;
    const Matrix diff = c - d;
    std::vector<double> ev_sum = hermitian_eigenvalues(sum);
    std::vector<double> ev_diff = hermitian_eigenvalues(diff);
    std::vector<double> ev_c = hermitian_eigenvalues(c);

    const double floor_scale =
        tol * (1.0 + std::max(frobenius_norm(sum), frobenius_norm(diff)));
    require_psd(ev_sum, floor_scale, "c+d");
    require_psd(ev_diff, floor_scale, "c-d");

    const double lhs = powersum_top_k(ev_sum, k, gamma, -floor_scale) +
                       powersum_top_k(ev_diff, k, gamma, -floor_scale);
    const double rhs = 2.0 * powersum_top_k(ev_c, k, gamma, -floor_scale);
    const double slack = lhs - rhs;
    IneqReport rep{CheckStatus::holds, slack, std::nullopt};
    if (slack < -scaled_tol(tol, lhs, rhs)) {
        rep.status = CheckStatus::violated;
        Witness w;
        w.scalars = {{"gamma", gamma}, {"k", static_cast<double>(k)},
                     {"lhs", lhs}, {"rhs", rhs}};
        w.matrices = {{"c", c}, {"d", d}};
        rep.witness = std::move(w);
    }
    return rep;
}

IneqReport power_sum_reversal_instance(double gamma, int k) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("gamma must lie strictly between 0 and 1");
    if (k < 1 || k > 4) throw std::invalid_argument("k out of range for the 4x4 instance");
    const double sum_d[4] = {1.0, 1.0, 3.0, 3.0};
    const double diff_d[4] = {3.0, 3.0, 1.0, 1.0};
    const double c_d[4] = {2.0, 2.0, 2.0, 2.0};
    std::vector<double> ev_sum = hermitian_eigenvalues(Matrix::diag(std::span(sum_d)));
    std::vector<double> ev_diff = hermitian_eigenvalues(Matrix::diag(std::span(diff_d)));
    std::vector<double> ev_c = hermitian_eigenvalues(Matrix::diag(std::span(c_d)));

    const double lhs = powersum_top_k(ev_sum, k, gamma, 0.0) +
                       powersum_top_k(ev_diff, k, gamma, 0.0);
    const double rhs = 2.0 * powersum_top_k(ev_c, k, gamma, 0.0);
    const double slack = lhs - rhs;  // positive: the gamma >= 1 bound reverses here
    IneqReport rep{slack > 0.0 ? CheckStatus::holds : CheckStatus::violated, slack,
                   std::nullopt};
    Witness w;
    w.scalars = {{"gamma", gamma}, {"k", static_cast<double>(k)},
                 {"lhs", lhs}, {"rhs", rhs}};
    rep.witness = std::move(w);
    return rep;
}

IneqReport pk_parallelogram_lower_bound(const Matrix& a, const Matrix& b,
                                        const PkParams& params, double tol) {
    if (!(params.p > 2.0))
        throw std::invalid_argument("p must exceed 2");
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("shape mismatch");

    const double lhs = pk_norm_pth_power(a + b, params) + pk_norm_pth_power(a - b, params);

    const Matrix gram = adjoint(a) * a + adjoint(b) * b;
    std::vector<double> ev = hermitian_eigenvalues(gram);
    const int kk = std::min<int>(params.k,
                                 static_cast<int>(std::min(a.rows(), a.cols())));
    const double floor = -tol * (1.0 + frobenius_norm(gram));
    const double rhs = 2.0 * powersum_top_k(ev, kk, params.p / 2.0, floor);

    const double slack = lhs - rhs;
    IneqReport rep{CheckStatus::holds, slack, std::nullopt};
    if (slack < -scaled_tol(tol, lhs, rhs)) {
        rep.status = CheckStatus::violated;
        Witness w;
        w.scalars = {{"p", params.p}, {"k", static_cast<double>(params.k)},
                     {"lhs", lhs}, {"rhs", rhs}};
        w.matrices = {{"a", a}, {"b", b}};
        rep.witness = std::move(w);
    }
    return rep;
}

IneqReport rank_bound_check(const Matrix& a, const Matrix& b,
                                  const PkParams& params, double tol) {
    if (params.k < 2) throw std::invalid_argument("k must be at least 2");
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("shape mismatch");
    if (frobenius_norm(a) == 0.0 || frobenius_norm(b) == 0.0)
        throw std::invalid_argument("nonzero inputs required");

    const double na = pk_norm_pth_power(a, params);
    const double nb = pk_norm_pth_power(b, params);
    const double nab = pk_norm_pth_power(a + b, params);
    const bool additive = std::abs(nab - na - nb) <= scaled_tol(tol, nab, na + nb);
    if (!orthogonal(a, b, tol) || !additive)
        return IneqReport{CheckStatus::vacuous, 0.0, std::nullopt};

    const int kk = std::min<int>(params.k, static_cast<int>(std::min(a.rows(), a.cols())));
    const int rank = rank_tol(a + b, 1e-8);
    IneqReport rep{rank <= kk ? CheckStatus::holds : CheckStatus::violated,
                   static_cast<double>(kk - rank), std::nullopt};
    if (rep.status == CheckStatus::violated) {
        Witness w;
        w.scalars = {{"rank", static_cast<double>(rank)},
                     {"k_effective", static_cast<double>(kk)},
                     {"norm_sum_gap", nab - na - nb}};
        w.matrices = {{"a", a}, {"b", b}};
        rep.witness = std::move(w);
    }
    return rep;
}

std::vector<double> default_alpha_grid() {
    std::vector<double> grid;
    for (int e = 20; e >= 1; --e) grid.push_back(std::ldexp(1.0, -e));
    for (int i = 1; i <= 9; ++i) grid.push_back(0.1 * i);
    return grid;
}

namespace {

// Frobenius mass of m outside its trailing (n-cut) x (n-cut) diagonal block.
double leading_leak(const Matrix& m, std::size_t cut) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i < cut || j < cut) s += std::norm(m(i, j));
    return std::sqrt(s);
}

}  // namespace

PerturbationReport psd_perturbation_structure(const Matrix& a, const Matrix& b,
                                              double gamma, int k,
                                              std::span<const double> alpha_grid,
                                              double tol) {
    if (!(gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
    if (a.rows() != b.rows() || !a.square() || !b.square())
        throw std::invalid_argument("square inputs of equal size required");
    const std::size_t n = a.rows();
    if (k < 1 || static_cast<std::size_t>(k) > n) throw std::invalid_argument("k out of range");
    if (alpha_grid.empty()) throw std::invalid_argument("empty grid");

    HermitianEigen ea = hermitian_eigen(a);
    std::vector<double> ev_b = hermitian_eigenvalues(b);
    const double floor_a = -tol * (1.0 + frobenius_norm(a));
    const double floor_b = -tol * (1.0 + frobenius_norm(b));
    require_psd(ea.values, -floor_a, "a");
    require_psd(ev_b, -floor_b, "b");

    const double base_a = powersum_top_k(ea.values, k, gamma, floor_a);
    const double base_b = powersum_top_k(ev_b, k, gamma, floor_b);

    PerturbationReport rep{};
    rep.hypothesis_holds = true;
    rep.hypothesis_min_slack = std::numeric_limits<double>::infinity();
    for (double alpha : alpha_grid) {
        const Matrix sum = a + alpha * b;
        std::vector<double> ev = hermitian_eigenvalues(sum);
        const double lhs = powersum_top_k(ev, k, gamma,
                                          -tol * (1.0 + frobenius_norm(sum)));
        const double rhs = base_a + std::pow(alpha, gamma) * base_b;
        const double slack = rhs - lhs;
        rep.hypothesis_min_slack = std::min(rep.hypothesis_min_slack, slack);
        if (slack < -scaled_tol(tol, lhs, rhs)) rep.hypothesis_holds = false;
    }

    const double lam_k = ea.values[static_cast<std::size_t>(k - 1)];
    const double zero_cut = kTieRel * (1.0 + std::max(ea.values[0], 0.0));
    if (lam_k <= zero_cut) {
        rep.conclusion_case = 1;
        rep.tie_count = 0;
        rep.conclusion_residual = orthogonality_defect(a, b);
    } else {
        rep.conclusion_case = 2;
        const double tie = kTieRel * std::max(std::abs(lam_k), 1.0);
        std::size_t ell = 0;
        for (std::size_t i = static_cast<std::size_t>(k); i < n; ++i)
            if (std::abs(ea.values[i] - lam_k) <= tie) ++ell;
        rep.tie_count = ell;
        const Matrix compressed = adjoint(ea.vectors) * (b * ea.vectors);
        rep.conclusion_residual =
            leading_leak(compressed, static_cast<std::size_t>(k) + ell) /
            (1.0 + frobenius_norm(b));
    }
    rep.conclusion_holds = rep.conclusion_residual <= kConclusionFactor * tol;
    rep.implication = !rep.hypothesis_holds
                          ? CheckStatus::vacuous
                          : (rep.conclusion_holds ? CheckStatus::holds
                                                  : CheckStatus::violated);
    return rep;
}

PerturbationReport singular_perturbation_structure(const Matrix& t, const Matrix& s,
                                                   double p, int k,
                                                   std::span<const double> x_grid,
                                                   double tol) {
    if (!(p > 2.0)) throw std::invalid_argument("p must exceed 2");
    if (t.rows() != s.rows() || t.cols() != s.cols() || !t.square())
        throw std::invalid_argument("square inputs of equal size required");
    const std::size_t n = t.rows();
    if (k < 1 || static_cast<std::size_t>(k) > n) throw std::invalid_argument("k out of range");
    if (x_grid.empty()) throw std::invalid_argument("empty grid");

    const double gamma = p / 2.0;
    const Matrix gram_t = adjoint(t) * t;
    const Matrix gram_s = adjoint(s) * s;
    const Matrix cogram_t = t * adjoint(t);
    const Matrix cogram_s = s * adjoint(s);

    const auto base_sum = [&](const Matrix& m) {
        return powersum_top_k(hermitian_eigenvalues(m), k, gamma,
                              -tol * (1.0 + frobenius_norm(m)));
    };
    const double bt = base_sum(gram_t);
    const double bs = base_sum(gram_s);
    const double ct = base_sum(cogram_t);
    const double cs = base_sum(cogram_s);

    PerturbationReport rep{};
    rep.hypothesis_holds = true;
    rep.hypothesis_min_slack = std::numeric_limits<double>::infinity();
    const auto check_side = [&](const Matrix& tg, const Matrix& sg, double tbase,
                                double sbase, double x) {
        const Matrix sum = tg + (x * x) * sg;
        const double lhs = powersum_top_k(hermitian_eigenvalues(sum), k, gamma,
                                          -tol * (1.0 + frobenius_norm(sum)));
        const double rhs = tbase + std::pow(x * x, gamma) * sbase;
        const double slack = rhs - lhs;
        rep.hypothesis_min_slack = std::min(rep.hypothesis_min_slack, slack);
        if (slack < -scaled_tol(tol, lhs, rhs)) rep.hypothesis_holds = false;
    };
    for (double x : x_grid) {
        check_side(gram_t, gram_s, bt, bs, x);
        check_side(cogram_t, cogram_s, ct, cs, x);
    }

    Svd dec = svd(t);
    const double s_k = dec.values[static_cast<std::size_t>(k - 1)];
    const double zero_cut = kTieRel * (1.0 + dec.values[0]);
    if (s_k <= zero_cut) {
        rep.conclusion_case = 1;
        rep.tie_count = 0;
        rep.conclusion_residual = orthogonality_defect(t, s);
    } else {
        rep.conclusion_case = 2;
        const double tie = kTieRel * std::max(s_k, 1.0);
        std::size_t ell = 0;
        for (std::size_t i = static_cast<std::size_t>(k); i < dec.values.size(); ++i)
            if (std::abs(dec.values[i] - s_k) <= tie) ++ell;
        rep.tie_count = ell;
        const Matrix rotated = adjoint(dec.left) * (s * dec.right);
        rep.conclusion_residual =
            leading_leak(rotated, static_cast<std::size_t>(k) + ell) /
            (1.0 + frobenius_norm(s));
    }
    rep.conclusion_holds = rep.conclusion_residual <= kConclusionFactor * tol;
    rep.implication = !rep.hypothesis_holds
                          ? CheckStatus::vacuous
                          : (rep.conclusion_holds ? CheckStatus::holds
                                                  : CheckStatus::violated);
    return rep;
}

}  // namespace pkn
