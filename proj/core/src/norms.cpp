#include "pkn/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pkn/eigen.hpp"
#include "pkn/rng.hpp"
#include "pkn/svd.hpp"

namespace pkn {

PkParams::PkParams(double p_, int k_) : p(p_), k(k_) {
    if (!std::isfinite(p) || p < 1.0)
        throw std::invalid_argument("p must be finite and at least 1");
    if (k < 1) throw std::invalid_argument("k must be at least 1");
}

double pk_pth_power_from_singular_values(std::span<const double> values,
                                         const PkParams& params) {
    const std::size_t kk = std::min<std::size_t>(params.k, values.size());
    double s = 0.0;
    for (std::size_t i = 0; i < kk; ++i) s += std::pow(values[i], params.p);
    return s;
}

double pk_from_singular_values(std::span<const double> values, const PkParams& params) {
    return std::pow(pk_pth_power_from_singular_values(values, params), 1.0 / params.p);
}

double pk_norm_pth_power(const Matrix& a, const PkParams& params) {
    return pk_pth_power_from_singular_values(singular_values(a), params);
}

double pk_norm(const Matrix& a, const PkParams& params) {
    return pk_from_singular_values(singular_values(a), params);
}

double top_k_eigen_sum(const Matrix& a, int k, double gamma) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("gamma must be finite and nonnegative");
    if (k < 1 || static_cast<std::size_t>(k) > a.rows())
        throw std::invalid_argument("k out of range");
    std::vector<double> ev = hermitian_eigenvalues(a);
    const bool integer_gamma = gamma == std::nearbyint(gamma);
    const double clamp_floor = -1e-10 * (1.0 + frobenius_norm(a));
    double s = 0.0;
    for (int i = 0; i < k; ++i) {
        double lambda = ev[static_cast<std::size_t>(i)];
        if (!integer_gamma && lambda < 0.0) {
            if (lambda < clamp_floor)
                throw std::invalid_argument(
                    "fractional power of a matrix with negative eigenvalues");
            lambda = 0.0;
        }
        s += std::pow(lambda, gamma);
    }
    return s;
}

KyFanExtremalReport kyfan_extremal_check(const Matrix& a, int k, int trials,
                                         std::uint64_t seed, double tol) {
    const std::size_t n = a.rows();
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("k out of range");
    if (trials < 1) throw std::invalid_argument("trials must be positive");
    HermitianEigen eig = hermitian_eigen(a);

    double top = 0.0, bottom = 0.0;
    for (int i = 0; i < k; ++i) {
        top += eig.values[static_cast<std::size_t>(i)];
        bottom += eig.values[n - 1 - static_cast<std::size_t>(i)];
    }

    auto isometry_trace = [&](const Matrix& w) {
        // tr(W* a W)
        return trace(adjoint(w) * (a * w)).real();
    };

    KyFanExtremalReport rep{};
    rep.top_sum = top;
    rep.bottom_sum = bottom;
    rep.samples = trials;
    rep.max_sampled = -std::numeric_limits<double>::infinity();
    rep.min_sampled = std::numeric_limits<double>::infinity();
    rep.violations = 0;

    const std::size_t uk = static_cast<std::size_t>(k);
    Matrix w_top = get_block(eig.vectors, 0, 0, n, uk);
    Matrix w_bottom = get_block(eig.vectors, 0, n - uk, n, uk);
    rep.top_attained_gap = std::abs(top - isometry_trace(w_top));
    rep.bottom_attained_gap = std::abs(isometry_trace(w_bottom) - bottom);

    const double scale_tol = tol * (1.0 + std::abs(top) + std::abs(bottom));
    for (int t = 0; t < trials; ++t) {
        Rng rng = derive_rng(seed, static_cast<std::uint64_t>(t));
        Matrix u = random_unitary(n, rng);
        Matrix w = get_block(u, 0, 0, n, uk);
        const double val = isometry_trace(w);
        rep.max_sampled = std::max(rep.max_sampled, val);
        rep.min_sampled = std::min(rep.min_sampled, val);
        if (val > top + scale_tol || val < bottom - scale_tol) ++rep.violations;
    }
    rep.holds = rep.violations == 0 && rep.top_attained_gap <= scale_tol &&
                rep.bottom_attained_gap <= scale_tol;
    return rep;
}

bool weak_majorization(std::span<const double> x, std::span<const double> y, double tol) {
    std::vector<double> xs(x.begin(), x.end());
    std::vector<double> ys(y.begin(), y.end());
    std::stable_sort(xs.begin(), xs.end(), std::greater<>());
    std::stable_sort(ys.begin(), ys.end(), std::greater<>());
    // shorter vector padded with zeros
    const std::size_t n = std::max(xs.size(), ys.size());
    double px = 0.0, py = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        px += i < xs.size() ? xs[i] : 0.0;
        py += i < ys.size() ? ys[i] : 0.0;
        if (px > py + tol * (1.0 + std::abs(px) + std::abs(py))) return false;
    }
    return true;
}

}  // namespace pkn
