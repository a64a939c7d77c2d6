#include "pkn/rng.hpp"

#include <cmath>
#include <numbers>

namespace pkn {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

double Rng::uniform() {
    // 53 random bits mapped to [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::integer(std::uint64_t n) {
    // modulo bias is negligible for the small n used here
    return engine_() % n;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1] avoids log(0)
    double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
}

cplx Rng::complex_gaussian() {
    constexpr double inv_sqrt2 = 0.7071067811865476;
    return cplx{gaussian() * inv_sqrt2, gaussian() * inv_sqrt2};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed ^ 0xA24BAED4963EE407ULL) + stream);
}

Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix g(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) g(i, j) = rng.complex_gaussian();
    return g;
}

Matrix random_unitary(std::size_t n, Rng& rng) {
    Matrix g = ginibre(n, n, rng);
    // modified Gram-Schmidt, two orthogonalization passes per column;
    // normalizing by the (positive real) residual norm keeps the implicit
    // R-diagonal positive, which makes the result Haar-distributed
    Matrix q(n, n);
    Vec v(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) v[i] = g(i, j);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t c = 0; c < j; ++c) {
                cplx proj = 0.0;
                for (std::size_t i = 0; i < n; ++i) proj += std::conj(q(i, c)) * v[i];
                for (std::size_t i = 0; i < n; ++i) v[i] -= proj * q(i, c);
            }
        }
        double r = vnorm(v);
        for (std::size_t i = 0; i < n; ++i) q(i, j) = v[i] / r;
    }
    return q;
}

Matrix random_unitary(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return random_unitary(n, rng);
}

Matrix random_psd(std::size_t n, Rng& rng) {
    Matrix g = ginibre(n, n, rng);
    return adjoint(g) * g;
}

Matrix random_hermitian(std::size_t n, Rng& rng) {
    Matrix g = ginibre(n, n, rng);
    return 0.5 * (g + adjoint(g));
}

}  // namespace pkn
