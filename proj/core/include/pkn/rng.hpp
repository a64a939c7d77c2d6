#pragma once

#include <cstdint>
#include <random>

#include "pkn/matrix.hpp"

namespace pkn {

/**
 * Deterministic random source.  All distributions are generated from raw
 * mt19937_64 output with fixed arithmetic (no std::*_distribution), so a
 * given seed produces the same stream on every platform and build.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);   // [lo, hi)
    std::uint64_t integer(std::uint64_t n); // {0, ..., n-1}
    double gaussian();                      // standard normal, Box-Muller
    cplx complex_gaussian();                // E|z|^2 = 1

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Stream derivation: mixes (seed, stream) into an independent sub-seed so
// per-trial results do not depend on evaluation order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);
inline Rng derive_rng(std::uint64_t seed, std::uint64_t stream) {
    return Rng(derive_seed(seed, stream));
}

// i.i.d. complex gaussian entries
Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);

// Haar-distributed unitary: Ginibre sample orthonormalized with the
// R-diagonal kept real positive.  Deterministic per seed.
Matrix random_unitary(std::size_t n, std::uint64_t seed);
Matrix random_unitary(std::size_t n, Rng& rng);

Matrix random_psd(std::size_t n, Rng& rng);        // G* G
Matrix random_hermitian(std::size_t n, Rng& rng);  // (G + G*) / 2

}  // namespace pkn
