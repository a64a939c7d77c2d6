#include <benchmark/benchmark.h>

#include "pkn/eigen.hpp"
#include "pkn/norms.hpp"
#include "pkn/preserver.hpp"
#include "pkn/rng.hpp"
#include "pkn/svd.hpp"
#include "pkn/tensor.hpp"

namespace {

pkn::Matrix make_ginibre(int rows, int cols, std::uint64_t seed) {
    pkn::Rng rng(seed);
    return pkn::ginibre(rows, cols, rng);
}

void BM_MatMul(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const pkn::Matrix a = make_ginibre(n, n, 1);
    const pkn::Matrix b = make_ginibre(n, n, 2);
    for (auto _ : state) {
        pkn::Matrix c = a * b;
        benchmark::DoNotOptimize(c);
    }
}

void BM_HermitianEigen(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    pkn::Rng rng(3);
    const pkn::Matrix a = pkn::random_hermitian(n, rng);
    for (auto _ : state) {
        pkn::HermitianEigen dec = pkn::hermitian_eigen(a);
        benchmark::DoNotOptimize(dec);
    }
}

void BM_Svd(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const pkn::Matrix a = make_ginibre(n, n, 4);
    for (auto _ : state) {
        pkn::Svd dec = pkn::svd(a);
        benchmark::DoNotOptimize(dec);
    }
}

void BM_PkNorm(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const pkn::Matrix a = make_ginibre(n, n, 5);
    const pkn::PkParams params{3.0, n / 2 + 1};
    for (auto _ : state) {
        double v = pkn::pk_norm(a, params);
        benchmark::DoNotOptimize(v);
    }
}

void BM_Kron(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const pkn::Matrix a = make_ginibre(n, n, 6);
    const pkn::Matrix b = make_ginibre(n, n, 7);
    for (auto _ : state) {
        pkn::Matrix c = pkn::kron(a, b);
        benchmark::DoNotOptimize(c);
    }
}

void BM_Reshuffle(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const pkn::TensorShape shape{{n, n}};
    pkn::Superoperator phi{shape, make_ginibre(n * n, n * n, 8)};
    for (auto _ : state) {
        pkn::Matrix r = pkn::reshuffle(phi);
        benchmark::DoNotOptimize(r);
    }
}

void BM_PartialTranspose(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const pkn::TensorShape shape{{n, n}};
    const pkn::Matrix x = make_ginibre(n * n, n * n, 9);
    const std::vector<bool> flags{true, false};
    for (auto _ : state) {
        pkn::Matrix y = pkn::partial_transpose(x, shape, flags);
        benchmark::DoNotOptimize(y);
    }
}

void BM_VerifyPreservation(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const pkn::TensorShape shape{{n, n}};
    const pkn::CanonicalPreserver cp = pkn::sample_canonical(shape, 10);
    const pkn::Superoperator phi = pkn::to_superoperator(cp);
    const pkn::PkParams params{3.0, 2};
    for (auto _ : state) {
        pkn::PreservationReport report = pkn::verify_preservation(phi, params, 32, 11);
        benchmark::DoNotOptimize(report);
    }
}

void BM_DecomposeBipartite(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const pkn::TensorShape shape{{n, n}};
    const pkn::Superoperator phi = pkn::to_superoperator(pkn::sample_canonical(shape, 12));
    const pkn::PkParams params{3.0, 2};
    for (auto _ : state) {
        pkn::DecompositionResult res = pkn::decompose_bipartite(phi, params);
        benchmark::DoNotOptimize(res);
    }
}

void BM_DecomposeTripartite(benchmark::State& state) {
    const pkn::TensorShape shape{{2, 2, 2}};
    const pkn::Superoperator phi = pkn::to_superoperator(pkn::sample_canonical(shape, 13));
    const pkn::PkParams params{3.0, 3};
    for (auto _ : state) {
        pkn::DecompositionResult res = pkn::decompose_multipartite(phi, params);
        benchmark::DoNotOptimize(res);
    }
}

BENCHMARK(BM_MatMul)->Arg(8)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_HermitianEigen)->Arg(8)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_Svd)->Arg(8)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_PkNorm)->Arg(8)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_Kron)->Arg(4)->Arg(8);
BENCHMARK(BM_Reshuffle)->Arg(2)->Arg(3)->Arg(4);
BENCHMARK(BM_PartialTranspose)->Arg(2)->Arg(3)->Arg(4);
BENCHMARK(BM_VerifyPreservation)->Arg(2)->Arg(3);
BENCHMARK(BM_DecomposeBipartite)->Arg(2)->Arg(3);
BENCHMARK(BM_DecomposeTripartite);

}  // namespace

BENCHMARK_MAIN();
