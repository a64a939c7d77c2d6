#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pkn/matrix.hpp"
#include "pkn/norms.hpp"
#include "pkn/preserver.hpp"
#include "pkn/rng.hpp"
#include "pkn/tensor.hpp"

using pkn::CanonicalPreserver;
using pkn::cplx;
using pkn::Matrix;
using pkn::PkParams;
using pkn::Superoperator;
using pkn::TensorShape;

namespace {

CanonicalPreserver make_preserver(const TensorShape& shape, std::uint64_t seed,
                                  std::vector<bool> flags) {
    const std::size_t total = shape.total();
    pkn::Rng rng = pkn::derive_rng(seed, 1000);
    return CanonicalPreserver(shape, pkn::random_unitary(total, rng),
                              pkn::random_unitary(total, rng), std::move(flags));
}

}  // namespace

TEST_CASE("canonical preservers validate their pieces") {
    const TensorShape shape({2, 2});
    pkn::Rng rng(120);
    const Matrix u = pkn::random_unitary(4, rng);
    CHECK_THROWS_AS(CanonicalPreserver(shape, pkn::ginibre(4, 4, rng), u, {false, false}),
                    std::invalid_argument);
    CHECK_THROWS_AS(CanonicalPreserver(shape, u, u, {false}), std::invalid_argument);
    CHECK_THROWS_AS(CanonicalPreserver(shape, pkn::random_unitary(3, rng), u,
                                       {false, false}),
                    std::invalid_argument);
    CHECK_NOTHROW(CanonicalPreserver(shape, u, u, {true, false}));
}

TEST_CASE("identity preserver acts as the identity") {
    const TensorShape shape({2, 3});
    const CanonicalPreserver cp(shape, Matrix::identity(6), Matrix::identity(6),
                                {false, false});
    pkn::Rng rng(121);
    const Matrix x = pkn::ginibre(6, 6, rng);
    CHECK(pkn::max_abs_diff(pkn::apply_canonical(cp, x), x) == 0.0);
    CHECK(pkn::max_abs_diff(pkn::to_superoperator(cp).mat, Matrix::identity(36)) == 0.0);
}

TEST_CASE("canonical application matches its superoperator on a basis") {
    const TensorShape shape({2, 3});
    const CanonicalPreserver cp = make_preserver(shape, 7, {true, false});
    const Superoperator phi = pkn::to_superoperator(cp);
    for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t c = 0; c < 6; ++c) {
            const Matrix e = Matrix::unit(6, 6, r, c);
            CHECK(pkn::max_abs_diff(pkn::apply_superop(phi, e),
                                    pkn::apply_canonical(cp, e)) <= 1e-12);
        }
}

TEST_CASE("sandwich-only preservers have kron superoperators") {
    const TensorShape shape({2, 2});
    const CanonicalPreserver cp = make_preserver(shape, 8, {false, false});
    const Superoperator phi = pkn::to_superoperator(cp);
    CHECK(pkn::max_abs_diff(phi.mat, pkn::kron(pkn::transpose(cp.v), cp.u)) <= 1e-13);
}

TEST_CASE("canonical preservers preserve every norm on products") {
    const TensorShape shape({2, 3});
    const CanonicalPreserver cp = make_preserver(shape, 9, {false, true});
    pkn::Rng rng(122);
    for (int it = 0; it < 20; ++it) {
        const std::vector<Matrix> fs{pkn::ginibre(2, 2, rng), pkn::ginibre(3, 3, rng)};
        const Matrix x = pkn::kron_multi(fs);
        const Matrix y = pkn::apply_canonical(cp, x);
        for (int k = 1; k <= 6; ++k) {
            const PkParams params{3.0, k};
            const double nx = pkn::pk_norm(x, params);
            CHECK(std::abs(pkn::pk_norm(y, params) - nx) <= 1e-9 * std::max(1.0, nx));
        }
    }
}

TEST_CASE("seeded sampling is deterministic and unitary") {
    const TensorShape shape({2, 3});
    const CanonicalPreserver a = pkn::sample_canonical(shape, 42);
    const CanonicalPreserver b = pkn::sample_canonical(shape, 42);
    CHECK(pkn::max_abs_diff(a.u, b.u) == 0.0);
    CHECK(pkn::max_abs_diff(a.v, b.v) == 0.0);
    CHECK(a.flags == b.flags);
    CHECK(pkn::unitarity_residual(a.u) <= 1e-12);

    const CanonicalPreserver c = pkn::sample_canonical(shape, 43);
    CHECK(pkn::max_abs_diff(a.u, c.u) > 1e-3);
}

TEST_CASE("sampled flags cover both values") {
    const TensorShape shape({2, 2});
    int on = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const CanonicalPreserver cp = pkn::sample_canonical(shape, seed);
        for (bool f : cp.flags) {
            on += f ? 1 : 0;
            ++total;
        }
    }
    CHECK(on > 0);
    CHECK(on < total);
}

TEST_CASE("preserver distance ignores a global phase") {
    const TensorShape shape({2, 2});
    const Superoperator phi = pkn::to_superoperator(pkn::sample_canonical(shape, 5));
    CHECK(pkn::preserver_distance(phi, phi) <= 1e-15);

    const cplx phase = std::polar(1.0, 1.234);
    const Superoperator shifted{shape, phase * phi.mat};
    CHECK(pkn::preserver_distance(shifted, phi) <= 1e-14);

    const Superoperator other = pkn::to_superoperator(pkn::sample_canonical(shape, 6));
    CHECK(pkn::preserver_distance(other, phi) > 0.1);

    const Superoperator wrong{TensorShape({2, 3}),
                              Matrix::identity(36)};
    CHECK_THROWS_AS(pkn::preserver_distance(wrong, phi), std::invalid_argument);
}

TEST_CASE("preservation check accepts canonical maps") {
    const TensorShape shape({2, 3});
    const Superoperator phi = pkn::to_superoperator(pkn::sample_canonical(shape, 77));
    const pkn::PreservationReport rep = pkn::verify_preservation(phi, {2.5, 3}, 100, 3);
    CHECK(rep.preserved);
    CHECK(rep.max_deviation <= 1e-9);
    CHECK(rep.trials == 100);
    CHECK_FALSE(rep.first_violation.has_value());
    CHECK(rep.worst_trial >= 0);
}

TEST_CASE("preservation check flags the zero map") {
    const TensorShape shape({2, 2});
    const Superoperator zero{shape, Matrix(16, 16)};
    const pkn::PreservationReport rep = pkn::verify_preservation(zero, {3.0, 2}, 50, 1);
    CHECK_FALSE(rep.preserved);
    CHECK(rep.max_deviation == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.worst_trial == 0);
    REQUIRE(rep.first_violation.has_value());
    CHECK(!rep.first_violation->scalars.empty());
    CHECK(!rep.first_violation->matrices.empty());
}

TEST_CASE("preservation check flags small perturbations") {
    const TensorShape shape({2, 2});
    const Superoperator phi = pkn::to_superoperator(pkn::sample_canonical(shape, 78));
    pkn::Rng rng(123);
    const Superoperator bent{shape, phi.mat + 1e-2 * pkn::ginibre(16, 16, rng)};
    const pkn::PreservationReport rep = pkn::verify_preservation(bent, {3.0, 2}, 50, 2);
    CHECK_FALSE(rep.preserved);
    CHECK(rep.max_deviation > 1e-6);
}

TEST_CASE("sweep reuses trials consistently") {
    const TensorShape shape({2, 2});
    const Superoperator phi = pkn::to_superoperator(pkn::sample_canonical(shape, 79));
    const std::vector<PkParams> params{{2.5, 1}, {3.0, 2}, {5.0, 4}};
    const std::vector<pkn::PreservationReport> reps =
        pkn::verify_preservation_sweep(phi, params, 60, 11);
    REQUIRE(reps.size() == 3);
    for (std::size_t i = 0; i < reps.size(); ++i) {
        CHECK(reps[i].params.p == params[i].p);
        CHECK(reps[i].params.k == params[i].k);
        CHECK(reps[i].preserved);
        const pkn::PreservationReport solo =
            pkn::verify_preservation(phi, params[i], 60, 11);
        CHECK(solo.max_deviation == reps[i].max_deviation);
    }
    CHECK_THROWS_AS(pkn::verify_preservation(phi, {3.0, 2}, 0, 0), std::invalid_argument);
}

// ==== decomposition ====

TEST_CASE("decomposing the identity map recovers trivial structure") {
    const TensorShape shape({2, 2});
    const Superoperator phi{shape, Matrix::identity(16)};
    const pkn::DecompositionResult res = pkn::decompose_bipartite(phi, {3.0, 2});
    CHECK(res.preserver.flags == std::vector<bool>{false, false});
    CHECK(res.residual <= 1e-10);
    CHECK(pkn::max_abs_diff(res.preserver.u, Matrix::identity(4)) <= 1e-8);
    CHECK(pkn::max_abs_diff(res.preserver.v, Matrix::identity(4)) <= 1e-8);
    CHECK(!res.diagnostics.empty());
}

TEST_CASE("round trip over every bipartite flag pattern") {
    const bool patterns[4][2] = {{false, false}, {true, false}, {false, true}, {true, true}};
    const TensorShape shapes[] = {TensorShape({2, 2}), TensorShape({2, 3}),
                                  TensorShape({3, 3})};
    std::uint64_t seed = 500;
    for (const TensorShape& shape : shapes) {
        for (const bool* f : patterns) {
            const CanonicalPreserver cp = make_preserver(shape, seed++, {f[0], f[1]});
            const Superoperator phi = pkn::to_superoperator(cp);
            const pkn::DecompositionResult res = pkn::decompose_bipartite(phi, {3.0, 2});
            CHECK(res.preserver.flags == cp.flags);
            CHECK(res.residual <= 1e-7);
            CHECK(pkn::preserver_distance(pkn::to_superoperator(res.preserver), phi) <=
                  1e-7);
        }
    }
}

TEST_CASE("decomposition tolerates a global phase on the input") {
    const TensorShape shape({2, 3});
    const Superoperator phi = pkn::to_superoperator(pkn::sample_canonical(shape, 81));
    const Superoperator shifted{shape, std::polar(1.0, 0.7) * phi.mat};
    const pkn::DecompositionResult res = pkn::decompose_bipartite(shifted, {3.0, 2});
    CHECK(res.residual <= 1e-7);
    CHECK(pkn::preserver_distance(pkn::to_superoperator(res.preserver), phi) <= 1e-7);
}

TEST_CASE("composing with a transposition-free map stays canonical") {
    const TensorShape shape({2, 2});
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const CanonicalPreserver inner = pkn::sample_canonical(shape, 200 + seed);
        const CanonicalPreserver outer = make_preserver(shape, 300 + seed, {false, false});
        const Superoperator f = pkn::to_superoperator(inner);
        const Superoperator g = pkn::to_superoperator(outer);
        const Superoperator comp{shape, g.mat * f.mat};

        CHECK(pkn::verify_preservation(comp, {3.0, 2}, 50, seed).preserved);
        const pkn::DecompositionResult res = pkn::decompose_bipartite(comp, {3.0, 2});
        CHECK(res.preserver.flags == inner.flags);
        CHECK(res.residual <= 1e-7);
        CHECK(pkn::preserver_distance(pkn::to_superoperator(res.preserver), comp) <= 1e-7);
    }
}

TEST_CASE("factorwise compositions decompose with xor flags") {
    const TensorShape shape({2, 2});
    const auto local_preserver = [&](std::uint64_t seed, std::vector<bool> flags) {
        pkn::Rng rng = pkn::derive_rng(seed, 77);
        const Matrix u = pkn::kron(pkn::random_unitary(2, rng), pkn::random_unitary(2, rng));
        const Matrix v = pkn::kron(pkn::random_unitary(2, rng), pkn::random_unitary(2, rng));
        return CanonicalPreserver(shape, u, v, std::move(flags));
    };
    std::uint64_t seed = 0;
    for (int m1 = 0; m1 < 4; ++m1)
        for (int m2 = 0; m2 < 4; ++m2) {
            const CanonicalPreserver cp1 =
                local_preserver(400 + seed, {(m1 & 1) != 0, (m1 & 2) != 0});
            const CanonicalPreserver cp2 =
                local_preserver(500 + seed, {(m2 & 1) != 0, (m2 & 2) != 0});
            ++seed;
            const Superoperator comp{
                shape, pkn::to_superoperator(cp2).mat * pkn::to_superoperator(cp1).mat};

            const pkn::DecompositionResult res = pkn::decompose_bipartite(comp, {3.0, 2});
            const std::vector<bool> expect{cp1.flags[0] != cp2.flags[0],
                                           cp1.flags[1] != cp2.flags[1]};
            CHECK(res.preserver.flags == expect);
            CHECK(pkn::preserver_distance(pkn::to_superoperator(res.preserver), comp) <=
                  1e-7);
        }
}

TEST_CASE("transposing after a factor-mixing unitary leaves the family") {
    // a partial transpose applied after a non-factorizable conjugation
    // changes singular values of product inputs, so both detectors fire
    const TensorShape shape({2, 2});
    const CanonicalPreserver inner = make_preserver(shape, 150, {false, false});
    const CanonicalPreserver outer = make_preserver(shape, 151, {true, false});
    const Superoperator comp{shape, pkn::to_superoperator(outer).mat *
                                        pkn::to_superoperator(inner).mat};

    const pkn::PreservationReport rep = pkn::verify_preservation(comp, {3.0, 2}, 50, 0);
    CHECK_FALSE(rep.preserved);
    CHECK(rep.max_deviation > 1e-3);
    CHECK_THROWS_AS(pkn::decompose_bipartite(comp, {3.0, 2}), pkn::DecompositionError);
}

TEST_CASE("tripartite round trip with explicit flags") {
    const TensorShape shape({2, 2, 2});
    const CanonicalPreserver cp = make_preserver(shape, 900, {true, false, true});
    const Superoperator phi = pkn::to_superoperator(cp);
    const pkn::DecompositionResult res = pkn::decompose_multipartite(phi, {3.0, 3});
    CHECK(res.preserver.flags == cp.flags);
    CHECK(res.residual <= 1e-7);

    bool saw_depth1 = false;
    for (const pkn::StageDiagnostic& d : res.diagnostics) saw_depth1 |= d.depth == 1;
    CHECK(saw_depth1);
}

TEST_CASE("tripartite identity decomposes to trivial structure") {
    const TensorShape shape({2, 2, 2});
    const Superoperator phi{shape, Matrix::identity(64)};
    const pkn::DecompositionResult res = pkn::decompose_multipartite(phi, {3.0, 2});
    CHECK(res.preserver.flags == std::vector<bool>{false, false, false});
    CHECK(res.residual <= 1e-10);
}

TEST_CASE("decomposition rejects non-preservers with a staged error") {
    const TensorShape shape({2, 2});
    const Superoperator phi = pkn::to_superoperator(pkn::sample_canonical(shape, 82));
    pkn::Rng rng(124);
    const Superoperator bent{shape, phi.mat + 1e-2 * pkn::ginibre(16, 16, rng)};
    bool threw = false;
    try {
        pkn::decompose_bipartite(bent, {3.0, 2});
    } catch (const pkn::DecompositionError& e) {
        threw = true;
        CHECK(!e.stage.empty());
        CHECK(e.depth >= 0);
        CHECK(e.residual > 1e-6);
        CHECK(std::string(e.what()).find(e.stage) != std::string::npos);
    }
    CHECK(threw);

    const Superoperator zero{shape, Matrix(16, 16)};
    CHECK_THROWS_AS(pkn::decompose_bipartite(zero, {3.0, 2}), pkn::DecompositionError);
}

TEST_CASE("decomposition validates parameters and shape") {
    const TensorShape shape({2, 2});
    const Superoperator phi{shape, Matrix::identity(16)};
    CHECK_THROWS_AS(pkn::decompose_bipartite(phi, {2.0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(pkn::decompose_bipartite(phi, {1.5, 2}), std::invalid_argument);

    const TensorShape tri({2, 2, 2});
    const Superoperator phi3{tri, Matrix::identity(64)};
    CHECK_THROWS_AS(pkn::decompose_bipartite(phi3, {3.0, 2}), std::invalid_argument);
}

TEST_CASE("decomposition survives a diagonal-gauge twist of the input") {
    // multiplying phi by the sandwich of a diagonal unitary keeps it a
    // preserver; the recovered map must still match
    const TensorShape shape({2, 2});
    const Superoperator phi = pkn::to_superoperator(pkn::sample_canonical(shape, 83));
    std::vector<cplx> d;
    for (int i = 0; i < 4; ++i) d.push_back(std::polar(1.0, 0.3 + 0.9 * i));
    const Matrix dm = Matrix::diag(d);
    const Superoperator twist =
        pkn::superop_of_sandwich(dm, pkn::adjoint(dm), shape);
    const Superoperator comp{shape, twist.mat * phi.mat};
    const pkn::DecompositionResult res = pkn::decompose_bipartite(comp, {3.0, 2});
    CHECK(res.residual <= 1e-7);
}
