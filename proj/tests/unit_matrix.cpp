#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "pkn/matrix.hpp"
#include "pkn/rng.hpp"

using pkn::cplx;
using pkn::Matrix;

TEST_CASE("matrix construction validates shape and entries") {
    CHECK_THROWS_AS(Matrix(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(Matrix(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(Matrix(2, 2, {cplx(1, 0), cplx(0, 0), cplx(0, 0)}),
                    std::invalid_argument);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(Matrix(1, 2, {cplx(inf, 0), cplx(0, 0)}), std::invalid_argument);
    CHECK_THROWS_AS(Matrix(1, 1, {cplx(0, std::nan(""))}), std::invalid_argument);
}

TEST_CASE("identity, unit, and diag builders") {
    const Matrix id = Matrix::identity(3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            CHECK(id(r, c) == (r == c ? cplx(1, 0) : cplx(0, 0)));

    const Matrix e = Matrix::unit(2, 3, 1, 2);
    CHECK(e(1, 2) == cplx(1, 0));
    CHECK(pkn::frobenius_norm(e) == doctest::Approx(1.0));
    CHECK_THROWS_AS(Matrix::unit(2, 2, 2, 0), std::invalid_argument);

    const std::vector<double> d{3.0, -1.0};
    const Matrix dm = Matrix::diag(d);
    CHECK(dm(0, 0) == cplx(3, 0));
    CHECK(dm(1, 1) == cplx(-1, 0));
    CHECK(dm(0, 1) == cplx(0, 0));
}

TEST_CASE("arithmetic identities on random matrices") {
    pkn::Rng rng(11);
    const Matrix a = pkn::ginibre(4, 3, rng);
    const Matrix b = pkn::ginibre(4, 3, rng);

    CHECK(pkn::max_abs_diff((a + b) - b, a) < 1e-15);
    CHECK(pkn::max_abs_diff(2.0 * a, a + a) < 1e-15);
    CHECK(pkn::max_abs_diff(cplx(0, 1) * a + cplx(0, -1) * a, Matrix(4, 3)) == 0.0);

    const Matrix c = pkn::ginibre(3, 5, rng);
    const Matrix d = pkn::ginibre(5, 2, rng);
    CHECK(pkn::max_abs_diff((a * c) * d, a * (c * d)) < 1e-13);
    CHECK_THROWS_AS(a * d, std::invalid_argument);
}

TEST_CASE("matmul matches a hand computation") {
    const Matrix a(2, 2, {cplx(1, 1), cplx(2, 0), cplx(0, -1), cplx(3, 2)});
    const Matrix b(2, 2, {cplx(0, 1), cplx(1, 0), cplx(2, 0), cplx(0, 0)});
    const Matrix p = a * b;
    CHECK(std::abs(p(0, 0) - cplx(3, 1)) < 1e-15);
    CHECK(std::abs(p(0, 1) - cplx(1, 1)) < 1e-15);
    CHECK(std::abs(p(1, 0) - cplx(7, 4)) < 1e-15);
    CHECK(std::abs(p(1, 1) - cplx(0, -1)) < 1e-15);
}

TEST_CASE("adjoint is conjugate of transpose") {
    pkn::Rng rng(12);
    const Matrix a = pkn::ginibre(3, 4, rng);
    CHECK(pkn::max_abs_diff(pkn::adjoint(a), pkn::conjugate(pkn::transpose(a))) == 0.0);
    CHECK(pkn::max_abs_diff(pkn::adjoint(pkn::adjoint(a)), a) == 0.0);
}

TEST_CASE("trace and frobenius norm") {
    pkn::Rng rng(13);
    const Matrix a = pkn::ginibre(4, 4, rng);
    const Matrix b = pkn::ginibre(4, 4, rng);
    CHECK(std::abs(pkn::trace(a + b) - (pkn::trace(a) + pkn::trace(b))) < 1e-14);
    // tr(AB) == tr(BA)
    CHECK(std::abs(pkn::trace(a * b) - pkn::trace(b * a)) < 1e-13);

    double sq = 0.0;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) sq += std::norm(a(r, c));
    CHECK(pkn::frobenius_norm(a) == doctest::Approx(std::sqrt(sq)).epsilon(1e-14));
}

TEST_CASE("unitarity residual and hermitian predicate") {
    CHECK(pkn::unitarity_residual(Matrix::identity(5)) == 0.0);
    pkn::Rng rng(14);
    const Matrix u = pkn::random_unitary(5, rng);
    CHECK(pkn::unitarity_residual(u) < 1e-13);
    CHECK(pkn::unitarity_residual(2.0 * u) > 1.0);

    const Matrix h = pkn::random_hermitian(4, rng);
    CHECK(pkn::is_hermitian(h, 1e-12));
    Matrix g = h;
    g(0, 1) += cplx(0.1, 0);
    CHECK_FALSE(pkn::is_hermitian(g, 1e-12));
}

TEST_CASE("block and column access round-trips") {
    pkn::Rng rng(15);
    Matrix a = pkn::ginibre(5, 6, rng);
    const Matrix blk = pkn::get_block(a, 1, 2, 3, 4);
    CHECK(blk.rows() == 3);
    CHECK(blk.cols() == 4);
    CHECK(blk(0, 0) == a(1, 2));

    Matrix b(5, 6);
    pkn::set_block(b, 1, 2, blk);
    CHECK(pkn::max_abs_diff(pkn::get_block(b, 1, 2, 3, 4), blk) == 0.0);
    CHECK_THROWS_AS(pkn::get_block(a, 3, 3, 4, 4), std::invalid_argument);

    const Matrix col = pkn::get_column(a, 2);
    CHECK(col.rows() == 5);
    CHECK(col.cols() == 1);
    Matrix c(5, 6);
    pkn::set_column(c, 2, col.data());
    for (int r = 0; r < 5; ++r) CHECK(c(r, 2) == a(r, 2));
}

TEST_CASE("vector helpers") {
    const std::vector<cplx> x{cplx(1, 2), cplx(0, -1)};
    const std::vector<cplx> y{cplx(3, 0), cplx(1, 1)};
    // vdot conjugates the first argument
    const cplx d = pkn::vdot(x, y);
    CHECK(std::abs(d - (std::conj(cplx(1, 2)) * cplx(3, 0) +
                        std::conj(cplx(0, -1)) * cplx(1, 1))) < 1e-15);
    CHECK(pkn::vnorm(x) == doctest::Approx(std::sqrt(6.0)));

    pkn::Rng rng(16);
    const Matrix a = pkn::ginibre(3, 2, rng);
    const std::vector<cplx> v{cplx(1, 0), cplx(0, 1)};
    const std::vector<cplx> av = pkn::matvec(a, v);
    for (int r = 0; r < 3; ++r) {
        CHECK(std::abs(av[static_cast<std::size_t>(r)] -
                       (a(r, 0) * v[0] + a(r, 1) * v[1])) < 1e-15);
    }
}

TEST_CASE("rng streams are deterministic and decorrelated") {
    pkn::Rng a(42);
    pkn::Rng b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

    pkn::Rng c = pkn::derive_rng(42, 0);
    pkn::Rng d = pkn::derive_rng(42, 1);
    int equal = 0;
    for (int i = 0; i < 64; ++i) equal += c.uniform() == d.uniform();
    CHECK(equal == 0);

    pkn::Rng e(7);
    for (int i = 0; i < 1000; ++i) {
        const double u = e.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(e.integer(5) < 5);
    }
}

TEST_CASE("gaussian moments are plausible") {
    pkn::Rng rng(99);
    double sum = 0.0, sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gaussian();
        sum += g;
        sq += g * g;
    }
    CHECK(std::abs(sum / n) < 0.05);
    CHECK(std::abs(sq / n - 1.0) < 0.05);
}
