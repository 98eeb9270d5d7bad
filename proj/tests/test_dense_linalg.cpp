#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "kreinspec/dense_linalg.hpp"
#include "kreinspec/errors.hpp"
#include "kreinspec/sampling.hpp"

using namespace kreinspec;

TEST_CASE("hermitian_eig on diagonal and identity matrices") {
    HermitianEig e = hermitian_eig(ComplexMatrix{{3, 0}, {0, 1}});
    CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.values[1] == doctest::Approx(3.0).epsilon(1e-14));
    // eigenvectors are the swapped coordinate basis
    CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(e.vectors(0, 1)) == doctest::Approx(1.0));

    HermitianEig id = hermitian_eig(ComplexMatrix::identity(3));
    for (double v : id.values) CHECK(v == doctest::Approx(1.0));
    CHECK(test::entry_gap(id.vectors, ComplexMatrix::identity(3)) <= 1e-12);
}

TEST_CASE("hermitian_eig against the characteristic-polynomial oracle") {
    // [[0,1],[1,0]]: λ² − 1 = 0 → ±1
    const double root = std::sqrt(1.0);
    HermitianEig e = hermitian_eig(ComplexMatrix{{0, 1}, {1, 0}});
    CHECK(e.values[0] == doctest::Approx(-root).epsilon(1e-14));
    CHECK(e.values[1] == doctest::Approx(root).epsilon(1e-14));
}

TEST_CASE("hermitian_eig rejects visibly non-Hermitian input") {
    CHECK_THROWS_AS(hermitian_eig(ComplexMatrix{{0, 1}, {2, 0}}), NonHermitianError);
}

TEST_CASE("random Hermitian reconstruction up to n = 12") {
    for (std::uint64_t trial = 0; trial < 40; ++trial) {
        std::mt19937_64 rng = sampling::stream(101, trial);
        std::uniform_int_distribution<std::size_t> pick(2, 12);
        const std::size_t n = pick(rng);
        ComplexMatrix m = sampling::random_hermitian(rng, n);
        HermitianEig e = hermitian_eig(m);
        ComplexMatrix vd = e.vectors;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) vd(i, j) *= e.values[j];
        CHECK((vd * e.vectors.adjoint() - m).norm_fro() <= 1e-9 * m.norm_fro());
        CHECK((e.vectors.adjoint() * e.vectors - ComplexMatrix::identity(n)).norm_fro() <= 1e-10);
        CHECK((m * e.vectors - vd).norm_fro() <= 1e-10 * m.norm_fro() * std::sqrt(double(n)));
    }
}

TEST_CASE("eig_points fixtures") {
    SUBCASE("rotation generator: characteristic polynomial λ²+1") {
        auto pts = eig_points(ComplexMatrix{{0, -1}, {1, 0}}, 1e-8);
        REQUIRE(pts.size() == 2);
        CHECK(std::abs(pts[0].value - cplx(0, -1)) <= 1e-12);
        CHECK(std::abs(pts[1].value - cplx(0, 1)) <= 1e-12);
        CHECK(pts[0].algebraic_multiplicity == 1);
    }
    SUBCASE("triangular matrix reads off the diagonal") {
        auto pts = eig_points(ComplexMatrix{{2, 5}, {0, -3}}, 1e-8);
        REQUIRE(pts.size() == 2);
        CHECK(std::abs(pts[0].value - cplx(-3, 0)) <= 1e-12);
        CHECK(std::abs(pts[1].value - cplx(2, 0)) <= 1e-12);
    }
    SUBCASE("nilpotent: trace 0, determinant 0, one double cluster") {
        auto pts = eig_points(ComplexMatrix{{1, -1}, {1, -1}});
        REQUIRE(pts.size() == 1);
        CHECK(pts[0].algebraic_multiplicity == 2);
        CHECK(std::abs(pts[0].value) <= 1e-10);
    }
}

TEST_CASE("eig_points of M and M* are conjugate sets") {
    for (std::uint64_t trial = 0; trial < 25; ++trial) {
        std::mt19937_64 rng = sampling::stream(202, trial);
        sampling::RandomPair rp = sampling::random_pair(rng, 8, false);
        ComplexMatrix ag = rp.pair.ag();
        std::vector<cplx> s1, s2;
        for (const auto& p : eig_points(ag)) s1.push_back(p.value);
        for (const auto& p : eig_points(ag.adjoint())) s2.push_back(std::conj(p.value));
        double rho = 0.0;
        for (const cplx& v : s1) rho = std::max(rho, std::abs(v));
        CHECK(hausdorff_distance(s1, s2) <= 1e-8 * (1.0 + rho));
    }
}

TEST_CASE("solve_linear fixtures and the residual oracle") {
    SUBCASE("diagonal solve") {
        ComplexMatrix x = solve_linear(ComplexMatrix{{2, 0}, {0, 4}}, ComplexMatrix{{2}, {4}});
        CHECK(std::abs(x(0, 0) - 1.0) <= 1e-14);
        CHECK(std::abs(x(1, 0) - 1.0) <= 1e-14);
    }
    SUBCASE("identity returns the right-hand side") {
        ComplexMatrix b{{0.3}, {-1.7}};
        CHECK(test::entry_gap(solve_linear(ComplexMatrix::identity(2), b), b) == 0.0);
    }
    SUBCASE("shifted nilpotent, checked through the residual") {
        ComplexMatrix m{{cplx(1, -1), -1}, {1, cplx(-1, -1)}};  // [[1,-1],[1,-1]] - i I
        ComplexMatrix b{{1}, {0}};
        ComplexMatrix x = solve_linear(m, b);
        CHECK((m * x - b).norm_fro() <= 1e-10 * m.norm_fro() * x.norm_fro());
    }
    SUBCASE("singular matrix is rejected with the pivot magnitude") {
        CHECK_THROWS_AS(solve_linear(ComplexMatrix{{1, 1}, {1, 1}}, ComplexMatrix{{1}, {1}}),
                        SingularMatrixError);
    }
}

TEST_CASE("horner_matrix fixtures") {
    ComplexMatrix rot{{0, -1}, {1, 0}};
    SUBCASE("annihilating polynomial: M² = −I") {
        CHECK(horner_matrix(RealPolynomial({1, 0, 1}), rot).norm_fro() <= 1e-14);
    }
    SUBCASE("constant polynomial gives c·I") {
        CHECK(test::entry_gap(horner_matrix(RealPolynomial::constant(1.0), rot),
                              ComplexMatrix::identity(2)) == 0.0);
    }
    SUBCASE("identity polynomial returns M") {
        CHECK(test::entry_gap(horner_matrix(RealPolynomial({0, 1}), rot), rot) == 0.0);
    }
}

TEST_CASE("horner_matrix is multiplicative over polynomial products") {
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        std::mt19937_64 rng = sampling::stream(303, trial);
        std::uniform_int_distribution<int> dpick(0, 4);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        auto rand_poly = [&] {
            std::vector<double> c(static_cast<std::size_t>(dpick(rng)) + 1);
            for (double& v : c) v = u(rng);
            if (c.back() == 0.0) c.back() = 1.0;
            return RealPolynomial(c);
        };
        RealPolynomial p = rand_poly(), q = rand_poly();
        ComplexMatrix m = sampling::random_hermitian(rng, 5);
        ComplexMatrix lhs = horner_matrix(p * q, m);
        ComplexMatrix rhs = horner_matrix(p, m) * horner_matrix(q, m);
        const double scale = std::max(1.0, lhs.norm_fro());
        CHECK((lhs - rhs).norm_fro() <= 1e-9 * scale);
    }
}

TEST_CASE("min_hermitian_eig fixtures") {
    CHECK(min_hermitian_eig(ComplexMatrix{{2, 0}, {0, 3}}) == doctest::Approx(2.0));
    // [[1,−1],[−1,1]] has eigenvalues {0, 2}
    CHECK(min_hermitian_eig(ComplexMatrix{{1, -1}, {-1, 1}}) == doctest::Approx(0.0).epsilon(1e-12));
    ComplexMatrix neg = ComplexMatrix::identity(3);
    neg *= cplx(-1.0, 0.0);
    CHECK(min_hermitian_eig(neg) == doctest::Approx(-1.0));
}

TEST_CASE("pivoted QR exposes rank and orthonormal factors") {
    std::mt19937_64 rng = sampling::stream(404, 0);
    ComplexMatrix a = sampling::random_matrix(rng, 6);
    // make column 3 a combination of columns 0 and 1
    for (std::size_t i = 0; i < 6; ++i) a(i, 3) = 2.0 * a(i, 0) - a(i, 1);
    PivotedQr qr = qr_col_pivot(a, 1e-10 * a.norm_fro());
    CHECK(qr.rank == 5);
    CHECK((qr.q.adjoint() * qr.q - ComplexMatrix::identity(6)).norm_fro() <= 1e-12);
    // reconstruct with the permutation
    ComplexMatrix qp = qr.q * qr.r;
    for (std::size_t j = 0; j < 6; ++j) {
        const std::size_t src = static_cast<std::size_t>(qr.perm[j]);
        for (std::size_t i = 0; i < 6; ++i)
            CHECK(std::abs(qp(i, j) - a(i, src)) <= 1e-11 * a.norm_fro());
    }
}

TEST_CASE("null_space_basis finds the annihilated directions") {
    ComplexMatrix m{{1, 0}, {0, 0}};  // as a 2x2 map, null space is e2
    ComplexMatrix ns = null_space_basis(m, 1e-12);
    REQUIRE(ns.cols() == 1);
    CHECK(std::abs(ns(1, 0)) == doctest::Approx(1.0));
}

TEST_CASE("polynomial pretty printing and roots") {
    RealPolynomial p({1, 0, 1});
    CHECK(p.to_string() == "lambda^2 + 1");
    auto roots = polynomial_roots(p);
    REQUIRE(roots.size() == 2);
    for (const cplx& r : roots) CHECK(std::abs(std::abs(r.imag()) - 1.0) <= 1e-12);
    CHECK(polynomial_roots(RealPolynomial::constant(3.0)).empty());
}

TEST_CASE("schur form of a random matrix reconstructs and is triangular") {
    std::mt19937_64 rng = sampling::stream(505, 1);
    ComplexMatrix m = sampling::random_matrix(rng, 9);
    SchurForm sf = schur(m);
    CHECK((sf.u * sf.t * sf.u.adjoint() - m).norm_fro() <= 1e-11 * m.norm_fro());
    for (std::size_t i = 1; i < 9; ++i)
        for (std::size_t j = 0; j < i; ++j) CHECK(sf.t(i, j) == cplx(0.0, 0.0));
}

TEST_CASE("inverse_norm_two matches the diagonal case") {
    ComplexMatrix d{{cplx(0, 0.25), 0}, {0, cplx(5, 0)}};
    CHECK(inverse_norm_two(d) == doctest::Approx(4.0).epsilon(1e-9));
}
