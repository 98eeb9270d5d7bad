#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "kreinspec/errors.hpp"
#include "kreinspec/riesz.hpp"
#include "kreinspec/sampling.hpp"

using namespace kreinspec;
using test::rotation_pair;

TEST_CASE("projection onto a diagonal eigenvalue") {
    ComplexMatrix t{{2, 0}, {0, -3}};
    RieszContext ctx(t);
    const int idx = ctx.find_point(cplx(2, 0));
    REQUIRE(idx >= 0);
    ProjectionResult p = riesz_projection(ctx, {idx});
    CHECK(test::entry_gap(p.p, ComplexMatrix{{1, 0}, {0, 0}}) <= 1e-11);
    CHECK(p.rank == 1);
    CHECK(p.idempotency_residual <= 1e-8 * (1.0 + p.p.norm_fro() * p.p.norm_fro()));
    CHECK(p.trace_gap <= 1e-6);
}

TEST_CASE("projection onto one eigenvalue of the rotation generator") {
    ComplexMatrix t{{0, -1}, {1, 0}};
    RieszContext ctx(t);
    const int idx = ctx.find_point(cplx(0, 1));
    REQUIRE(idx >= 0);
    ProjectionResult p = riesz_projection(ctx, {idx});
    // eigenprojection vv*/v*v with v = (1, −i)
    ComplexMatrix expect{{cplx(0.5, 0), cplx(0, 0.5)}, {cplx(0, -0.5), cplx(0.5, 0)}};
    CHECK(test::entry_gap(p.p, expect) <= 1e-11);
}

TEST_CASE("full-spectrum contour sums to the identity") {
    std::mt19937_64 rng = sampling::stream(42, 3);
    sampling::RandomPair rp = sampling::random_pair(rng, 7, false);
    RieszContext ctx(rp.pair.ag());
    std::vector<int> all;
    for (int i = 0; i < static_cast<int>(ctx.spectrum().size()); ++i) all.push_back(i);
    ProjectionResult p = riesz_projection(ctx, all);
    CHECK(test::entry_gap(p.p, ComplexMatrix::identity(rp.n)) <= 1e-8);
}

TEST_CASE("completeness and pairwise orthogonality of cluster projections") {
    for (std::uint64_t trial = 0; trial < 15; ++trial) {
        std::mt19937_64 rng = sampling::stream(606, trial);
        sampling::RandomPair rp = sampling::random_pair(rng, 8, false);
        RieszContext ctx(rp.pair.ag());
        std::vector<ProjectionResult> ps;
        for (int i = 0; i < static_cast<int>(ctx.spectrum().size()); ++i)
            ps.push_back(riesz_projection(ctx, {i}));
        ComplexMatrix sum(rp.n, rp.n);
        for (const auto& p : ps) sum += p.p;
        CHECK(test::entry_gap(sum, ComplexMatrix::identity(rp.n)) <= 1e-8);
        for (std::size_t i = 0; i < ps.size(); ++i)
            for (std::size_t j = i + 1; j < ps.size(); ++j)
                CHECK((ps[i].p * ps[j].p).norm_fro() <= 1e-8);
    }
}

TEST_CASE("quadrature delta shrinks at least tenfold per node doubling") {
    int exercised = 0;
    for (std::uint64_t trial = 0; trial < 30 && exercised < 8; ++trial) {
        std::mt19937_64 rng = sampling::stream(707, trial);
        ComplexMatrix m = sampling::random_hermitian(rng, 6);
        RieszContext ctx(m);
        if (ctx.spectrum().size() < 3) continue;
        // clusters separated by at least the contour radius
        double min_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < ctx.spectrum().size(); ++i)
            for (std::size_t j = i + 1; j < ctx.spectrum().size(); ++j)
                min_gap = std::min(min_gap,
                                   std::abs(ctx.spectrum()[i].value - ctx.spectrum()[j].value));
        if (min_gap < 0.3) continue;
        ComplexMatrix p32 = riesz_projection_fixed_nodes(ctx, {0}, 32);
        ComplexMatrix p64 = riesz_projection_fixed_nodes(ctx, {0}, 64);
        ComplexMatrix p128 = riesz_projection_fixed_nodes(ctx, {0}, 128);
        const double d1 = (p64 - p32).norm_fro();
        const double d2 = (p128 - p64).norm_fro();
        if (d1 <= 1e-14) continue;  // already at the floor
        CHECK(d2 <= d1 / 10.0);
        ++exercised;
    }
    CHECK(exercised >= 3);
}

TEST_CASE("direct and cached quadrature routes agree") {
    std::mt19937_64 rng = sampling::stream(717, 5);
    sampling::RandomPair rp = sampling::random_pair(rng, 8, true);
    RieszContext ctx(rp.pair.ag());
    for (int i = 0; i < static_cast<int>(ctx.spectrum().size()); ++i) {
        ProjectionResult direct = riesz_projection(ctx, {i}, 0, RieszPath::Direct);
        ProjectionResult cached = riesz_projection(ctx, {i}, 0, RieszPath::Cached);
        CHECK((direct.p - cached.p).norm_fro() <= 1e-9 * (1.0 + direct.p.norm_fro()));
    }
}

TEST_CASE("riesz_range spans the projection range") {
    std::mt19937_64 rng = sampling::stream(727, 9);
    sampling::RandomPair rp = sampling::random_pair(rng, 7, false);
    RieszContext ctx(rp.pair.ag());
    for (int i = 0; i < static_cast<int>(ctx.spectrum().size()); ++i) {
        ProjectionResult pr = riesz_projection(ctx, {i});
        ComplexMatrix v = riesz_range(ctx, {i});
        REQUIRE(static_cast<int>(v.cols()) == pr.rank);
        // P V = V and V*V = I
        CHECK((pr.p * v - v).norm_fro() <= 1e-8 * std::max(1.0, pr.p.norm_fro()));
        CHECK((v.adjoint() * v - ComplexMatrix::identity(v.cols())).norm_fro() <= 1e-10);
    }
}

TEST_CASE("pole orders") {
    SUBCASE("nilpotent double point has order 2") {
        ComplexMatrix t{{1, -1}, {1, -1}};
        RieszContext ctx(t);
        CHECK(pole_order(ctx, 0) == 2);
    }
    SUBCASE("semisimple eigenvalues have order 1") {
        ComplexMatrix t{{2, 0}, {0, -3}};
        RieszContext ctx(t);
        CHECK(pole_order(ctx, 0) == 1);
        CHECK(pole_order(ctx, 1) == 1);
    }
    SUBCASE("distinct non-real eigenvalues have order 1") {
        ComplexMatrix t{{0, -1}, {1, 0}};
        RieszContext ctx(t);
        CHECK(pole_order(ctx, 0) == 1);
    }
}

TEST_CASE("pair-space symmetry, Krein property and pole orders") {
    SUBCASE("rotation fixture at lambda0 = 2i") {
        OperatorPair pair = rotation_pair();
        KreinStructure ks = build_g0(pair, cplx(0, 2));  // G0 = diag(1/3, −1/3)
        RieszContext ctx(pair.ag());
        int idx = -1;
        for (int i = 0; i < static_cast<int>(ctx.spectrum().size()); ++i)
            if (!ctx.is_real(i)) idx = i;
        REQUIRE(idx >= 0);
        PairSpaceReport rep = pair_space_krein_check(ks, ctx, idx);
        CHECK(rep.adjoint_symmetry_residual <= 1e-8);
        CHECK(rep.verdict.kind == SubspaceKind::Krein);
        CHECK(rep.pole_order_lambda == 1);
        CHECK(rep.pole_order_conjugate == 1);
        CHECK(rep.pass);
    }
    SUBCASE("real spectral point is rejected") {
        OperatorPair pair = test::diag_pair();
        KreinStructure ks = build_g0(pair, cplx(0, 4));
        RieszContext ctx(pair.ag());
        CHECK_THROWS_AS(pair_space_krein_check(ks, ctx, 0), PreconditionError);
    }
}

TEST_CASE("adjoint-symmetry of conjugate projections on random symmetrizable pairs") {
    int conj_pairs_seen = 0;
    for (std::uint64_t trial = 0; trial < 50 && conj_pairs_seen < 12; ++trial) {
        std::mt19937_64 rng = sampling::stream(737, trial);
        sampling::RandomPair rp = sampling::random_pair(rng, 8, false);
        RieszContext ctx(rp.pair.ag());
        KreinStructure ks = build_g0(rp.pair, choose_lambda0_from_radius(ctx.spectral_radius()),
                                     {}, &ctx.spectrum());
        const double g0n = std::max(ks.g0.norm_fro(), 1e-300);
        for (int i = 0; i < static_cast<int>(ctx.spectrum().size()); ++i) {
            if (ctx.is_real(i)) continue;
            if (ctx.spectrum()[static_cast<std::size_t>(i)].value.imag() < 0) continue;
            const int j = ctx.conjugate_partner(i);
            REQUIRE(j >= 0);
            ProjectionResult ei = riesz_projection(ctx, {i});
            ProjectionResult ej = riesz_projection(ctx, {j});
            CHECK((ks.g0 * ei.p - ej.p.adjoint() * ks.g0).norm_fro() <= 1e-8 * g0n);
            CHECK(pole_order(ctx, i) == pole_order(ctx, j));
            ++conj_pairs_seen;
        }
    }
    CHECK(conj_pairs_seen >= 6);
}

TEST_CASE("recorded contours isolate their clusters") {
    std::mt19937_64 rng = sampling::stream(747, 2);
    sampling::RandomPair rp = sampling::random_pair(rng, 8, false);
    RieszContext ctx(rp.pair.ag());
    for (int i = 0; i < static_cast<int>(ctx.spectrum().size()); ++i) {
        for (RieszPath path : {RieszPath::Direct, RieszPath::Cached}) {
            ProjectionResult p = riesz_projection(ctx, {i}, 0, path);
            REQUIRE(p.contours.size() == 1);
            const ContourSpec& c = p.contours[0];
            CHECK(c.radius > 0.0);
            CHECK((c.nodes & (c.nodes - 1)) == 0);  // power of two
            // target cluster strictly inside, the rest strictly outside
            const SpectralPoint& pt = ctx.spectrum()[static_cast<std::size_t>(i)];
            CHECK(std::abs(pt.value - c.center) + pt.cluster_radius < c.radius);
            for (int j = 0; j < static_cast<int>(ctx.spectrum().size()); ++j) {
                if (j == i) continue;
                CHECK(std::abs(ctx.spectrum()[static_cast<std::size_t>(j)].value - c.center) >
                      c.radius);
            }
        }
    }
}

TEST_CASE("contour separation guard") {
    // two eigenvalues closer than 4x cluster tolerance cannot be isolated
    ComplexMatrix t{{1.0, 0}, {0, 1.0 + 2e-8}};
    Tolerances tol;
    RieszContext ctx(t, tol);
    // after coarsening these merge to one cluster; a full-spectrum contour works
    std::vector<int> all;
    for (int i = 0; i < static_cast<int>(ctx.spectrum().size()); ++i) all.push_back(i);
    ProjectionResult p = riesz_projection(ctx, all);
    CHECK(test::entry_gap(p.p, ComplexMatrix::identity(2)) <= 1e-8);
}
