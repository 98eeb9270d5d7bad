#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "kreinspec/errors.hpp"
#include "kreinspec/sampling.hpp"
#include "kreinspec/spectral_function.hpp"

using namespace kreinspec;
using test::diag_pair;
using test::identity_pair;
using test::nilpotent_pair;
using test::rotation_pair;

namespace {

SpectralFunction make_sf(const OperatorPair& pair, cplx lambda0) {
    auto ctx = std::make_shared<RieszContext>(pair.ag());
    KreinStructure ks = build_g0(pair, lambda0, {}, &ctx->spectrum());
    SignClassification cls = classify_spectrum(pair, ks, *ctx);
    return build_spectral_function(pair, ks, ctx, cls);
}

}  // namespace

TEST_CASE("borel set algebra") {
    BorelSet a = BorelSet::interval(0, 2);
    BorelSet b = BorelSet::interval(1, 3, false, true);
    CHECK(a.intersect(b).to_string() == "(1,2]");
    CHECK(a.unite(b).to_string() == "[0,3]");
    CHECK(a.difference(b).to_string() == "[0,1]");
    CHECK(a.contains(0.0));
    CHECK(!b.contains(1.0));
    CHECK(b.contains(3.0));
    CHECK(BorelSet().is_empty());
    CHECK(!BorelSet::whole_line().bounded());
    BorelSet u = BorelSet::interval(0, 1).unite(BorelSet::interval(2, 3));
    CHECK(u.intervals().size() == 2);
    CHECK(u.difference(BorelSet::interval(0.5, 2.5)).to_string() == "[0,0.5) u (2.5,3]");
}

TEST_CASE("spectral projection on the diagonal pair") {
    SpectralFunction sf = make_sf(diag_pair(), cplx(0, 4));
    CHECK(sf.critical_set().empty());
    SUBCASE("window around the positive point") {
        ProjectionResult e = spectral_projection(sf, BorelSet::interval(0, 4));
        CHECK(test::entry_gap(e.p, ComplexMatrix{{1, 0}, {0, 0}}) <= 1e-9);
        CHECK(e.rank == 1);
    }
    SUBCASE("window containing both points") {
        ProjectionResult e = spectral_projection(sf, BorelSet::interval(-4, 4));
        CHECK(test::entry_gap(e.p, ComplexMatrix::identity(2)) <= 1e-9);
    }
    SUBCASE("unbounded sets are rejected") {
        CHECK_THROWS_AS(spectral_projection(sf, BorelSet::whole_line()), PreconditionError);
    }
}

TEST_CASE("compact interval through the critical point of the nilpotent pair") {
    SpectralFunction sf = make_sf(nilpotent_pair(), cplx(0, 1));
    REQUIRE(sf.critical_set().size() == 1);
    ProjectionResult e = spectral_projection(sf, BorelSet::interval(-1, 1));
    // the whole generalized eigenspace of 0
    CHECK(test::entry_gap(e.p, ComplexMatrix::identity(2)) <= 1e-8);
    SUBCASE("boundary touching the critical point is inadmissible") {
        CHECK_THROWS_AS(spectral_projection(sf, BorelSet::interval(0, 1)), PreconditionError);
    }
}

TEST_CASE("axiom fixtures on the diagonal pair") {
    SpectralFunction sf = make_sf(diag_pair(), cplx(0, 4));
    SUBCASE("products match intersections") {
        ComplexMatrix e1 = spectral_projection(sf, BorelSet::interval(0, 4)).p;
        ComplexMatrix e2 = spectral_projection(sf, BorelSet::interval(1, 5)).p;
        ComplexMatrix ei =
            spectral_projection(sf, BorelSet::interval(0, 4).intersect(BorelSet::interval(1, 5)))
                .p;
        CHECK(test::entry_gap(ei, e1 * e2) <= 1e-9);
        CHECK(test::entry_gap(ei, ComplexMatrix{{1, 0}, {0, 0}}) <= 1e-9);
    }
    SUBCASE("disjoint additivity across the split") {
        BorelSet left = BorelSet::interval(-4, 0, true, false);
        BorelSet right = BorelSet::interval(0, 4);
        ComplexMatrix el = spectral_projection(sf, left).p;
        ComplexMatrix er = spectral_projection(sf, right).p;
        ComplexMatrix eu = spectral_projection(sf, left.unite(right)).p;
        CHECK(test::entry_gap(eu, el + er) <= 1e-9);
        CHECK(test::entry_gap(eu, ComplexMatrix::identity(2)) <= 1e-9);
    }
    SUBCASE("empty set gives the zero projection") {
        ProjectionResult e = spectral_projection(sf, BorelSet());
        CHECK(e.p.norm_fro() == 0.0);
        CHECK(e.rank == 0);
    }
    SUBCASE("full axiom report") {
        AxiomReport rep = verify_axioms(sf, default_delta_algebra(sf));
        CHECK(rep.sets >= 12);
        CHECK(rep.s1_max <= 1e-8);
        CHECK(rep.s2_max <= 1e-8);
        CHECK(rep.s3_polynomial_max <= 1e-8);
        CHECK(rep.s3_resolvent_max <= 1e-8);
        CHECK(rep.s4_ok);
        CHECK(rep.s5_ok);
        CHECK(rep.g0_symmetry_max <= 1e-8);
        CHECK(rep.pass);
    }
}

TEST_CASE("partition of unity fixtures") {
    SUBCASE("diagonal pair over a two-piece cover") {
        SpectralFunction sf = make_sf(diag_pair(), cplx(0, 4));
        std::vector<BorelSet> cover{BorelSet::interval(-4, 0, true, false),
                                    BorelSet::interval(0, 4)};
        CHECK(partition_check(sf, cover) <= 1e-8);
    }
    SUBCASE("flip pair: real part empty, conjugate pair carries everything") {
        SpectralFunction sf = make_sf(rotation_pair(), cplx(0, 2));
        std::vector<BorelSet> cover{BorelSet::interval(-1, 1)};
        CHECK(partition_check(sf, cover) <= 1e-8);
    }
    SUBCASE("identity pair") {
        SpectralFunction sf = make_sf(identity_pair(), cplx(0, 2));
        std::vector<BorelSet> cover{BorelSet::interval(0, 2)};
        CHECK(partition_check(sf, cover) <= 1e-8);
    }
    SUBCASE("overlapping cover is rejected") {
        SpectralFunction sf = make_sf(diag_pair(), cplx(0, 4));
        std::vector<BorelSet> cover{BorelSet::interval(-4, 1), BorelSet::interval(0, 4)};
        CHECK_THROWS_AS(partition_check(sf, cover), PreconditionError);
    }
    SUBCASE("default cover passes") {
        SpectralFunction sf = make_sf(diag_pair(), cplx(0, 4));
        CHECK(partition_check(sf, default_cover(sf)) <= 1e-8);
    }
}

TEST_CASE("boundary limit probe at the nilpotent critical point") {
    SpectralFunction sf = make_sf(nilpotent_pair(), cplx(0, 1));
    const std::vector<double> ts{0.5, 0.25, 0.125};
    BoundaryProbeReport rep = boundary_limit_probe(sf, 0.0, 1.0, ts);
    for (double v : rep.right_norms) CHECK(v <= 1e-10);  // no spectrum in (0, 1]
    for (double v : rep.left_norms) CHECK(v <= 1e-10);
    CHECK(rep.limit_exists);
    CHECK(rep.note == "no singularity - finite dimension");
    SUBCASE("non-critical points are rejected") {
        CHECK_THROWS_AS(boundary_limit_probe(sf, 0.5, 0.2, ts), PreconditionError);
    }
}

TEST_CASE("definite interval projections on the diagonal pair") {
    SpectralFunction sf = make_sf(diag_pair(), cplx(0, 4));
    SUBCASE("positive window") {
        DefiniteIntervalResult r = definite_interval_projection(
            sf, BorelSet::interval(1, 3), SubspaceKind::UniformlyPositive);
        CHECK(r.verdict.kind == SubspaceKind::UniformlyPositive);
        CHECK(r.verdict.delta > 0.0);
        CHECK(r.pass);
    }
    SUBCASE("negative window") {
        DefiniteIntervalResult r = definite_interval_projection(
            sf, BorelSet::interval(-4, -1), SubspaceKind::UniformlyNegative);
        CHECK(r.verdict.kind == SubspaceKind::UniformlyNegative);
        CHECK(r.pass);
    }
    SUBCASE("no spectral content: vacuous, rank 0") {
        DefiniteIntervalResult r = definite_interval_projection(
            sf, BorelSet::interval(5, 6), SubspaceKind::UniformlyPositive);
        CHECK(r.vacuous);
        CHECK(r.rank == 0);
        CHECK(r.pass);
    }
    SUBCASE("mixed content is rejected") {
        CHECK_THROWS_AS(definite_interval_projection(sf, BorelSet::interval(-4, 4),
                                                     SubspaceKind::UniformlyPositive),
                        PreconditionError);
    }
}

TEST_CASE("assembly matches the direct oracle on random definitizable pairs") {
    int exercised = 0;
    for (std::uint64_t trial = 0; trial < 12; ++trial) {
        std::mt19937_64 rng = sampling::stream(777, trial);
        sampling::RandomPair rp = sampling::random_pair(rng, 7, true);
        auto ctx = std::make_shared<RieszContext>(rp.pair.ag());
        KreinStructure ks = build_g0(
            rp.pair, choose_lambda0_from_radius(ctx->spectral_radius()), {}, &ctx->spectrum());
        SignClassification cls = classify_spectrum(rp.pair, ks, *ctx);
        SpectralFunction sf = build_spectral_function(rp.pair, ks, ctx, cls);
        for (const BorelSet& set : default_delta_algebra(sf)) {
            ProjectionResult a = spectral_projection(sf, set);
            ProjectionResult o = riesz_sum_oracle(sf, set);
            CHECK((a.p - o.p).norm_fro() <= 1e-8 * std::max(1.0, a.p.norm_fro()));
            CHECK(g0_symmetry_residual(sf, a.p) <= 1e-8);
            ++exercised;
        }
    }
    CHECK(exercised >= 100);
}

TEST_CASE("monotonicity through nested sets") {
    SpectralFunction sf = make_sf(diag_pair(), cplx(0, 4));
    ComplexMatrix inner = spectral_projection(sf, BorelSet::interval(1, 3)).p;
    ComplexMatrix outer = spectral_projection(sf, BorelSet::interval(-4, 4)).p;
    CHECK((inner * outer - inner).norm_fro() <= 1e-9);
}
