#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "kreinspec/classify.hpp"
#include "kreinspec/errors.hpp"
#include "kreinspec/sampling.hpp"

using namespace kreinspec;
using test::diag_pair;
using test::identity_pair;
using test::nilpotent_pair;
using test::rotation_pair;

TEST_CASE("pair consistency on the hand fixtures") {
    SUBCASE("diagonal pair: everything exact") {
        PairConsistencyReport rep = pair_consistency_report(diag_pair());
        CHECK(rep.adjoint_residual <= 1e-12);
        CHECK(rep.hausdorff_gap <= 1e-10);
        CHECK(rep.resolvent_residual <= 1e-10);
        CHECK(rep.pass);
    }
    SUBCASE("flip pair: GA = (AG)* and spectra both {±i}") {
        OperatorPair pair = rotation_pair();
        CHECK(test::entry_gap(pair.ga(), pair.ag().adjoint()) <= 1e-14);
        PairConsistencyReport rep = pair_consistency_report(pair);
        CHECK(rep.pass);
    }
    SUBCASE("identity pair passes trivially") {
        CHECK(pair_consistency_report(identity_pair()).pass);
    }
}

TEST_CASE("classify_point fixtures") {
    SUBCASE("diagonal pair: 2 positive, −3 negative") {
        OperatorPair pair = diag_pair();
        RieszContext ctx(pair.ag());
        KreinStructure ks = build_g0(pair, cplx(0, 4), {}, &ctx.spectrum());
        ClassifiedPoint p2 = classify_point(pair, ks, ctx, 2.0);
        CHECK(p2.verdict == PointType::PositiveType);
        CHECK(p2.cross_check_agrees);
        ClassifiedPoint m3 = classify_point(pair, ks, ctx, -3.0);
        CHECK(m3.verdict == PointType::NegativeType);
        CHECK(m3.cross_check_agrees);
    }
    SUBCASE("nilpotent pair: 0 is critical with G0 = G") {
        OperatorPair pair = nilpotent_pair();
        RieszContext ctx(pair.ag());
        KreinStructure ks = build_g0(pair, cplx(0, 1), {}, &ctx.spectrum());
        CHECK(test::entry_gap(ks.g0, pair.g) <= 1e-12);  // (AG−i)(AG+i) = I
        CHECK(classify_point(pair, ks, ctx, 0.0).verdict == PointType::Critical);
    }
    SUBCASE("identity pair: 1 positive with G0 = I/5") {
        OperatorPair pair = identity_pair();
        RieszContext ctx(pair.ag());
        KreinStructure ks = build_g0(pair, cplx(0, 2), {}, &ctx.spectrum());
        CHECK(classify_point(pair, ks, ctx, 1.0).verdict == PointType::PositiveType);
    }
    SUBCASE("not a spectral point") {
        OperatorPair pair = diag_pair();
        RieszContext ctx(pair.ag());
        KreinStructure ks = build_g0(pair, cplx(0, 4), {}, &ctx.spectrum());
        CHECK_THROWS_AS(classify_point(pair, ks, ctx, 1.5), PreconditionError);
    }
}

TEST_CASE("classify_spectrum fixtures") {
    SUBCASE("diagonal pair") {
        OperatorPair pair = diag_pair();
        auto ctx = RieszContext(pair.ag());
        KreinStructure ks = build_g0(pair, cplx(0, 4), {}, &ctx.spectrum());
        SignClassification cls = classify_spectrum(pair, ks, ctx);
        REQUIRE(cls.sigma_plus.size() == 1);
        REQUIRE(cls.sigma_minus.size() == 1);
        CHECK(cls.sigma_plus[0] == doctest::Approx(2.0));
        CHECK(cls.sigma_minus[0] == doctest::Approx(-3.0));
        CHECK(cls.critical_candidates.empty());
        CHECK(!cls.zero_forced);
    }
    SUBCASE("nilpotent pair: critical zero without singular G") {
        OperatorPair pair = nilpotent_pair();
        auto ctx = RieszContext(pair.ag());
        KreinStructure ks = build_g0(pair, cplx(0, 1), {}, &ctx.spectrum());
        SignClassification cls = classify_spectrum(pair, ks, ctx);
        REQUIRE(cls.critical_candidates.size() == 1);
        CHECK(std::abs(cls.critical_candidates[0]) <= 1e-9);
        CHECK(!cls.zero_forced);
        CHECK(cls.zero_consistent);
    }
    SUBCASE("singular G forces 0 into the candidates") {
        OperatorPair pair =
            OperatorPair::create(ComplexMatrix::identity(2), ComplexMatrix{{1, 0}, {0, 0}});
        auto ctx = RieszContext(pair.ag());
        KreinStructure ks = build_g0(pair, choose_lambda0(pair), {}, &ctx.spectrum());
        SignClassification cls = classify_spectrum(pair, ks, ctx);
        CHECK(cls.zero_forced);
        CHECK(cls.zero_consistent);
        bool has_zero = false;
        for (double c : cls.critical_candidates)
            if (std::abs(c) <= 1e-9) has_zero = true;
        CHECK(has_zero);
    }
    SUBCASE("flip pair: only non-real points") {
        OperatorPair pair = rotation_pair();
        auto ctx = RieszContext(pair.ag());
        KreinStructure ks = build_g0(pair, cplx(0, 2), {}, &ctx.spectrum());
        SignClassification cls = classify_spectrum(pair, ks, ctx);
        for (const ClassifiedPoint& cp : cls.points) CHECK(cp.verdict == PointType::NonReal);
        CHECK(cls.sigma_plus.empty());
        CHECK(cls.sigma_minus.empty());
    }
}

TEST_CASE("definite verdicts occur only at real points") {
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        std::mt19937_64 rng = sampling::stream(111, trial);
        sampling::RandomPair rp = sampling::random_pair(rng, 7, false);
        auto ctx = RieszContext(rp.pair.ag());
        KreinStructure ks = build_g0(rp.pair, choose_lambda0_from_radius(ctx.spectral_radius()),
                                     {}, &ctx.spectrum());
        SignClassification cls = classify_spectrum(rp.pair, ks, ctx);
        for (const ClassifiedPoint& cp : cls.points) {
            if (cp.verdict == PointType::PositiveType || cp.verdict == PointType::NegativeType) {
                CHECK(std::abs(cp.point.value.imag()) <= ctx.cluster_tol());
                CHECK(cp.cross_check_agrees);
            }
        }
    }
}

TEST_CASE("lambda0 invariance fixtures and property") {
    CHECK(lambda0_invariance_check(diag_pair(), cplx(0, 1), cplx(0, 4)));
    CHECK(lambda0_invariance_check(identity_pair(), cplx(0, 2), cplx(1, 1)));
    CHECK(lambda0_invariance_check(nilpotent_pair(), cplx(0, 1), cplx(0, 1)));
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
        std::mt19937_64 rng = sampling::stream(222, trial);
        sampling::RandomPair rp = sampling::random_pair(rng, 6, false);
        RieszContext probe(rp.pair.ag());
        const double rho = probe.spectral_radius();
        CHECK(lambda0_invariance_check(rp.pair, cplx(0, 1 + rho), cplx(1, 2 * (1 + rho))));
    }
}

TEST_CASE("resolvent growth over definite intervals") {
    const std::vector<double> etas{1e-1, 1e-2, 1e-3, 1e-4};
    SUBCASE("diagonal pair over [1,3]: constant 1") {
        OperatorPair pair = diag_pair();
        auto ctx = RieszContext(pair.ag());
        KreinStructure ks = build_g0(pair, cplx(0, 4), {}, &ctx.spectrum());
        SignClassification cls = classify_spectrum(pair, ks, ctx);
        GrowthCheckReport rep = resolvent_growth_check(pair, cls, 1.0, 3.0, etas);
        CHECK(rep.pass);
        CHECK(rep.c_hat == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("identity pair over [0.5, 1.5]") {
        OperatorPair pair = identity_pair();
        auto ctx = RieszContext(pair.ag());
        KreinStructure ks = build_g0(pair, cplx(0, 2), {}, &ctx.spectrum());
        SignClassification cls = classify_spectrum(pair, ks, ctx);
        GrowthCheckReport rep = resolvent_growth_check(pair, cls, 0.5, 1.5, etas);
        CHECK(rep.pass);
        CHECK(rep.c_hat == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("critical point inside the interval is rejected") {
        OperatorPair pair = nilpotent_pair();
        auto ctx = RieszContext(pair.ag());
        KreinStructure ks = build_g0(pair, cplx(0, 1), {}, &ctx.spectrum());
        SignClassification cls = classify_spectrum(pair, ks, ctx);
        CHECK_THROWS_AS(resolvent_growth_check(pair, cls, -0.5, 0.5, etas), PreconditionError);
    }
}

TEST_CASE("nonnegative-triple classification fixtures") {
    SUBCASE("diagonal case emits the top spectral subspace") {
        NonnegTripleReport rep = nonneg_triple_classification(ComplexMatrix{{2, 0}, {0, 3}},
                                                              ComplexMatrix{{1, 0}, {0, -1}});
        CHECK(rep.spectrum_real);
        CHECK(rep.typing_ok);
        REQUIRE(rep.typed_points.size() == 2);
        CHECK(rep.subspace_emitted);
        REQUIRE(rep.invariant_basis.cols() == 1);
        // the largest spectral point 2 lives on the first coordinate
        CHECK(std::abs(rep.invariant_basis(0, 0)) == doctest::Approx(1.0));
        CHECK(rep.pass);
    }
    SUBCASE("identity: scalar, no subspace required") {
        NonnegTripleReport rep =
            nonneg_triple_classification(ComplexMatrix::identity(2), ComplexMatrix::identity(2));
        CHECK(rep.spectrum_real);
        CHECK(rep.typing_ok);
        CHECK(rep.pass);
    }
    SUBCASE("rank-one against the sign matrix: nilpotent product") {
        ComplexMatrix a0{{1, 1}, {1, 1}};
        ComplexMatrix g0{{1, 0}, {0, -1}};
        NonnegTripleReport rep = nonneg_triple_classification(a0, g0);
        CHECK(rep.spectrum_real);
        CHECK(rep.typed_points.empty());  // no definite points
        CHECK(rep.pass);
    }
    SUBCASE("violated precondition is rejected with the witness") {
        ComplexMatrix a0{{-1, 0}, {0, -1}};
        CHECK_THROWS_AS(nonneg_triple_classification(a0, ComplexMatrix::identity(2)),
                        PreconditionError);
    }
}

TEST_CASE("randomized nonnegative triples: real spectrum and half-line typing") {
    for (std::uint64_t trial = 0; trial < 25; ++trial) {
        std::mt19937_64 rng = sampling::stream(333, trial);
        std::uniform_int_distribution<std::size_t> pick(2, 8);
        const std::size_t n = pick(rng);
        ComplexMatrix g0 = sampling::random_hermitian(rng, n);
        ComplexMatrix a0 = sampling::random_psd(rng, n);
        NonnegTripleReport rep = nonneg_triple_classification(a0, g0);
        CHECK(rep.spectrum_real);
        CHECK(rep.typing_ok);
        CHECK(rep.pass);
    }
}
