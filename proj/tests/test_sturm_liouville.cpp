#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "kreinspec/errors.hpp"
#include "kreinspec/sturm_liouville.hpp"

using namespace kreinspec;

namespace {

SLProblem unit_problem(int n) {
    SLProblem prob;
    prob.a = 0.0;
    prob.b = 1.0;
    prob.n = n;
    prob.w = [](double) { return 1.0; };
    prob.p = [](double) { return 1.0; };
    prob.q = [](double) { return 0.0; };
    return prob;
}

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace

TEST_CASE("three-point stencil on the unit problem, n = 3") {
    OperatorPair pair = discretize(unit_problem(3));
    // h = 1/4: G = 16·tridiag(−1, 2, −1), A = I
    ComplexMatrix expect{{32, -16, 0}, {-16, 32, -16}, {0, -16, 32}};
    CHECK(test::entry_gap(pair.g, expect) <= 1e-12);
    CHECK(test::entry_gap(pair.a, ComplexMatrix::identity(3)) <= 1e-12);
}

TEST_CASE("constant weight rescales A only") {
    SLProblem prob = unit_problem(3);
    prob.w = [](double) { return 2.0; };
    OperatorPair pair = discretize(prob);
    CHECK(test::entry_gap(pair.a, ComplexMatrix::identity(3) * cplx(0.5, 0)) <= 1e-12);
    ComplexMatrix expect{{32, -16, 0}, {-16, 32, -16}, {0, -16, 32}};
    CHECK(test::entry_gap(pair.g, expect) <= 1e-12);
}

TEST_CASE("constant potential shifts the diagonal") {
    SLProblem prob = unit_problem(3);
    prob.q = [](double) { return 1.0; };
    OperatorPair pair = discretize(prob);
    ComplexMatrix expect{{33, -16, 0}, {-16, 33, -16}, {0, -16, 33}};
    CHECK(test::entry_gap(pair.g, expect) <= 1e-12);
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(discretize(unit_problem(1)), PreconditionError);
    SLProblem bad = unit_problem(4);
    bad.w = [](double x) { return x - 0.5; };  // sign change on the grid
    CHECK_THROWS_AS(discretize(bad), InputError);
}

TEST_CASE("closed-form spectrum of the n = 3 fixture") {
    SlReport rep = sl_report(unit_problem(3));
    REQUIRE(rep.spectrum.size() == 3);
    const double s2 = 16.0 * std::sqrt(2.0);
    CHECK(std::abs(rep.spectrum[0] - (32.0 - s2)) <= 1e-8 * (32.0 - s2));
    CHECK(std::abs(rep.spectrum[1] - 32.0) <= 1e-8 * 32.0);
    CHECK(std::abs(rep.spectrum[2] - (32.0 + s2)) <= 1e-8 * (32.0 + s2));
    CHECK(rep.positive_count == 3);
    CHECK(rep.negative_count == 0);
    CHECK(rep.critical_count == 0);
    CHECK(rep.p_lambda_definitizing);
    CHECK(rep.spectrum_real);
    CHECK(rep.axioms.pass);
    CHECK(rep.pass);
}

TEST_CASE("variable weight keeps the spectrum real and positive") {
    SLProblem prob = unit_problem(30);
    prob.w = [](double x) { return 1.0 + 0.5 * x; };
    SlReport rep = sl_report(prob);
    CHECK(rep.spectrum_real);
    CHECK(rep.positive_count == 30);
    CHECK(rep.negative_count == 0);
    CHECK(rep.critical_count == 0);
    CHECK(rep.pass);
}

TEST_CASE("strongly negative potential yields an indefinite G with exact sign typing") {
    SLProblem prob = unit_problem(20);
    prob.q = [](double) { return -50.0; };
    SlReport rep = sl_report(prob);
    CHECK(rep.spectrum_real);
    CHECK(rep.negative_count >= 1);
    CHECK(rep.positive_count >= 1);
    CHECK(rep.critical_count == 0);
    // sign typing per Theorem-style report with p = λ
    OperatorPair pair = discretize(prob);
    auto ctx = std::make_shared<RieszContext>(pair.ag());
    KreinStructure ks = build_g0(pair, choose_lambda0_from_radius(ctx->spectral_radius()), {},
                                 &ctx->spectrum());
    SignClassification cls = classify_spectrum(pair, ks, *ctx);
    TheoremMainReport tm = theorem_main_report(pair, cls, *ctx, RealPolynomial({0, 1}));
    CHECK(tm.pass);
    CHECK(rep.pass);
}

TEST_CASE("grid refinement drives the ground eigenvalue toward pi^2") {
    SLProblem prob = unit_problem(199);
    OperatorPair pair = discretize(prob);
    // A = I here, so the product spectrum is the Hermitian spectrum of G
    HermitianEig eig = hermitian_eig(pair.g);
    const double lambda1 = eig.values.front();
    CHECK(std::abs(lambda1 - kPi * kPi) / (kPi * kPi) <= 0.02);
}
