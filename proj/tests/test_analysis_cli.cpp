#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "kreinspec/analysis.hpp"
#include "kreinspec/errors.hpp"

using namespace kreinspec;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(KREINSPEC_CLI_PATH) + " " + args;
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

const char* kDiagPairJson = R"({"n": 2, "A": {"re": [[2,0],[0,3]]}, "G": {"re": [[1,0],[0,-1]]}})";

}  // namespace

TEST_CASE("run_analysis on the diagonal pair") {
    OperatorPair pair = test::diag_pair();
    AnalysisReport rep = run_analysis(pair);
    CHECK(rep.pass);
    CHECK(rep.polynomial_found);
    CHECK(rep.p.to_string() == "lambda");
    REQUIRE(rep.classification.sigma_plus.size() == 1);
    CHECK(rep.classification.sigma_plus[0] == doctest::Approx(2.0));
    REQUIRE(rep.classification.sigma_minus.size() == 1);
    CHECK(rep.classification.sigma_minus[0] == doctest::Approx(-3.0));
    CHECK(rep.critical_set.empty());
    CHECK(rep.lambda0 == cplx(0, 4));
    CHECK(rep.lambda0_invariant);
}

TEST_CASE("run_analysis on the identity pair finds the constant polynomial") {
    AnalysisReport rep = run_analysis(test::identity_pair());
    CHECK(rep.pass);
    CHECK(rep.p.degree() == 0);
    CHECK(rep.p.coeffs()[0] == doctest::Approx(1.0));
}

TEST_CASE("pair file parsing") {
    Tolerances tol;
    SUBCASE("valid file with omitted imaginary part") {
        OperatorPair pair = load_pair_json(kDiagPairJson, tol);
        CHECK(pair.n == 2);
        CHECK(pair.a(1, 1) == cplx(3, 0));
        CHECK(pair.g(1, 1) == cplx(-1, 0));
    }
    SUBCASE("truncated file") {
        CHECK_THROWS_AS(load_pair_json(R"({"n": 2, "A": {"re": [[2,0],)", tol), InputError);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(
            load_pair_json(R"({"n": 3, "A": {"re": [[2,0],[0,3]]}, "G": {"re": [[1,0],[0,-1]]}})",
                           tol),
            InputError);
    }
    SUBCASE("non-Hermitian input") {
        CHECK_THROWS_AS(
            load_pair_json(R"({"n": 2, "A": {"re": [[0,1],[2,0]]}, "G": {"re": [[1,0],[0,1]]}})",
                           tol),
            NonHermitianError);
    }
    SUBCASE("complex Hermitian input accepted") {
        OperatorPair pair = load_pair_json(
            R"({"n": 2, "A": {"re": [[1,0],[0,1]], "im": [[0,1],[-1,0]]},
                "G": {"re": [[1,0],[0,1]]}})",
            tol);
        CHECK(pair.a(0, 1) == cplx(0, 1));
        CHECK(pair.a(1, 0) == cplx(0, -1));
    }
}

TEST_CASE("polynomial literal coefficients") {
    CHECK(parse_coefficients_text("1") == std::vector<double>{1.0});
    CHECK(parse_coefficients_text("0") == std::vector<double>{0.0});
    CHECK(parse_coefficients_text("1 + 0.5*x") == std::vector<double>{1.0, 0.5});
    CHECK(parse_coefficients_text("2*x^2 - 1") == std::vector<double>{-1.0, 0.0, 2.0});
    CHECK(parse_coefficients_text("x") == std::vector<double>{0.0, 1.0});
    CHECK(parse_coefficients_text("-x^3") == std::vector<double>{0.0, 0.0, 0.0, -1.0});
    CHECK_THROWS_AS(parse_coefficients_text("sin(x)"), InputError);
    CHECK_THROWS_AS(parse_coefficients_text(""), InputError);
}

TEST_CASE("sl config parsing") {
    SLProblem prob = load_sl_json(
        R"({"interval": [0, 1], "n": 3, "w": "1", "p": [1], "q": "0"})");
    CHECK(prob.n == 3);
    CHECK(prob.w(0.3) == doctest::Approx(1.0));
    CHECK_THROWS_AS(load_sl_json(R"({"interval": [0, 1], "n": 1, "w": "1", "p": "1", "q": "0"})"),
                    InputError);
    CHECK_THROWS_AS(load_sl_json(R"({"interval": [1, 0], "n": 3, "w": "1", "p": "1", "q": "0"})"),
                    InputError);
}

TEST_CASE("analysis report serialization carries the contract fields") {
    AnalysisReport rep = run_analysis(test::diag_pair());
    const std::string text = report_to_json(rep, 7);
    CHECK(text.find("\"schema\": 1") != std::string::npos);
    CHECK(text.find("\"pass\": true") != std::string::npos);
    CHECK(text.find("\"lambda\"") != std::string::npos);
    CHECK(text.find("\"critical_set\"") != std::string::npos);
}

TEST_CASE("cli end to end") {
    const std::string dir = "/tmp/kreinspec_cli_test";
    std::system(("mkdir -p " + dir).c_str());

    SUBCASE("analyze a passing pair, deterministic across runs") {
        spit(dir + "/pair.json", kDiagPairJson);
        CHECK(run_cli("analyze " + dir + "/pair.json --seed 5 --out " + dir + "/r1.json") == 0);
        CHECK(run_cli("analyze " + dir + "/pair.json --seed 5 --out " + dir + "/r2.json") == 0);
        const std::string r1 = slurp(dir + "/r1.json");
        CHECK(!r1.empty());
        CHECK(r1 == slurp(dir + "/r2.json"));
        CHECK(r1.find("\"pass\": true") != std::string::npos);
    }
    SUBCASE("truncated input exits 1") {
        spit(dir + "/bad.json", "{\"n\": 2, \"A\":");
        CHECK(run_cli("analyze " + dir + "/bad.json --out " + dir + "/bad_out.json") == 1);
    }
    SUBCASE("sl fixture passes and n=1 fails validation") {
        spit(dir + "/sl.json", R"({"interval": [0,1], "n": 3, "w": "1", "p": "1", "q": "0"})");
        CHECK(run_cli("sl " + dir + "/sl.json --out " + dir + "/sl_out.json") == 0);
        const std::string out = slurp(dir + "/sl_out.json");
        CHECK(out.find("\"sturm_liouville\"") != std::string::npos);
        spit(dir + "/sl1.json", R"({"interval": [0,1], "n": 1, "w": "1", "p": "1", "q": "0"})");
        CHECK(run_cli("sl " + dir + "/sl1.json") == 1);
    }
    SUBCASE("project evaluates a window") {
        spit(dir + "/pair.json", kDiagPairJson);
        CHECK(run_cli("project " + dir + "/pair.json --interval 0..4 --out " + dir +
                      "/proj.json") == 0);
        const std::string out = slurp(dir + "/proj.json");
        CHECK(out.find("\"rank\": 1") != std::string::npos);
    }
    SUBCASE("emitted fixtures re-analyze to the same summary") {
        CHECK(run_cli("selftest --emit-fixtures " + dir) == 0);
        CHECK(run_cli("analyze " + dir + "/diag_pair.json --seed 3 --out " + dir + "/f1.json") ==
              0);
        CHECK(run_cli("analyze " + dir + "/diag_pair.json --seed 3 --out " + dir + "/f2.json") ==
              0);
        CHECK(slurp(dir + "/f1.json") == slurp(dir + "/f2.json"));
        // nilpotent fixture also passes end to end
        CHECK(run_cli("analyze " + dir + "/nilpotent_pair.json") == 0);
    }
    SUBCASE("selftest batch") {
        CHECK(run_cli("selftest --pairs 6 --seed 11 --out " + dir + "/st.json") == 0);
        CHECK(slurp(dir + "/st.json").find("\"pass\": true") != std::string::npos);
    }
    SUBCASE("batch analyze emits an array and the worst exit code") {
        spit(dir + "/pair.json", kDiagPairJson);
        spit(dir + "/id.json", R"({"n": 2, "A": {"re": [[1,0],[0,1]]}, "G": {"re": [[1,0],[0,1]]}})");
        CHECK(run_cli("analyze " + dir + "/pair.json " + dir + "/id.json --out " + dir +
                      "/batch.json") == 0);
        const std::string out = slurp(dir + "/batch.json");
        CHECK(out.front() == '[');
        // a hard pair with a nonzero critical point downgrades the batch to 2
        spit(dir + "/hard.json",
             R"({"n": 2, "A": {"re": [[0,1],[1,0]]}, "G": {"re": [[0,1],[1,0]]}})");
        CHECK(run_cli("analyze " + dir + "/pair.json " + dir + "/hard.json --out " + dir +
                      "/batch2.json") == 2);
    }
}

TEST_CASE("report residuals are finite and nonnegative") {
    AnalysisReport rep = run_analysis(test::diag_pair());
    auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
    CHECK(ok(rep.g0_residuals.hermiticity));
    CHECK(ok(rep.g0_residuals.symmetry));
    CHECK(ok(rep.consistency.adjoint_residual));
    CHECK(ok(rep.consistency.hausdorff_gap));
    CHECK(ok(rep.consistency.resolvent_residual));
    CHECK(ok(rep.partition_residual));
    CHECK(ok(rep.axioms.s1_max));
    CHECK(ok(rep.axioms.s2_max));
    CHECK(ok(rep.axioms.s3_polynomial_max));
    CHECK(ok(rep.axioms.s3_resolvent_max));
    CHECK(ok(rep.axioms.g0_symmetry_max));
    CHECK(ok(rep.axioms.monotonicity_max));
    REQUIRE(rep.certificate.has_value());
    CHECK(ok(rep.certificate->r1_residual));
    CHECK(ok(rep.certificate->r2_residual));
    CHECK(ok(rep.certificate->a0_hermiticity));
}
