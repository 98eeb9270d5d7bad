#include "kreinspec/analysis.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "kreinspec/errors.hpp"

namespace kreinspec {

using nlohmann::json;

std::string fnv1a_digest(const ComplexMatrix& a, const ComplexMatrix& g) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](const ComplexMatrix& m) {
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) {
                const cplx v = m(i, j);
                unsigned char buf[16];
                double re = v.real(), im = v.imag();
                std::memcpy(buf, &re, 8);
                std::memcpy(buf + 8, &im, 8);
                for (unsigned char b : buf) {
                    h ^= b;
                    h *= 1099511628211ull;
                }
            }
    };
    mix(a);
    mix(g);
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

AnalysisReport run_analysis(const OperatorPair& pair, const AnalysisOptions& opt) {
    Tolerances tol = Tolerances{}.scaled(opt.tol_scale);
    AnalysisReport rep;
    rep.input_digest = fnv1a_digest(pair.a, pair.g);
    rep.n = pair.n;

    auto ctx = std::make_shared<RieszContext>(pair.ag(), tol);
    rep.lambda0 = opt.lambda0 ? *opt.lambda0
                              : choose_lambda0_from_radius(ctx->spectral_radius());
    KreinStructure ks = build_g0(pair, rep.lambda0, tol, &ctx->spectrum());
    rep.g0_residuals = ks.build_residuals;

    rep.consistency = pair_consistency_report(pair, tol);
    rep.classification = classify_spectrum(pair, ks, *ctx);
    rep.zero_report = zero_invertibility_report(pair, tol);

    const int cap = opt.degree_cap > 0 ? opt.degree_cap : 2 * static_cast<int>(pair.n);
    PolynomialSearchResult search =
        find_definitizing_polynomial(pair, rep.classification, *ctx, cap);
    rep.polynomial_found = search.found;
    rep.best_witness = search.best_witness;
    rep.pass = rep.consistency.pass && rep.zero_report.pass;

    if (search.found) {
        rep.p = search.p;
        rep.critical_set = critical_points(pair, rep.classification, *ctx, search.p);
        rep.certificate = build_certificate(pair, ks, search.p, tol);
        rep.theorem = theorem_main_report(pair, rep.classification, *ctx, search.p, tol);
        rep.pass = rep.pass && rep.certificate->valid && rep.theorem.pass;

        // λ₀-independence spot check with a second admissible point
        const cplx l0b = cplx(1.0, 1.0 + ctx->spectral_radius());
        rep.lambda0_invariant = lambda0_invariance_check(pair, rep.lambda0, l0b, tol);
        rep.pass = rep.pass && rep.lambda0_invariant;

        if (opt.with_spectral_function) {
            SpectralFunction sf =
                build_spectral_function(pair, ks, ctx, rep.classification);
            const int max_points =
                pair.n > tol.exact_riesz_max_n ? static_cast<int>(pair.n / 4) : 0;
            rep.axioms = verify_axioms(sf, default_delta_algebra(sf, 12, max_points));
            rep.partition_residual = partition_check(sf, default_cover(sf));
            rep.pass = rep.pass && rep.axioms.pass && rep.partition_residual <= tol.axiom_tol;
        }
    } else {
        rep.pass = false;
        rep.failure_note = "no definitizing polynomial up to degree cap " + std::to_string(cap) +
                           " (best witness " + std::to_string(search.best_witness) + ")";
    }
    return rep;
}

namespace {

ComplexMatrix matrix_from_json(const json& j, const std::string& name, std::size_t n) {
    if (!j.contains(name)) throw InputError("pair file: missing matrix \"" + name + "\"");
    const json& m = j.at(name);
    if (!m.contains("re")) throw InputError("pair file: matrix \"" + name + "\" needs \"re\"");
    const json& re = m.at("re");
    const bool has_im = m.contains("im");
    if (!re.is_array() || re.size() != n)
        throw InputError("pair file: \"" + name + "\".re must be an " + std::to_string(n) + "x" +
                         std::to_string(n) + " array");
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const json& row = re.at(i);
        if (!row.is_array() || row.size() != n)
            throw InputError("pair file: \"" + name + "\".re row " + std::to_string(i) +
                             " has wrong length");
        for (std::size_t k = 0; k < n; ++k) {
            if (!row.at(k).is_number())
                throw InputError("pair file: non-numeric entry in \"" + name + "\"");
            out(i, k) = cplx(row.at(k).get<double>(), 0.0);
        }
    }
    if (has_im) {
        const json& im = m.at("im");
        if (!im.is_array() || im.size() != n)
            throw InputError("pair file: \"" + name + "\".im has wrong shape");
        for (std::size_t i = 0; i < n; ++i) {
            const json& row = im.at(i);
            if (!row.is_array() || row.size() != n)
                throw InputError("pair file: \"" + name + "\".im row " + std::to_string(i) +
                                 " has wrong length");
            for (std::size_t k = 0; k < n; ++k)
                out(i, k) += cplx(0.0, row.at(k).get<double>());
        }
    }
    return out;
}

}  // namespace

OperatorPair load_pair_json(const std::string& text, const Tolerances& tol) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("pair file: JSON parse failure: ") + e.what());
    }
    if (!j.contains("n") || !j.at("n").is_number_integer())
        throw InputError("pair file: missing integer field \"n\"");
    const long long n_ll = j.at("n").get<long long>();
    if (n_ll < 1 || n_ll > 4096) throw InputError("pair file: n out of range");
    const std::size_t n = static_cast<std::size_t>(n_ll);
    ComplexMatrix a = matrix_from_json(j, "A", n);
    ComplexMatrix g = matrix_from_json(j, "G", n);
    return OperatorPair::create(std::move(a), std::move(g), tol);
}

std::vector<double> parse_coefficients_text(const std::string& text) {
    // polynomial literal: signed terms  c | c*x | c*x^k | x | x^k
    std::vector<double> coeffs{0.0};
    std::size_t i = 0;
    const auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    if (i == text.size()) throw InputError("empty coefficient expression");
    bool first = true;
    while (true) {
        skip_ws();
        if (i == text.size()) break;
        double sign = 1.0;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1.0 : 1.0;
            ++i;
        } else if (!first) {
            throw InputError("coefficient expression: expected '+' or '-' near \"" +
                             text.substr(i) + "\"");
        }
        first = false;
        skip_ws();
        double coeff = 1.0;
        bool have_coeff = false;
        if (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) {
            std::size_t used = 0;
            coeff = std::stod(text.substr(i), &used);
            i += used;
            have_coeff = true;
        }
        skip_ws();
        int power = 0;
        if (i < text.size() && (text[i] == '*' || text[i] == 'x')) {
            if (text[i] == '*') {
                ++i;
                skip_ws();
            }
            if (i >= text.size() || text[i] != 'x')
                throw InputError("coefficient expression: expected x after '*'");
            ++i;
            power = 1;
            if (i < text.size() && text[i] == '^') {
                ++i;
                std::size_t used = 0;
                power = std::stoi(text.substr(i), &used);
                if (power < 0 || power > 64)
                    throw InputError("coefficient expression: power out of range");
                i += used;
            }
        } else if (!have_coeff) {
            throw InputError("coefficient expression: dangling sign");
        }
        if (static_cast<std::size_t>(power) >= coeffs.size()) coeffs.resize(power + 1, 0.0);
        coeffs[static_cast<std::size_t>(power)] += sign * coeff;
    }
    return coeffs;
}

SLProblem load_sl_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("sl config: JSON parse failure: ") + e.what());
    }
    SLProblem prob;
    if (!j.contains("interval") || !j.at("interval").is_array() || j.at("interval").size() != 2)
        throw InputError("sl config: \"interval\" must be [a, b]");
    prob.a = j.at("interval").at(0).get<double>();
    prob.b = j.at("interval").at(1).get<double>();
    if (!(prob.a < prob.b)) throw InputError("sl config: interval must satisfy a < b");
    if (!j.contains("n") || !j.at("n").is_number_integer())
        throw InputError("sl config: missing integer \"n\"");
    prob.n = j.at("n").get<int>();
    if (prob.n < 2) throw InputError("sl config: n must be at least 2");

    auto coeff_fn = [&](const char* name) -> std::function<double(double)> {
        if (!j.contains(name))
            throw InputError(std::string("sl config: missing coefficient \"") + name + "\"");
        const json& c = j.at(name);
        std::vector<double> coeffs;
        if (c.is_array()) {
            for (const json& v : c) {
                if (!v.is_number())
                    throw InputError(std::string("sl config: non-numeric coefficient in \"") +
                                     name + "\"");
                coeffs.push_back(v.get<double>());
            }
            if (coeffs.empty())
                throw InputError(std::string("sl config: empty coefficient list for \"") + name +
                                 "\"");
        } else if (c.is_string()) {
            coeffs = parse_coefficients_text(c.get<std::string>());
        } else if (c.is_number()) {
            coeffs = {c.get<double>()};
        } else {
            throw InputError(std::string("sl config: coefficient \"") + name +
                             "\" must be a list, number or polynomial string");
        }
        RealPolynomial p(coeffs);
        return [p](double x) { return p.eval(x); };
    };
    prob.w = coeff_fn("w");
    prob.p = coeff_fn("p");
    prob.q = coeff_fn("q");
    return prob;
}

namespace {

json classification_json(const SignClassification& cls) {
    json pts = json::array();
    for (const ClassifiedPoint& cp : cls.points) {
        json e;
        e["re"] = cp.point.value.real();
        e["im"] = cp.point.value.imag();
        e["multiplicity"] = cp.point.algebraic_multiplicity;
        e["verdict"] = to_string(cp.verdict);
        if (cp.verdict != PointType::NonReal) {
            e["gram_min"] = cp.gram_min;
            e["gram_max"] = cp.gram_max;
            e["cross_check"] = cp.cross_check_agrees;
        }
        pts.push_back(e);
    }
    json out;
    out["points"] = pts;
    out["sigma_plus"] = cls.sigma_plus;
    out["sigma_minus"] = cls.sigma_minus;
    out["critical_candidates"] = cls.critical_candidates;
    out["zero_forced"] = cls.zero_forced;
    return out;
}

json axioms_json(const AxiomReport& a) {
    json out;
    out["s1_residual"] = a.s1_max;
    out["s2_residual"] = a.s2_max;
    out["s3_polynomial_residual"] = a.s3_polynomial_max;
    out["s3_resolvent_residual"] = a.s3_resolvent_max;
    out["s4_inclusion"] = a.s4_ok;
    out["s5_inclusion"] = a.s5_ok;
    out["g0_symmetry_residual"] = a.g0_symmetry_max;
    out["monotonicity_residual"] = a.monotonicity_max;
    out["sets"] = a.sets;
    out["estimated"] = a.s3_estimated;
    out["pass"] = a.pass;
    return out;
}

}  // namespace

std::string report_to_json(const AnalysisReport& rep, std::uint64_t seed) {
    json out;
    out["schema"] = 1;
    out["seed"] = seed;
    out["input_digest"] = rep.input_digest;
    out["n"] = rep.n;
    out["lambda0"] = {{"re", rep.lambda0.real()}, {"im", rep.lambda0.imag()}};
    out["g0_residuals"] = {{"hermiticity", rep.g0_residuals.hermiticity},
                           {"symmetry", rep.g0_residuals.symmetry}};
    out["consistency"] = {{"adjoint_residual", rep.consistency.adjoint_residual},
                          {"hausdorff_gap", rep.consistency.hausdorff_gap},
                          {"resolvent_residual", rep.consistency.resolvent_residual},
                          {"pass", rep.consistency.pass}};
    out["classification"] = classification_json(rep.classification);
    out["polynomial_found"] = rep.polynomial_found;
    if (rep.polynomial_found) {
        out["polynomial"] = {{"coefficients", rep.p.coeffs()}, {"display", rep.p.to_string()}};
        out["critical_set"] = rep.critical_set;
        if (rep.certificate) {
            const DefinitizabilityCertificate& c = *rep.certificate;
            out["certificate"] = {{"m", c.m},
                                  {"psd_witness", c.psd_witness},
                                  {"indep_witness", c.indep_witness},
                                  {"r1_residual", c.r1_residual},
                                  {"r2_residual", c.r2_residual},
                                  {"triple_witness", c.triple_witness},
                                  {"a0_hermiticity", c.a0_hermiticity},
                                  {"valid", c.valid}};
        }
        json th;
        th["pass"] = rep.theorem.pass;
        th["non_real_checked"] = rep.theorem.non_real.size();
        th["real_checked"] = rep.theorem.real.size();
        out["theorem_main"] = th;
        out["axioms"] = axioms_json(rep.axioms);
        out["partition_residual"] = rep.partition_residual;
        out["lambda0_invariant"] = rep.lambda0_invariant;
    } else {
        out["best_witness"] = rep.best_witness;
    }
    out["zero_invertibility"] = {{"equivalent", rep.zero_report.equivalent},
                                 {"sigma_equal", rep.zero_report.sigma_equal},
                                 {"pass", rep.zero_report.pass}};
    if (!rep.failure_note.empty()) out["failure_note"] = rep.failure_note;
    out["pass"] = rep.pass;
    return out.dump(2) + "\n";
}

std::string sl_report_to_json(const SlReport& rep, const AnalysisReport& full,
                              std::uint64_t seed) {
    json out = json::parse(report_to_json(full, seed));
    json sl;
    sl["min_g_eig"] = rep.min_g_eig;
    sl["max_w"] = rep.max_w;
    sl["p_lambda_definitizing"] = rep.p_lambda_definitizing;
    sl["psd_witness"] = rep.psd_witness;
    sl["max_imag"] = rep.max_imag;
    sl["spectrum_real"] = rep.spectrum_real;
    sl["all_nonzero_definite"] = rep.all_nonzero_definite;
    sl["positive_count"] = rep.positive_count;
    sl["negative_count"] = rep.negative_count;
    sl["critical_count"] = rep.critical_count;
    sl["lambda1"] = rep.lambda1;
    sl["spectrum"] = rep.spectrum;
    sl["critical_set"] = rep.critical_set;
    sl["axioms"] = axioms_json(rep.axioms);
    sl["partition_residual"] = rep.partition_residual;
    sl["oracle_residual"] = rep.oracle_residual;
    sl["pass"] = rep.pass;
    out["sturm_liouville"] = sl;
    out["pass"] = out["pass"].get<bool>() && rep.pass;
    return out.dump(2) + "\n";
}

}  // namespace kreinspec
