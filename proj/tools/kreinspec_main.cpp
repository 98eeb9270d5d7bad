// Batch front end: reads matrix pairs or Sturm-Liouville configs, runs the
// certification pipeline, emits machine-readable JSON reports.
//
// Exit codes: 0 all checks pass, 1 input/config error, 2 mathematical FAIL.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kreinspec/analysis.hpp"
#include "kreinspec/errors.hpp"
#include "kreinspec/sampling.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace kreinspec;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitInputError = 1;
constexpr int kExitMathFail = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + out_path);
    out << text;
}

cplx parse_lambda0(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw InputError("--lambda0 expects \"re,im\"");
    try {
        return cplx(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
    } catch (const std::exception&) {
        throw InputError("--lambda0 expects numeric \"re,im\"");
    }
}

BorelSet parse_interval(const std::string& s) {
    // "a..b" closed by default; "(a..b]" marks open/closed ends. The ".."
    // separator keeps the token clear of the shell and of option parsing.
    std::string body = s;
    bool lo_closed = true, hi_closed = true;
    if (!body.empty() && (body.front() == '[' || body.front() == '(')) {
        lo_closed = body.front() == '[';
        body.erase(body.begin());
    }
    if (!body.empty() && (body.back() == ']' || body.back() == ')')) {
        hi_closed = body.back() == ']';
        body.pop_back();
    }
    auto sep = body.find("..");
    std::size_t sep_len = 2;
    if (sep == std::string::npos) {
        sep = body.find(',');
        sep_len = 1;
    }
    if (sep == std::string::npos) throw InputError("interval expects \"a..b\"");
    try {
        const double lo = std::stod(body.substr(0, sep));
        const double hi = std::stod(body.substr(sep + sep_len));
        return BorelSet::interval(lo, hi, lo_closed, hi_closed);
    } catch (const std::exception&) {
        throw InputError("interval expects numeric bounds");
    }
}

struct CommonFlags {
    std::string lambda0_text;
    int degree_cap = 0;
    double tol_scale = 1.0;
    std::uint64_t seed = 1;
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--lambda0", f.lambda0_text, "override lambda0 as re,im");
    cmd->add_option("--degree-cap", f.degree_cap, "polynomial degree cap (default 2n)");
    cmd->add_option("--tol", f.tol_scale, "tolerance scale factor")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", f.seed, "seed for randomized checks");
    cmd->add_option("--out", f.out_path, "write the JSON report here instead of stdout");
}

AnalysisOptions to_options(const CommonFlags& f) {
    AnalysisOptions opt;
    if (!f.lambda0_text.empty()) opt.lambda0 = parse_lambda0(f.lambda0_text);
    opt.degree_cap = f.degree_cap;
    opt.tol_scale = f.tol_scale;
    opt.seed = f.seed;
    return opt;
}

int cmd_analyze(const std::vector<std::string>& files, const CommonFlags& flags) {
    const AnalysisOptions opt = to_options(flags);
    const Tolerances tol = Tolerances{}.scaled(flags.tol_scale);
    std::vector<std::string> reports(files.size());
    std::vector<int> codes(files.size(), kExitPass);
    // pair analyses are independent; loop is parallel, output order fixed
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (files.size() > 1)
#endif
    for (std::size_t i = 0; i < files.size(); ++i) {
        try {
            OperatorPair pair = load_pair_json(read_file(files[i]), tol);
            AnalysisReport rep = run_analysis(pair, opt);
            reports[i] = report_to_json(rep, flags.seed);
            codes[i] = rep.pass ? kExitPass : kExitMathFail;
        } catch (const InputError& e) {
            reports[i] = std::string("{\"error\": \"") + e.what() + "\"}\n";
            codes[i] = kExitInputError;
        } catch (const NonHermitianError& e) {
            reports[i] = std::string("{\"error\": \"") + e.what() + "\"}\n";
            codes[i] = kExitInputError;
        } catch (const DimensionError& e) {
            reports[i] = std::string("{\"error\": \"") + e.what() + "\"}\n";
            codes[i] = kExitInputError;
        } catch (const Error& e) {
            reports[i] = std::string("{\"error\": \"") + e.what() + "\"}\n";
            codes[i] = kExitMathFail;
        }
    }
    std::string combined;
    if (files.size() == 1) {
        combined = reports[0];
    } else {
        combined = "[\n";
        for (std::size_t i = 0; i < reports.size(); ++i) {
            combined += reports[i];
            if (i + 1 < reports.size()) combined += ",\n";
        }
        combined += "]\n";
    }
    write_output(combined, flags.out_path);
    int worst = kExitPass;
    for (int c : codes) worst = std::max(worst, c);
    return worst;
}

int cmd_sl(const std::string& file, const CommonFlags& flags) {
    const Tolerances tol = Tolerances{}.scaled(flags.tol_scale);
    SLProblem prob = load_sl_json(read_file(file));
    SlReport slr = sl_report(prob, tol);
    OperatorPair pair = discretize(prob, tol);
    AnalysisReport rep = run_analysis(pair, to_options(flags));
    write_output(sl_report_to_json(slr, rep, flags.seed), flags.out_path);
    return (slr.pass && rep.pass) ? kExitPass : kExitMathFail;
}

int cmd_project(const std::string& file, const std::vector<std::string>& interval_texts,
                bool emit_matrix, const CommonFlags& flags) {
    const Tolerances tol = Tolerances{}.scaled(flags.tol_scale);
    OperatorPair pair = load_pair_json(read_file(file), tol);
    BorelSet set;
    for (const std::string& t : interval_texts) set = set.unite(parse_interval(t));

    auto ctx = std::make_shared<RieszContext>(pair.ag(), tol);
    const cplx l0 = flags.lambda0_text.empty()
                        ? choose_lambda0_from_radius(ctx->spectral_radius())
                        : parse_lambda0(flags.lambda0_text);
    KreinStructure ks = build_g0(pair, l0, tol, &ctx->spectrum());
    SignClassification cls = classify_spectrum(pair, ks, *ctx);
    SpectralFunction sf = build_spectral_function(pair, ks, ctx, cls);
    ProjectionResult pr = spectral_projection(sf, set);

    json out;
    out["schema"] = 1;
    out["input_digest"] = fnv1a_digest(pair.a, pair.g);
    out["set"] = set.to_string();
    out["rank"] = pr.rank;
    out["trace_gap"] = pr.trace_gap;
    out["idempotency_residual"] = pr.idempotency_residual;
    out["commutation_residual"] = pr.commutation_residual;
    out["g0_symmetry_residual"] = g0_symmetry_residual(sf, pr.p);
    out["critical_set"] = sf.critical_set();
    if (emit_matrix) {
        json re = json::array(), im = json::array();
        for (std::size_t i = 0; i < pr.p.rows(); ++i) {
            json rrow = json::array(), irow = json::array();
            for (std::size_t j = 0; j < pr.p.cols(); ++j) {
                rrow.push_back(pr.p(i, j).real());
                irow.push_back(pr.p(i, j).imag());
            }
            re.push_back(rrow);
            im.push_back(irow);
        }
        out["projection"] = {{"re", re}, {"im", im}};
    }
    const bool ok = pr.idempotency_residual <=
                        tol.idempotency_rel * (1.0 + pr.p.norm_fro() * pr.p.norm_fro()) &&
                    pr.trace_gap <= 1e-6;
    out["pass"] = ok;
    write_output(out.dump(2) + "\n", flags.out_path);
    return ok ? kExitPass : kExitMathFail;
}

json fixture_json(const ComplexMatrix& a, const ComplexMatrix& g) {
    json out;
    out["n"] = a.rows();
    json are = json::array(), gre = json::array();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        json ra = json::array(), rg = json::array();
        for (std::size_t j = 0; j < a.cols(); ++j) {
            ra.push_back(a(i, j).real());
            rg.push_back(g(i, j).real());
        }
        are.push_back(ra);
        gre.push_back(rg);
    }
    out["A"] = {{"re", are}};
    out["G"] = {{"re", gre}};
    return out;
}

int cmd_selftest(std::uint64_t seed, int pairs, const std::string& emit_dir,
                 const CommonFlags& flags) {
    if (!emit_dir.empty()) {
        // hand fixtures as pair files
        struct Fx {
            const char* name;
            ComplexMatrix a, g;
        };
        std::vector<Fx> fixtures;
        fixtures.push_back({"diag_pair", ComplexMatrix{{2, 0}, {0, 3}},
                            ComplexMatrix{{1, 0}, {0, -1}}});
        fixtures.push_back({"nilpotent_pair", ComplexMatrix{{1, 1}, {1, 1}},
                            ComplexMatrix{{1, 0}, {0, -1}}});
        fixtures.push_back({"rotation_pair", ComplexMatrix{{0, 1}, {1, 0}},
                            ComplexMatrix{{1, 0}, {0, -1}}});
        fixtures.push_back({"identity_pair", ComplexMatrix::identity(2),
                            ComplexMatrix::identity(2)});
        for (const Fx& f : fixtures) {
            std::ofstream out(emit_dir + "/" + f.name + ".json");
            if (!out) throw InputError("cannot write fixtures to " + emit_dir);
            out << fixture_json(f.a, f.g).dump(2) << "\n";
        }
        std::cout << "{\"emitted\": " << fixtures.size() << "}\n";
        return kExitPass;
    }

    AnalysisOptions base_opt = to_options(flags);
    int failures = 0;
    std::vector<int> fail_flags(static_cast<std::size_t>(pairs), 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < pairs; ++i) {
        std::mt19937_64 rng = sampling::stream(seed, static_cast<std::uint64_t>(i));
        sampling::RandomPair rp = sampling::random_pair(rng, 8, true);
        AnalysisOptions opt = base_opt;
        opt.with_spectral_function = (i % 4 == 0);  // axiom suite on a quarter of the batch
        try {
            AnalysisReport rep = run_analysis(rp.pair, opt);
            if (!rep.pass) fail_flags[static_cast<std::size_t>(i)] = 1;
        } catch (const Error&) {
            fail_flags[static_cast<std::size_t>(i)] = 1;
        }
    }
    for (int f : fail_flags) failures += f;
    json out;
    out["schema"] = 1;
    out["seed"] = seed;
    out["pairs"] = pairs;
    out["failures"] = failures;
    out["pass"] = failures == 0;
    write_output(out.dump(2) + "\n", flags.out_path);
    return failures == 0 ? kExitPass : kExitMathFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral certification of products of Hermitian matrix pairs"};
    app.require_subcommand(1);

    CommonFlags fa, fs, fp, ft;
    std::vector<std::string> analyze_files;
    CLI::App* analyze = app.add_subcommand("analyze", "analyze pair files");
    analyze->add_option("files", analyze_files, "pair JSON files")->required();
    add_common(analyze, fa);

    std::string sl_file;
    CLI::App* sl = app.add_subcommand("sl", "discretize and analyze a Sturm-Liouville problem");
    sl->add_option("config", sl_file, "SL config JSON")->required();
    add_common(sl, fs);

    std::string project_file;
    std::vector<std::string> intervals;
    bool emit_matrix = false;
    CLI::App* project = app.add_subcommand("project", "evaluate E(Delta) for a pair");
    project->add_option("file", project_file, "pair JSON file")->required();
    project->add_option("--interval", intervals, "interval like 0..4 or (0..4]; repeatable")
        ->required();
    project->add_flag("--emit-matrix", emit_matrix, "include the projection entries");
    add_common(project, fp);

    int selftest_pairs = 40;
    std::string emit_dir;
    CLI::App* selftest = app.add_subcommand("selftest", "randomized property suite");
    selftest->add_option("--pairs", selftest_pairs, "number of random pairs");
    selftest->add_option("--emit-fixtures", emit_dir, "write the hand fixtures to a directory");
    add_common(selftest, ft);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitInputError : kExitPass;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(analyze_files, fa);
        if (sl->parsed()) return cmd_sl(sl_file, fs);
        if (project->parsed()) return cmd_project(project_file, intervals, emit_matrix, fp);
        if (selftest->parsed()) return cmd_selftest(ft.seed, selftest_pairs, emit_dir, ft);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const NonHermitianError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const Error& e) {
        std::cerr << "check failure: " << e.what() << "\n";
        return kExitMathFail;
    }
    return kExitInputError;
}
