#ifndef KREINSPEC_ANALYSIS_HPP
#define KREINSPEC_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "kreinspec/sturm_liouville.hpp"

namespace kreinspec {

struct AnalysisOptions {
    std::optional<cplx> lambda0;   // override the default rule
    int degree_cap = 0;            // 0 → 2n
    double tol_scale = 1.0;        // multiplies the relative tolerances
    std::uint64_t seed = 1;        // randomized checks inside the pipeline
    bool with_spectral_function = true;
};

// Everything run_analyze produces; serialized as schema-1 JSON.
struct AnalysisReport {
    std::string input_digest;  // FNV-1a over the matrix bytes
    std::size_t n = 0;
    cplx lambda0;
    KreinStructure::Residuals g0_residuals;
    PairConsistencyReport consistency;
    SignClassification classification;
    bool polynomial_found = false;
    RealPolynomial p;
    double best_witness = 0.0;
    std::optional<DefinitizabilityCertificate> certificate;
    TheoremMainReport theorem;
    ZeroInvertibilityReport zero_report;
    std::vector<double> critical_set;
    AxiomReport axioms;
    double partition_residual = 0.0;
    bool lambda0_invariant = true;
    bool pass = false;
    std::string failure_note;
};

// Full pipeline on a validated pair: G₀ → classification → polynomial
// search → certificate → theorem report → spectral function + axioms.
AnalysisReport run_analysis(const OperatorPair& pair, const AnalysisOptions& opt = {});

// JSON front ends (schema below mirrors the CLI contract).
OperatorPair load_pair_json(const std::string& text, const Tolerances& tol);
SLProblem load_sl_json(const std::string& text);
std::string report_to_json(const AnalysisReport& rep, std::uint64_t seed);
std::string sl_report_to_json(const SlReport& rep, const AnalysisReport& full,
                              std::uint64_t seed);

// Ascending-degree coefficients from a JSON value: array of numbers, or a
// polynomial literal string like "1 + 0.5*x" (terms c, c*x, c*x^k only).
std::vector<double> parse_coefficients_text(const std::string& text);

std::string fnv1a_digest(const ComplexMatrix& a, const ComplexMatrix& g);

}  // namespace kreinspec

#endif
