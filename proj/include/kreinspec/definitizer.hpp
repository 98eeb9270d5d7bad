#ifndef KREINSPEC_DEFINITIZER_HPP
#define KREINSPEC_DEFINITIZER_HPP

#include <optional>

#include "kreinspec/classify.hpp"

namespace kreinspec {

struct DefinitizingWitness {
    bool definitizing = false;
    double psd_witness = 0.0;      // min eig of the Hermitian part of G·p(AG)
    double herm_residual = 0.0;    // ‖G·p(AG) − (G·p(AG))*‖_F
    double scale = 1.0;            // 1 + ‖G‖·‖p(AG)‖
};

// Def-style check: G·p(AG) is Hermitian up to rounding; definitizing iff its
// smallest eigenvalue clears −psd_rel·(1 + ‖G‖·‖p(AG)‖).
DefinitizingWitness is_definitizing(const OperatorPair& pair, const RealPolynomial& p,
                                    const Tolerances& tol = {});

struct PolynomialSearchResult {
    bool found = false;
    RealPolynomial p;
    DefinitizingWitness witness;
    double best_witness = -std::numeric_limits<double>::infinity();
    int candidates_tried = 0;
    int candidates_verified = 0;
};

// Candidate construction: mandatory conjugate-pair factors with pole-order
// exponents, λ^k (k ∈ {0,1,2}) when 0 is a critical candidate, optional
// linear factors at sign-change boundaries (root at 0 when the gap straddles
// it, else the midpoint), global sign ±1. Candidates are tried in
// (degree, subset, k, sign) order; each passes a sign screen at the definite
// points before the full PSD verification.
PolynomialSearchResult find_definitizing_polynomial(const OperatorPair& pair,
                                                    const SignClassification& cls,
                                                    RieszContext& ctx, int degree_cap);
// Convenience wrapper computing λ₀/G₀/classification internally.
PolynomialSearchResult find_definitizing_polynomial(const OperatorPair& pair, int degree_cap,
                                                    const Tolerances& tol = {});

// c(A,G): real spectral points with a Critical verdict. Asserts every
// nonzero member is a root of p and that 0 is present when G is singular.
std::vector<double> critical_points(const OperatorPair& pair, const SignClassification& cls,
                                    RieszContext& ctx, const RealPolynomial& p);

struct DefinitizabilityCertificate {
    RealPolynomial p;
    cplx lambda0;
    int m = 0;  // deg(p) + 1
    double psd_witness = 0.0;     // min eig of G·p(AG)
    double indep_witness = 0.0;   // min eig of G₀·p(AG)
    ComplexMatrix a0;
    double a0_hermiticity = 0.0;  // ‖A₀ − A₀*‖_F
    double r1_residual = 0.0;     // ‖r₁(AG) − A₀G₀‖_F
    double r2_residual = 0.0;     // ‖G·r₂(AG) − G₀A₀G₀‖_F
    double triple_witness = 0.0;  // min eig of G₀A₀G₀
    double scale = 1.0;
    bool valid = false;
};

// Builds A₀ = AGA·p(GA)·(GA−λ₀)^{−m}(GA−λ̄₀)^{−m} and the rational-calculus
// identities r₁(AG) = A₀G₀ and G·r₂(AG) = G₀A₀G₀, with PSD witnesses.
DefinitizabilityCertificate build_certificate(const OperatorPair& pair, const KreinStructure& ks,
                                              const RealPolynomial& p, const Tolerances& tol = {});

struct TheoremMainReport {
    struct NonRealEntry {
        cplx value;
        double root_distance = 0.0;
        int pole_order = 0;
        bool ok = false;
    };
    struct RealEntry {
        double value = 0.0;
        double p_value = 0.0;
        PointType verdict = PointType::Critical;
        bool ok = false;
    };
    std::vector<NonRealEntry> non_real;
    std::vector<RealEntry> real;
    bool pass = false;
};

// (a) non-real spectral points are roots of p with finite pole order;
// (b)/(c) real nonzero points follow the sign of p.
TheoremMainReport theorem_main_report(const OperatorPair& pair, const SignClassification& cls,
                                      RieszContext& ctx, const RealPolynomial& p,
                                      const Tolerances& tol = {});

// λ·p(λ): the definitizing polynomial of the swapped pair (G,A).
RealPolynomial swap_polynomial(const RealPolynomial& p);

struct ZeroInvertibilityReport {
    bool ag_invertible = false;
    bool ag_surjective = false;
    bool ga_invertible = false;
    bool ga_surjective = false;
    bool a_and_g_invertible = false;
    bool equivalent = false;   // all five agree
    double sigma_gap = 0.0;    // Hausdorff(σ(AG), σ(GA)) including 0
    bool sigma_equal = false;
    bool pass = false;
};

// The five equivalent invertibility conditions, each measured its own way,
// plus σ(AG) = σ(GA) as full sets.
ZeroInvertibilityReport zero_invertibility_report(const OperatorPair& pair,
                                                  const Tolerances& tol = {});

}  // namespace kreinspec

#endif
