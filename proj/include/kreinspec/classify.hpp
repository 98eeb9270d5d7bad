#ifndef KREINSPEC_CLASSIFY_HPP
#define KREINSPEC_CLASSIFY_HPP

#include <string>
#include <vector>

#include "kreinspec/riesz.hpp"

namespace kreinspec {

enum class PointType { PositiveType, NegativeType, Critical, NonReal };

std::string to_string(PointType t);

struct ClassifiedPoint {
    SpectralPoint point;
    PointType verdict = PointType::Critical;
    double gram_min = 0.0;
    double gram_max = 0.0;
    double delta = 0.0;
    // Sign of (Gv,v) over 20 random unit vectors in the eigenspace agrees
    // with a definite verdict; always true for Critical/NonReal.
    bool cross_check_agrees = true;
    double cross_check_min_abs = 0.0;
};

struct SignClassification {
    std::vector<ClassifiedPoint> points;
    std::vector<double> sigma_plus;
    std::vector<double> sigma_minus;
    std::vector<double> critical_candidates;
    bool zero_forced = false;       // G numerically singular
    bool zero_consistent = true;    // forced zero also has a non-definite Gram verdict
};

struct PairConsistencyReport {
    double adjoint_residual = 0.0;    // ‖(AG)* − GA‖_F
    double hausdorff_gap = 0.0;       // σ(AG)∖{0} vs σ(GA)∖{0}
    double resolvent_residual = 0.0;  // max over the sampled λ
    std::vector<cplx> sampled_lambdas;
    double scale = 1.0;
    bool pass = false;
};

// Structural identities of the pair: (AG)* = GA, spectra agree away from 0,
// and A(GA−λ)⁻¹ = (AG−λ)⁻¹A at 5 points sampled on a circle outside σ.
PairConsistencyReport pair_consistency_report(const OperatorPair& pair,
                                              const Tolerances& tol = {});

// One real spectral point: Gram verdict of the Riesz eigenspace basis, with
// the random-eigenvector (Gv,v) sign cross-check.
ClassifiedPoint classify_point(const OperatorPair& pair, const KreinStructure& ks,
                               RieszContext& ctx, int index);
// Convenience wrapper taking the point value.
ClassifiedPoint classify_point(const OperatorPair& pair, const KreinStructure& ks,
                               RieszContext& ctx, double pt);

SignClassification classify_spectrum(const OperatorPair& pair, const KreinStructure& ks,
                                     RieszContext& ctx);

// True iff classifications built from the two λ₀ agree verdict-by-verdict.
bool lambda0_invariance_check(const OperatorPair& pair, cplx lambda0_a, cplx lambda0_b,
                              const Tolerances& tol = {});

struct GrowthCheckReport {
    double c_hat = 0.0;               // max over the grid of |η|·‖(AG−λ)⁻¹‖₂
    std::vector<double> per_eta;      // max over x per η level (η descending)
    bool pass = false;                // successive ratios ≤ growth_ratio_cap
};

// Resolvent growth over a definite-type interval: bounded |η|·‖(AG−λ)⁻¹‖
// as η shrinks. Rejects intervals with mixed or critical content.
GrowthCheckReport resolvent_growth_check(const OperatorPair& pair, const SignClassification& cls,
                                         double a, double b, const std::vector<double>& eta_grid,
                                         const Tolerances& tol = {});

struct NonnegTripleReport {
    double precondition_witness = 0.0;  // min eig of G₀A₀G₀
    double max_imag = 0.0;              // over σ(A₀G₀)
    bool spectrum_real = false;
    bool typing_ok = false;  // positive points PositiveType, negative NegativeType
    std::vector<std::pair<double, PointType>> typed_points;
    bool subspace_emitted = false;
    ComplexMatrix invariant_basis;
    double invariance_residual = 0.0;  // ‖(I−VV*)·A₀G₀·V‖_F
    bool pass = false;
};

// σ(A₀G₀) ⊂ ℝ with half-line sign typing when G₀A₀G₀ ⪰ 0 (G₀ used directly
// as the inner-product matrix); emits a nontrivial invariant subspace when
// the operator is non-scalar with σ ≠ {0}.
NonnegTripleReport nonneg_triple_classification(const ComplexMatrix& a0, const ComplexMatrix& g0,
                                                const Tolerances& tol = {});

}  // namespace kreinspec

#endif
