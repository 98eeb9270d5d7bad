#ifndef KREINSPEC_KREIN_HPP
#define KREINSPEC_KREIN_HPP

#include <string>

#include "kreinspec/dense_linalg.hpp"

namespace kreinspec {

// A pair of Hermitian matrices; the root input of everything downstream.
// Validated on construction, stored exactly as given.
struct OperatorPair {
    ComplexMatrix a;
    ComplexMatrix g;
    std::size_t n = 0;

    static OperatorPair create(ComplexMatrix a, ComplexMatrix g, const Tolerances& tol = {});
    ComplexMatrix ag() const { return a * g; }
    ComplexMatrix ga() const { return g * a; }
};

// λ₀, the symmetrizer G₀ = G(AG−λ₀)⁻¹(AG−λ̄₀)⁻¹ and its build residuals.
// [x,y] := (G₀x, y) is the induced inner product; it may be degenerate.
struct KreinStructure {
    cplx lambda0;
    ComplexMatrix g0;
    struct Residuals {
        double hermiticity = 0.0;  // ‖G₀−G₀*‖_F / ‖G₀‖_F
        double symmetry = 0.0;     // ‖G₀·AG − (AG)*·G₀‖_F / (‖G₀‖_F·‖AG‖_F)
    } build_residuals;
};

enum class SubspaceKind { UniformlyPositive, UniformlyNegative, Krein, Degenerate };

std::string to_string(SubspaceKind k);

struct SubspaceVerdict {
    SubspaceKind kind = SubspaceKind::Degenerate;
    double delta = 0.0;  // min |Gram eigenvalue| when nondegenerate
    double gram_min = 0.0;
    double gram_max = 0.0;
};

// λ₀ = i·(1 + spectral radius of AG): always non-real, distance ≥ 1 from σ(AG).
cplx choose_lambda0(const OperatorPair& pair);
cplx choose_lambda0_from_radius(double spectral_radius);

// Builds G₀ and records the residuals; rejects λ₀ too close to σ(AG) or
// residuals beyond tolerance. Pass the spectrum if already computed.
KreinStructure build_g0(const OperatorPair& pair, cplx lambda0, const Tolerances& tol = {},
                        const std::vector<SpectralPoint>* spectrum = nullptr);

// [x,y] = (G₀x, y), linear in the first argument.
cplx indefinite_inner(const KreinStructure& ks, const ComplexMatrix& x, const ComplexMatrix& y);

// V*·G₀·V for linearly independent columns V; Hermitian by construction.
ComplexMatrix gram_matrix(const KreinStructure& ks, const ComplexMatrix& v);

// Verdict for span(V), V orthonormal. Gram eigenvalues within
// degeneracy_rel·‖G₀‖_F of zero count as zero.
SubspaceVerdict subspace_verdict(const KreinStructure& ks, const ComplexMatrix& v,
                                 const Tolerances& tol = {});

// Orthonormal basis of {x : [x, v] = 0 for all columns v} = null(V*G₀).
ComplexMatrix ortho_companion(const KreinStructure& ks, const ComplexMatrix& v,
                              const Tolerances& tol = {});

}  // namespace kreinspec

#endif
