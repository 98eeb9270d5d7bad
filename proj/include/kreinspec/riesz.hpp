#ifndef KREINSPEC_RIESZ_HPP
#define KREINSPEC_RIESZ_HPP

#include <memory>
#include <optional>
#include <vector>

#include "kreinspec/krein.hpp"

namespace kreinspec {

// One quadrature circle: γ(t) = center + radius·e^{it}, trapezoid nodes.
struct ContourSpec {
    cplx center;
    double radius = 0.0;
    int nodes = 0;  // power of two
};

struct ProjectionResult {
    ComplexMatrix p;
    double idempotency_residual = 0.0;  // ‖P²−P‖_F (probe estimate at large n)
    double commutation_residual = 0.0;  // ‖PT−TP‖_F (probe estimate at large n)
    int rank = 0;                       // round(Re trace P)
    double trace_gap = 0.0;             // |trace P − rank|
    int nodes_used = 0;                 // max over circles
    std::vector<ContourSpec> contours;
    bool residuals_estimated = false;
};

// Resolvent evaluation route inside the quadrature. The nodes, trapezoid
// weights and doubling refinement are identical across routes.
enum class RieszPath {
    Auto,    // Direct at small sizes, Cached above
    Direct,  // fresh LU of (T − μ) per node
    Cached,  // eigenbasis coefficients when available, else triangular Schur
};

// Shared per-operator state: clustered spectrum and cached decompositions.
class RieszContext {
public:
    RieszContext(ComplexMatrix t, const Tolerances& tol = {});
    // Cluster tolerance doubles until clusters are mutually separated by
    // ≥ 4·tol, so every cluster admits an isolating contour.
    const ComplexMatrix& op() const { return t_; }
    const std::vector<SpectralPoint>& spectrum() const { return spectrum_; }
    double cluster_tol() const { return cluster_tol_; }
    double spectral_radius() const { return rho_; }
    const Eigensystem& eigensystem() const { return es_; }
    const ComplexMatrix& eigenbasis_inverse() const;  // materialized lazily
    const Tolerances& tolerances() const { return tol_; }

    // Index of the cluster within cluster_tol of value, or -1.
    int find_point(cplx value) const;
    // Cluster treated as real iff |Im barycenter| ≤ cluster_tol.
    bool is_real(int index) const;
    // Index of the conjugate cluster (for non-real points), or -1.
    int conjugate_partner(int index) const;

private:
    ComplexMatrix t_;
    Tolerances tol_;
    Eigensystem es_;
    std::vector<SpectralPoint> spectrum_;
    double cluster_tol_ = 0.0;
    double rho_ = 0.0;
    mutable std::optional<ComplexMatrix> vr_inv_;
};

// E(T; cluster) by trapezoid quadrature of the resolvent on one circle per
// selected spectral point (barycenter center, radius = half the minimal gap
// to the rest of the spectrum). Nodes double until
// ‖P_2k − P_k‖ ≤ quad_target_rel·‖P_k‖ or the node cap.
ProjectionResult riesz_projection(RieszContext& ctx, const std::vector<int>& selected,
                                  int nodes = 0, RieszPath path = RieszPath::Auto);

// Standalone wrapper: clusters σ(T) itself and matches `cluster` to it.
ProjectionResult riesz_projection(const ComplexMatrix& t,
                                  const std::vector<SpectralPoint>& cluster, int nodes = 0,
                                  const Tolerances& tol = {});

// Orthonormal basis of range E(T; cluster), extracted by applying the same
// quadrature to a slim deterministic random block. rank = Σ multiplicities.
ComplexMatrix riesz_range(RieszContext& ctx, const std::vector<int>& selected, int nodes = 0);

// Diagonal-coefficient form of E(T; selected) in the eigenbasis (requires
// one): P = V·diag(q)·V⁻¹ with q from the same refined quadrature.
std::vector<cplx> riesz_coefficients(RieszContext& ctx, const std::vector<int>& selected,
                                     int nodes = 0, int* nodes_used = nullptr);
ComplexMatrix materialize_from_coefficients(RieszContext& ctx, const std::vector<cplx>& q);

// The quadrature applied to probe columns through a Hessenberg-LU resolvent:
// an independent route for cross-checking assembled projections at scale.
ComplexMatrix riesz_apply_hessenberg(RieszContext& ctx, const std::vector<int>& selected,
                                     const ComplexMatrix& b, int nodes = 0);

// Smallest ν ≥ 1 with ‖(T−λ)^ν P‖ ≤ pole_rel·‖T−λ‖^ν·‖P‖.
int pole_order(RieszContext& ctx, int index, int nodes = 0);
int pole_order(const ComplexMatrix& t, const SpectralPoint& pt, const Tolerances& tol = {});

// Fixed node count, no refinement; exposes raw quadrature convergence.
ComplexMatrix riesz_projection_fixed_nodes(RieszContext& ctx, const std::vector<int>& selected,
                                           int nodes, RieszPath path = RieszPath::Direct);

struct PairSpaceReport {
    double adjoint_symmetry_residual = 0.0;  // ‖G₀E(λ) − E(λ̄)*G₀‖_F / ‖G₀‖_F
    SubspaceVerdict verdict;                 // of range E(T;{λ,λ̄}); expected Krein
    int pole_order_lambda = 0;
    int pole_order_conjugate = 0;
    bool pass = false;
};

// Lemma-style symmetry of conjugate spectral projections, the Krein property
// of the pair space, and equality of the two pole orders.
PairSpaceReport pair_space_krein_check(const KreinStructure& ks, RieszContext& ctx,
                                       int index_nonreal);

}  // namespace kreinspec

#endif
