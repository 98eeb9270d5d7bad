#ifndef KREINSPEC_CONFIG_HPP
#define KREINSPEC_CONFIG_HPP

#include <cstddef>

namespace kreinspec {

// All tolerances and caps in one place. Defaults are the shipped contract;
// the CLI --tol flag scales the relative ones uniformly.
struct Tolerances {
    double hermiticity_rel = 1e-10;    // input Hermitian checks, relative to ‖M‖_F
    double cluster_rel = 1e-8;         // cluster_tol = cluster_rel·(1 + spectral radius)
    double condition_cap = 1e12;       // solve_linear rejects beyond this
    double solve_residual_rel = 1e-10;
    double g0_hermiticity_rel = 1e-10;
    double g0_symmetry_rel = 1e-9;
    double degeneracy_rel = 1e-8;      // Gram eigenvalue counts as zero below degeneracy_rel·‖G₀‖
    double psd_rel = 1e-10;            // definitizability witness floor
    double quad_target_rel = 1e-11;    // quadrature doubling stop: ‖P_2k − P_k‖ ≤ target·‖P_k‖
    int quad_nodes_base = 64;
    int quad_nodes_cap = 1024;
    double idempotency_rel = 1e-8;
    double pole_rel = 1e-8;            // ‖(T−λ)^ν P‖ ≤ pole_rel·‖T−λ‖^ν·‖P‖
    double axiom_tol = 1e-8;           // (S1)–(S5), oracle agreement, partition residual
    double root_match_tol = 1e-6;      // spectral point vs polynomial root distance
    double growth_ratio_cap = 1.5;     // resolvent growth PASS rule
    double singular_rel = 1e-10;       // min |eig| below this·‖M‖ means singular
    double eigenbasis_cond_cap = 1e5;  // diagonalized resolvent path enabled below this
    std::size_t exact_riesz_max_n = 64;  // full-matrix LU quadrature at or below this size

    Tolerances scaled(double f) const {
        Tolerances t = *this;
        t.hermiticity_rel *= f;
        t.cluster_rel *= f;
        t.g0_hermiticity_rel *= f;
        t.g0_symmetry_rel *= f;
        t.degeneracy_rel *= f;
        t.psd_rel *= f;
        t.axiom_tol *= f;
        return t;
    }
};

}  // namespace kreinspec

#endif
