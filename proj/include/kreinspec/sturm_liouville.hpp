#ifndef KREINSPEC_STURM_LIOUVILLE_HPP
#define KREINSPEC_STURM_LIOUVILLE_HPP

#include <functional>

#include "kreinspec/spectral_function.hpp"

namespace kreinspec {

// −(p u′)′ + q u = λ w u on (a,b) with Dirichlet ends, discretized on n
// interior points. Coefficients are sampled pointwise.
struct SLProblem {
    double a = 0.0;
    double b = 1.0;
    int n = 0;  // interior grid count, ≥ 2
    std::function<double(double)> w;
    std::function<double(double)> p;
    std::function<double(double)> q;
};

// Conservative 3-point scheme: G is the symmetric tridiagonal operator of
// −(pu′)′ + qu, A = diag(1/w(xᵢ)). A is positive definite by w > 0.
OperatorPair discretize(const SLProblem& prob, const Tolerances& tol = {});

struct SlReport {
    double min_g_eig = 0.0;   // smallest |eigenvalue| of G
    double max_w = 0.0;       // max w on the grid
    bool p_lambda_definitizing = false;
    double psd_witness = 0.0;
    double max_imag = 0.0;    // over σ(AG)
    bool spectrum_real = false;
    bool all_nonzero_definite = false;
    int positive_count = 0;
    int negative_count = 0;
    int critical_count = 0;
    std::vector<double> spectrum;  // real positions, ascending
    double lambda1 = 0.0;          // smallest spectral position
    std::vector<double> critical_set;
    AxiomReport axioms;
    double partition_residual = 0.0;
    double oracle_residual = 0.0;
    bool pass = false;
};

// Realizes the real-spectrum statement for the discretized pair: p(λ)=λ is
// definitizing (A ⪰ 0), σ(AG) ⊂ ℝ, every nonzero point of definite type,
// spectral function with s ⊆ {0} passing the axiom suite.
SlReport sl_report(const SLProblem& prob, const Tolerances& tol = {});

}  // namespace kreinspec

#endif
