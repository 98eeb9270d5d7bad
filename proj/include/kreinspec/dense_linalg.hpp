#ifndef KREINSPEC_DENSE_LINALG_HPP
#define KREINSPEC_DENSE_LINALG_HPP

#include <limits>
#include <memory>
#include <vector>

#include "kreinspec/complex_matrix.hpp"
#include "kreinspec/config.hpp"
#include "kreinspec/polynomial.hpp"

namespace kreinspec {

// ---------------------------------------------------------------- LU solves

// LU factorization with partial pivoting. Row swaps recorded in order.
class LuFactors {
public:
    static LuFactors factor(const ComplexMatrix& m);

    // Solves M·X = B (B may have several columns).
    ComplexMatrix solve(const ComplexMatrix& b) const;
    // Solves M*·X = B.
    ComplexMatrix solve_adjoint(const ComplexMatrix& b) const;

    double min_pivot() const { return min_pivot_; }
    // Hager one-norm estimate of ‖M⁻¹‖₁; pass ‖M‖₁ to get the condition number.
    double inverse_norm_one_estimate() const;
    double condition_estimate(double m_norm_one) const {
        return m_norm_one * inverse_norm_one_estimate();
    }
    std::size_t n() const { return lu_.rows(); }

private:
    ComplexMatrix lu_;
    std::vector<int> swaps_;
    double min_pivot_ = 0.0;
};

// Solves M·X = B with the contract checks: square M, condition estimate
// below the cap, relative residual ≤ solve_residual_rel.
ComplexMatrix solve_linear(const ComplexMatrix& m, const ComplexMatrix& b,
                           const Tolerances& tol = {});

// ‖M⁻¹‖₂ via power iteration on M⁻*M⁻¹ (deterministic start vector).
double inverse_norm_two(const ComplexMatrix& m);

// ------------------------------------------------------------- eigensolvers

struct HermitianEig {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // unitary, M·V = V·diag(values)
};

// Householder tridiagonalization + implicit QL with shifts.
// Rejects input with ‖M − M*‖_F > hermiticity_rel·‖M‖_F.
HermitianEig hermitian_eig(const ComplexMatrix& m, const Tolerances& tol = {});

// Smallest eigenvalue of the Hermitian part (M + M*)/2.
double min_hermitian_eig(const ComplexMatrix& m, const Tolerances& tol = {});

struct HessenbergForm {
    ComplexMatrix q;  // unitary
    ComplexMatrix h;  // upper Hessenberg, M = Q H Q*
};
HessenbergForm hessenberg(const ComplexMatrix& m);

struct SchurForm {
    ComplexMatrix u;  // unitary
    ComplexMatrix t;  // upper triangular, M = U T U*
    int iterations = 0;
};
// Hessenberg reduction + explicit single-shift QR with Wilkinson shifts.
SchurForm schur(const ComplexMatrix& m);
SchurForm schur_from_hessenberg(ComplexMatrix q, ComplexMatrix h);

std::vector<cplx> eigenvalues(const ComplexMatrix& m);

// Right eigenvectors of an upper triangular matrix (upper triangular result,
// columns normalized). Near-equal diagonal entries are perturbed at eps scale,
// so the result is only meaningful together with a condition estimate.
ComplexMatrix triangular_eigenvectors(const ComplexMatrix& t);

// Cached decompositions of one operator: Schur (always), Hessenberg stage,
// and the eigenbasis when it exists with a condition estimate below the cap.
struct Eigensystem {
    ComplexMatrix schur_u, schur_t;
    ComplexMatrix hess_q, hess_h;
    std::vector<cplx> values;  // diag(schur_t)
    bool has_eigenbasis = false;
    ComplexMatrix vr;  // M ≈ vr·diag(values)·vr⁻¹
    std::shared_ptr<const LuFactors> vr_lu;
    double eigenbasis_cond = std::numeric_limits<double>::infinity();
};
Eigensystem decompose(const ComplexMatrix& m, const Tolerances& tol = {});

// (Hh − μ)⁻¹ applied through the cached Hessenberg form:
// Qh (Hh − μ)⁻¹ Qh* B via Givens elimination, O(n²) per column.
ComplexMatrix hessenberg_resolve(const Eigensystem& es, cplx mu, const ComplexMatrix& b);

// ------------------------------------------------------------ pivoted QR

struct PivotedQr {
    ComplexMatrix q;        // full n×n unitary
    ComplexMatrix r;        // n×m
    std::vector<int> perm;  // A(:, perm[j]) = (Q·R)(:, j)
    int rank = 0;           // |R_kk| > drop_tol
};
PivotedQr qr_col_pivot(const ComplexMatrix& a, double drop_tol);

// First r columns of the pivoted-QR Q factor of A: orthonormal basis of
// range(A) when rank(A) = r is known (e.g. from a projector trace).
ComplexMatrix orthonormal_range(const ComplexMatrix& a, int rank);

// Orthonormal basis of the null space of A (k×n): Q columns beyond the
// numerical rank of A* at the given drop tolerance. May have zero columns.
ComplexMatrix null_space_basis(const ComplexMatrix& a, double drop_tol);

// --------------------------------------------------------- spectral points

struct SpectralPoint {
    cplx value;                      // cluster barycenter
    int algebraic_multiplicity = 0;  // member count
    double cluster_radius = 0.0;     // max member distance to the barycenter
};

double default_cluster_tol(const std::vector<cplx>& values, double cluster_rel);

// Single-linkage agglomeration at the given tolerance; clusters sorted by
// (Re, Im) of the barycenter. Multiplicities sum to values.size().
std::vector<SpectralPoint> cluster_eigenvalues(const std::vector<cplx>& values, double tol);

std::vector<SpectralPoint> eig_points(const ComplexMatrix& m, double cluster_tol);
// Default cluster_tol = cluster_rel·(1 + spectral radius).
std::vector<SpectralPoint> eig_points(const ComplexMatrix& m);

// max over one set of the distance to the other, symmetrized.
double hausdorff_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

// -------------------------------------------------------- polynomial lifts

// Exact Horner recurrence: p(M). A constant polynomial c gives c·I.
ComplexMatrix horner_matrix(const RealPolynomial& p, const ComplexMatrix& m);

// Roots via the companion matrix (empty for constants).
std::vector<cplx> polynomial_roots(const RealPolynomial& p);

}  // namespace kreinspec

#endif
