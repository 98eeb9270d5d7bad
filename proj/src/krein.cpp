#include "kreinspec/krein.hpp"

#include <cmath>

#include "kreinspec/errors.hpp"
#include "kreinspec/kernels.hpp"

namespace kreinspec {

std::string to_string(SubspaceKind k) {
    switch (k) {
        case SubspaceKind::UniformlyPositive: return "uniformly_positive";
        case SubspaceKind::UniformlyNegative: return "uniformly_negative";
        case SubspaceKind::Krein: return "krein";
        case SubspaceKind::Degenerate: return "degenerate";
    }
    return "?";
}

OperatorPair OperatorPair::create(ComplexMatrix a, ComplexMatrix g, const Tolerances& tol) {
    if (!a.square() || !g.square() || a.rows() != g.rows())
        throw DimensionError("operator pair needs two square matrices of equal size");
    if (!a.is_finite() || !g.is_finite())
        throw InputError("operator pair has non-finite entries");
    const double da = a.hermiticity_defect();
    const double ba = tol.hermiticity_rel * std::max(a.norm_fro(), 1e-300);
    if (da > ba) throw NonHermitianError("A: ||A - A*||_F", da, ba);
    const double dg = g.hermiticity_defect();
    const double bg = tol.hermiticity_rel * std::max(g.norm_fro(), 1e-300);
    if (dg > bg) throw NonHermitianError("G: ||G - G*||_F", dg, bg);
    OperatorPair p;
    p.n = a.rows();
    p.a = std::move(a);
    p.g = std::move(g);
    return p;
}

cplx choose_lambda0_from_radius(double spectral_radius) {
    return cplx(0.0, 1.0 + spectral_radius);
}

cplx choose_lambda0(const OperatorPair& pair) {
    double rho = 0.0;
    for (const cplx& v : eigenvalues(pair.ag())) rho = std::max(rho, std::abs(v));
    return choose_lambda0_from_radius(rho);
}

KreinStructure build_g0(const OperatorPair& pair, cplx lambda0, const Tolerances& tol,
                        const std::vector<SpectralPoint>* spectrum) {
    if (lambda0.imag() == 0.0)
        throw PreconditionError("build_g0: lambda0 must be non-real");
    const ComplexMatrix ag = pair.ag();
    std::vector<SpectralPoint> local;
    if (!spectrum) {
        local = eig_points(ag);
        spectrum = &local;
    }
    double rho = 0.0;
    double dist = std::numeric_limits<double>::infinity();
    for (const SpectralPoint& pt : *spectrum) {
        rho = std::max(rho, std::abs(pt.value) + pt.cluster_radius);
        dist = std::min(dist, std::min(std::abs(pt.value - lambda0),
                                       std::abs(pt.value - std::conj(lambda0))) -
                                  pt.cluster_radius);
    }
    const double ctol = tol.cluster_rel * (1.0 + rho);
    if (dist <= ctol)
        throw PreconditionError("build_g0: lambda0 within cluster tolerance of the spectrum");

    const std::size_t n = pair.n;
    ComplexMatrix shifted_conj = ag;
    for (std::size_t i = 0; i < n; ++i) shifted_conj(i, i) -= std::conj(lambda0);
    ComplexMatrix x1 = LuFactors::factor(shifted_conj).solve(ComplexMatrix::identity(n));
    ComplexMatrix shifted = ag;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= lambda0;
    ComplexMatrix x2 = LuFactors::factor(shifted).solve(x1);
    ComplexMatrix g0 = pair.g * x2;

    KreinStructure ks;
    ks.lambda0 = lambda0;
    const double g0norm = std::max(g0.norm_fro(), 1e-300);
    ks.build_residuals.hermiticity = g0.hermiticity_defect() / g0norm;
    ComplexMatrix sym = g0 * ag - ag.adjoint() * g0;
    ks.build_residuals.symmetry = sym.norm_fro() / (g0norm * std::max(ag.norm_fro(), 1e-300));
    if (ks.build_residuals.hermiticity > tol.g0_hermiticity_rel)
        throw Error("build_g0: hermiticity residual " +
                    std::to_string(ks.build_residuals.hermiticity) + " beyond tolerance");
    if (ks.build_residuals.symmetry > tol.g0_symmetry_rel)
        throw Error("build_g0: symmetry residual " + std::to_string(ks.build_residuals.symmetry) +
                    " beyond tolerance");
    ks.g0 = hermitian_part(g0);
    return ks;
}

cplx indefinite_inner(const KreinStructure& ks, const ComplexMatrix& x, const ComplexMatrix& y) {
    return inner(kernels::matvec(ks.g0, x), y);
}

ComplexMatrix gram_matrix(const KreinStructure& ks, const ComplexMatrix& v) {
    if (v.rows() != ks.g0.rows()) throw DimensionError("gram_matrix dimension mismatch");
    if (v.cols() == 0) throw PreconditionError("gram_matrix: empty basis");
    PivotedQr qr = qr_col_pivot(v, 1e-12 * std::max(1.0, v.norm_fro()));
    if (qr.rank < static_cast<int>(v.cols()))
        throw PreconditionError("gram_matrix: rank-deficient basis (rank " +
                                std::to_string(qr.rank) + " of " + std::to_string(v.cols()) + ")");
    return hermitian_part(v.adjoint() * (ks.g0 * v));
}

SubspaceVerdict subspace_verdict(const KreinStructure& ks, const ComplexMatrix& v,
                                 const Tolerances& tol) {
    if (v.cols() == 0) throw PreconditionError("subspace_verdict: empty basis");
    const std::size_t k = v.cols();
    ComplexMatrix vv = v.adjoint() * v;
    for (std::size_t i = 0; i < k; ++i) vv(i, i) -= 1.0;
    if (vv.norm_fro() > 1e-8 * std::sqrt(static_cast<double>(k)))
        throw PreconditionError("subspace_verdict: basis not orthonormal");

    ComplexMatrix gram = hermitian_part(v.adjoint() * (ks.g0 * v));
    HermitianEig eig = hermitian_eig(gram, tol);
    SubspaceVerdict out;
    out.gram_min = eig.values.front();
    out.gram_max = eig.values.back();
    const double zero_level = tol.degeneracy_rel * std::max(ks.g0.norm_fro(), 1e-300);
    double min_abs = std::numeric_limits<double>::infinity();
    bool has_pos = false, has_neg = false, has_zero = false;
    for (double ev : eig.values) {
        if (std::abs(ev) < zero_level) has_zero = true;
        else if (ev > 0) has_pos = true;
        else has_neg = true;
        min_abs = std::min(min_abs, std::abs(ev));
    }
    if (has_zero) {
        out.kind = SubspaceKind::Degenerate;
        out.delta = 0.0;
    } else if (has_pos && has_neg) {
        out.kind = SubspaceKind::Krein;
        out.delta = min_abs;
    } else if (has_pos) {
        out.kind = SubspaceKind::UniformlyPositive;
        out.delta = min_abs;
    } else {
        out.kind = SubspaceKind::UniformlyNegative;
        out.delta = min_abs;
    }
    return out;
}

ComplexMatrix ortho_companion(const KreinStructure& ks, const ComplexMatrix& v,
                              const Tolerances& tol) {
    if (v.rows() != ks.g0.rows()) throw DimensionError("ortho_companion dimension mismatch");
    // column-normalize so the drop threshold scales with ‖G₀‖ alone
    ComplexMatrix vn = v;
    for (std::size_t j = 0; j < vn.cols(); ++j) {
        double nj = 0.0;
        for (std::size_t i = 0; i < vn.rows(); ++i) nj += std::norm(vn(i, j));
        nj = std::sqrt(nj);
        if (nj > 0)
            for (std::size_t i = 0; i < vn.rows(); ++i) vn(i, j) /= nj;
    }
    ComplexMatrix m = vn.adjoint() * ks.g0;  // k×n; null(m) is the companion
    const double drop = tol.degeneracy_rel * std::max(ks.g0.norm_fro(), 1e-300);
    return null_space_basis(m, drop);
}

}  // namespace kreinspec
