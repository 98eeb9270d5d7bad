#include "kreinspec/classify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "kreinspec/errors.hpp"
#include "kreinspec/kernels.hpp"

namespace kreinspec {

std::string to_string(PointType t) {
    switch (t) {
        case PointType::PositiveType: return "positive_type";
        case PointType::NegativeType: return "negative_type";
        case PointType::Critical: return "critical";
        case PointType::NonReal: return "non_real";
    }
    return "?";
}

PairConsistencyReport pair_consistency_report(const OperatorPair& pair, const Tolerances& tol) {
    PairConsistencyReport rep;
    const ComplexMatrix ag = pair.ag();
    const ComplexMatrix ga = pair.ga();
    rep.adjoint_residual = (ag.adjoint() - ga).norm_fro();

    std::vector<cplx> sag = eigenvalues(ag);
    std::vector<cplx> sga = eigenvalues(ga);
    double rho = 0.0;
    for (const cplx& v : sag) rho = std::max(rho, std::abs(v));
    const double ctol = tol.cluster_rel * (1.0 + rho);
    std::vector<cplx> sag_nz, sga_nz;
    for (const cplx& v : sag)
        if (std::abs(v) > ctol) sag_nz.push_back(v);
    for (const cplx& v : sga)
        if (std::abs(v) > ctol) sga_nz.push_back(v);
    rep.hausdorff_gap = hausdorff_distance(sag_nz, sga_nz);

    // λ on the circle of radius 1+ρ: distance ≥ 1 from both spectra.
    const double r = 1.0 + rho;
    const std::size_t n = pair.n;
    const double angles[5] = {0.37, 1.03, 1.91, 2.77, 4.11};
    double worst = 0.0;
    for (double th : angles) {
        const cplx lam = std::polar(r, th);
        rep.sampled_lambdas.push_back(lam);
        ComplexMatrix ga_sh = ga, ag_sh = ag;
        for (std::size_t i = 0; i < n; ++i) {
            ga_sh(i, i) -= lam;
            ag_sh(i, i) -= lam;
        }
        ComplexMatrix rga = LuFactors::factor(ga_sh).solve(ComplexMatrix::identity(n));
        ComplexMatrix rag = LuFactors::factor(ag_sh).solve(ComplexMatrix::identity(n));
        worst = std::max(worst, (pair.a * rga - rag * pair.a).norm_fro());
    }
    rep.resolvent_residual = worst;

    const double na = pair.a.norm_fro(), ng = pair.g.norm_fro();
    rep.scale = std::max(1.0, na * ng);
    rep.pass = rep.adjoint_residual <= 1e-10 * rep.scale &&
               rep.hausdorff_gap <= 1e-8 * std::max(1.0, rho) &&
               rep.resolvent_residual <= 1e-8 * std::max(1.0, na);
    return rep;
}

ClassifiedPoint classify_point(const OperatorPair& pair, const KreinStructure& ks,
                               RieszContext& ctx, int index) {
    const SpectralPoint& pt = ctx.spectrum()[static_cast<std::size_t>(index)];
    if (!ctx.is_real(index))
        throw PreconditionError("classify_point: spectral point is not real");
    ClassifiedPoint out;
    out.point = pt;

    ComplexMatrix v = riesz_range(ctx, {index});
    SubspaceVerdict sv = subspace_verdict(ks, v, ctx.tolerances());
    out.gram_min = sv.gram_min;
    out.gram_max = sv.gram_max;
    out.delta = sv.delta;
    switch (sv.kind) {
        case SubspaceKind::UniformlyPositive: out.verdict = PointType::PositiveType; break;
        case SubspaceKind::UniformlyNegative: out.verdict = PointType::NegativeType; break;
        default: out.verdict = PointType::Critical; break;
    }

    // cross-check: sign of (Gv,v) on random unit vectors in the eigenspace
    if (out.verdict == PointType::PositiveType || out.verdict == PointType::NegativeType) {
        std::mt19937_64 rng(0xabcdef01ull ^ static_cast<std::uint64_t>(index) ^
                            (static_cast<std::uint64_t>(pair.n) << 20));
        std::normal_distribution<double> g;
        const std::size_t k = v.cols();
        double min_abs = std::numeric_limits<double>::infinity();
        bool agrees = true;
        for (int trial = 0; trial < 20; ++trial) {
            ComplexMatrix c(k, 1);
            for (std::size_t i = 0; i < k; ++i) c(i, 0) = cplx(g(rng), g(rng));
            ComplexMatrix x = v * c;
            const double nx = vec_norm(x);
            for (std::size_t i = 0; i < x.rows(); ++i) x(i, 0) /= nx;
            const double s = inner(kernels::matvec(pair.g, x), x).real();
            min_abs = std::min(min_abs, std::abs(s));
            if ((out.verdict == PointType::PositiveType) != (s > 0)) agrees = false;
        }
        out.cross_check_agrees = agrees;
        out.cross_check_min_abs = min_abs;
    }
    return out;
}

ClassifiedPoint classify_point(const OperatorPair& pair, const KreinStructure& ks,
                               RieszContext& ctx, double pt) {
    const int idx = ctx.find_point(cplx(pt, 0.0));
    if (idx < 0)
        throw PreconditionError("classify_point: " + std::to_string(pt) +
                                " is not within cluster tolerance of any spectral point");
    return classify_point(pair, ks, ctx, idx);
}

SignClassification classify_spectrum(const OperatorPair& pair, const KreinStructure& ks,
                                     RieszContext& ctx) {
    SignClassification out;
    const Tolerances& tol = ctx.tolerances();
    // 0 forced critical when G is singular
    HermitianEig ge = hermitian_eig(pair.g, tol);
    double gmin = std::numeric_limits<double>::infinity();
    for (double ev : ge.values) gmin = std::min(gmin, std::abs(ev));
    out.zero_forced = gmin < tol.singular_rel * std::max(pair.g.norm_fro(), 1e-300);

    for (int i = 0; i < static_cast<int>(ctx.spectrum().size()); ++i) {
        if (!ctx.is_real(i)) {
            ClassifiedPoint cp;
            cp.point = ctx.spectrum()[static_cast<std::size_t>(i)];
            cp.verdict = PointType::NonReal;
            out.points.push_back(cp);
            continue;
        }
        ClassifiedPoint cp = classify_point(pair, ks, ctx, i);
        const double x = cp.point.value.real();
        switch (cp.verdict) {
            case PointType::PositiveType: out.sigma_plus.push_back(x); break;
            case PointType::NegativeType: out.sigma_minus.push_back(x); break;
            case PointType::Critical: out.critical_candidates.push_back(x); break;
            default: break;
        }
        out.points.push_back(std::move(cp));
    }

    if (out.zero_forced) {
        bool zero_listed = false;
        for (double c : out.critical_candidates)
            if (std::abs(c) <= ctx.cluster_tol()) zero_listed = true;
        if (!zero_listed) {
            // G singular forces 0 ∈ σ(AG) with a degenerate Gram; a definite
            // verdict at 0 would contradict that, so record the inconsistency.
            out.zero_consistent = false;
            out.critical_candidates.push_back(0.0);
        }
    }
    std::sort(out.critical_candidates.begin(), out.critical_candidates.end());
    return out;
}

namespace {

bool same_verdicts(const SignClassification& a, const SignClassification& b, double tol) {
    if (a.points.size() != b.points.size()) return false;
    for (const ClassifiedPoint& pa : a.points) {
        bool matched = false;
        for (const ClassifiedPoint& pb : b.points) {
            if (std::abs(pa.point.value - pb.point.value) <= tol) {
                if (pa.verdict != pb.verdict) return false;
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

}  // namespace

bool lambda0_invariance_check(const OperatorPair& pair, cplx lambda0_a, cplx lambda0_b,
                              const Tolerances& tol) {
    RieszContext ctx(pair.ag(), tol);
    KreinStructure ka = build_g0(pair, lambda0_a, tol, &ctx.spectrum());
    KreinStructure kb = build_g0(pair, lambda0_b, tol, &ctx.spectrum());
    SignClassification ca = classify_spectrum(pair, ka, ctx);
    SignClassification cb = classify_spectrum(pair, kb, ctx);
    return same_verdicts(ca, cb, ctx.cluster_tol());
}

GrowthCheckReport resolvent_growth_check(const OperatorPair& pair, const SignClassification& cls,
                                         double a, double b, const std::vector<double>& eta_grid,
                                         const Tolerances& tol) {
    if (!(a < b)) throw PreconditionError("resolvent_growth_check: empty interval");
    if (eta_grid.empty()) throw PreconditionError("resolvent_growth_check: empty eta grid");
    // interval must carry exactly one definite type
    bool has_pos = false, has_neg = false;
    std::vector<double> inside;
    for (const ClassifiedPoint& cp : cls.points) {
        const double x = cp.point.value.real();
        if (cp.verdict == PointType::NonReal) continue;
        if (x < a || x > b) continue;
        inside.push_back(x);
        if (cp.verdict == PointType::Critical)
            throw PreconditionError("resolvent_growth_check: critical point inside the interval");
        if (cp.verdict == PointType::PositiveType) has_pos = true;
        if (cp.verdict == PointType::NegativeType) has_neg = true;
    }
    if (has_pos && has_neg)
        throw PreconditionError("resolvent_growth_check: interval mixes definite types");

    std::vector<double> xs = inside;
    for (int i = 0; i <= 20; ++i) xs.push_back(a + (b - a) * i / 20.0);
    std::vector<double> etas = eta_grid;
    std::sort(etas.begin(), etas.end(), std::greater<double>());

    GrowthCheckReport rep;
    const ComplexMatrix ag = pair.ag();
    const std::size_t n = pair.n;
    for (double eta : etas) {
        double level = 0.0;
        for (double x : xs) {
            ComplexMatrix sh = ag;
            for (std::size_t i = 0; i < n; ++i) sh(i, i) -= cplx(x, eta);
            level = std::max(level, std::abs(eta) * inverse_norm_two(sh));
        }
        rep.per_eta.push_back(level);
        rep.c_hat = std::max(rep.c_hat, level);
    }
    rep.pass = true;
    for (std::size_t i = 0; i + 1 < rep.per_eta.size(); ++i)
        if (rep.per_eta[i + 1] > tol.growth_ratio_cap * std::max(rep.per_eta[i], 1e-300))
            rep.pass = false;
    return rep;
}

NonnegTripleReport nonneg_triple_classification(const ComplexMatrix& a0, const ComplexMatrix& g0,
                                                const Tolerances& tol) {
    if (!a0.square() || !g0.square() || a0.rows() != g0.rows())
        throw DimensionError("nonneg_triple_classification: square matrices of equal size");
    NonnegTripleReport rep;
    const double scale =
        std::max(1.0, a0.norm_fro() * g0.norm_fro() * std::max(g0.norm_fro(), 1.0));
    ComplexMatrix triple = g0 * a0 * g0;
    rep.precondition_witness = min_hermitian_eig(triple, tol);
    if (rep.precondition_witness < -1e-10 * scale)
        throw PreconditionError("nonneg_triple_classification: G0*A0*G0 has min eigenvalue " +
                                std::to_string(rep.precondition_witness));

    ComplexMatrix t = a0 * g0;
    RieszContext ctx(t, tol);
    const double tscale = std::max(1.0, t.norm_fro());
    for (const SpectralPoint& pt : ctx.spectrum())
        rep.max_imag = std::max(rep.max_imag, std::abs(pt.value.imag()));
    rep.spectrum_real = rep.max_imag <= 1e-8 * tscale;

    // classify against G0 itself as the inner-product matrix
    KreinStructure ks;
    ks.lambda0 = cplx(0.0, 0.0);  // unused; G0 supplied directly
    ks.g0 = hermitian_part(g0);

    rep.typing_ok = true;
    for (int i = 0; i < static_cast<int>(ctx.spectrum().size()); ++i) {
        const SpectralPoint& pt = ctx.spectrum()[static_cast<std::size_t>(i)];
        if (!ctx.is_real(i)) continue;
        const double x = pt.value.real();
        if (std::abs(x) <= ctx.cluster_tol()) continue;
        ComplexMatrix v = riesz_range(ctx, {i});
        SubspaceVerdict sv = subspace_verdict(ks, v, tol);
        PointType verdict = sv.kind == SubspaceKind::UniformlyPositive ? PointType::PositiveType
                            : sv.kind == SubspaceKind::UniformlyNegative
                                ? PointType::NegativeType
                                : PointType::Critical;
        rep.typed_points.emplace_back(x, verdict);
        if (x > 0 && verdict != PointType::PositiveType) rep.typing_ok = false;
        if (x < 0 && verdict != PointType::NegativeType) rep.typing_ok = false;
    }

    // nontrivial invariant subspace when non-scalar with σ ≠ {0}
    const std::size_t n = t.rows();
    const cplx mean = t.trace() / static_cast<double>(n);
    ComplexMatrix dev = t;
    for (std::size_t i = 0; i < n; ++i) dev(i, i) -= mean;
    const bool scalar = dev.norm_fro() <= 1e-10 * tscale;
    bool sigma_nonzero = false;
    for (const SpectralPoint& pt : ctx.spectrum())
        if (std::abs(pt.value) > ctx.cluster_tol()) sigma_nonzero = true;
    if (!scalar && sigma_nonzero) {
        if (ctx.spectrum().size() > 1) {
            // spectral subspace of the rightmost cluster
            rep.invariant_basis =
                riesz_range(ctx, {static_cast<int>(ctx.spectrum().size()) - 1});
        } else {
            ComplexMatrix sh = t;
            for (std::size_t i = 0; i < n; ++i) sh(i, i) -= ctx.spectrum()[0].value;
            rep.invariant_basis = null_space_basis(sh, 1e-8 * tscale);
        }
        if (rep.invariant_basis.cols() > 0 && rep.invariant_basis.cols() < n) {
            ComplexMatrix tv = t * rep.invariant_basis;
            ComplexMatrix proj = rep.invariant_basis * (rep.invariant_basis.adjoint() * tv);
            rep.invariance_residual = (tv - proj).norm_fro();
            rep.subspace_emitted = rep.invariance_residual <= 1e-8 * tscale;
        }
    }
    rep.pass = rep.spectrum_real && rep.typing_ok &&
               (scalar || !sigma_nonzero || rep.subspace_emitted);
    return rep;
}

}  // namespace kreinspec
