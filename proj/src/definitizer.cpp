#include "kreinspec/definitizer.hpp"

#include <algorithm>
#include <cmath>

#include "kreinspec/errors.hpp"

namespace kreinspec {

// Horner-error majorant: Σ |c_k|·‖M‖^k bounds both ‖p(M)‖ and the rounding
// accumulated while evaluating it, which ‖p(M)‖ itself does not once the
// polynomial nearly annihilates M.
static double horner_majorant(const RealPolynomial& p, double mnorm) {
    double s = 0.0, pw = 1.0;
    for (double c : p.coeffs()) {
        s += std::abs(c) * pw;
        pw *= std::max(mnorm, 1.0);
    }
    return s;
}

// Witness eigenvalue without the hermiticity gate: the inputs here may be
// rounding-noise matrices (annihilating polynomials) whose defect is of the
// same order as the matrix itself; the caller scales the result instead.
static double min_eig_hermitian_part(const ComplexMatrix& m, const Tolerances& tol) {
    Tolerances ungated = tol;
    ungated.hermiticity_rel = 1e300;
    return min_hermitian_eig(hermitian_part(m), ungated);
}

DefinitizingWitness is_definitizing(const OperatorPair& pair, const RealPolynomial& p,
                                    const Tolerances& tol) {
    if (p.is_zero()) throw PreconditionError("is_definitizing: the zero polynomial");
    DefinitizingWitness w;
    ComplexMatrix pag = horner_matrix(p, pair.ag());
    if (!pag.is_finite()) throw Error("is_definitizing: p(AG) overflowed to non-finite values");
    ComplexMatrix s = pair.g * pag;
    w.scale = 1.0 + pair.g.norm_fro() * horner_majorant(p, pair.ag().norm_fro());
    w.herm_residual = s.hermiticity_defect();
    if (w.herm_residual > 1e-9 * w.scale)
        throw Error("is_definitizing: G*p(AG) hermiticity defect beyond 1e-9*scale (defect " +
                    std::to_string(w.herm_residual / w.scale) + " of scale)");
    w.psd_witness = min_eig_hermitian_part(s, tol);
    w.definitizing = w.psd_witness >= -tol.psd_rel * w.scale;
    return w;
}

namespace {

struct Boundary {
    double root;
};

// Sign-change boundaries between runs of definite-type real points, sorted
// ascending; the root snaps to 0 when the gap straddles it.
std::vector<Boundary> sign_boundaries(const SignClassification& cls) {
    std::vector<std::pair<double, PointType>> definite;
    for (const ClassifiedPoint& cp : cls.points)
        if (cp.verdict == PointType::PositiveType || cp.verdict == PointType::NegativeType)
            definite.emplace_back(cp.point.value.real(), cp.verdict);
    std::sort(definite.begin(), definite.end());
    std::vector<Boundary> out;
    for (std::size_t i = 0; i + 1 < definite.size(); ++i) {
        if (definite[i].second == definite[i + 1].second) continue;
        const double lo = definite[i].first, hi = definite[i + 1].first;
        out.push_back({lo < 0.0 && hi > 0.0 ? 0.0 : 0.5 * (lo + hi)});
    }
    return out;
}

// Reject a candidate that has the strictly wrong sign at a definite-type
// point; a definitizing polynomial cannot, so this only skips dead ends.
bool sign_screen(const RealPolynomial& p, const SignClassification& cls) {
    for (const ClassifiedPoint& cp : cls.points) {
        if (cp.verdict != PointType::PositiveType && cp.verdict != PointType::NegativeType)
            continue;
        const double x = cp.point.value.real();
        double mag_scale = 0.0;
        double ax = 1.0;
        for (double c : p.coeffs()) {
            mag_scale += std::abs(c) * ax;
            ax *= std::max(std::abs(x), 1.0);
        }
        const double v = p.eval(x);
        const double eps = 1e-9 * std::max(mag_scale, 1e-300);
        if (cp.verdict == PointType::PositiveType && v < -eps) return false;
        if (cp.verdict == PointType::NegativeType && v > eps) return false;
    }
    return true;
}

}  // namespace

PolynomialSearchResult find_definitizing_polynomial(const OperatorPair& pair,
                                                    const SignClassification& cls,
                                                    RieszContext& ctx, int degree_cap) {
    if (degree_cap < 1) throw PreconditionError("find_definitizing_polynomial: degree_cap >= 1");
    PolynomialSearchResult res;

    // mandatory factors: one real quadratic per conjugate pair, exponent = pole order
    RealPolynomial mandatory = RealPolynomial::constant(1.0);
    std::vector<bool> seen(ctx.spectrum().size(), false);
    for (int i = 0; i < static_cast<int>(ctx.spectrum().size()); ++i) {
        if (ctx.is_real(i) || seen[static_cast<std::size_t>(i)]) continue;
        const int j = ctx.conjugate_partner(i);
        if (j >= 0) seen[static_cast<std::size_t>(j)] = true;
        seen[static_cast<std::size_t>(i)] = true;
        const cplx mu = ctx.spectrum()[static_cast<std::size_t>(i)].value;
        const int nu = pole_order(ctx, i, 0);
        RealPolynomial quad({std::norm(mu), -2.0 * mu.real(), 1.0});
        for (int e = 0; e < nu; ++e) mandatory = mandatory * quad;
    }

    bool zero_candidate = cls.zero_forced;
    for (double c : cls.critical_candidates)
        if (std::abs(c) <= ctx.cluster_tol()) zero_candidate = true;

    const std::vector<Boundary> bounds = sign_boundaries(cls);
    const int nb = static_cast<int>(bounds.size());
    if (nb > 24) throw Error("find_definitizing_polynomial: too many sign boundaries");

    struct Candidate {
        int degree;
        unsigned mask;
        int k;
        int sign;  // 0 → +1, 1 → −1
    };
    std::vector<Candidate> cands;
    const int kmax = zero_candidate ? 2 : 0;
    for (unsigned mask = 0; mask < (1u << nb); ++mask) {
        const int popcnt = __builtin_popcount(mask);
        for (int k = 0; k <= kmax; ++k) {
            const int deg = mandatory.degree() + popcnt + k;
            if (deg > degree_cap) continue;
            for (int sign = 0; sign < 2; ++sign) cands.push_back({deg, mask, k, sign});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        if (a.mask != b.mask) return a.mask < b.mask;
        if (a.k != b.k) return a.k < b.k;
        return a.sign < b.sign;
    });

    for (const Candidate& c : cands) {
        RealPolynomial p = mandatory;
        for (int b = 0; b < nb; ++b)
            if (c.mask & (1u << b))
                p = p * RealPolynomial::linear_root(bounds[static_cast<std::size_t>(b)].root);
        for (int e = 0; e < c.k; ++e) p = p.times_lambda();
        if (c.sign == 1) p = p * -1.0;
        ++res.candidates_tried;
        if (!sign_screen(p, cls)) continue;
        ++res.candidates_verified;
        DefinitizingWitness w = is_definitizing(pair, p, ctx.tolerances());
        res.best_witness = std::max(res.best_witness, w.psd_witness / w.scale);
        if (w.definitizing) {
            res.found = true;
            res.p = p;
            res.witness = w;
            return res;
        }
    }
    return res;
}

PolynomialSearchResult find_definitizing_polynomial(const OperatorPair& pair, int degree_cap,
                                                    const Tolerances& tol) {
    RieszContext ctx(pair.ag(), tol);
    const cplx l0 = choose_lambda0_from_radius(ctx.spectral_radius());
    KreinStructure ks = build_g0(pair, l0, tol, &ctx.spectrum());
    SignClassification cls = classify_spectrum(pair, ks, ctx);
    return find_definitizing_polynomial(pair, cls, ctx, degree_cap);
}

std::vector<double> critical_points(const OperatorPair& pair, const SignClassification& cls,
                                    RieszContext& ctx, const RealPolynomial& p) {
    DefinitizingWitness w = is_definitizing(pair, p, ctx.tolerances());
    if (!w.definitizing)
        throw PreconditionError("critical_points: polynomial is not definitizing (witness " +
                                std::to_string(w.psd_witness) + ")");
    std::vector<double> crit;
    for (const ClassifiedPoint& cp : cls.points)
        if (cp.verdict == PointType::Critical) crit.push_back(cp.point.value.real());
    if (cls.zero_forced) {
        bool has_zero = false;
        for (double c : crit)
            if (std::abs(c) <= ctx.cluster_tol()) has_zero = true;
        if (!has_zero)
            throw Error("critical_points: G singular but 0 missing from the critical set");
    }
    std::vector<cplx> roots = polynomial_roots(p);
    for (double c : crit) {
        if (std::abs(c) <= ctx.cluster_tol()) continue;  // 0 need not be a root
        double d = std::numeric_limits<double>::infinity();
        for (const cplx& r : roots) d = std::min(d, std::abs(r - cplx(c, 0.0)));
        if (d > ctx.tolerances().root_match_tol * (1.0 + std::abs(c)))
            throw Error("critical_points: nonzero critical point " + std::to_string(c) +
                        " is not a root of p (distance " + std::to_string(d) + ")");
    }
    std::sort(crit.begin(), crit.end());
    return crit;
}

DefinitizabilityCertificate build_certificate(const OperatorPair& pair, const KreinStructure& ks,
                                              const RealPolynomial& p, const Tolerances& tol) {
    DefinitizingWitness w = is_definitizing(pair, p, tol);
    if (!w.definitizing)
        throw PreconditionError("build_certificate: polynomial is not definitizing");

    DefinitizabilityCertificate cert;
    cert.p = p;
    cert.psd_witness = w.psd_witness;
    cert.m = p.degree() + 1;
    cplx l0 = ks.lambda0;
    {
        // the proof needs p(λ₀) ≠ 0; re-choose along the imaginary axis if not
        int tries = 0;
        double rho = 0.0;
        for (const cplx& v : eigenvalues(pair.ag())) rho = std::max(rho, std::abs(v));
        double pscale = 0.0;
        for (double c : p.coeffs()) pscale = std::max(pscale, std::abs(c));
        while (std::abs(p.eval(l0)) <= 1e-12 * std::max(pscale, 1e-300) && tries < 20) {
            l0 = cplx(0.0, (1.0 + rho) * (1.0 + 0.5 * (tries + 1)));
            ++tries;
        }
        if (std::abs(p.eval(l0)) <= 1e-12 * std::max(pscale, 1e-300))
            throw Error("build_certificate: could not find lambda0 with p(lambda0) != 0");
    }
    cert.lambda0 = l0;
    KreinStructure ksl = ks;
    if (l0 != ks.lambda0) ksl = build_g0(pair, l0, tol);

    const ComplexMatrix ag = pair.ag();
    const ComplexMatrix ga = pair.ga();
    const int m = cert.m;

    // W(X) = (X−λ₀)(X−λ̄₀) = X² − 2Reλ₀·X + |λ₀|²   (real coefficients)
    RealPolynomial wpoly({std::norm(l0), -2.0 * l0.real(), 1.0});
    ComplexMatrix w_ga = horner_matrix(wpoly, ga);
    ComplexMatrix w_ag = horner_matrix(wpoly, ag);
    LuFactors lu_ga = LuFactors::factor(w_ga);
    LuFactors lu_ag = LuFactors::factor(w_ag);

    // A₀ = AGA·p(GA)·W(GA)^{−m}
    ComplexMatrix mwork = horner_matrix(p, ga);
    for (int i = 0; i < m; ++i) mwork = lu_ga.solve(mwork);
    cert.a0 = pair.a * (pair.g * (pair.a * mwork));
    cert.a0_hermiticity = cert.a0.hermiticity_defect();
    cert.a0 = hermitian_part(cert.a0);

    // r₁(AG) = (AG)²·p(AG)·W(AG)^{−(m+1)}
    ComplexMatrix r1 = horner_matrix(p, ag) * ag * ag;
    for (int i = 0; i < m + 1; ++i) r1 = lu_ag.solve(r1);
    ComplexMatrix a0g0 = cert.a0 * ksl.g0;
    cert.r1_residual = (r1 - a0g0).norm_fro();

    // G·r₂(AG) = G₀A₀G₀ with r₂ = r₁·W^{−1}
    ComplexMatrix r2 = lu_ag.solve(r1);
    ComplexMatrix triple = ksl.g0 * a0g0;
    cert.r2_residual = (pair.g * r2 - triple).norm_fro();

    cert.triple_witness = min_eig_hermitian_part(triple, tol);
    cert.indep_witness = min_eig_hermitian_part(ksl.g0 * horner_matrix(p, ag), tol);

    const double g0n = ksl.g0.norm_fro();
    const double a0n = cert.a0.norm_fro();
    cert.scale = std::max({1.0, a0n * g0n, r1.norm_fro()});
    const double indep_scale = 1.0 + g0n * horner_majorant(p, ag.norm_fro());
    const double triple_scale = std::max(1.0, g0n * g0n * a0n);
    cert.valid = cert.psd_witness >= -tol.psd_rel * w.scale &&
                 cert.indep_witness >= -tol.psd_rel * indep_scale &&
                 cert.r1_residual <= 1e-8 * cert.scale &&
                 cert.r2_residual <= 1e-8 * std::max(cert.scale, triple_scale) &&
                 cert.triple_witness >= -1e-9 * triple_scale;
    return cert;
}

TheoremMainReport theorem_main_report(const OperatorPair& pair, const SignClassification& cls,
                                      RieszContext& ctx, const RealPolynomial& p,
                                      const Tolerances& tol) {
    DefinitizingWitness w = is_definitizing(pair, p, tol);
    if (!w.definitizing)
        throw PreconditionError("theorem_main_report: polynomial is not definitizing");
    TheoremMainReport rep;
    rep.pass = true;
    std::vector<cplx> roots = polynomial_roots(p);

    double eval_scale = 0.0;
    for (const ClassifiedPoint& cp : cls.points) {
        const cplx v = cp.point.value;
        if (cp.verdict == PointType::NonReal) {
            TheoremMainReport::NonRealEntry e;
            e.value = v;
            e.root_distance = std::numeric_limits<double>::infinity();
            for (const cplx& r : roots) e.root_distance = std::min(e.root_distance, std::abs(r - v));
            const int idx = ctx.find_point(v);
            e.pole_order = idx >= 0 ? pole_order(ctx, idx, 0) : 0;
            e.ok = e.root_distance <= tol.root_match_tol * (1.0 + std::abs(v)) && e.pole_order >= 1;
            if (!e.ok) rep.pass = false;
            rep.non_real.push_back(e);
            continue;
        }
        const double x = v.real();
        if (std::abs(x) <= ctx.cluster_tol()) continue;  // zero excluded in (b),(c)
        TheoremMainReport::RealEntry e;
        e.value = x;
        e.p_value = p.eval(x);
        e.verdict = cp.verdict;
        eval_scale = 0.0;
        double ax = 1.0;
        for (double c : p.coeffs()) {
            eval_scale += std::abs(c) * ax;
            ax *= std::max(std::abs(x), 1.0);
        }
        const double eps = 1e-9 * std::max(eval_scale, 1e-300);
        if (e.p_value > eps)
            e.ok = e.verdict == PointType::PositiveType;
        else if (e.p_value < -eps)
            e.ok = e.verdict == PointType::NegativeType;
        else
            e.ok = true;  // p vanishes at the point: no constraint
        if (!e.ok) rep.pass = false;
        rep.real.push_back(e);
    }
    return rep;
}

RealPolynomial swap_polynomial(const RealPolynomial& p) {
    if (p.is_zero()) throw PreconditionError("swap_polynomial: the zero polynomial");
    return p.times_lambda();
}

ZeroInvertibilityReport zero_invertibility_report(const OperatorPair& pair,
                                                  const Tolerances& tol) {
    ZeroInvertibilityReport rep;
    const ComplexMatrix ag = pair.ag();
    const ComplexMatrix ga = pair.ga();
    std::vector<cplx> sag = eigenvalues(ag);
    std::vector<cplx> sga = eigenvalues(ga);
    double rho = 0.0;
    for (const cplx& v : sag) rho = std::max(rho, std::abs(v));
    const double ctol = tol.cluster_rel * (1.0 + rho);

    auto spectrum_invertible = [&](const std::vector<cplx>& s) {
        for (const cplx& v : s)
            if (std::abs(v) <= ctol) return false;
        return true;
    };
    rep.ag_invertible = spectrum_invertible(sag);
    rep.ga_invertible = spectrum_invertible(sga);
    // surjectivity via numerical rank
    const double drop_ag = tol.singular_rel * std::max(ag.norm_fro(), 1e-300);
    const double drop_ga = tol.singular_rel * std::max(ga.norm_fro(), 1e-300);
    rep.ag_surjective = qr_col_pivot(ag, drop_ag).rank == static_cast<int>(pair.n);
    rep.ga_surjective = qr_col_pivot(ga, drop_ga).rank == static_cast<int>(pair.n);
    // A and G via Hermitian eigenvalues
    auto herm_invertible = [&](const ComplexMatrix& mtx) {
        HermitianEig e = hermitian_eig(mtx, tol);
        double mn = std::numeric_limits<double>::infinity();
        for (double ev : e.values) mn = std::min(mn, std::abs(ev));
        return mn > tol.singular_rel * std::max(mtx.norm_fro(), 1e-300);
    };
    rep.a_and_g_invertible = herm_invertible(pair.a) && herm_invertible(pair.g);

    rep.equivalent = rep.ag_invertible == rep.ag_surjective &&
                     rep.ag_invertible == rep.ga_invertible &&
                     rep.ag_invertible == rep.ga_surjective &&
                     rep.ag_invertible == rep.a_and_g_invertible;
    rep.sigma_gap = hausdorff_distance(sag, sga);
    rep.sigma_equal = rep.sigma_gap <= 1e-8 * (1.0 + rho);
    rep.pass = rep.equivalent && rep.sigma_equal;
    return rep;
}

}  // namespace kreinspec
