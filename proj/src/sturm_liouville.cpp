#include "kreinspec/sturm_liouville.hpp"

#include <cmath>

#include "kreinspec/errors.hpp"

namespace kreinspec {

OperatorPair discretize(const SLProblem& prob, const Tolerances& tol) {
    if (prob.n < 2) throw PreconditionError("discretize: need n >= 2 interior points");
    if (!(prob.a < prob.b)) throw PreconditionError("discretize: empty interval");
    if (!prob.w || !prob.p || !prob.q) throw PreconditionError("discretize: missing coefficient");
    const std::size_t n = static_cast<std::size_t>(prob.n);
    const double h = (prob.b - prob.a) / (prob.n + 1);
    auto x_at = [&](double i) { return prob.a + h * i; };

    ComplexMatrix g(n, n), a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x_at(static_cast<double>(i + 1));
        const double wl = prob.p(xi - 0.5 * h);
        const double wr = prob.p(xi + 0.5 * h);
        const double wi = prob.w(xi);
        const double qi = prob.q(xi);
        if (!std::isfinite(wl) || !std::isfinite(wr) || !std::isfinite(wi) || !std::isfinite(qi))
            throw InputError("discretize: non-finite coefficient at grid point " +
                             std::to_string(xi));
        if (wi <= 0.0)
            throw InputError("discretize: weight w must be positive, got " + std::to_string(wi) +
                             " at x = " + std::to_string(xi));
        if (wl == 0.0 || wr == 0.0)
            throw InputError("discretize: flux coefficient p vanishes near x = " +
                             std::to_string(xi));
        g(i, i) = (wl + wr) / (h * h) + qi;
        if (i + 1 < n) g(i, i + 1) = -wr / (h * h);
        if (i > 0) g(i, i - 1) = -prob.p(xi - 0.5 * h) / (h * h);
        a(i, i) = 1.0 / wi;
    }
    return OperatorPair::create(std::move(a), std::move(g), tol);
}

SlReport sl_report(const SLProblem& prob, const Tolerances& tol) {
    OperatorPair pair = discretize(prob, tol);
    const std::size_t n = pair.n;
    SlReport rep;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = prob.a + (prob.b - prob.a) * static_cast<double>(i + 1) /
                                       static_cast<double>(prob.n + 1);
        rep.max_w = std::max(rep.max_w, prob.w(xi));
    }
    HermitianEig ge = hermitian_eig(pair.g, tol);
    rep.min_g_eig = std::numeric_limits<double>::infinity();
    for (double ev : ge.values) rep.min_g_eig = std::min(rep.min_g_eig, std::abs(ev));
    if (rep.min_g_eig <= 1e-10 * std::max(pair.g.norm_fro(), 1e-300))
        throw PreconditionError("sl_report: discretized G numerically singular (min |eig| " +
                                std::to_string(rep.min_g_eig) + ")");

    DefinitizingWitness w = is_definitizing(pair, RealPolynomial({0.0, 1.0}), tol);
    rep.p_lambda_definitizing = w.definitizing;
    rep.psd_witness = w.psd_witness;

    auto ctx = std::make_shared<RieszContext>(pair.ag(), tol);
    const double scale = std::max(1.0, ctx->op().norm_fro());
    for (const SpectralPoint& pt : ctx->spectrum())
        rep.max_imag = std::max(rep.max_imag, std::abs(pt.value.imag()));
    rep.spectrum_real = rep.max_imag <= 1e-8 * scale;

    const cplx l0 = choose_lambda0_from_radius(ctx->spectral_radius());
    KreinStructure ks = build_g0(pair, l0, tol, &ctx->spectrum());
    SignClassification cls = classify_spectrum(pair, ks, *ctx);
    rep.all_nonzero_definite = true;
    for (const ClassifiedPoint& cp : cls.points) {
        if (cp.verdict == PointType::NonReal) continue;
        rep.spectrum.push_back(cp.point.value.real());
        switch (cp.verdict) {
            case PointType::PositiveType: rep.positive_count++; break;
            case PointType::NegativeType: rep.negative_count++; break;
            default:
                rep.critical_count++;
                if (std::abs(cp.point.value.real()) > ctx->cluster_tol())
                    rep.all_nonzero_definite = false;
                break;
        }
    }
    std::sort(rep.spectrum.begin(), rep.spectrum.end());
    rep.lambda1 = rep.spectrum.empty() ? 0.0 : rep.spectrum.front();

    SpectralFunction sf = build_spectral_function(pair, ks, ctx, cls);
    rep.critical_set = sf.critical_set();
    const int max_points = n > tol.exact_riesz_max_n ? static_cast<int>(n / 4) : 0;
    std::vector<BorelSet> algebra = default_delta_algebra(sf, 12, max_points);
    rep.axioms = verify_axioms(sf, algebra);
    rep.partition_residual = partition_check(sf, default_cover(sf));
    // independent quadrature cross-check on the two thinnest nonempty sets
    std::vector<std::pair<int, std::size_t>> by_content;
    for (std::size_t i = 0; i < algebra.size(); ++i) {
        int count = 0;
        for (double x : rep.spectrum)
            if (algebra[i].contains(x)) ++count;
        if (count > 0) by_content.emplace_back(count, i);
    }
    std::sort(by_content.begin(), by_content.end());
    for (std::size_t i = 0; i < by_content.size() && i < 2; ++i)
        rep.oracle_residual = std::max(
            rep.oracle_residual, oracle_probe_residual(sf, algebra[by_content[i].second]));

    bool crit_subset_zero = true;
    for (double c : rep.critical_set)
        if (std::abs(c) > ctx->cluster_tol()) crit_subset_zero = false;
    rep.pass = rep.p_lambda_definitizing && rep.spectrum_real && rep.all_nonzero_definite &&
               crit_subset_zero && rep.axioms.pass &&
               rep.partition_residual <= tol.axiom_tol && rep.oracle_residual <= tol.axiom_tol;
    return rep;
}

}  // namespace kreinspec
