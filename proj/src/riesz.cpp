#include "kreinspec/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "kreinspec/errors.hpp"
#include "kreinspec/kernels.hpp"

namespace kreinspec {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

int round_up_pow2(int v) {
    int p = 1;
    while (p < v) p <<= 1;
    return p;
}

struct Circle {
    cplx center;
    double radius;
};

// Circle around one cluster: radius = half the minimal gap to every other
// spectral point. With no complement the radius only has to clear the
// cluster itself.
Circle make_circle(const std::vector<SpectralPoint>& spectrum, int idx, double cluster_tol) {
    const SpectralPoint& pt = spectrum[static_cast<std::size_t>(idx)];
    Circle c{pt.value, 0.0};
    double gap = std::numeric_limits<double>::infinity();
    for (int j = 0; j < static_cast<int>(spectrum.size()); ++j) {
        if (j == idx) continue;
        gap = std::min(gap, std::abs(spectrum[static_cast<std::size_t>(j)].value - pt.value));
    }
    if (!std::isfinite(gap)) {
        c.radius = std::max(0.5 * (1.0 + std::abs(pt.value)), 4.0 * pt.cluster_radius);
        return c;
    }
    if (gap < 4.0 * cluster_tol)
        throw ClusterSeparationError("riesz contour: cluster separation " + std::to_string(gap) +
                                     " below 4x cluster tolerance " + std::to_string(cluster_tol));
    c.radius = 0.5 * gap;
    if (pt.cluster_radius >= c.radius)
        throw ClusterSeparationError("riesz contour: cluster radius exceeds contour radius");
    return c;
}

// Σ over a trapezoid node batch of e^{it}·R(center + r·e^{it}) where R is
// whatever the accumulate callback adds. t = 2π(j + phase)/n for j < n.
template <typename F>
void node_batch(const Circle& c, int n, double phase, F&& accumulate) {
    for (int j = 0; j < n; ++j) {
        const double t = 2.0 * kPi * (static_cast<double>(j) + phase) / static_cast<double>(n);
        const cplx e = std::polar(1.0, t);
        accumulate(c.center + c.radius * e, e);
    }
}

ComplexMatrix resolvent_lu(const ComplexMatrix& t, cplx mu) {
    const std::size_t n = t.rows();
    ComplexMatrix shifted = t;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= mu;
    return LuFactors::factor(shifted).solve(ComplexMatrix::identity(n));
}

// Inverse of the upper triangular (S − μ): back substitution per column.
ComplexMatrix triangular_resolvent(const ComplexMatrix& s, cplx mu) {
    const std::size_t n = s.rows();
    ComplexMatrix r(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        r(j, j) = 1.0 / (s(j, j) - mu);
        for (std::size_t ii = j; ii-- > 0;) {
            cplx acc = 0.0;
            for (std::size_t k = ii + 1; k <= j; ++k) acc += s(ii, k) * r(k, j);
            r(ii, j) = -acc / (s(ii, ii) - mu);
        }
    }
    return r;
}

// One circle, full matrix, doubling refinement. `resolvent` maps μ to the
// n×n resolvent in whatever coordinates the caller works in.
template <typename R>
ComplexMatrix quad_circle_full(const Circle& c, int base, int cap, double target, R&& resolvent,
                               int* nodes_used) {
    int n_nodes = base;
    ComplexMatrix sum;
    bool first = true;
    node_batch(c, n_nodes, 0.0, [&](cplx mu, cplx e) {
        ComplexMatrix r = resolvent(mu);
        r *= e;
        if (first) {
            sum = std::move(r);
            first = false;
        } else {
            sum += r;
        }
    });
    ComplexMatrix p = sum * cplx(-c.radius / n_nodes, 0.0);
    while (true) {
        node_batch(c, n_nodes, 0.5, [&](cplx mu, cplx e) {
            ComplexMatrix r = resolvent(mu);
            r *= e;
            sum += r;
        });
        n_nodes *= 2;
        ComplexMatrix p2 = sum * cplx(-c.radius / n_nodes, 0.0);
        const double delta = (p2 - p).norm_fro();
        p = std::move(p2);
        if (delta <= target * std::max(p.norm_fro(), 1e-300)) break;
        if (n_nodes >= cap)
            throw QuadratureConvergenceError("riesz quadrature", delta, n_nodes);
    }
    if (nodes_used) *nodes_used = n_nodes;
    return p;
}

// One circle in eigenbasis coordinates: diagonal coefficients
// q_i = −(r/N)·Σ_j e^{it_j}/(λ_i − μ_j). Convergence measured through the
// eigenbasis condition estimate (an upper bound on the materialized delta).
std::vector<cplx> quad_circle_coeffs(const Circle& c, const std::vector<cplx>& lambda, int base,
                                     int cap, double target, double cond, int* nodes_used) {
    const std::size_t n = lambda.size();
    int n_nodes = base;
    std::vector<cplx> sum(n, cplx(0, 0));
    auto add_batch = [&](int nn, double phase) {
        node_batch(c, nn, phase, [&](cplx mu, cplx e) {
            for (std::size_t i = 0; i < n; ++i) sum[i] += e / (lambda[i] - mu);
        });
    };
    add_batch(n_nodes, 0.0);
    std::vector<cplx> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = sum[i] * (-c.radius / n_nodes);
    while (true) {
        add_batch(n_nodes, 0.5);
        n_nodes *= 2;
        double delta2 = 0.0, norm2 = 0.0;
        std::vector<cplx> q2(n);
        for (std::size_t i = 0; i < n; ++i) {
            q2[i] = sum[i] * (-c.radius / n_nodes);
            delta2 += std::norm(q2[i] - q[i]);
            norm2 += std::norm(q2[i]);
        }
        q = std::move(q2);
        const double bound = cond * std::sqrt(delta2);
        if (bound <= target * std::max(std::sqrt(norm2), 1.0)) break;
        if (n_nodes >= cap)
            throw QuadratureConvergenceError("riesz quadrature (eigenbasis)", bound, n_nodes);
    }
    if (nodes_used) *nodes_used = n_nodes;
    return q;
}

std::mt19937_64 probe_rng(const std::vector<int>& selected, std::size_t n) {
    std::uint64_t seed = 0x9e3779b97f4a7c15ull ^ (static_cast<std::uint64_t>(n) << 32);
    for (int s : selected) seed = seed * 6364136223846793005ull + static_cast<std::uint64_t>(s) + 1442695040888963407ull;
    return std::mt19937_64(seed);
}

ComplexMatrix random_block(std::mt19937_64& rng, std::size_t n, std::size_t k) {
    std::normal_distribution<double> g;
    ComplexMatrix b(n, k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) b(i, j) = cplx(g(rng), g(rng));
    return b;
}

}  // namespace

RieszContext::RieszContext(ComplexMatrix t, const Tolerances& tol)
    : t_(std::move(t)), tol_(tol) {
    if (!t_.square()) throw DimensionError("RieszContext needs a square matrix");
    es_ = decompose(t_, tol_);
    for (const cplx& v : es_.values) rho_ = std::max(rho_, std::abs(v));
    double ct = tol_.cluster_rel * (1.0 + rho_);
    for (int pass = 0; pass < 60; ++pass) {
        spectrum_ = cluster_eigenvalues(es_.values, ct);
        double min_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < spectrum_.size(); ++i)
            for (std::size_t j = i + 1; j < spectrum_.size(); ++j)
                min_gap = std::min(min_gap, std::abs(spectrum_[i].value - spectrum_[j].value));
        if (spectrum_.size() <= 1 || min_gap >= 4.0 * ct) break;
        ct *= 2.0;
    }
    cluster_tol_ = ct;
}

const ComplexMatrix& RieszContext::eigenbasis_inverse() const {
    if (!vr_inv_) {
        if (!es_.has_eigenbasis) throw Error("eigenbasis_inverse: no usable eigenbasis");
        vr_inv_ = es_.vr_lu->solve(ComplexMatrix::identity(t_.rows()));
    }
    return *vr_inv_;
}

int RieszContext::find_point(cplx value) const {
    int best = -1;
    double bestd = cluster_tol_;
    for (std::size_t i = 0; i < spectrum_.size(); ++i) {
        const double d = std::abs(spectrum_[i].value - value);
        if (d <= bestd) {
            bestd = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

bool RieszContext::is_real(int index) const {
    return std::abs(spectrum_[static_cast<std::size_t>(index)].value.imag()) <= cluster_tol_;
}

int RieszContext::conjugate_partner(int index) const {
    return find_point(std::conj(spectrum_[static_cast<std::size_t>(index)].value));
}

std::vector<cplx> riesz_coefficients(RieszContext& ctx, const std::vector<int>& selected,
                                     int nodes, int* nodes_used_out) {
    const Tolerances& tol = ctx.tolerances();
    if (!ctx.eigensystem().has_eigenbasis)
        throw Error("riesz_coefficients: context has no usable eigenbasis");
    const int base = round_up_pow2(nodes > 0 ? nodes : tol.quad_nodes_base);
    std::vector<cplx> q(ctx.op().rows(), cplx(0, 0));
    int used = 0;
    for (int idx : selected) {
        Circle c = make_circle(ctx.spectrum(), idx, ctx.cluster_tol());
        int u = 0;
        std::vector<cplx> qc =
            quad_circle_coeffs(c, ctx.eigensystem().values, base, tol.quad_nodes_cap,
                               tol.quad_target_rel, ctx.eigensystem().eigenbasis_cond, &u);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] += qc[i];
        used = std::max(used, u);
    }
    if (nodes_used_out) *nodes_used_out = used;
    return q;
}

ComplexMatrix materialize_from_coefficients(RieszContext& ctx, const std::vector<cplx>& q) {
    return kernels::gemm_col_scaled(ctx.eigensystem().vr, q, ctx.eigenbasis_inverse());
}

ProjectionResult riesz_projection(RieszContext& ctx, const std::vector<int>& selected, int nodes,
                                  RieszPath path) {
    const Tolerances& tol = ctx.tolerances();
    const std::size_t n = ctx.op().rows();
    if (selected.empty()) throw PreconditionError("riesz_projection: empty cluster selection");
    if (path == RieszPath::Auto)
        path = n <= tol.exact_riesz_max_n ? RieszPath::Direct : RieszPath::Cached;
    const int base = round_up_pow2(nodes > 0 ? nodes : tol.quad_nodes_base);

    ProjectionResult out;
    int expected_rank = 0;
    for (int idx : selected)
        expected_rank += ctx.spectrum()[static_cast<std::size_t>(idx)].algebraic_multiplicity;

    if (path == RieszPath::Cached && ctx.eigensystem().has_eigenbasis) {
        int used = 0;
        std::vector<cplx> q = riesz_coefficients(ctx, selected, base, &used);
        out.p = materialize_from_coefficients(ctx, q);
        out.nodes_used = used;
        for (int idx : selected) {
            Circle c = make_circle(ctx.spectrum(), idx, ctx.cluster_tol());
            out.contours.push_back({c.center, c.radius, used});
        }
    } else {
        // Direct LU route, or triangular Schur when Cached was requested.
        const bool triangular = (path == RieszPath::Cached);
        ComplexMatrix accum(n, n);
        int used = 0;
        for (int idx : selected) {
            Circle c = make_circle(ctx.spectrum(), idx, ctx.cluster_tol());
            int u = 0;
            ComplexMatrix pc;
            if (triangular) {
                const ComplexMatrix& s = ctx.eigensystem().schur_t;
                pc = quad_circle_full(
                    c, base, tol.quad_nodes_cap, tol.quad_target_rel,
                    [&](cplx mu) { return triangular_resolvent(s, mu); }, &u);
            } else {
                const ComplexMatrix& t = ctx.op();
                pc = quad_circle_full(
                    c, base, tol.quad_nodes_cap, tol.quad_target_rel,
                    [&](cplx mu) { return resolvent_lu(t, mu); }, &u);
            }
            accum += pc;
            used = std::max(used, u);
            out.contours.push_back({c.center, c.radius, u});
        }
        if (triangular) {
            const Eigensystem& es = ctx.eigensystem();
            out.p = es.schur_u * accum * es.schur_u.adjoint();
        } else {
            out.p = std::move(accum);
        }
        out.nodes_used = used;
    }

    const cplx tr = out.p.trace();
    out.rank = static_cast<int>(std::lround(tr.real()));
    out.trace_gap = std::abs(tr - cplx(static_cast<double>(out.rank), 0.0));
    if (out.rank != expected_rank)
        throw Error("riesz_projection: rank " + std::to_string(out.rank) +
                    " does not match cluster multiplicity " + std::to_string(expected_rank));

    if (n <= tol.exact_riesz_max_n) {
        out.idempotency_residual = (out.p * out.p - out.p).norm_fro();
        out.commutation_residual = (out.p * ctx.op() - ctx.op() * out.p).norm_fro();
    } else {
        std::mt19937_64 rng = probe_rng(selected, n);
        ComplexMatrix b = random_block(rng, n, 4);
        double idem = 0.0, comm = 0.0;
        for (std::size_t j = 0; j < b.cols(); ++j) {
            ComplexMatrix v = b.col(j);
            const double nv = vec_norm(v);
            ComplexMatrix pv = kernels::matvec(out.p, v);
            idem = std::max(idem, (kernels::matvec(out.p, pv) - pv).norm_fro() / nv);
            ComplexMatrix tv = kernels::matvec(ctx.op(), v);
            comm = std::max(
                comm, (kernels::matvec(out.p, tv) - kernels::matvec(ctx.op(), pv)).norm_fro() / nv);
        }
        out.idempotency_residual = idem;
        out.commutation_residual = comm;
        out.residuals_estimated = true;
    }
    return out;
}

ProjectionResult riesz_projection(const ComplexMatrix& t, const std::vector<SpectralPoint>& cluster,
                                  int nodes, const Tolerances& tol) {
    RieszContext ctx(t, tol);
    std::vector<int> selected;
    for (const SpectralPoint& pt : cluster) {
        int idx = ctx.find_point(pt.value);
        if (idx < 0)
            throw PreconditionError("riesz_projection: requested point is not a spectral point");
        selected.push_back(idx);
    }
    // dedupe while preserving order
    std::vector<int> unique;
    for (int i : selected)
        if (std::find(unique.begin(), unique.end(), i) == unique.end()) unique.push_back(i);
    return riesz_projection(ctx, unique, nodes, RieszPath::Auto);
}

ComplexMatrix riesz_projection_fixed_nodes(RieszContext& ctx, const std::vector<int>& selected,
                                           int nodes, RieszPath path) {
    const std::size_t n = ctx.op().rows();
    if (path == RieszPath::Auto)
        path = n <= ctx.tolerances().exact_riesz_max_n ? RieszPath::Direct : RieszPath::Cached;
    ComplexMatrix accum(n, n);
    for (int idx : selected) {
        Circle c = make_circle(ctx.spectrum(), idx, ctx.cluster_tol());
        ComplexMatrix sum(n, n);
        if (path == RieszPath::Direct) {
            const ComplexMatrix& t = ctx.op();
            node_batch(c, nodes, 0.0, [&](cplx mu, cplx e) {
                ComplexMatrix r = resolvent_lu(t, mu);
                r *= e;
                sum += r;
            });
        } else {
            const ComplexMatrix& s = ctx.eigensystem().schur_t;
            node_batch(c, nodes, 0.0, [&](cplx mu, cplx e) {
                ComplexMatrix r = triangular_resolvent(s, mu);
                r *= e;
                sum += r;
            });
            sum = ctx.eigensystem().schur_u * sum * ctx.eigensystem().schur_u.adjoint();
        }
        sum *= cplx(-c.radius / nodes, 0.0);
        accum += sum;
    }
    return accum;
}

ComplexMatrix riesz_range(RieszContext& ctx, const std::vector<int>& selected, int nodes) {
    const Tolerances& tol = ctx.tolerances();
    const std::size_t n = ctx.op().rows();
    int rank = 0;
    for (int idx : selected)
        rank += ctx.spectrum()[static_cast<std::size_t>(idx)].algebraic_multiplicity;
    if (rank == 0) return ComplexMatrix(n, 0);
    const std::size_t k = std::min(n, static_cast<std::size_t>(rank) + 4);
    std::mt19937_64 rng = probe_rng(selected, n);
    ComplexMatrix b = random_block(rng, n, k);
    const int base = round_up_pow2(nodes > 0 ? nodes : tol.quad_nodes_base);

    ComplexMatrix y(n, k);
    if (ctx.eigensystem().has_eigenbasis) {
        std::vector<cplx> q = riesz_coefficients(ctx, selected, base, nullptr);
        ComplexMatrix w = ctx.eigensystem().vr_lu->solve(b);
        y = kernels::gemm_col_scaled(ctx.eigensystem().vr, q, w);
    } else {
        // block quadrature through the Schur form
        const Eigensystem& es = ctx.eigensystem();
        ComplexMatrix bu = es.schur_u.adjoint() * b;
        for (int idx : selected) {
            Circle c = make_circle(ctx.spectrum(), idx, ctx.cluster_tol());
            auto resolve_block = [&](cplx mu) {
                // (S − μ)⁻¹ · bu by back substitution
                const ComplexMatrix& s = es.schur_t;
                ComplexMatrix x = bu;
                for (std::size_t ii = n; ii-- > 0;) {
                    const cplx d = s(ii, ii) - mu;
                    for (std::size_t j = 0; j < k; ++j) {
                        cplx acc = x(ii, j);
                        for (std::size_t m2 = ii + 1; m2 < n; ++m2) acc -= s(ii, m2) * x(m2, j);
                        x(ii, j) = acc / d;
                    }
                }
                return x;
            };
            int used = 0;
            ComplexMatrix yc = quad_circle_full(c, base, tol.quad_nodes_cap, tol.quad_target_rel,
                                                resolve_block, &used);
            y += es.schur_u * yc;
        }
    }
    PivotedQr qr = qr_col_pivot(y, 0.0);
    if (qr.rank < rank)
        throw Error("riesz_range: block rank " + std::to_string(qr.rank) + " below multiplicity " +
                    std::to_string(rank));
    return qr.q.cols_range(0, static_cast<std::size_t>(rank));
}

ComplexMatrix riesz_apply_hessenberg(RieszContext& ctx, const std::vector<int>& selected,
                                     const ComplexMatrix& b, int nodes) {
    const Tolerances& tol = ctx.tolerances();
    const int base = round_up_pow2(nodes > 0 ? nodes : tol.quad_nodes_base);
    const Eigensystem& es = ctx.eigensystem();
    const std::size_t n = b.rows(), k = b.cols();
    // one basis change per call; the node solves run in Hessenberg coordinates
    ComplexMatrix bu = es.hess_q.adjoint() * b;
    ComplexMatrix work(n, n);
    auto solve_node = [&](cplx mu) {
        const ComplexMatrix& h0 = es.hess_h;
        std::copy(h0.data(), h0.data() + n * n, work.data());
        for (std::size_t i = 0; i < n; ++i) work(i, i) -= mu;
        ComplexMatrix x = bu;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const cplx f = work(i, i), g = work(i + 1, i);
            const double af = std::abs(f), ag2 = std::abs(g);
            double cgiv = 1.0;
            cplx sgiv = 0.0;
            if (ag2 != 0.0) {
                if (af == 0.0) {
                    cgiv = 0.0;
                    sgiv = std::conj(g) / ag2;
                } else {
                    const double d = std::hypot(af, ag2);
                    cgiv = af / d;
                    sgiv = (f / af) * std::conj(g) / d;
                }
            }
            for (std::size_t j = i; j < n; ++j) {
                const cplx t1 = work(i, j), t2 = work(i + 1, j);
                work(i, j) = cgiv * t1 + sgiv * t2;
                work(i + 1, j) = -std::conj(sgiv) * t1 + cgiv * t2;
            }
            for (std::size_t j = 0; j < k; ++j) {
                const cplx t1 = x(i, j), t2 = x(i + 1, j);
                x(i, j) = cgiv * t1 + sgiv * t2;
                x(i + 1, j) = -std::conj(sgiv) * t1 + cgiv * t2;
            }
        }
        for (std::size_t kk = n; kk-- > 0;) {
            const cplx inv = 1.0 / work(kk, kk);
            for (std::size_t j = 0; j < k; ++j) x(kk, j) *= inv;
            for (std::size_t i = 0; i < kk; ++i) {
                const cplx u = work(i, kk);
                if (u == cplx(0.0, 0.0)) continue;
                for (std::size_t j = 0; j < k; ++j) x(i, j) -= u * x(kk, j);
            }
        }
        return x;
    };
    ComplexMatrix acc(n, k);
    for (int idx : selected) {
        Circle c = make_circle(ctx.spectrum(), idx, ctx.cluster_tol());
        int used = 0;
        ComplexMatrix yc =
            quad_circle_full(c, base, tol.quad_nodes_cap, tol.quad_target_rel, solve_node, &used);
        acc += yc;
    }
    return es.hess_q * acc;
}

int pole_order(RieszContext& ctx, int index, int nodes) {
    const Tolerances& tol = ctx.tolerances();
    const SpectralPoint& pt = ctx.spectrum()[static_cast<std::size_t>(index)];
    ProjectionResult pr = riesz_projection(ctx, {index}, nodes, RieszPath::Auto);
    const std::size_t n = ctx.op().rows();
    ComplexMatrix d = ctx.op();
    for (std::size_t i = 0; i < n; ++i) d(i, i) -= pt.value;
    const double dnorm = std::max(d.norm_fro(), 1e-300);
    const double pnorm = std::max(pr.p.norm_fro(), 1e-300);
    ComplexMatrix cur = pr.p;
    double scale = 1.0;
    for (int nu = 1; nu <= pt.algebraic_multiplicity; ++nu) {
        cur = d * cur;
        scale *= dnorm;
        const double r = cur.norm_fro();
        if (r <= tol.pole_rel * scale * pnorm) return nu;
        if (nu == pt.algebraic_multiplicity && r <= 1e-6 * scale * pnorm) return nu;
    }
    throw Error("pole_order: nilpotency threshold not met at multiplicity " +
                std::to_string(pt.algebraic_multiplicity));
}

int pole_order(const ComplexMatrix& t, const SpectralPoint& pt, const Tolerances& tol) {
    RieszContext ctx(t, tol);
    int idx = ctx.find_point(pt.value);
    if (idx < 0) throw PreconditionError("pole_order: not a spectral point");
    return pole_order(ctx, idx, 0);
}

PairSpaceReport pair_space_krein_check(const KreinStructure& ks, RieszContext& ctx,
                                       int index_nonreal) {
    if (ctx.is_real(index_nonreal))
        throw PreconditionError("pair_space_krein_check: spectral point is real");
    const int conj_idx = ctx.conjugate_partner(index_nonreal);
    if (conj_idx < 0)
        throw Error("pair_space_krein_check: conjugate spectral point missing");
    ProjectionResult ei = riesz_projection(ctx, {index_nonreal});
    ProjectionResult ej = riesz_projection(ctx, {conj_idx});

    PairSpaceReport rep;
    const double g0n = std::max(ks.g0.norm_fro(), 1e-300);
    rep.adjoint_symmetry_residual =
        (ks.g0 * ei.p - ej.p.adjoint() * ks.g0).norm_fro() / g0n;

    ComplexMatrix pair_p = ei.p + ej.p;
    ComplexMatrix v = orthonormal_range(pair_p, ei.rank + ej.rank);
    rep.verdict = subspace_verdict(ks, v, ctx.tolerances());

    rep.pole_order_lambda = pole_order(ctx, index_nonreal, 0);
    rep.pole_order_conjugate = pole_order(ctx, conj_idx, 0);
    rep.pass = rep.adjoint_symmetry_residual <= ctx.tolerances().axiom_tol &&
               rep.verdict.kind == SubspaceKind::Krein &&
               rep.pole_order_lambda == rep.pole_order_conjugate;
    return rep;
}

}  // namespace kreinspec
