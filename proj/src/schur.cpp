#include <cmath>

#include "kreinspec/dense_linalg.hpp"
#include "kreinspec/errors.hpp"

namespace kreinspec {

namespace {

// Unitary [c s; -conj(s) c] with real c mapping (f,g) to (r,0).
struct Givens {
    double c = 1.0;
    cplx s = 0.0;
};

Givens make_givens(cplx f, cplx g) {
    Givens gv;
    const double af = std::abs(f), ag = std::abs(g);
    if (ag == 0.0) {
        gv.c = 1.0;
        gv.s = 0.0;
        return gv;
    }
    if (af == 0.0) {
        gv.c = 0.0;
        gv.s = std::conj(g) / ag;
        return gv;
    }
    const double d = std::hypot(af, ag);
    gv.c = af / d;
    gv.s = (f / af) * std::conj(g) / d;
    return gv;
}

}  // namespace

HessenbergForm hessenberg(const ComplexMatrix& m) {
    if (!m.square()) throw DimensionError("hessenberg needs a square matrix");
    const std::size_t n = m.rows();
    HessenbergForm out{ComplexMatrix::identity(n), m};
    ComplexMatrix& h = out.h;
    ComplexMatrix& q = out.q;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t s = k + 1;
        const std::size_t len = n - s;
        double xnorm2 = 0.0;
        for (std::size_t i = s; i < n; ++i) xnorm2 += std::norm(h(i, k));
        if (xnorm2 == 0.0) continue;
        double below2 = xnorm2 - std::norm(h(s, k));
        if (below2 <= 0.0) continue;
        const double xnorm = std::sqrt(xnorm2);
        const cplx x0 = h(s, k);
        const double ax0 = std::abs(x0);
        const cplx phase = ax0 > 0 ? x0 / ax0 : cplx(1.0, 0.0);
        const cplx alpha = -phase * xnorm;
        std::vector<cplx> v(len);
        for (std::size_t i = 0; i < len; ++i) v[i] = h(s + i, k);
        v[0] -= alpha;
        double vn2 = 0.0;
        for (const cplx& vi : v) vn2 += std::norm(vi);
        if (vn2 <= 0.0) continue;
        const double vninv = 1.0 / std::sqrt(vn2);
        for (cplx& vi : v) vi *= vninv;
        // left: rows s.., cols k..
        for (std::size_t j = k; j < n; ++j) {
            cplx vc = 0.0;
            for (std::size_t i = 0; i < len; ++i) vc += std::conj(v[i]) * h(s + i, j);
            vc *= 2.0;
            for (std::size_t i = 0; i < len; ++i) h(s + i, j) -= vc * v[i];
        }
        // right: all rows, cols s..
        for (std::size_t i = 0; i < n; ++i) {
            cplx rv = 0.0;
            for (std::size_t j = 0; j < len; ++j) rv += h(i, s + j) * v[j];
            rv *= 2.0;
            for (std::size_t j = 0; j < len; ++j) h(i, s + j) -= rv * std::conj(v[j]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            cplx rv = 0.0;
            for (std::size_t j = 0; j < len; ++j) rv += q(i, s + j) * v[j];
            rv *= 2.0;
            for (std::size_t j = 0; j < len; ++j) q(i, s + j) -= rv * std::conj(v[j]);
        }
        h(s, k) = alpha;
        for (std::size_t i = s + 1; i < n; ++i) h(i, k) = 0.0;
    }
    return out;
}

SchurForm schur_from_hessenberg(ComplexMatrix q, ComplexMatrix h) {
    const std::size_t n = h.rows();
    SchurForm out;
    const double eps = std::numeric_limits<double>::epsilon();
    const double hnorm = std::max(h.norm_fro(), 1e-300);
    int iterations = 0;
    const int max_iters = 60 * static_cast<int>(n) + 100;
    int hi = static_cast<int>(n) - 1;
    int stalled = 0;

    auto negligible = [&](int i) {
        const double base = std::abs(h(i - 1, i - 1)) + std::abs(h(i, i));
        return std::abs(h(i, i - 1)) <= eps * (base > 0 ? base : hnorm);
    };

    while (hi > 0) {
        if (negligible(hi)) {
            h(hi, hi - 1) = 0.0;
            hi--;
            stalled = 0;
            continue;
        }
        int lo = hi;
        while (lo > 0 && !negligible(lo)) lo--;
        if (lo > 0) h(lo, lo - 1) = 0.0;

        if (++iterations > max_iters)
            throw EigenConvergenceError("schur", iterations);

        // shift
        cplx mu;
        if (++stalled % 12 == 0) {
            mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
        } else {
            const cplx a = h(hi - 1, hi - 1), b = h(hi - 1, hi);
            const cplx c = h(hi, hi - 1), d = h(hi, hi);
            const cplx tr2 = 0.5 * (a + d);
            const cplx disc = std::sqrt(tr2 * tr2 - (a * d - b * c));
            const cplx m1 = tr2 + disc, m2 = tr2 - disc;
            mu = std::abs(m1 - d) < std::abs(m2 - d) ? m1 : m2;
            if (!std::isfinite(mu.real()) || !std::isfinite(mu.imag())) mu = d;
        }

        for (int i = lo; i <= hi; ++i) h(i, i) -= mu;
        std::vector<Givens> rot(static_cast<std::size_t>(hi - lo));
        // left rotations: R = G_{hi-1}···G_lo (H − μ)
        for (int i = lo; i < hi; ++i) {
            Givens g = make_givens(h(i, i), h(i + 1, i));
            rot[static_cast<std::size_t>(i - lo)] = g;
            for (std::size_t j = static_cast<std::size_t>(i); j < n; ++j) {
                const cplx t1 = h(i, j), t2 = h(i + 1, j);
                h(i, j) = g.c * t1 + g.s * t2;
                h(i + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
            }
        }
        // right: H ← R G_lo* ··· G_{hi-1}*, and U ← U G_i*
        for (int i = lo; i < hi; ++i) {
            const Givens& g = rot[static_cast<std::size_t>(i - lo)];
            const int rmax = std::min(i + 1, hi);
            for (int r = 0; r <= rmax; ++r) {
                const cplx t1 = h(r, i), t2 = h(r, i + 1);
                h(r, i) = t1 * g.c + t2 * std::conj(g.s);
                h(r, i + 1) = -t1 * g.s + t2 * g.c;
            }
            for (std::size_t r = 0; r < n; ++r) {
                const cplx t1 = q(r, i), t2 = q(r, i + 1);
                q(r, i) = t1 * g.c + t2 * std::conj(g.s);
                q(r, i + 1) = -t1 * g.s + t2 * g.c;
            }
        }
        for (int i = lo; i <= hi; ++i) h(i, i) += mu;
    }
    // clear rounding dust below the diagonal
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) h(i, j) = 0.0;
    out.u = std::move(q);
    out.t = std::move(h);
    out.iterations = iterations;
    return out;
}

SchurForm schur(const ComplexMatrix& m) {
    HessenbergForm hf = hessenberg(m);
    return schur_from_hessenberg(std::move(hf.q), std::move(hf.h));
}

std::vector<cplx> eigenvalues(const ComplexMatrix& m) {
    if (!m.square()) throw DimensionError("eigenvalues needs a square matrix");
    const std::size_t n = m.rows();
    if (n == 1) return {m(0, 0)};
    if (n == 2) {
        // closed form; exact for the hand fixtures
        const cplx tr2 = 0.5 * (m(0, 0) + m(1, 1));
        const cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        const cplx disc = std::sqrt(tr2 * tr2 - det);
        return {tr2 + disc, tr2 - disc};
    }
    SchurForm sf = schur(m);
    std::vector<cplx> vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = sf.t(i, i);
    return vals;
}

ComplexMatrix triangular_eigenvectors(const ComplexMatrix& t) {
    const std::size_t n = t.rows();
    ComplexMatrix x(n, n);
    const double eps = std::numeric_limits<double>::epsilon();
    const double scale = std::max(t.norm_fro(), 1e-300);
    for (std::size_t k = 0; k < n; ++k) {
        x(k, k) = 1.0;
        const cplx lam = t(k, k);
        for (std::size_t jj = k; jj-- > 0;) {
            cplx acc = 0.0;
            for (std::size_t mm = jj + 1; mm <= k; ++mm) acc += t(jj, mm) * x(mm, k);
            cplx den = t(jj, jj) - lam;
            if (std::abs(den) < eps * scale) den = eps * scale;  // near-defective guard
            x(jj, k) = -acc / den;
        }
        double nk = 0.0;
        for (std::size_t i = 0; i <= k; ++i) nk += std::norm(x(i, k));
        nk = std::sqrt(nk);
        if (nk > 0)
            for (std::size_t i = 0; i <= k; ++i) x(i, k) /= nk;
    }
    return x;
}

Eigensystem decompose(const ComplexMatrix& m, const Tolerances& tol) {
    Eigensystem es;
    HessenbergForm hf = hessenberg(m);
    es.hess_q = hf.q;
    es.hess_h = hf.h;
    SchurForm sf = schur_from_hessenberg(hf.q, hf.h);
    es.schur_u = std::move(sf.u);
    es.schur_t = std::move(sf.t);
    const std::size_t n = m.rows();
    es.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) es.values[i] = es.schur_t(i, i);

    ComplexMatrix xtri = triangular_eigenvectors(es.schur_t);
    es.vr = es.schur_u * xtri;
    for (std::size_t j = 0; j < n; ++j) {
        double nj = 0.0;
        for (std::size_t i = 0; i < n; ++i) nj += std::norm(es.vr(i, j));
        nj = std::sqrt(nj);
        if (nj > 0)
            for (std::size_t i = 0; i < n; ++i) es.vr(i, j) /= nj;
    }
    auto lu = std::make_shared<LuFactors>(LuFactors::factor(es.vr));
    if (lu->min_pivot() > 0.0) {
        es.eigenbasis_cond = lu->condition_estimate(es.vr.norm_one());
        if (es.eigenbasis_cond <= tol.eigenbasis_cond_cap) {
            // residual check: M·vr ≈ vr·Λ
            ComplexMatrix mv = m * es.vr;
            ComplexMatrix vl = es.vr;
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t i = 0; i < n; ++i) vl(i, j) *= es.values[j];
            const double res = (mv - vl).norm_fro();
            if (res <= 1e-8 * std::max(1e-300, m.norm_fro())) {
                es.has_eigenbasis = true;
                es.vr_lu = std::move(lu);
            }
        }
    }
    return es;
}

ComplexMatrix hessenberg_resolve(const Eigensystem& es, cplx mu, const ComplexMatrix& b) {
    const std::size_t n = es.hess_h.rows();
    if (b.rows() != n) throw DimensionError("hessenberg_resolve shape mismatch");
    ComplexMatrix h = es.hess_h;
    for (std::size_t i = 0; i < n; ++i) h(i, i) -= mu;
    ComplexMatrix x = es.hess_q.adjoint() * b;
    const std::size_t m = x.cols();
    // Givens elimination of the subdiagonal, applied to x as well.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        Givens g = make_givens(h(i, i), h(i + 1, i));
        for (std::size_t j = i; j < n; ++j) {
            const cplx t1 = h(i, j), t2 = h(i + 1, j);
            h(i, j) = g.c * t1 + g.s * t2;
            h(i + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
        }
        for (std::size_t j = 0; j < m; ++j) {
            const cplx t1 = x(i, j), t2 = x(i + 1, j);
            x(i, j) = g.c * t1 + g.s * t2;
            x(i + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
        }
    }
    for (std::size_t kk = n; kk-- > 0;) {
        const double ak = std::abs(h(kk, kk));
        if (ak == 0.0) throw SingularMatrixError("hessenberg_resolve", ak);
        const cplx inv = 1.0 / h(kk, kk);
        for (std::size_t j = 0; j < m; ++j) x(kk, j) *= inv;
        for (std::size_t i = 0; i < kk; ++i) {
            const cplx u = h(i, kk);
            if (u == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < m; ++j) x(i, j) -= u * x(kk, j);
        }
    }
    return es.hess_q * x;
}

}  // namespace kreinspec
