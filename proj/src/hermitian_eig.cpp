#include <algorithm>
#include <cmath>
#include <numeric>

#include "kreinspec/dense_linalg.hpp"
#include "kreinspec/errors.hpp"

namespace kreinspec {

namespace {

// Implicit QL with Wilkinson shifts on a real symmetric tridiagonal
// (d, e[0..n-2]); the real rotations are accumulated into the complex
// column basis z.
void tridiag_ql(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& z) {
    const int n = static_cast<int>(d.size());
    if (n <= 1) return;
    e.resize(n, 0.0);
    const double eps = std::numeric_limits<double>::epsilon();
    int total_iters = 0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw EigenConvergenceError("hermitian_eig", total_iters);
                ++total_iters;
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (std::size_t k = 0; k < z.rows(); ++k) {
                        const cplx zf = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * zf;
                        z(k, i) = c * z(k, i) - s * zf;
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

HermitianEig hermitian_eig(const ComplexMatrix& m, const Tolerances& tol) {
    if (!m.square()) throw DimensionError("hermitian_eig needs a square matrix");
    const std::size_t n = m.rows();
    const double defect = m.hermiticity_defect();
    const double bound = tol.hermiticity_rel * std::max(m.norm_fro(), 1e-300);
    if (defect > bound) throw NonHermitianError("hermitian_eig: ||M - M*||_F", defect, bound);

    HermitianEig out;
    if (n == 0) {
        out.vectors = ComplexMatrix(0, 0);
        return out;
    }
    ComplexMatrix a = hermitian_part(m);
    ComplexMatrix q = ComplexMatrix::identity(n);

    // Householder tridiagonalization; the rank-2 Hermitian update
    // B ← B − w v* − v w* with w = 2Bv − 2(v*Bv)v.
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t s = k + 1;
        const std::size_t len = n - s;
        double xnorm2 = 0.0;
        for (std::size_t i = s; i < n; ++i) xnorm2 += std::norm(a(i, k));
        const double xnorm = std::sqrt(xnorm2);
        if (xnorm == 0.0) continue;
        double below2 = xnorm2 - std::norm(a(s, k));
        if (below2 <= 0.0) continue;  // already tridiagonal in this column

        const cplx x0 = a(s, k);
        const double ax0 = std::abs(x0);
        const cplx phase = ax0 > 0 ? x0 / ax0 : cplx(1.0, 0.0);
        const cplx alpha = -phase * xnorm;

        std::vector<cplx> v(len);
        for (std::size_t i = 0; i < len; ++i) v[i] = a(s + i, k);
        v[0] -= alpha;
        double vn2 = 0.0;
        for (const cplx& vi : v) vn2 += std::norm(vi);
        if (vn2 <= 0.0) continue;
        const double vninv = 1.0 / std::sqrt(vn2);
        for (cplx& vi : v) vi *= vninv;

        // w = 2 B v − 2 (v* B v) v on the trailing block
        std::vector<cplx> w(len, cplx(0, 0));
        for (std::size_t i = 0; i < len; ++i) {
            cplx acc = 0.0;
            for (std::size_t j = 0; j < len; ++j) acc += a(s + i, s + j) * v[j];
            w[i] = 2.0 * acc;
        }
        cplx vw = 0.0;
        for (std::size_t i = 0; i < len; ++i) vw += std::conj(v[i]) * w[i];
        for (std::size_t i = 0; i < len; ++i) w[i] -= vw * v[i];
        for (std::size_t i = 0; i < len; ++i)
            for (std::size_t j = 0; j < len; ++j)
                a(s + i, s + j) -= w[i] * std::conj(v[j]) + v[i] * std::conj(w[j]);

        a(s, k) = alpha;
        a(k, s) = std::conj(alpha);
        for (std::size_t i = s + 1; i < n; ++i) {
            a(i, k) = 0.0;
            a(k, i) = 0.0;
        }
        // Q(:, s..) ← Q(:, s..)(I − 2vv*)
        for (std::size_t r = 0; r < n; ++r) {
            cplx qv = 0.0;
            for (std::size_t j = 0; j < len; ++j) qv += q(r, s + j) * v[j];
            qv *= 2.0;
            for (std::size_t j = 0; j < len; ++j) q(r, s + j) -= qv * std::conj(v[j]);
        }
    }

    // Phase-normalize the subdiagonal to real nonnegative.
    std::vector<double> d(n), e(n, 0.0);
    cplx phi = 1.0;
    std::vector<cplx> phases(n, cplx(1.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = a(i, i).real();
        if (i + 1 < n) {
            const cplx ei = a(i + 1, i);
            const double aei = std::abs(ei);
            e[i] = aei;
            phi = aei > 0 ? phi * (ei / aei) : phi;
            phases[i + 1] = phi;
        }
    }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) q(i, j) *= phases[j];

    tridiag_ql(d, e, q);

    // ascending sort with column permutation
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = d[idx[j]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = q(i, idx[j]);
    }
    return out;
}

double min_hermitian_eig(const ComplexMatrix& m, const Tolerances& tol) {
    if (!m.square()) throw DimensionError("min_hermitian_eig needs a square matrix");
    const double defect = m.hermiticity_defect();
    const double bound = tol.hermiticity_rel * std::max(m.norm_fro(), 1e-300);
    if (defect > bound)
        throw NonHermitianError("min_hermitian_eig: ||M - M*||_F", defect, bound);
    Tolerances relaxed = tol;
    relaxed.hermiticity_rel = 1.0;  // already validated; eig runs on the Hermitian part
    HermitianEig eig = hermitian_eig(hermitian_part(m), relaxed);
    return eig.values.empty() ? 0.0 : eig.values.front();
}

}  // namespace kreinspec
