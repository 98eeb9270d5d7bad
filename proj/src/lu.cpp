#include <cmath>

#include "kreinspec/dense_linalg.hpp"
#include "kreinspec/errors.hpp"

namespace kreinspec {

LuFactors LuFactors::factor(const ComplexMatrix& m) {
    if (!m.square()) throw DimensionError("LU needs a square matrix");
    const std::size_t n = m.rows();
    LuFactors f;
    f.lu_ = m;
    f.swaps_.resize(n);
    ComplexMatrix& a = f.lu_;
    f.min_pivot_ = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        f.swaps_[k] = static_cast<int>(p);
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
        f.min_pivot_ = std::min(f.min_pivot_, best);
        if (best == 0.0) continue;  // singular; solve() rejects
        const cplx inv = 1.0 / a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx l = a(i, k) * inv;
            a(i, k) = l;
            if (l == cplx(0.0, 0.0)) continue;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
        }
    }
    if (n == 0) f.min_pivot_ = 0.0;
    return f;
}

ComplexMatrix LuFactors::solve(const ComplexMatrix& b) const {
    const std::size_t n = lu_.rows();
    if (b.rows() != n) throw DimensionError("LU solve shape mismatch");
    if (min_pivot_ == 0.0) throw SingularMatrixError("solve", min_pivot_);
    ComplexMatrix x = b;
    const std::size_t m = b.cols();
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t p = static_cast<std::size_t>(swaps_[k]);
        if (p != k)
            for (std::size_t j = 0; j < m; ++j) std::swap(x(k, j), x(p, j));
    }
    // forward: L y = Pb
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx l = lu_(i, k);
            if (l == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < m; ++j) x(i, j) -= l * x(k, j);
        }
    // backward: U x = y
    for (std::size_t kk = n; kk-- > 0;) {
        const cplx inv = 1.0 / lu_(kk, kk);
        for (std::size_t j = 0; j < m; ++j) x(kk, j) *= inv;
        for (std::size_t i = 0; i < kk; ++i) {
            const cplx u = lu_(i, kk);
            if (u == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < m; ++j) x(i, j) -= u * x(kk, j);
        }
    }
    return x;
}

ComplexMatrix LuFactors::solve_adjoint(const ComplexMatrix& b) const {
    // M = P⁻¹ L U  ⇒  M* = U* L* P, so M* x = b is solved by
    // U* y = b (forward), L* z = y (backward), x = P⁻¹ z.
    const std::size_t n = lu_.rows();
    if (b.rows() != n) throw DimensionError("LU adjoint solve shape mismatch");
    if (min_pivot_ == 0.0) throw SingularMatrixError("solve_adjoint", min_pivot_);
    ComplexMatrix x = b;
    const std::size_t m = b.cols();
    // U* is lower triangular with diagonal conj(U_kk)
    for (std::size_t k = 0; k < n; ++k) {
        const cplx inv = 1.0 / std::conj(lu_(k, k));
        for (std::size_t j = 0; j < m; ++j) x(k, j) *= inv;
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx u = std::conj(lu_(k, i));
            if (u == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < m; ++j) x(i, j) -= u * x(k, j);
        }
    }
    // L* is unit upper triangular
    for (std::size_t kk = n; kk-- > 0;) {
        for (std::size_t i = 0; i < kk; ++i) {
            const cplx l = std::conj(lu_(kk, i));
            if (l == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < m; ++j) x(i, j) -= l * x(kk, j);
        }
    }
    for (std::size_t kk = n; kk-- > 0;) {
        const std::size_t p = static_cast<std::size_t>(swaps_[kk]);
        if (p != kk)
            for (std::size_t j = 0; j < m; ++j) std::swap(x(kk, j), x(p, j));
    }
    return x;
}

double LuFactors::inverse_norm_one_estimate() const {
    const std::size_t n = lu_.rows();
    if (n == 0 || min_pivot_ == 0.0) return std::numeric_limits<double>::infinity();
    ComplexMatrix x(n, 1);
    for (std::size_t i = 0; i < n; ++i) x(i, 0) = 1.0 / static_cast<double>(n);
    double est = 0.0;
    for (int iter = 0; iter < 5; ++iter) {
        ComplexMatrix y = solve(x);
        est = y.norm_one();
        ComplexMatrix xi(n, 1);
        for (std::size_t i = 0; i < n; ++i) {
            double a = std::abs(y(i, 0));
            xi(i, 0) = a > 0 ? y(i, 0) / a : cplx(1.0, 0.0);
        }
        ComplexMatrix z = solve_adjoint(xi);
        std::size_t jmax = 0;
        double zmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double a = std::abs(z(i, 0));
            if (a > zmax) {
                zmax = a;
                jmax = i;
            }
        }
        const double zx = std::abs(inner(z, x));
        if (zmax <= zx) break;
        x = ComplexMatrix(n, 1);
        x(jmax, 0) = 1.0;
    }
    return est;
}

ComplexMatrix solve_linear(const ComplexMatrix& m, const ComplexMatrix& b,
                           const Tolerances& tol) {
    if (!m.square()) throw DimensionError("solve_linear needs a square matrix");
    if (m.rows() != b.rows()) throw DimensionError("solve_linear shape mismatch");
    LuFactors f = LuFactors::factor(m);
    if (f.min_pivot() == 0.0) throw SingularMatrixError("solve_linear", f.min_pivot());
    const double cond = f.condition_estimate(m.norm_one());
    if (cond > tol.condition_cap)
        throw IllConditionedError("solve_linear", cond, tol.condition_cap);
    ComplexMatrix x = f.solve(b);
    const double mnorm = m.norm_fro();
    double res = (m * x - b).norm_fro();
    if (res > tol.solve_residual_rel * std::max(1e-300, mnorm * x.norm_fro())) {
        // one pass of iterative refinement
        ComplexMatrix r = b - m * x;
        x += f.solve(r);
        res = (m * x - b).norm_fro();
        if (res > tol.solve_residual_rel * std::max(1e-300, mnorm * x.norm_fro()))
            throw Error("solve_linear: residual " + std::to_string(res) +
                        " above contract after refinement");
    }
    return x;
}

double inverse_norm_two(const ComplexMatrix& m) {
    LuFactors f = LuFactors::factor(m);
    if (f.min_pivot() == 0.0) return std::numeric_limits<double>::infinity();
    const std::size_t n = m.rows();
    ComplexMatrix v(n, 1);
    for (std::size_t i = 0; i < n; ++i)
        v(i, 0) = 1.0 + 1e-3 * static_cast<double>(i % 7);  // deterministic, not symmetric
    double nv = vec_norm(v);
    for (std::size_t i = 0; i < n; ++i) v(i, 0) /= nv;
    double prev = 0.0, lam = 0.0;
    for (int iter = 0; iter < 60; ++iter) {
        ComplexMatrix w = f.solve_adjoint(f.solve(v));
        lam = std::sqrt(std::abs(inner(w, v)));
        double nw = vec_norm(w);
        if (nw == 0.0) return 0.0;
        for (std::size_t i = 0; i < n; ++i) v(i, 0) = w(i, 0) / nw;
        if (iter > 3 && std::abs(lam - prev) <= 1e-12 * std::max(1.0, lam)) break;
        prev = lam;
    }
    return lam;
}

}  // namespace kreinspec
