#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "kreinspec/dense_linalg.hpp"
#include "kreinspec/errors.hpp"

namespace kreinspec {

double default_cluster_tol(const std::vector<cplx>& values, double cluster_rel) {
    double rho = 0.0;
    for (const cplx& v : values) rho = std::max(rho, std::abs(v));
    return cluster_rel * (1.0 + rho);
}

std::vector<SpectralPoint> cluster_eigenvalues(const std::vector<cplx>& values, double tol) {
    const std::size_t n = values.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(values[i] - values[j]) <= tol) parent[find(i)] = find(j);

    std::vector<std::vector<std::size_t>> groups(n);
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);

    std::vector<SpectralPoint> pts;
    for (const auto& g : groups) {
        if (g.empty()) continue;
        cplx mean = 0.0;
        for (std::size_t i : g) mean += values[i];
        mean /= static_cast<double>(g.size());
        double radius = 0.0;
        for (std::size_t i : g) radius = std::max(radius, std::abs(values[i] - mean));
        pts.push_back({mean, static_cast<int>(g.size()), radius});
    }
    std::sort(pts.begin(), pts.end(), [](const SpectralPoint& a, const SpectralPoint& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return pts;
}

std::vector<SpectralPoint> eig_points(const ComplexMatrix& m, double cluster_tol) {
    if (!m.square()) throw DimensionError("eig_points needs a square matrix");
    return cluster_eigenvalues(eigenvalues(m), cluster_tol);
}

std::vector<SpectralPoint> eig_points(const ComplexMatrix& m) {
    if (!m.square()) throw DimensionError("eig_points needs a square matrix");
    std::vector<cplx> vals = eigenvalues(m);
    return cluster_eigenvalues(vals, default_cluster_tol(vals, Tolerances{}.cluster_rel));
}

double hausdorff_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    double h = 0.0;
    for (const cplx& x : a) {
        double d = std::numeric_limits<double>::infinity();
        for (const cplx& y : b) d = std::min(d, std::abs(x - y));
        h = std::max(h, d);
    }
    for (const cplx& y : b) {
        double d = std::numeric_limits<double>::infinity();
        for (const cplx& x : a) d = std::min(d, std::abs(y - x));
        h = std::max(h, d);
    }
    return h;
}

ComplexMatrix horner_matrix(const RealPolynomial& p, const ComplexMatrix& m) {
    if (!m.square()) throw DimensionError("horner_matrix needs a square matrix");
    const std::size_t n = m.rows();
    const auto& c = p.coeffs();
    ComplexMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i) r(i, i) = c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        r = r * m;
        for (std::size_t i = 0; i < n; ++i) r(i, i) += c[k];
    }
    return r;
}

std::vector<cplx> polynomial_roots(const RealPolynomial& p) {
    if (p.is_zero()) throw PreconditionError("roots of the zero polynomial");
    const int d = p.degree();
    if (d == 0) return {};
    const auto& c = p.coeffs();
    ComplexMatrix comp(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
    const double lead = c.back();
    for (int i = 0; i < d; ++i) comp(static_cast<std::size_t>(i), static_cast<std::size_t>(d - 1)) = -c[static_cast<std::size_t>(i)] / lead;
    for (int i = 1; i < d; ++i) comp(static_cast<std::size_t>(i), static_cast<std::size_t>(i - 1)) = 1.0;
    return eigenvalues(comp);
}

}  // namespace kreinspec
