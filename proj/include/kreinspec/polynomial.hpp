#ifndef KREINSPEC_POLYNOMIAL_HPP
#define KREINSPEC_POLYNOMIAL_HPP

#include <complex>
#include <string>
#include <vector>

namespace kreinspec {

// Real-coefficient polynomial, coefficients in ascending degree order.
// The zero polynomial is representable but rejected wherever a definitizing
// polynomial is expected.
class RealPolynomial {
public:
    RealPolynomial() : coeffs_{0.0} {}
    explicit RealPolynomial(std::vector<double> coeffs);

    static RealPolynomial constant(double c) { return RealPolynomial({c}); }
    // λ − r
    static RealPolynomial linear_root(double r) { return RealPolynomial({-r, 1.0}); }

    const std::vector<double>& coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const;
    double leading() const { return coeffs_.back(); }

    std::complex<double> eval(std::complex<double> z) const;
    double eval(double x) const;

    RealPolynomial operator*(const RealPolynomial& other) const;
    RealPolynomial operator*(double s) const;
    // λ·p(λ): coefficient shift.
    RealPolynomial times_lambda() const;

    std::string to_string() const;  // e.g. "lambda^2 + 1"

private:
    std::vector<double> coeffs_;
};

}  // namespace kreinspec

#endif
