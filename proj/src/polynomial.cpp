#include "kreinspec/polynomial.hpp"

#include <cmath>
#include <sstream>

#include "kreinspec/errors.hpp"

namespace kreinspec {

RealPolynomial::RealPolynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw PreconditionError("polynomial needs at least one coefficient");
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
}

bool RealPolynomial::is_zero() const {
    for (double c : coeffs_)
        if (c != 0.0) return false;
    return true;
}

std::complex<double> RealPolynomial::eval(std::complex<double> z) const {
    std::complex<double> r = coeffs_.back();
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) r = r * z + *it;
    return r;
}

double RealPolynomial::eval(double x) const {
    double r = coeffs_.back();
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) r = r * x + *it;
    return r;
}

RealPolynomial RealPolynomial::operator*(const RealPolynomial& other) const {
    std::vector<double> out(coeffs_.size() + other.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < other.coeffs_.size(); ++j)
            out[i + j] += coeffs_[i] * other.coeffs_[j];
    return RealPolynomial(std::move(out));
}

RealPolynomial RealPolynomial::operator*(double s) const {
    std::vector<double> out = coeffs_;
    for (double& c : out) c *= s;
    return RealPolynomial(std::move(out));
}

RealPolynomial RealPolynomial::times_lambda() const {
    std::vector<double> out(coeffs_.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i + 1] = coeffs_[i];
    return RealPolynomial(std::move(out));
}

std::string RealPolynomial::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        double c = coeffs_[k];
        if (c == 0.0 && !(first && k == 0)) continue;
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0)
            os << "-";
        double a = std::abs(c);
        if (k == 0 || a != 1.0) {
            os << a;
            if (k > 0) os << "*";
        }
        if (k >= 1) os << "lambda";
        if (k >= 2) os << "^" << k;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace kreinspec
