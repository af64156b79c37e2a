#include "z2lab/power.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace z2lab {

namespace {

const double kMaxT = std::exp(700.0);  // cpow domain cap: t <= e^700

void require_domain(double t) {
    if (std::isnan(t) || t < 0.0) throw std::domain_error("cpow: t must be >= 0");
    if (t > kMaxT) throw std::overflow_error("cpow: t exceeds e^700");
}

// exp(h + i*theta) - 1 without cancellation for small arguments:
// real part  expm1(h) cos(theta) - 2 sin^2(theta/2),
// imag part  exp(h) sin(theta).
std::complex<double> expm1_complex(double h, double theta) {
    const double s = std::sin(0.5 * theta);
    return {std::expm1(h) * std::cos(theta) - 2.0 * s * s,
            std::exp(h) * std::sin(theta)};
}

void require_gap(double t, double s) {
    if (!(t > s) || !(s >= 0.0)) throw std::invalid_argument("requires t > s >= 0");
}

}  // namespace

double Exponent::modulus() const {
    return std::hypot(1.0, beta_);
}

std::complex<double> cpow(double t, const Exponent& b) {
    require_domain(t);
    if (t == 0.0) return {0.0, 0.0};
    // |t^b| = t^(Re b) = t, so polar form is exact in modulus
    return std::polar(t, b.beta() * std::log(t));
}

std::complex<double> cpow_diff(double t, double s, const Exponent& b) {
    require_gap(t, s);
    require_domain(t);
    if (s == 0.0) return cpow(t, b);
    if (t - s >= s) {
        // wide gap: |t^b| - |s^b| = t - s >= t/2, direct subtraction is safe
        // (and (t-s)/s may overflow for extreme ratios)
        return cpow(t, b) - cpow(s, b);
    }
    const double h = std::log1p((t - s) / s);
    return cpow(s, b) * expm1_complex(h, b.beta() * h);
}

double abs_pow_diff(double t, double s, const Exponent& b) {
    if (s == 0.0) {
        require_gap(t, s);
        require_domain(t);
        return t;
    }
    return std::abs(cpow_diff(t, s, b));
}

double abs_taylor_remainder(double t, double s, const Exponent& b) {
    if (!(t > s) || !(s > 0.0))
        throw std::invalid_argument("abs_taylor_remainder: requires t > s > 0");
    require_domain(t);
    if (t - s >= s) {
        // factor out s^(i beta): remainder = |t e^(i beta h) - s - b (t-s)|
        const double h = std::log(t) - std::log(s);
        const std::complex<double> z = std::polar(t, b.beta() * h);
        return std::abs(z - s - b.value() * (t - s));
    }
    // narrow gap: factor out s^b, remainder = s |expm1(b h) - b (t-s)/s|
    const double q = (t - s) / s;
    const double h = std::log1p(q);
    const std::complex<double> e = expm1_complex(h, b.beta() * h);
    return s * std::abs(e - b.value() * q);
}

double lipschitz_bound(const Exponent& b) {
    return b.modulus();
}

InequalityCheck check_lower(double t, double s, const Exponent& b, double tol_rel) {
    const double lhs = abs_pow_diff(t, s, b);
    const double rhs = t - s;
    return {lhs >= rhs - tol_rel * rhs, lhs, rhs};
}

InequalityCheck check_upper(double t, double s, const Exponent& b, double tol_rel) {
    const double lhs = abs_pow_diff(t, s, b);
    const double rhs = b.modulus() * (t - s);
    return {lhs <= rhs + tol_rel * rhs, lhs, rhs};
}

InequalityCheck check_taylor(double t, double s, const Exponent& b, double tol_rel) {
    const double lhs = abs_taylor_remainder(t, s, b);
    const double rhs = 0.5 * b.modulus() * std::abs(b.beta()) * (t - s) * (t - s) / s;
    const double abs_slack = 16.0 * std::numeric_limits<double>::epsilon() * (t - s);
    return {lhs <= rhs + tol_rel * rhs + abs_slack, lhs, rhs};
}

}  // namespace z2lab
