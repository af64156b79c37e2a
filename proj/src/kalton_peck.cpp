#include "z2lab/kalton_peck.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace z2lab {

namespace {

// Coordinate modulus from the same squared magnitude the norms use, so the
// ratio |x|_2 / |x(n)| rounds to exactly 1 for a single-coordinate vector.
// Falls back to hypot when |v|^2 leaves the double range.
double coordinate_modulus(Complex v) {
    const double a2 = abs2(v);
    if (a2 >= std::numeric_limits<double>::min() && std::isfinite(a2)) return std::sqrt(a2);
    return std::hypot(v.real(), v.imag());
}

// A few ulps of slack: multipliers built with std::polar can round a hair
// above modulus 1.
const double kUnitSlack = 1.0 + 16.0 * std::numeric_limits<double>::epsilon();

void require_unit_multiplier(const FiniteVector& s) {
    if (sup_norm(s) > kUnitSlack)
        throw std::invalid_argument("multiplier sup norm exceeds 1");
}

}  // namespace

namespace {

// log(norm/m) clamped at 0: the ratio is >= 1 in exact math, so a rounding
// below 1 (single-coordinate vectors) must not leak a negative level.
double log_ratio(double norm, double m) {
    const double ratio = norm / m;
    return ratio > 1.0 ? std::log(ratio) : 0.0;
}

}  // namespace

FiniteVector omega(const TwistParameter& alpha, const FiniteVector& x) {
    if (x.empty()) return {};
    const double norm = l2_norm(x);
    const Exponent a = alpha.exponent();
    VectorBuilder out(x.support_size());
    // |x(n)|^2 determines the factor, so repeated magnitudes (indicator
    // vectors) share one cpow; the fallback regime bypasses the cache since
    // equal abs2 no longer implies equal modulus there.
    double cached_abs2 = -1.0;
    Complex cached_pow{0.0, 0.0};
    for (const auto& e : x.entries()) {
        const double a2 = abs2(e.value);
        Complex factor;
        if (a2 >= std::numeric_limits<double>::min() && std::isfinite(a2)) {
            if (a2 != cached_abs2) {
                cached_pow = cpow(log_ratio(norm, std::sqrt(a2)), a);
                cached_abs2 = a2;
            }
            factor = cached_pow;
        } else {
            factor = cpow(log_ratio(norm, std::hypot(e.value.real(), e.value.imag())), a);
        }
        out.push(e.index, e.value * factor);
    }
    return out.take();
}

double quasi_norm(const TwistParameter& alpha, const TwistedVector& v) {
    return l2_norm(v.x) + l2_norm(subtract(v.y, omega(alpha, v.x)));
}

FiniteVector omega_prime(const TwistParameter& beta, const FiniteVector& w) {
    const Exponent b = beta.exponent();
    VectorBuilder out(w.support_size());
    for (const auto& e : w.entries()) {
        const double m = coordinate_modulus(e.value);
        if (m > kUnitSlack)
            throw std::invalid_argument("omega_prime: coordinate modulus exceeds 1");
        const double level = m < 1.0 ? std::log(1.0 / m) : 0.0;
        out.push(e.index, e.value * cpow(level, b));
    }
    return out.take();
}

OmegaGapCheck omega_gap(const TwistParameter& beta, const FiniteVector& w) {
    if (w.empty()) return {0.0, 0.0, true};
    const double gap = l2_norm(subtract(omega(beta, w), omega_prime(beta, w)));
    const double norm = l2_norm(w);
    const double bound = beta.lipschitz() * std::abs(std::log(norm)) * norm;
    // the bound is exact; the slack covers rounding when gap = bound
    const bool holds = gap <= bound + 1e-12 * std::max(bound, 1.0);
    return {gap, bound, holds};
}

double centralizer_defect(const TwistParameter& alpha, const FiniteVector& s,
                          const FiniteVector& x) {
    if (x.empty()) throw std::invalid_argument("centralizer_defect: empty x");
    require_unit_multiplier(s);
    const FiniteVector lhs = omega(alpha, multiply(s, x));
    const FiniteVector rhs = multiply(s, omega(alpha, x));
    return l2_norm(subtract(lhs, rhs)) / l2_norm(x);
}

double quasilinearity_defect(const TwistParameter& alpha, const FiniteVector& x1,
                             const FiniteVector& x2) {
    if (x1.empty() && x2.empty())
        throw std::invalid_argument("quasilinearity_defect: both inputs empty");
    const FiniteVector whole = omega(alpha, add(x1, x2));
    const FiniteVector parts = add(omega(alpha, x1), omega(alpha, x2));
    return l2_norm(subtract(whole, parts)) / (l2_norm(x1) + l2_norm(x2));
}

TwistedVector conjugate_transport(const TwistedVector& v) {
    return {conjugate(v.x), conjugate(v.y)};
}

double multiplier_boundedness(const TwistParameter& alpha, const FiniteVector& s,
                              const TwistedVector& v) {
    require_unit_multiplier(s);
    const double denom = quasi_norm(alpha, v);
    if (denom == 0.0) throw std::invalid_argument("multiplier_boundedness: zero vector");
    const TwistedVector sv{multiply(s, v.x), multiply(s, v.y)};
    return quasi_norm(alpha, sv) / denom;
}

}  // namespace z2lab
