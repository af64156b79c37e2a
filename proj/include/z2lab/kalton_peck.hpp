#pragma once

#include "z2lab/power.hpp"
#include "z2lab/seq.hpp"

namespace z2lab {

// Twist parameter alpha of Z_2(alpha): the space twisted by f(t) = t^(1+i*alpha).
class TwistParameter {
public:
    explicit TwistParameter(double alpha) : alpha_(alpha) {
        if (!std::isfinite(alpha)) throw std::invalid_argument("TwistParameter: alpha must be finite");
    }

    double alpha() const { return alpha_; }
    Exponent exponent() const { return Exponent(alpha_); }
    double lipschitz() const { return std::hypot(1.0, alpha_); }  // |1 + i*alpha|

private:
    double alpha_;
};

// Element of Z_2: a pair of finite-support sequences.
struct TwistedVector {
    FiniteVector x;
    FiniteVector y;
};

// omega(x)(n) = x(n) * L^a where L = log(|x|_2 / |x(n)|) and a = 1 + i*alpha.
// Coordinates where x vanishes are absent; omega(e_n) is empty (L = 0).
// Degree-1 homogeneous: omega(c*x) = c*omega(x).
FiniteVector omega(const TwistParameter& alpha, const FiniteVector& x);

// |x|_2 + |y - omega(x)|_2. Zero iff x and y are both empty.
double quasi_norm(const TwistParameter& alpha, const TwistedVector& v);

// omega_prime(w)(n) = w(n) * (log(1/|w(n)|))^b. Requires every |w(n)| <= 1:
// a larger modulus would put a negative base under the complex power, which
// is rejected rather than given a branch. Agrees with omega exactly when
// |w|_2 = 1.
FiniteVector omega_prime(const TwistParameter& beta, const FiniteVector& w);

struct OmegaGapCheck {
    double gap;    // |omega(w) - omega_prime(w)|_2
    double bound;  // |b| * |log |w|_2| * |w|_2
    bool holds;
};

// Checks the approximation bound gap <= bound. Empty w gives {0, 0, true}.
OmegaGapCheck omega_gap(const TwistParameter& beta, const FiniteVector& w);

// |omega(s*x) - s*omega(x)|_2 / |x|_2 for a multiplier with |s|_inf <= 1.
// Throws when x is empty or the multiplier exceeds the unit ball.
double centralizer_defect(const TwistParameter& alpha, const FiniteVector& s,
                          const FiniteVector& x);

// |omega(x1 + x2) - omega(x1) - omega(x2)|_2 / (|x1|_2 + |x2|_2).
// Throws when both inputs are empty.
double quasilinearity_defect(const TwistParameter& alpha, const FiniteVector& x1,
                             const FiniteVector& x2);

// Coordinatewise conjugation of both components: an isometry of Z_2(alpha)
// onto Z_2(-alpha) and an involution. The twist parameter plays no
// computational role, so it is not a parameter here; tests pair alpha with
// -alpha when checking the isometry contract.
TwistedVector conjugate_transport(const TwistedVector& v);

// quasi_norm(s*x, s*y) / quasi_norm(x, y) for a multiplier with |s|_inf <= 1.
// Throws on the zero vector. Empirically bounded by 1 + 2L/e, L = |1+i*alpha|.
double multiplier_boundedness(const TwistParameter& alpha, const FiniteVector& s,
                              const TwistedVector& v);

}  // namespace z2lab
