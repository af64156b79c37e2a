#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace z2lab {

// b = 1 + i*beta. The real part is fixed at 1, so |b| >= 1 and t -> t^b is
// Lipschitz on [0, inf) with constant exactly |b|.
class Exponent {
public:
    explicit Exponent(double beta) : beta_(beta) {
        if (!std::isfinite(beta)) throw std::invalid_argument("Exponent: beta must be finite");
    }

    double beta() const { return beta_; }
    std::complex<double> value() const { return {1.0, beta_}; }
    double modulus() const;  // |b| = sqrt(1 + beta^2)

private:
    double beta_;
};

// t^b = exp(b log t) for t > 0, continuously extended by 0 at t = 0.
// Throws std::domain_error for t < 0 and std::overflow_error for t > e^700
// (all downstream experiments stay in finite arithmetic).
std::complex<double> cpow(double t, const Exponent& b);

// t^b - s^b for t > s >= 0, computed as s^b*(exp(b log(t/s)) - 1) with a
// complex expm1 so the result keeps full relative accuracy when t - s is
// small. s = 0 gives t^b.
std::complex<double> cpow_diff(double t, double s, const Exponent& b);

// |t^b - s^b| for t > s >= 0, same cancellation-free route. s = 0 gives t.
double abs_pow_diff(double t, double s, const Exponent& b);

// |t^b - s^b - b s^(b-1) (t-s)| for t > s > 0, same cancellation-free route.
double abs_taylor_remainder(double t, double s, const Exponent& b);

// Lipschitz constant of t -> t^b on [0, inf): exactly |b|.
double lipschitz_bound(const Exponent& b);

struct InequalityCheck {
    bool holds;
    double lhs;
    double rhs;
};

inline constexpr double kDefaultIneqTol = 1e-10;  // relative floating-point slack

// |t^b - s^b| >= t - s           (t > s >= 0)
InequalityCheck check_lower(double t, double s, const Exponent& b,
                            double tol_rel = kDefaultIneqTol);

// |t^b - s^b| <= |b| (t - s)     (t > s >= 0)
InequalityCheck check_upper(double t, double s, const Exponent& b,
                            double tol_rel = kDefaultIneqTol);

// |t^b - s^b - b s^(b-1)(t-s)| <= (1/2)|b||b-1| s^(-1) (t-s)^2   (t > s > 0)
// The coefficient |b||b-1| = |b||beta| is the sharp one (sup of |(u^b)''| on
// [s,t] times the usual 1/2); it is attained in the t -> s limit. The check
// adds a small absolute slack on top of tol_rel because the right side
// vanishes as beta -> 0 while the computed left side keeps rounding noise of
// size eps*(t-s).
InequalityCheck check_taylor(double t, double s, const Exponent& b,
                             double tol_rel = kDefaultIneqTol);

}  // namespace z2lab
