#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "z2lab/power.hpp"
#include "z2lab/seq.hpp"

namespace z2lab {

// Grid of sigma = (1/2) log N values, strictly increasing and positive.
class SigmaGrid {
public:
    SigmaGrid() = default;
    explicit SigmaGrid(std::vector<double> sigmas);

    // sigma = (1/2) log N for N on a geometric schedule: N = ceil(ratio^k)
    // while below n_max, then n_max itself.
    static SigmaGrid geometric(std::uint64_t n_max, double ratio = 2.0);

    const std::vector<double>& values() const { return values_; }
    bool empty() const { return values_.empty(); }
    std::size_t size() const { return values_.size(); }
    double sigma_min() const { return values_.front(); }
    double sigma_max() const { return values_.back(); }

private:
    std::vector<double> values_;
};

// Candidate diagonal operator (lambda, mu, nu); lambda must be nonzero
// wherever log|lambda| is taken.
struct DiagonalParams {
    Complex lambda{1.0, 0.0};
    Complex mu{0.0, 0.0};
    Complex nu{1.0, 0.0};
};

// sigma^(i alpha) * (kappa^a - 1)/(kappa - 1) with a = 1 + i alpha.
// Its modulus |kappa^a - 1|/(kappa - 1) does not depend on sigma; the phase
// alpha*log(sigma) never settles, which is the point.
Complex limit_quantity(double alpha, double kappa, double sigma);

struct OscillationReport {
    double alpha = 0.0;
    double kappa = 0.0;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    double radius = 0.0;       // R = |kappa^a - 1|/(kappa - 1)
    double oscillation = 0.0;  // diameter of the sampled value set, <= 2R
    std::size_t samples = 0;
};

// limit_quantity sampled at log-uniform sigma values (endpoints included).
std::vector<std::pair<double, Complex>> oscillation_path(double alpha, double kappa,
                                                         double sigma_min, double sigma_max,
                                                         std::size_t samples);

OscillationReport oscillation(double alpha, double kappa, double sigma_min, double sigma_max,
                              std::size_t samples);

// max over the grid of |nu sigma^a - lambda (sigma + log|lambda|)^b + mu|,
// a = 1 + i alpha, b = 1 + i beta. Throws if lambda = 0 or some grid point
// has sigma + log|lambda| <= 0 (the message names the point).
double diagonal_residual(double alpha, double beta, const DiagonalParams& p,
                         const SigmaGrid& grid);

struct FitConfig {
    std::size_t restarts = 32;
    std::size_t max_evals_per_restart = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 1;  // 0 = one per hardware thread
};

struct FitReport {
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> grid;  // sigma values
    DiagonalParams best;
    double residual = 0.0;
    std::size_t restarts = 0;
    std::size_t evaluations = 0;  // total across restarts
    std::uint64_t seed = 0;
    bool improved = false;  // some restart beat its own starting point
};

// Multi-start simplex minimization of diagonal_residual over six real
// parameters (log r, theta for lambda = r e^(i theta), Re/Im mu, Re/Im nu).
// Restart 0 starts exactly at (lambda, mu, nu) = (1, 0, 1), which is an exact
// zero when alpha = beta; the rest start at seeded random unimodular lambda.
// Result is the (residual, restart index) lexicographic best, so it does not
// depend on thread scheduling.
FitReport diagonal_fit(double alpha, double beta, const SigmaGrid& grid,
                       const FitConfig& config = {});

// Smallest integer N with delta^2 (log sqrt(N))^2 > (1 + 2|b|)^2, i.e.
// floor(exp(2(1 + 2|b|)/delta)) + 1, evaluated in arbitrary precision with
// directed rounding so the floor is certified. The result has roughly
// 0.9(1 + 2|b|)/delta digits; exponents beyond 1e8 are refused.
mpz_class contradiction_witness(double delta, double beta);

// Direct log-space check of delta^2 (log sqrt(n))^2 > (1 + 2|b|)^2 at a given
// n >= 1; the independent route for validating contradiction_witness.
bool witness_inequality_holds(const mpz_class& n, double delta, double beta);

// K = (|b| tau^2 / M + 4 + 4|b|) / (c (tau - sigma)); M may be +infinity,
// which drops the first term.
double proof_bound_K(double c, double m_bound, double beta, double sigma, double tau);

// |(tau1^a - sigma1^a)/(tau1 - sigma1) - (tau2^a - sigma2^a)/(tau2 - sigma2)|
// with a = 1 + i alpha; requires tau_r > sigma_r > 0.
double two_point_difference(double alpha, double sigma1, double tau1, double sigma2,
                            double tau2);

}  // namespace z2lab
