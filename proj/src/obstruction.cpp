#include "z2lab/obstruction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include <mpfr.h>

#include "z2lab/nelder_mead.hpp"
#include "z2lab/rng.hpp"

namespace z2lab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Shared term evaluation so the fit objective and diagonal_residual are
// bitwise consistent: nu sigma^a - lambda (sigma + log|lambda|)^b + mu.
Complex diagonal_term(const DiagonalParams& p, Complex sigma_pow_a, double shifted,
                      const Exponent& b) {
    return p.nu * sigma_pow_a - p.lambda * cpow(shifted, b) + p.mu;
}

// Diameter of a set of points lying (up to rounding) on a circle centered at
// the origin: sort by angle, pair each point with the samples closest to its
// antipode, take the largest chord. Chords are measured on the actual values.
double value_diameter(const std::vector<Complex>& z) {
    const std::size_t n = z.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> angle(n);
    for (std::size_t i = 0; i < n; ++i) angle[i] = std::atan2(z[i].imag(), z[i].real());
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return angle[a] < angle[b]; });

    std::vector<double> ext(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        ext[k] = angle[order[k]];
        ext[k + n] = angle[order[k]] + 2.0 * kPi;
    }
    double best = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double target = ext[k] + kPi;
        const auto pos = std::lower_bound(ext.begin(), ext.end(), target) - ext.begin();
        for (const long cand : {pos - 1, pos}) {
            if (cand < 0 || cand >= long(2 * n)) continue;
            const Complex other = z[order[std::size_t(cand) % n]];
            best = std::max(best, std::abs(z[order[k]] - other));
        }
    }
    return best;
}

}  // namespace

SigmaGrid::SigmaGrid(std::vector<double> sigmas) : values_(std::move(sigmas)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]) || !(values_[i] > 0.0))
            throw std::invalid_argument("SigmaGrid: sigma values must be positive");
        if (i > 0 && !(values_[i] > values_[i - 1]))
            throw std::invalid_argument("SigmaGrid: sigma values must be strictly increasing");
    }
}

SigmaGrid SigmaGrid::geometric(std::uint64_t n_max, double ratio) {
    if (n_max < 2) throw std::invalid_argument("SigmaGrid: n_max must be >= 2");
    if (!std::isfinite(ratio) || !(ratio > 1.0))
        throw std::invalid_argument("SigmaGrid: ratio must be > 1");
    std::vector<double> sigmas;
    std::uint64_t prev = 1;
    for (int k = 1;; ++k) {
        const double p = std::pow(ratio, double(k));
        if (!(p < double(n_max))) break;
        const auto n = std::uint64_t(std::ceil(p));
        if (n >= n_max) break;
        if (n > prev) {
            sigmas.push_back(0.5 * std::log(double(n)));
            prev = n;
        }
    }
    sigmas.push_back(0.5 * std::log(double(n_max)));
    return SigmaGrid(std::move(sigmas));
}

Complex limit_quantity(double alpha, double kappa, double sigma) {
    if (!std::isfinite(kappa) || !(kappa > 1.0))
        throw std::invalid_argument("limit_quantity: kappa must be > 1");
    if (!std::isfinite(sigma) || !(sigma > 0.0))
        throw std::invalid_argument("limit_quantity: sigma must be > 0");
    const Exponent a(alpha);
    const Complex ratio = cpow_diff(kappa, 1.0, a) / (kappa - 1.0);
    return std::polar(1.0, alpha * std::log(sigma)) * ratio;
}

std::vector<std::pair<double, Complex>> oscillation_path(double alpha, double kappa,
                                                         double sigma_min, double sigma_max,
                                                         std::size_t samples) {
    if (!std::isfinite(sigma_min) || !std::isfinite(sigma_max) || !(sigma_min > 0.0) ||
        !(sigma_min < sigma_max))
        throw std::invalid_argument("oscillation: requires 0 < sigma_min < sigma_max");
    if (samples < 2) throw std::invalid_argument("oscillation: samples must be >= 2");
    const double lo = std::log(sigma_min);
    const double hi = std::log(sigma_max);
    std::vector<std::pair<double, Complex>> path;
    path.reserve(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        double sigma = sigma_min;
        if (j + 1 == samples) {
            sigma = sigma_max;
        } else if (j > 0) {
            sigma = std::exp(lo + (hi - lo) * (double(j) / double(samples - 1)));
        }
        path.emplace_back(sigma, limit_quantity(alpha, kappa, sigma));
    }
    return path;
}

OscillationReport oscillation(double alpha, double kappa, double sigma_min, double sigma_max,
                              std::size_t samples) {
    const auto path = oscillation_path(alpha, kappa, sigma_min, sigma_max, samples);
    std::vector<Complex> values;
    values.reserve(path.size());
    for (const auto& point : path) values.push_back(point.second);

    OscillationReport report;
    report.alpha = alpha;
    report.kappa = kappa;
    report.sigma_min = sigma_min;
    report.sigma_max = sigma_max;
    report.radius = abs_pow_diff(kappa, 1.0, Exponent(alpha)) / (kappa - 1.0);
    report.oscillation = value_diameter(values);
    report.samples = samples;
    return report;
}

double diagonal_residual(double alpha, double beta, const DiagonalParams& p,
                         const SigmaGrid& grid) {
    if (grid.empty()) throw std::invalid_argument("diagonal_residual: empty grid");
    if (!(std::abs(p.lambda) > 0.0))
        throw std::invalid_argument("diagonal_residual: lambda must be nonzero");
    const Exponent a(alpha), b(beta);
    const double shift = std::log(std::abs(p.lambda));
    double worst = 0.0;
    for (const double sigma : grid.values()) {
        const double shifted = sigma + shift;
        if (!(shifted > 0.0))
            throw std::domain_error("diagonal_residual: sigma + log|lambda| = " +
                                    std::to_string(shifted) + " <= 0 at grid point sigma = " +
                                    std::to_string(sigma));
        worst = std::max(worst, std::abs(diagonal_term(p, cpow(sigma, a), shifted, b)));
    }
    return worst;
}

FitReport diagonal_fit(double alpha, double beta, const SigmaGrid& grid,
                       const FitConfig& config) {
    if (grid.empty()) throw std::invalid_argument("diagonal_fit: empty grid");
    if (config.restarts == 0) throw std::invalid_argument("diagonal_fit: restarts must be >= 1");
    const Exponent a(alpha), b(beta);

    const std::vector<double>& sigmas = grid.values();
    std::vector<Complex> pow_a;
    pow_a.reserve(sigmas.size());
    for (const double sigma : sigmas) pow_a.push_back(cpow(sigma, a));

    // x = (log r, theta, Re mu, Im mu, Re nu, Im nu), lambda = r e^(i theta)
    auto params_from = [](const std::vector<double>& x) {
        DiagonalParams p;
        p.lambda = std::polar(std::exp(x[0]), x[1]);
        p.mu = {x[2], x[3]};
        p.nu = {x[4], x[5]};
        return p;
    };
    auto objective = [&](const std::vector<double>& x) {
        if (!std::isfinite(x[0]) || std::exp(x[0]) == 0.0) return 1e300;
        const DiagonalParams p = params_from(x);
        const double shift = std::log(std::abs(p.lambda));
        if (!(sigmas.front() + shift > 0.0)) return 1e300;  // infeasible: power undefined
        double worst = 0.0;
        for (std::size_t i = 0; i < sigmas.size(); ++i)
            worst = std::max(worst, std::abs(diagonal_term(p, pow_a[i], sigmas[i] + shift, b)));
        return worst;
    };

    const std::vector<double> steps = {0.25, 0.5, 0.5, 0.5, 0.5, 0.5};
    std::vector<NelderMeadResult> outcomes(config.restarts);
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t r = cursor.fetch_add(1);
            if (r >= config.restarts) return;
            Rng rng(derive_seed(config.seed, r));
            std::vector<double> x0;
            if (r == 0) {
                x0 = {0.0, 0.0, 0.0, 0.0, 1.0, 0.0};  // exactly (1, 0, 1)
            } else if (r % 2 == 1) {
                x0 = {uniform(rng, -0.25, 0.25), uniform(rng, -0.5, 0.5),
                      uniform(rng, -0.5, 0.5),   uniform(rng, -0.5, 0.5),
                      1.0 + uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5)};
            } else {
                const double nu_mod = std::exp(uniform(rng, -0.7, 0.7));
                const double nu_arg = uniform(rng, 0.0, 2.0 * kPi);
                x0 = {0.0,
                      uniform(rng, 0.0, 2.0 * kPi),
                      uniform(rng, -1.0, 1.0),
                      uniform(rng, -1.0, 1.0),
                      nu_mod * std::cos(nu_arg),
                      nu_mod * std::sin(nu_arg)};
            }
            outcomes[r] = nelder_mead(objective, x0, steps, config.max_evals_per_restart);
        }
    };

    unsigned threads = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
    threads = std::max(1u, std::min<unsigned>(threads, unsigned(config.restarts)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::size_t best_index = 0;
    std::size_t total_evals = 0;
    bool improved = false;
    for (std::size_t r = 0; r < config.restarts; ++r) {
        total_evals += outcomes[r].evaluations;
        improved = improved || outcomes[r].improved;
        if (outcomes[r].value < outcomes[best_index].value) best_index = r;
    }

    FitReport report;
    report.alpha = alpha;
    report.beta = beta;
    report.grid = sigmas;
    report.best = params_from(outcomes[best_index].x);
    report.residual = diagonal_residual(alpha, beta, report.best, grid);
    report.restarts = config.restarts;
    report.evaluations = total_evals;
    report.seed = config.seed;
    report.improved = improved;
    return report;
}

namespace {

// X = 2 (1 + 2 sqrt(1 + beta^2)) / delta with every step rounded in the given
// direction; all quantities are positive, so the chain brackets the exact X.
void witness_exponent(mpfr_t out, double delta, double beta, mpfr_rnd_t rnd) {
    mpfr_set_d(out, beta, MPFR_RNDN);  // doubles are exact
    mpfr_sqr(out, out, rnd);
    mpfr_add_ui(out, out, 1, rnd);
    mpfr_sqrt(out, out, rnd);
    mpfr_mul_2ui(out, out, 1, rnd);
    mpfr_add_ui(out, out, 1, rnd);
    mpfr_mul_2ui(out, out, 1, rnd);
    mpfr_div_d(out, out, delta, rnd);
}

// 1 + 2|b| = 1 + 2 sqrt(1 + beta^2), directed.
void witness_threshold(mpfr_t out, double beta, mpfr_rnd_t rnd) {
    mpfr_set_d(out, beta, MPFR_RNDN);
    mpfr_sqr(out, out, rnd);
    mpfr_add_ui(out, out, 1, rnd);
    mpfr_sqrt(out, out, rnd);
    mpfr_mul_2ui(out, out, 1, rnd);
    mpfr_add_ui(out, out, 1, rnd);
}

void require_witness_inputs(double delta, double beta) {
    if (!std::isfinite(delta) || !(delta > 0.0))
        throw std::invalid_argument("contradiction witness: delta must be positive");
    if (!std::isfinite(beta))
        throw std::invalid_argument("contradiction witness: beta must be finite");
}

}  // namespace

mpz_class contradiction_witness(double delta, double beta) {
    require_witness_inputs(delta, beta);
    const double estimate = 2.0 * (1.0 + 2.0 * std::hypot(1.0, beta)) / delta;
    if (estimate > 1.0e8)
        throw std::overflow_error("contradiction_witness: exponent " + std::to_string(estimate) +
                                  " is beyond the supported range");
    mpz_class floor_value;
    for (auto prec = mpfr_prec_t(estimate * 1.4427) + 64;; prec += 64) {
        mpfr_t lo, hi;
        mpfr_init2(lo, prec);
        mpfr_init2(hi, prec);
        witness_exponent(lo, delta, beta, MPFR_RNDD);
        witness_exponent(hi, delta, beta, MPFR_RNDU);
        mpfr_exp(lo, lo, MPFR_RNDD);
        mpfr_exp(hi, hi, MPFR_RNDU);
        mpfr_floor(lo, lo);
        mpfr_floor(hi, hi);
        const bool settled = mpfr_cmp(lo, hi) == 0;
        if (settled) mpfr_get_z(floor_value.get_mpz_t(), lo, MPFR_RNDN);
        mpfr_clear(lo);
        mpfr_clear(hi);
        // The brackets only fail to settle when e^X is within rounding of an
        // integer; exact ties are impossible (X != 0 is algebraic in delta
        // and beta, so e^X is irrational), hence widening terminates.
        if (settled) return floor_value + 1;
    }
}

bool witness_inequality_holds(const mpz_class& n, double delta, double beta) {
    require_witness_inputs(delta, beta);
    if (n < 1) throw std::invalid_argument("witness_inequality_holds: n must be >= 1");
    for (mpfr_prec_t prec = 128;; prec *= 2) {
        mpfr_t lhs_lo, lhs_hi, rhs_lo, rhs_hi;
        mpfr_init2(lhs_lo, prec);
        mpfr_init2(lhs_hi, prec);
        mpfr_init2(rhs_lo, prec);
        mpfr_init2(rhs_hi, prec);
        // lhs = delta * log(sqrt n) = (delta / 2) log n
        mpfr_set_z(lhs_lo, n.get_mpz_t(), MPFR_RNDD);
        mpfr_log(lhs_lo, lhs_lo, MPFR_RNDD);
        mpfr_mul_d(lhs_lo, lhs_lo, delta, MPFR_RNDD);
        mpfr_div_2ui(lhs_lo, lhs_lo, 1, MPFR_RNDD);
        mpfr_set_z(lhs_hi, n.get_mpz_t(), MPFR_RNDU);
        mpfr_log(lhs_hi, lhs_hi, MPFR_RNDU);
        mpfr_mul_d(lhs_hi, lhs_hi, delta, MPFR_RNDU);
        mpfr_div_2ui(lhs_hi, lhs_hi, 1, MPFR_RNDU);
        witness_threshold(rhs_lo, beta, MPFR_RNDD);
        witness_threshold(rhs_hi, beta, MPFR_RNDU);
        const bool certainly_true = mpfr_cmp(lhs_lo, rhs_hi) > 0;
        const bool certainly_false = mpfr_cmp(lhs_hi, rhs_lo) < 0;
        mpfr_clear(lhs_lo);
        mpfr_clear(lhs_hi);
        mpfr_clear(rhs_lo);
        mpfr_clear(rhs_hi);
        if (certainly_true) return true;
        if (certainly_false) return false;
        // undecided: same no-exact-tie argument as in contradiction_witness
    }
}

double proof_bound_K(double c, double m_bound, double beta, double sigma, double tau) {
    if (!std::isfinite(c) || !(c > 0.0))
        throw std::invalid_argument("proof_bound_K: c must be positive");
    if (std::isnan(m_bound) || !(m_bound > 0.0))
        throw std::invalid_argument("proof_bound_K: M must be positive");
    if (!std::isfinite(beta)) throw std::invalid_argument("proof_bound_K: beta must be finite");
    if (!std::isfinite(sigma) || !std::isfinite(tau) || !(sigma >= 0.0) || !(tau > sigma))
        throw std::invalid_argument("proof_bound_K: requires tau > sigma >= 0");
    const double mod = std::hypot(1.0, beta);
    return (mod * tau * tau / m_bound + 4.0 + 4.0 * mod) / (c * (tau - sigma));
}

double two_point_difference(double alpha, double sigma1, double tau1, double sigma2,
                            double tau2) {
    const Exponent a(alpha);
    for (const auto& [sigma, tau] : {std::pair{sigma1, tau1}, std::pair{sigma2, tau2}}) {
        if (!std::isfinite(sigma) || !std::isfinite(tau) || !(sigma > 0.0) || !(tau > sigma))
            throw std::invalid_argument("two_point_difference: requires tau > sigma > 0");
    }
    const Complex q1 = cpow_diff(tau1, sigma1, a) / (tau1 - sigma1);
    const Complex q2 = cpow_diff(tau2, sigma2, a) / (tau2 - sigma2);
    return std::abs(q1 - q2);
}

}  // namespace z2lab
