#include "z2lab/obstruction.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "test_support.hpp"
#include "z2lab/rng.hpp"

using namespace z2lab;
using z2lab::testing::close;
using z2lab::testing::close_rel;

namespace {

constexpr double kPi = 3.14159265358979323846;

double brute_force_diameter(const std::vector<std::pair<double, Complex>>& path) {
    double best = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i)
        for (std::size_t j = i + 1; j < path.size(); ++j)
            best = std::max(best, std::abs(path[i].second - path[j].second));
    return best;
}

}  // namespace

TEST_CASE("geometric sigma grid doubles N up to the cap") {
    const SigmaGrid grid = SigmaGrid::geometric(1 << 20);
    REQUIRE(grid.size() == 20);
    CHECK(grid.values().front() == 0.5 * std::log(2.0));
    CHECK(grid.sigma_max() == 0.5 * std::log(1048576.0));
    for (std::size_t i = 1; i < grid.size(); ++i)
        CHECK(grid.values()[i] > grid.values()[i - 1]);

    // a non-power-of-two cap is appended as the last point
    const SigmaGrid capped = SigmaGrid::geometric(1000000);
    CHECK(capped.sigma_max() == 0.5 * std::log(1000000.0));
    CHECK(close_rel(capped.sigma_max(), 6.907755278982137052053974, 1e-15));
    CHECK(capped.values()[capped.size() - 2] == 0.5 * std::log(524288.0));

    CHECK(SigmaGrid::geometric(2).size() == 1);

    const SigmaGrid slow = SigmaGrid::geometric(64, 1.5);
    for (std::size_t i = 1; i < slow.size(); ++i)
        CHECK(slow.values()[i] > slow.values()[i - 1]);
}

TEST_CASE("sigma grid validation") {
    CHECK_THROWS_AS(SigmaGrid::geometric(1), std::invalid_argument);
    CHECK_THROWS_AS(SigmaGrid::geometric(100, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SigmaGrid({1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(SigmaGrid({-1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(SigmaGrid({0.0}), std::invalid_argument);
    CHECK(SigmaGrid().empty());
}

TEST_CASE("limit quantity at alpha 0 collapses to 1") {
    for (const double kappa : {1.5, 2.0, 10.0}) {
        for (const double sigma : {0.25, 1.0, 1e6}) {
            const Complex z = limit_quantity(0.0, kappa, sigma);
            CHECK(z.real() == 1.0);
            CHECK(z.imag() == 0.0);
        }
    }
}

TEST_CASE("limit quantity matches the high-precision oracle") {
    const Complex at_e = limit_quantity(1.0, std::exp(1.0), 1.0);
    CHECK(close(at_e, {0.2727689556818567877440242, 1.331187497472485120829808}, 1e-14));
    const Complex generic = limit_quantity(0.3, 3.0, 7.0);
    CHECK(close(generic, {0.4994437261476301670758738, 0.9117511814726127591539361}, 1e-14));
}

TEST_CASE("limit quantity modulus does not depend on sigma") {
    for (const double alpha : {0.5, 1.0, 3.0, -2.0}) {
        for (const double kappa : {1.0 + 1e-9, 2.0, std::exp(1.0), 100.0}) {
            double lo = 1e300, hi = 0.0;
            for (const double sigma : {1.0, 10.0, 1e3, 1e6}) {
                const double mod = std::abs(limit_quantity(alpha, kappa, sigma));
                lo = std::min(lo, mod);
                hi = std::max(hi, mod);
            }
            CHECK(hi - lo <= 1e-12 * hi);
        }
    }
}

TEST_CASE("limit quantity validation") {
    CHECK_THROWS_AS(limit_quantity(1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(limit_quantity(1.0, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(limit_quantity(1.0, 2.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(limit_quantity(1.0, 2.0, -3.0), std::invalid_argument);
}

TEST_CASE("oscillation path hits both endpoints in order") {
    const auto path = oscillation_path(1.0, 2.0, 0.5, 32.0, 7);
    REQUIRE(path.size() == 7);
    CHECK(path.front().first == 0.5);
    CHECK(path.back().first == 32.0);
    for (std::size_t i = 1; i < path.size(); ++i) CHECK(path[i].first > path[i - 1].first);
}

TEST_CASE("oscillation vanishes exactly at alpha 0") {
    for (const double kappa : {1.2, 2.0, 50.0}) {
        const OscillationReport report = oscillation(0.0, kappa, 1.0, 100.0, 512);
        CHECK(report.oscillation == 0.0);
        CHECK(report.samples == 512);
        CHECK(report.alpha == 0.0);
        CHECK(report.kappa == kappa);
    }
}

TEST_CASE("dense phase coverage reaches the full diameter") {
    const OscillationReport report = oscillation(1.0, std::exp(1.0), 1.0, std::exp(10.0), 10000);
    CHECK(close_rel(report.radius, 1.358846222576649153753611, 1e-13));
    CHECK(report.oscillation <= 2.0 * report.radius + 1e-12);
    CHECK(report.oscillation >= 2.0 * report.radius * (1.0 - 1e-3));

    // span just above 2 pi with coarse sampling
    const OscillationReport coarse = oscillation(1.0, 2.0, 1.0, std::exp(7.0), 64);
    const double floor = 2.0 * coarse.radius * (1.0 - kPi * kPi / (64.0 * 64.0));
    CHECK(coarse.oscillation >= floor);
    CHECK(coarse.oscillation <= 2.0 * coarse.radius + 1e-12);
}

TEST_CASE("tiny phase arc gives the chord of the arc") {
    const OscillationReport report = oscillation(0.01, 2.0, 1.0, std::exp(1.0), 500);
    const double arc_chord = 2.0 * report.radius * std::sin(0.005);
    CHECK(report.oscillation <= arc_chord * (1.0 + 1e-12));
    CHECK(close_rel(report.oscillation, arc_chord, 1e-10));
}

TEST_CASE("oscillation agrees with the quadratic-time diameter") {
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const double alpha = uniform(rng, -4.0, 4.0);
        const double kappa = 1.0 + std::exp(uniform(rng, -3.0, 3.0));
        const double sigma_min = std::exp(uniform(rng, -2.0, 2.0));
        const double sigma_max = sigma_min * std::exp(uniform(rng, 0.5, 8.0));
        const std::size_t samples = 2 + std::size_t(uniform(rng, 0.0, 200.0));
        const OscillationReport report = oscillation(alpha, kappa, sigma_min, sigma_max, samples);
        const double brute = brute_force_diameter(
            oscillation_path(alpha, kappa, sigma_min, sigma_max, samples));
        CHECK(std::abs(report.oscillation - brute) <= 1e-13 * std::max(1.0, brute));
        CHECK(report.oscillation <= 2.0 * report.radius + 1e-12);
    }
}

TEST_CASE("oscillation is even in alpha") {
    const OscillationReport plus = oscillation(1.3, 2.5, 0.7, 900.0, 257);
    const OscillationReport minus = oscillation(-1.3, 2.5, 0.7, 900.0, 257);
    CHECK(close_rel(plus.oscillation, minus.oscillation, 1e-13));
}

TEST_CASE("oscillation validation") {
    CHECK_THROWS_AS(oscillation(1.0, 1.0, 1.0, 2.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(oscillation(1.0, 2.0, 0.0, 2.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(oscillation(1.0, 2.0, 3.0, 2.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(oscillation(1.0, 2.0, 1.0, 2.0, 1), std::invalid_argument);
}

TEST_CASE("diagonal residual is zero on the identity parameters when alpha = beta") {
    const SigmaGrid grid = SigmaGrid::geometric(1024);
    for (const double alpha : {0.0, 0.7, 2.0}) {
        CHECK(diagonal_residual(alpha, alpha, DiagonalParams{}, grid) == 0.0);
    }
    // phase freedom: any unimodular lambda = nu with mu = 0 stays within rounding
    const Complex lambda = std::polar(1.0, 2.2);
    const DiagonalParams rotated{lambda, {0.0, 0.0}, lambda};
    CHECK(diagonal_residual(0.7, 0.7, rotated, grid) <= 1e-12);
}

TEST_CASE("diagonal residual matches the oracle") {
    const DiagonalParams p{{1.2, 0.5}, {-0.2, 0.1}, {1.1, -0.7}};
    const double r = diagonal_residual(0.8, -0.4, p, SigmaGrid::geometric(1024));
    CHECK(close_rel(r, 2.758209662233326143574036, 1e-13));

    // identity parameters across twists: max |sigma^(1+i) - sigma| at sigma_max
    const double id = diagonal_residual(1.0, 0.0, DiagonalParams{}, SigmaGrid::geometric(1000000));
    CHECK(close_rel(id, 11.36741832740931521009159, 1e-13));
}

TEST_CASE("diagonal residual conjugation symmetry") {
    Rng rng(77);
    const SigmaGrid grid = SigmaGrid::geometric(256);
    for (int trial = 0; trial < 50; ++trial) {
        const double alpha = uniform(rng, -3.0, 3.0);
        const double beta = uniform(rng, -3.0, 3.0);
        DiagonalParams p;
        p.lambda = std::polar(std::exp(uniform(rng, -0.3, 1.0)), uniform(rng, 0.0, 2.0 * kPi));
        p.mu = {uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
        p.nu = {uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
        const DiagonalParams conj_p{std::conj(p.lambda), std::conj(p.mu), std::conj(p.nu)};
        const double direct = diagonal_residual(alpha, beta, p, grid);
        const double mirrored = diagonal_residual(-alpha, -beta, conj_p, grid);
        CHECK(close_rel(mirrored, direct, 1e-14));
    }
}

TEST_CASE("diagonal residual validation") {
    const SigmaGrid grid = SigmaGrid::geometric(16);
    CHECK_THROWS_AS(diagonal_residual(0.0, 0.0, DiagonalParams{{0.0, 0.0}, {}, {}}, grid),
                    std::invalid_argument);
    CHECK_THROWS_AS(diagonal_residual(0.0, 0.0, DiagonalParams{}, SigmaGrid()),
                    std::invalid_argument);
    // |lambda| so small that sigma + log|lambda| dips below zero
    const DiagonalParams tiny{{1e-5, 0.0}, {}, {1.0, 0.0}};
    CHECK_THROWS_WITH_AS(diagonal_residual(0.0, 0.0, tiny, grid),
                         doctest::Contains("grid point"), std::domain_error);
}

TEST_CASE("diagonal fit finds the exact zero when alpha = beta") {
    const SigmaGrid grid = SigmaGrid::geometric(256);
    FitConfig config;
    config.restarts = 8;
    config.seed = 11;
    for (const double alpha : {0.0, 0.7}) {
        const FitReport report = diagonal_fit(alpha, alpha, grid, config);
        CHECK(report.residual == 0.0);  // restart 0 starts on the exact zero
        CHECK(report.alpha == alpha);
        CHECK(report.beta == alpha);
        CHECK(report.grid == grid.values());
        CHECK(report.restarts == 8);
        CHECK(report.seed == 11);
        CHECK(report.evaluations >= 8 * 7);
    }
}

TEST_CASE("diagonal fit residual grows with the grid for distinct twists") {
    FitConfig config;
    config.restarts = 8;
    config.seed = 3;
    const FitReport small = diagonal_fit(1.0, 0.0, SigmaGrid::geometric(1 << 8), config);
    const FitReport large = diagonal_fit(1.0, 0.0, SigmaGrid::geometric(1 << 14), config);
    CHECK(small.residual > 0.01);
    CHECK(large.residual > small.residual);
    // the best parameters stay feasible and reproduce the reported residual
    CHECK(diagonal_residual(1.0, 0.0, small.best, SigmaGrid::geometric(1 << 8)) ==
          small.residual);
}

TEST_CASE("nearby twists still separate once the grid reaches far enough") {
    // beta - alpha = 1e-3 is a tiny perturbation, but on a log-spaced grid
    // out to sigma = 1000 the best diagonal parameters stay visibly short of
    // matching the two power laws.
    std::vector<double> sigmas;
    sigmas.reserve(120);
    for (int i = 0; i < 120; ++i)
        sigmas.push_back(0.35 * std::pow(1000.0 / 0.35, i / 119.0));
    const SigmaGrid grid{std::move(sigmas)};
    FitConfig config;
    config.restarts = 12;
    config.seed = 5;
    config.threads = 2;
    const FitReport report = diagonal_fit(1.0, 1.0 + 1e-3, grid, config);
    CHECK(report.residual > 0.1);
    CHECK(report.residual < 0.6);
    CHECK(diagonal_residual(1.0, 1.0 + 1e-3, report.best, grid) == report.residual);
}

TEST_CASE("diagonal fit is deterministic and thread-count independent") {
    const SigmaGrid grid = SigmaGrid::geometric(512);
    FitConfig config;
    config.restarts = 6;
    config.max_evals_per_restart = 2000;
    config.seed = 42;
    const FitReport one = diagonal_fit(0.9, 0.2, grid, config);
    const FitReport two = diagonal_fit(0.9, 0.2, grid, config);
    config.threads = 3;
    const FitReport three = diagonal_fit(0.9, 0.2, grid, config);
    CHECK(one.residual == two.residual);
    CHECK(one.residual == three.residual);
    CHECK(one.best.lambda == three.best.lambda);
    CHECK(one.best.mu == three.best.mu);
    CHECK(one.best.nu == three.best.nu);
    CHECK(one.evaluations == three.evaluations);
}

TEST_CASE("diagonal fit validation") {
    CHECK_THROWS_AS(diagonal_fit(0.0, 0.0, SigmaGrid(), FitConfig{}), std::invalid_argument);
    FitConfig config;
    config.restarts = 0;
    CHECK_THROWS_AS(diagonal_fit(0.0, 0.0, SigmaGrid::geometric(16), config),
                    std::invalid_argument);
}

TEST_CASE("contradiction witness closed forms") {
    CHECK(contradiction_witness(1.0, 0.0) == 404);
    CHECK(contradiction_witness(0.7, 2.5) == 83748434);
    // delta is the binary double nearest 0.1, so the exponent is 6/fl(0.1)
    CHECK(contradiction_witness(0.1, 0.0) == mpz_class("114200738981568048001426179"));
    CHECK(contradiction_witness(1.0, 5.0) > contradiction_witness(1.0, 2.0));
}

TEST_CASE("witness is the first integer where the inequality flips") {
    CHECK(witness_inequality_holds(404, 1.0, 0.0));
    CHECK_FALSE(witness_inequality_holds(403, 1.0, 0.0));
    CHECK_FALSE(witness_inequality_holds(1, 1.0, 0.0));

    Rng rng(555);
    for (int trial = 0; trial < 25; ++trial) {
        const double delta = uniform(rng, 0.05, 1.0);
        const double beta = uniform(rng, -10.0, 10.0);
        const mpz_class n = contradiction_witness(delta, beta);
        CHECK(witness_inequality_holds(n, delta, beta));
        CHECK_FALSE(witness_inequality_holds(n - 1, delta, beta));
    }
}

TEST_CASE("witness validation") {
    CHECK_THROWS_AS(contradiction_witness(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(contradiction_witness(-1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(contradiction_witness(1e-9, 0.0), std::overflow_error);
    CHECK_THROWS_AS(witness_inequality_holds(0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("proof bound K evaluates the closed form") {
    CHECK(close_rel(proof_bound_K(1.0, 100.0, 0.0, 1.0, 2.0), 8.04, 1e-15));
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(proof_bound_K(1.0, inf, 0.0, 1.0, 2.0) == 8.0);
    for (const double sigma : {0.5, 2.0, 11.0})
        CHECK(close_rel(proof_bound_K(1.0, inf, 0.0, sigma, 2.0 * sigma), 8.0 / sigma, 1e-15));

    // doubling M halves the first term only
    const double k1 = proof_bound_K(2.0, 50.0, 3.0, 1.0, 4.0);
    const double k2 = proof_bound_K(2.0, 100.0, 3.0, 1.0, 4.0);
    const double first_term = std::hypot(1.0, 3.0) * 16.0 / 100.0 / (2.0 * 3.0);
    CHECK(close_rel(k1 - k2, first_term, 1e-12));

    // monotone decreasing in M and in the gap for fixed tau
    CHECK(proof_bound_K(1.0, 10.0, 1.0, 1.0, 5.0) > proof_bound_K(1.0, 20.0, 1.0, 1.0, 5.0));
    CHECK(proof_bound_K(1.0, 10.0, 1.0, 2.0, 5.0) > proof_bound_K(1.0, 10.0, 1.0, 1.0, 5.0));
}

TEST_CASE("proof bound K validation") {
    CHECK_THROWS_AS(proof_bound_K(0.0, 1.0, 0.0, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(proof_bound_K(1.0, 0.0, 0.0, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(proof_bound_K(1.0, std::nan(""), 0.0, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(proof_bound_K(1.0, 1.0, 0.0, 2.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(proof_bound_K(1.0, 1.0, 0.0, -1.0, 2.0), std::invalid_argument);
}

TEST_CASE("two-point difference vanishes for the untwisted exponent") {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const double sigma1 = std::exp(uniform(rng, -6.0, 6.0));
        const double tau1 = sigma1 * (1.0 + std::exp(uniform(rng, -12.0, 3.0)));
        const double sigma2 = std::exp(uniform(rng, -6.0, 6.0));
        const double tau2 = sigma2 * (1.0 + std::exp(uniform(rng, -12.0, 3.0)));
        CHECK(two_point_difference(0.0, sigma1, tau1, sigma2, tau2) <= 1e-14);
    }
}

TEST_CASE("two-point difference against the oracle and its symmetries") {
    const double d = two_point_difference(0.7, 1.0, 2.0, 3.0, 5.0);
    CHECK(close_rel(d, 0.8223902598467866790285046, 1e-14));
    CHECK(two_point_difference(0.7, 3.0, 5.0, 1.0, 2.0) == d);
    CHECK(two_point_difference(0.7, 1.0, 2.0, 1.0, 2.0) == 0.0);
}

TEST_CASE("geometric rays half a phase apart separate by the full diameter") {
    // sigma_r, tau_r = kappa sigma_r turns each quotient into the limit
    // quantity; alpha log(sigma2/sigma1) = pi makes them antipodal.
    const double kappa = std::exp(1.0);
    const double sigma1 = 1000.0;
    const double sigma2 = sigma1 * std::exp(kPi);
    const double d = two_point_difference(1.0, sigma1, kappa * sigma1, sigma2, kappa * sigma2);
    CHECK(close_rel(d, 2.717692445153298307507223, 1e-12));
}

TEST_CASE("two-point difference derivative limit") {
    const double eps = 1e-6;
    const double d = two_point_difference(1.0, 2.0, 2.0 * (1.0 + eps), 5.0, 5.0 * (1.0 + eps));
    CHECK(close_rel(d, 1.250972290706233083635761, 5e-6));
}

TEST_CASE("two-point difference validation") {
    CHECK_THROWS_AS(two_point_difference(1.0, 2.0, 1.0, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(two_point_difference(1.0, 0.0, 1.0, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(two_point_difference(1.0, 1.0, 1.0, 1.0, 2.0), std::invalid_argument);
}
