#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "z2lab/kalton_peck.hpp"
#include "z2lab/seq.hpp"

namespace z2lab {

// Randomized suprema estimation for the defect quantities. Samples are drawn
// in fixed-size seeded chunks (coordinates r e^(i theta), log r uniform on
// [-20, 0]); chunk seeds depend only on the master seed and the chunk index,
// and merging is by (value, chunk order), so reports do not depend on the
// worker count.

struct CentralizerSearchConfig {
    std::size_t samples = 100000;  // random samples
    std::size_t max_dim = 512;
    std::uint64_t seed = 1;
    unsigned threads = 1;    // 0 = one per hardware thread
    bool structured = true;  // also sweep the deterministic two-level family
};

struct CentralizerSearchReport {
    double alpha = 0.0;
    std::size_t max_dim = 0;
    std::size_t samples = 0;  // total evaluations, structured sweep included
    std::uint64_t seed = 0;
    double sup_ratio = 0.0;  // largest defect found
    double bound = 0.0;      // analytic ceiling 2 sqrt(1 + alpha^2)/e
    FiniteVector best_multiplier;
    FiniteVector best_vector;
};

// sup of centralizer_defect(alpha, s, x) over random (s, x) plus a
// deterministic two-level family (one anchor coordinate, k spread
// coordinates, one damped level) that is known to get within a constant
// factor of the ceiling.
CentralizerSearchReport centralizer_search(const TwistParameter& alpha,
                                           const CentralizerSearchConfig& config = {});

struct QuasilinearitySearchConfig {
    std::size_t samples_per_dim = 10000;
    std::vector<std::size_t> dims = {2, 16, 256};
    std::uint64_t seed = 1;
    unsigned threads = 1;  // 0 = one per hardware thread
};

struct QuasilinearitySearchReport {
    double alpha = 0.0;
    std::vector<std::size_t> dims;
    std::vector<double> max_per_dim;
    std::size_t samples_per_dim = 0;
    std::uint64_t seed = 0;
    double sup_ratio = 0.0;  // max over dims
    std::size_t best_dim = 0;
    FiniteVector best_x1;
    FiniteVector best_x2;
};

// sup of quasilinearity_defect(alpha, x1, x2) over random pairs at each
// requested dimension.
QuasilinearitySearchReport quasilinearity_search(const TwistParameter& alpha,
                                                 const QuasilinearitySearchConfig& config = {});

}  // namespace z2lab
