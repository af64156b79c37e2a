#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace z2lab {

// Seed derivation for independent worker streams (splitmix64 finalizer).
// Chunk results are reproducible regardless of how chunks are scheduled.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// The engine is std::mt19937_64 (fully specified by the standard); the
// distributions below are hand-rolled because the standard ones are
// implementation-defined and would break byte-identical reports.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    // rejection-free modulo is fine here: n is tiny relative to 2^64
    return rng() % n;
}

// Coordinate distribution used by all defect searches: r e^{i theta} with
// log r uniform on [-20, 0] and theta uniform on [0, 2pi).
inline std::complex<double> random_coordinate(Rng& rng) {
    const double r = std::exp(uniform(rng, -20.0, 0.0));
    const double theta = uniform(rng, 0.0, 2.0 * 3.14159265358979323846);
    return std::polar(r, theta);
}

}  // namespace z2lab
