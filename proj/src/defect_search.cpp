#include "z2lab/defect_search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "z2lab/rng.hpp"

namespace z2lab {

namespace {

constexpr std::size_t kChunk = 2048;  // samples per seeded work unit

unsigned resolve_threads(unsigned requested, std::size_t work_units) {
    unsigned threads = requested == 0 ? std::thread::hardware_concurrency() : requested;
    threads = std::max(1u, threads);
    return unsigned(std::min<std::size_t>(threads, std::max<std::size_t>(work_units, 1)));
}

template <typename Fn>
void run_chunks(std::size_t chunk_count, unsigned threads, Fn&& fn) {
    if (threads <= 1) {
        for (std::size_t i = 0; i < chunk_count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= chunk_count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

// log-uniform dimension in [1, max_dim]: small supports dominate the
// interesting configurations and keep the per-sample cost down.
std::size_t random_dim(Rng& rng, std::size_t max_dim) {
    if (max_dim <= 1) return 1;
    const double d = std::exp(uniform(rng, 0.0, std::log(double(max_dim))));
    return std::min<std::size_t>(max_dim, std::size_t(d));
}

FiniteVector random_full_vector(Rng& rng, std::size_t dim) {
    VectorBuilder builder(dim);
    for (std::size_t i = 1; i <= dim; ++i) builder.push(Index(i), random_coordinate(rng));
    return builder.take();
}

struct CentralizerBest {
    double value = -1.0;
    FiniteVector s;
    FiniteVector x;
};

void consider(CentralizerBest& best, double value, const FiniteVector& s,
              const FiniteVector& x) {
    if (value > best.value) best = {value, s, x};
}

// Two-level family: anchor mass m1 on coordinate 1, mass m2 spread over k
// coordinates, multiplier damping one side by e^(-d). Both orientations are
// tried; phases are irrelevant because the defect commutes with unimodular
// multipliers.
std::size_t structured_sweep(const TwistParameter& alpha, std::size_t max_dim,
                             CentralizerBest& best) {
    if (max_dim < 2) return 0;
    static const double kDamping[] = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 20.0};
    std::size_t evaluations = 0;
    for (std::size_t k = 1; k + 1 <= max_dim && k <= 256; k *= 2) {
        for (int tenth = 1; tenth <= 9; ++tenth) {
            const double m2 = std::sqrt(tenth / 10.0);
            const double m1 = std::sqrt(1.0 - tenth / 10.0);
            VectorBuilder xb(k + 1);
            xb.push(1, m1);
            for (std::size_t j = 0; j < k; ++j) xb.push(Index(j + 2), m2 / std::sqrt(double(k)));
            const FiniteVector x = xb.take();
            for (const double d : kDamping) {
                const double damp = std::exp(-d);
                VectorBuilder anchor_side(k + 1), spread_side(k + 1);
                anchor_side.push(1, damp);
                spread_side.push(1, 1.0);
                for (std::size_t j = 0; j < k; ++j) {
                    anchor_side.push(Index(j + 2), 1.0);
                    spread_side.push(Index(j + 2), damp);
                }
                for (const FiniteVector& s : {anchor_side.take(), spread_side.take()}) {
                    consider(best, centralizer_defect(alpha, s, x), s, x);
                    ++evaluations;
                }
            }
        }
    }
    return evaluations;
}

}  // namespace

CentralizerSearchReport centralizer_search(const TwistParameter& alpha,
                                           const CentralizerSearchConfig& config) {
    if (config.max_dim == 0)
        throw std::invalid_argument("centralizer_search: max_dim must be >= 1");

    CentralizerBest best;
    std::size_t evaluations = 0;
    if (config.structured) evaluations += structured_sweep(alpha, config.max_dim, best);

    const std::size_t chunk_count = (config.samples + kChunk - 1) / kChunk;
    std::vector<CentralizerBest> chunk_best(chunk_count);
    run_chunks(chunk_count, resolve_threads(config.threads, chunk_count), [&](std::size_t c) {
        Rng rng(derive_seed(config.seed, c));
        const std::size_t begin = c * kChunk;
        const std::size_t count = std::min(kChunk, config.samples - begin);
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t dim = random_dim(rng, config.max_dim);
            const FiniteVector x = random_full_vector(rng, dim);
            const FiniteVector s = random_full_vector(rng, dim);
            consider(chunk_best[c], centralizer_defect(alpha, s, x), s, x);
        }
    });
    for (const CentralizerBest& candidate : chunk_best)
        consider(best, candidate.value, candidate.s, candidate.x);
    evaluations += config.samples;

    CentralizerSearchReport report;
    report.alpha = alpha.alpha();
    report.max_dim = config.max_dim;
    report.samples = evaluations;
    report.seed = config.seed;
    report.sup_ratio = std::max(best.value, 0.0);
    report.bound = 2.0 * alpha.lipschitz() / std::exp(1.0);
    report.best_multiplier = best.s;
    report.best_vector = best.x;
    return report;
}

QuasilinearitySearchReport quasilinearity_search(const TwistParameter& alpha,
                                                 const QuasilinearitySearchConfig& config) {
    if (config.dims.empty())
        throw std::invalid_argument("quasilinearity_search: dims must be nonempty");
    for (const std::size_t dim : config.dims)
        if (dim == 0) throw std::invalid_argument("quasilinearity_search: dims must be >= 1");

    struct PairBest {
        double value = -1.0;
        FiniteVector x1;
        FiniteVector x2;
    };

    QuasilinearitySearchReport report;
    report.alpha = alpha.alpha();
    report.dims = config.dims;
    report.samples_per_dim = config.samples_per_dim;
    report.seed = config.seed;

    PairBest overall;
    for (std::size_t which = 0; which < config.dims.size(); ++which) {
        const std::size_t dim = config.dims[which];
        const std::uint64_t dim_seed = derive_seed(config.seed, which);
        const std::size_t chunk_count = (config.samples_per_dim + kChunk - 1) / kChunk;
        std::vector<PairBest> chunk_best(chunk_count);
        run_chunks(chunk_count, resolve_threads(config.threads, chunk_count), [&](std::size_t c) {
            Rng rng(derive_seed(dim_seed, c));
            const std::size_t begin = c * kChunk;
            const std::size_t count = std::min(kChunk, config.samples_per_dim - begin);
            for (std::size_t i = 0; i < count; ++i) {
                const FiniteVector x1 = random_full_vector(rng, dim);
                const FiniteVector x2 = random_full_vector(rng, dim);
                const double value = quasilinearity_defect(alpha, x1, x2);
                if (value > chunk_best[c].value) chunk_best[c] = {value, x1, x2};
            }
        });
        PairBest dim_best;
        for (const PairBest& candidate : chunk_best)
            if (candidate.value > dim_best.value) dim_best = candidate;
        report.max_per_dim.push_back(std::max(dim_best.value, 0.0));
        if (dim_best.value > overall.value) {
            overall = dim_best;
            report.best_dim = dim;
        }
    }
    report.sup_ratio = std::max(overall.value, 0.0);
    report.best_x1 = overall.x1;
    report.best_x2 = overall.x2;
    return report;
}

}  // namespace z2lab
