// Experiment runner. Every subcommand writes a report carrying the config
// echo, results, library version, seed, and wall-clock time; JSON as a fixed
// envelope, CSV as a table with '#' metadata lines. Rerunning with the same
// config and seed reproduces the report byte for byte except for the
// wall_time_ms field. Exit codes: 0 ok, 1 invariant violation found while
// running, 2 invalid config.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "z2lab/defect_search.hpp"
#include "z2lab/io.hpp"
#include "z2lab/kalton_peck.hpp"
#include "z2lab/obstruction.hpp"
#include "z2lab/power.hpp"
#include "z2lab/rng.hpp"
#include "z2lab/seq.hpp"
#include "z2lab/version.hpp"

namespace {

using namespace z2lab;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kBadConfig = 2;

class Clock {
public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

struct CommonOpts {
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string out = "-";
    std::string format = "json";
    std::string config;
};

// --out and --config are output plumbing, not experiment parameters, so they
// stay out of the config echo; everything else is echoed with its resolved
// value.
void add_common(CLI::App* sub, CommonOpts& c, const char* default_format,
                bool with_threads = false) {
    c.format = default_format;
    sub->add_option("--seed", c.seed, "random seed (echoed even when unused)")
        ->capture_default_str();
    if (with_threads)
        sub->add_option("--threads", c.threads, "worker cap, 0 = one per hardware thread")
            ->capture_default_str();
    sub->add_option("--out", c.out, "output path, - = stdout")->capture_default_str();
    sub->add_option("--format", c.format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sub->add_option("--config", c.config, "flat key = value file mirroring the flags; flags win");
}

void require_json(const CommonOpts& c, const char* command) {
    if (c.format != "json")
        throw std::invalid_argument(std::string(command) + ": no CSV form, use --format json");
}

int write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return kOk;
    }
    std::ofstream f(path, std::ios::binary);
    if (f) f << text;
    if (!f) {
        std::cerr << "error: cannot write " << path << "\n";
        return kBadConfig;
    }
    return kOk;
}

int emit_json(const CommonOpts& c, const std::string& command, const Json& config,
              const Json& results, const Clock& clock, int status) {
    const Json envelope{{"schema", "z2lab-report/1"},
                        {"command", command},
                        {"version", version},
                        {"seed", c.seed},
                        {"config", config},
                        {"results", results},
                        {"wall_time_ms", clock.ms()}};
    const int w = write_output(c.out, envelope.dump(2) + "\n");
    return w != kOk ? w : status;
}

// CSV reports carry the same metadata as the JSON envelope in leading '#'
// lines; `summary` holds the flat result fields worth keeping next to the
// table.
int emit_csv(const CommonOpts& c, const std::string& command, const Json& config,
             const Json& summary, const std::string& table, const Clock& clock, int status) {
    std::string text = "# schema=z2lab-report/1\n";
    text += "# command=" + command + "\n";
    text += "# version=" + std::string(version) + "\n";
    text += "# seed=" + std::to_string(c.seed) + "\n";
    for (auto it = config.begin(); it != config.end(); ++it)
        text += "# config " + it.key() + "=" + it.value().dump() + "\n";
    for (auto it = summary.begin(); it != summary.end(); ++it)
        text += "# result " + it.key() + "=" + it.value().dump() + "\n";
    text += "# wall_time_ms=" + csv_number(clock.ms()) + "\n";
    text += table;
    const int w = write_output(c.out, text);
    return w != kOk ? w : status;
}

Json load_json_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot read " + path);
    try {
        return Json::parse(f);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument("bad JSON in " + path + ": " + e.what());
    }
}

// ---------------------------------------------------------------- norm

struct NormOpts {
    CommonOpts common;
    double alpha = 0.0;
    std::uint64_t indicator = 1;
    std::string input;
    CLI::Option* alpha_opt = nullptr;
    CLI::Option* indicator_opt = nullptr;
    CLI::Option* input_opt = nullptr;
};

// The canonical pair for the indicator family: x = xi_{1..n},
// y = sigma^a x with sigma = (1/2) log n.
TwistedVector indicator_pair(double alpha, std::uint64_t n) {
    TwistedVector v;
    v.x = indicator_range(n);
    const double sigma = 0.5 * std::log(static_cast<double>(n));
    v.y = scale(v.x, cpow(sigma, Exponent(alpha)));
    return v;
}

int run_norm(const NormOpts& o) {
    const Clock clock;
    require_json(o.common, "norm");
    const bool from_indicator = o.indicator_opt->count() > 0;
    if (from_indicator == (o.input_opt->count() > 0))
        throw std::invalid_argument("norm: give exactly one of --indicator and --input");

    double alpha;
    TwistedVector v;
    if (from_indicator) {
        if (o.alpha_opt->count() == 0)
            throw std::invalid_argument("norm: --indicator needs --alpha");
        if (o.indicator < 1) throw std::invalid_argument("norm: --indicator must be >= 1");
        alpha = o.alpha;
        v = indicator_pair(alpha, o.indicator);
    } else {
        auto [file_alpha, file_v] = twisted_from_json(load_json_file(o.input));
        alpha = o.alpha_opt->count() > 0 ? o.alpha : file_alpha;
        v = std::move(file_v);
    }

    const TwistParameter t(alpha);
    const FiniteVector residual = subtract(v.y, omega(t, v.x));

    Json config{{"alpha", alpha}, {"seed", o.common.seed}, {"format", o.common.format}};
    if (from_indicator)
        config["indicator"] = o.indicator;
    else
        config["input"] = o.input;
    const Json results{{"alpha", alpha},
                       {"quasi_norm", quasi_norm(t, v)},
                       {"x_l2", l2_norm(v.x)},
                       {"y_minus_omega_l2", l2_norm(residual)},
                       {"x_support", v.x.support_size()},
                       {"y_support", v.y.support_size()}};
    return emit_json(o.common, "norm", config, results, clock, kOk);
}

// ---------------------------------------------------------------- omega

struct OmegaOpts {
    CommonOpts common;
    double alpha = 0.0;
    std::uint64_t indicator = 1;
    std::string input;
    CLI::Option* indicator_opt = nullptr;
    CLI::Option* input_opt = nullptr;
};

int run_omega(const OmegaOpts& o) {
    const Clock clock;
    const bool from_indicator = o.indicator_opt->count() > 0;
    if (from_indicator == (o.input_opt->count() > 0))
        throw std::invalid_argument("omega: give exactly one of --indicator and --input");
    if (from_indicator && o.indicator < 1)
        throw std::invalid_argument("omega: --indicator must be >= 1");

    const FiniteVector x =
        from_indicator ? indicator_range(o.indicator) : vector_from_json(load_json_file(o.input));
    const FiniteVector w = omega(TwistParameter(o.alpha), x);

    Json config{{"alpha", o.alpha}, {"seed", o.common.seed}, {"format", o.common.format}};
    if (from_indicator)
        config["indicator"] = o.indicator;
    else
        config["input"] = o.input;
    const Json summary{{"alpha", o.alpha}, {"x_l2", l2_norm(x)}, {"omega_l2", l2_norm(w)}};
    if (o.common.format == "csv")
        return emit_csv(o.common, "omega", config, summary, vector_to_csv(w), clock, kOk);
    Json results = summary;
    results["omega"] = vector_to_json(w);
    return emit_json(o.common, "omega", config, results, clock, kOk);
}

// ---------------------------------------------------------------- bounds-check / inequalities

struct BoundsOpts {
    CommonOpts common;
    std::size_t samples = 100000;
    double tmax = 1000.0;
    double beta_max = 10.0;
    double tol = kDefaultIneqTol;
    std::string check = "all";
};

constexpr const char* kKindNames[3] = {"lower", "upper", "taylor"};

InequalityCheck eval_kind(int kind, double t, double s, const Exponent& b, double tol) {
    switch (kind) {
        case 0: return check_lower(t, s, b, tol);
        case 1: return check_upper(t, s, b, tol);
        default: return check_taylor(t, s, b, tol);
    }
}

struct KindStats {
    std::size_t violations = 0;
    bool maximize = true;  // worst ratio direction: lhs/rhs small is bad for "lower"
    double worst_ratio = 0.0;
    Json first_violations = Json::array();

    void init(bool maximize_) {
        maximize = maximize_;
        worst_ratio = maximize ? 0.0 : std::numeric_limits<double>::infinity();
    }
    void update(double t, double s, double beta, const InequalityCheck& c) {
        const double ratio = c.lhs / c.rhs;
        worst_ratio = maximize ? std::max(worst_ratio, ratio) : std::min(worst_ratio, ratio);
        if (!c.holds) {
            ++violations;
            if (first_violations.size() < 5)
                first_violations.push_back(Json::array({t, s, beta, c.lhs, c.rhs}));
        }
    }
    Json to_json() const {
        return Json{{"violations", violations},
                    {"worst_ratio", worst_ratio},
                    {"first_violations", first_violations}};
    }
};

std::vector<int> parse_kinds(const std::string& check) {
    if (check == "all") return {0, 1, 2};
    for (int k = 0; k < 3; ++k)
        if (check == kKindNames[k]) return {k};
    throw std::invalid_argument("unknown check: " + check);
}

// t, s on (0, tmax]; every fourth pair is a near-tie with log-uniform
// relative gap down to 1e-15, where the cancellation-free evaluation is
// actually exercised.
void draw_pair(Rng& rng, double tmax, std::size_t i, double& t, double& s) {
    if (i % 4 == 3) {
        s = 0.5 * tmax * (1.0 - uniform01(rng));
        t = s * (1.0 + std::pow(10.0, uniform(rng, -15.0, 0.0)));
    } else {
        do {
            t = tmax * (1.0 - uniform01(rng));
            s = tmax * (1.0 - uniform01(rng));
            if (t < s) std::swap(t, s);
        } while (t == s);
    }
}

std::size_t run_ineq_sweep(std::size_t samples, double tmax, double beta_max, double tol,
                           std::uint64_t seed, const std::vector<int>& kinds,
                           std::string* csv_rows, KindStats stats[3]) {
    stats[0].init(false);
    stats[1].init(true);
    stats[2].init(true);
    Rng rng(seed);
    for (std::size_t i = 0; i < samples; ++i) {
        double t, s;
        draw_pair(rng, tmax, i, t, s);
        const double beta = uniform(rng, -beta_max, beta_max);
        const Exponent b(beta);
        for (int k : kinds) {
            const InequalityCheck c = eval_kind(k, t, s, b, tol);
            stats[k].update(t, s, beta, c);
            if (csv_rows) {
                *csv_rows += csv_number(t) + ',' + csv_number(s) + ',' + csv_number(beta) + ',' +
                             csv_number(c.lhs) + ',' + csv_number(c.rhs) + ',' +
                             (c.holds ? '1' : '0') + '\n';
            }
        }
    }
    return stats[0].violations + stats[1].violations + stats[2].violations;
}

int run_bounds_check(const BoundsOpts& o) {
    const Clock clock;
    if (o.samples < 1) throw std::invalid_argument("bounds-check: --samples must be >= 1");
    if (!(o.tmax > 0.0) || !std::isfinite(o.tmax))
        throw std::invalid_argument("bounds-check: --tmax must be positive and finite");
    if (!(o.beta_max >= 0.0) || !std::isfinite(o.beta_max))
        throw std::invalid_argument("bounds-check: --beta-max must be >= 0 and finite");
    const std::vector<int> kinds = parse_kinds(o.check);
    const bool csv = o.common.format == "csv";
    if (csv && kinds.size() != 1)
        throw std::invalid_argument("bounds-check: CSV needs a single --check, not \"all\"");

    std::string rows;
    KindStats stats[3];
    const std::size_t violations =
        run_ineq_sweep(o.samples, o.tmax, o.beta_max, o.tol, o.common.seed, kinds,
                       csv ? &rows : nullptr, stats);
    const int status = violations == 0 ? kOk : kViolation;

    const Json config{{"samples", o.samples}, {"tmax", o.tmax},   {"beta_max", o.beta_max},
                      {"tol", o.tol},         {"check", o.check}, {"seed", o.common.seed},
                      {"format", o.common.format}};
    if (csv) {
        const Json summary{{"violations_total", violations},
                           {"worst_ratio", stats[kinds[0]].worst_ratio}};
        return emit_csv(o.common, "bounds-check", config, summary,
                        "t,s,beta,lhs,rhs,holds\n" + rows, clock, status);
    }
    Json checks = Json::object();
    for (int k : kinds) checks[kKindNames[k]] = stats[k].to_json();
    const Json results{
        {"samples", o.samples}, {"checks", checks}, {"violations_total", violations}};
    return emit_json(o.common, "bounds-check", config, results, clock, status);
}

// ---------------------------------------------------------------- omega-gap

struct GapOpts {
    CommonOpts common;
    double beta = 0.0;
    std::size_t samples = 1000;
    std::size_t max_dim = 64;
    std::string input;
    CLI::Option* input_opt = nullptr;
};

int run_omega_gap(const GapOpts& o) {
    const Clock clock;
    require_json(o.common, "omega-gap");
    const TwistParameter beta(o.beta);

    std::size_t checked = 0;
    std::size_t failures = 0;
    double max_gap = 0.0;
    double min_margin = std::numeric_limits<double>::infinity();
    auto consider = [&](const FiniteVector& w) {
        const OmegaGapCheck c = omega_gap(beta, w);
        ++checked;
        if (!c.holds) ++failures;
        max_gap = std::max(max_gap, c.gap);
        min_margin = std::min(min_margin, c.bound - c.gap);
    };

    if (o.input_opt->count() > 0) {
        consider(vector_from_json(load_json_file(o.input)));
    } else {
        if (o.samples < 1) throw std::invalid_argument("omega-gap: --samples must be >= 1");
        if (o.max_dim < 1) throw std::invalid_argument("omega-gap: --max-dim must be >= 1");
        Rng rng(o.common.seed);
        for (std::size_t i = 0; i < o.samples; ++i) {
            const double span = std::log(static_cast<double>(o.max_dim));
            auto dim = static_cast<std::size_t>(std::exp(uniform(rng, 0.0, span)));
            dim = std::clamp<std::size_t>(dim, 1, o.max_dim);
            VectorBuilder vb(dim);
            for (std::size_t n = 1; n <= dim; ++n) vb.push(n, random_coordinate(rng));
            FiniteVector w = vb.take();
            // ||w||_2 scaled into (0, 1); sup_norm <= l2_norm holds exactly,
            // so the unit-ball requirement is safe by the 1e-12 margin
            const double target = uniform01(rng) * (1.0 - 1e-12);
            w = scale(w, Complex(target / l2_norm(w), 0.0));
            consider(w);
        }
    }

    Json config{{"beta", o.beta}, {"seed", o.common.seed}, {"format", o.common.format}};
    if (o.input_opt->count() > 0)
        config["input"] = o.input;
    else {
        config["samples"] = o.samples;
        config["max_dim"] = o.max_dim;
    }
    const Json results{{"beta", o.beta},
                       {"checked", checked},
                       {"failures", failures},
                       {"max_gap", max_gap},
                       {"min_margin", min_margin}};
    return emit_json(o.common, "omega-gap", config, results, clock,
                     failures == 0 ? kOk : kViolation);
}

// ---------------------------------------------------------------- defect searches

struct CentOpts {
    CommonOpts common;
    double alpha = 0.0;
    std::size_t samples = 100000;
    std::size_t max_dim = 512;
    bool structured = true;
};

int run_centralizer(const CentOpts& o) {
    const Clock clock;
    require_json(o.common, "centralizer-search");
    CentralizerSearchConfig cfg;
    cfg.samples = o.samples;
    cfg.max_dim = o.max_dim;
    cfg.seed = o.common.seed;
    cfg.threads = o.common.threads;
    cfg.structured = o.structured;
    const CentralizerSearchReport rep = centralizer_search(TwistParameter(o.alpha), cfg);
    const bool violated = rep.sup_ratio > rep.bound + 1e-9;

    const Json config{{"alpha", o.alpha},         {"samples", o.samples},
                      {"max_dim", o.max_dim},     {"structured", o.structured},
                      {"seed", o.common.seed},    {"threads", o.common.threads},
                      {"format", o.common.format}};
    Json results = report_to_json(rep);
    results["bound_violated"] = violated;
    return emit_json(o.common, "centralizer-search", config, results, clock,
                     violated ? kViolation : kOk);
}

struct QuasiOpts {
    CommonOpts common;
    double alpha = 0.0;
    std::size_t samples_per_dim = 10000;
    std::vector<std::size_t> dims = {2, 16, 256};
};

int run_quasilinearity(const QuasiOpts& o) {
    const Clock clock;
    require_json(o.common, "quasilinearity-search");
    QuasilinearitySearchConfig cfg;
    cfg.samples_per_dim = o.samples_per_dim;
    cfg.dims = o.dims;
    cfg.seed = o.common.seed;
    cfg.threads = o.common.threads;
    const QuasilinearitySearchReport rep = quasilinearity_search(TwistParameter(o.alpha), cfg);

    const Json config{{"alpha", o.alpha},
                      {"samples_per_dim", o.samples_per_dim},
                      {"dims", o.dims},
                      {"seed", o.common.seed},
                      {"threads", o.common.threads},
                      {"format", o.common.format}};
    return emit_json(o.common, "quasilinearity-search", config, report_to_json(rep), clock, kOk);
}

// ---------------------------------------------------------------- oscillation

struct OscOpts {
    CommonOpts common;
    double alpha = 0.0;
    double kappa = 2.0;
    double sigma_min = 1.0;
    double sigma_max = 100.0;
    std::size_t samples = 1024;
};

bool oscillation_out_of_bounds(const OscillationReport& r) {
    return !(r.oscillation >= 0.0) || r.oscillation > 2.0 * r.radius * (1.0 + 1e-12);
}

int run_oscillation(const OscOpts& o) {
    const Clock clock;
    const OscillationReport rep =
        oscillation(o.alpha, o.kappa, o.sigma_min, o.sigma_max, o.samples);
    const int status = oscillation_out_of_bounds(rep) ? kViolation : kOk;

    const Json config{{"alpha", o.alpha},         {"kappa", o.kappa},
                      {"sigma_min", o.sigma_min}, {"sigma_max", o.sigma_max},
                      {"samples", o.samples},     {"seed", o.common.seed},
                      {"format", o.common.format}};
    if (o.common.format == "csv") {
        const auto path = oscillation_path(o.alpha, o.kappa, o.sigma_min, o.sigma_max, o.samples);
        const Json summary{{"radius", rep.radius}, {"oscillation", rep.oscillation}};
        return emit_csv(o.common, "oscillation", config, summary, path_to_csv(path), clock,
                        status);
    }
    return emit_json(o.common, "oscillation", config, report_to_json(rep), clock, status);
}

// ---------------------------------------------------------------- diagonal-fit

struct FitOpts {
    CommonOpts common;
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t nmax = 1048576;
    double ratio = 2.0;
    std::size_t restarts = 32;
    std::size_t evals = 10000;
    double budget = 1.0;
};

int run_diagonal_fit(const FitOpts& o) {
    const Clock clock;
    require_json(o.common, "diagonal-fit");
    const SigmaGrid grid = SigmaGrid::geometric(o.nmax, o.ratio);
    FitConfig cfg;
    cfg.restarts = o.restarts;
    cfg.max_evals_per_restart = o.evals;
    cfg.seed = o.common.seed;
    cfg.threads = o.common.threads;
    const FitReport rep = diagonal_fit(o.alpha, o.beta, grid, cfg);
    // alpha = beta admits an exact diagonal equivalence; missing it is a bug
    const bool violated = o.alpha == o.beta && rep.residual > 1e-9;

    const Json config{{"alpha", o.alpha},       {"beta", o.beta},
                      {"nmax", o.nmax},         {"ratio", o.ratio},
                      {"restarts", o.restarts}, {"evals", o.evals},
                      {"budget", o.budget},     {"seed", o.common.seed},
                      {"threads", o.common.threads}, {"format", o.common.format}};
    Json results = report_to_json(rep);
    results["n_max"] = o.nmax;
    results["within_budget"] = rep.residual <= o.budget;
    return emit_json(o.common, "diagonal-fit", config, results, clock,
                     violated ? kViolation : kOk);
}

// ---------------------------------------------------------------- contradiction-witness

struct WitnessOpts {
    CommonOpts common;
    double delta = 1.0;
    double beta = 0.0;
};

int run_witness(const WitnessOpts& o) {
    const Clock clock;
    require_json(o.common, "contradiction-witness");
    const mpz_class n = contradiction_witness(o.delta, o.beta);
    const bool holds_at = witness_inequality_holds(n, o.delta, o.beta);
    const bool holds_below = witness_inequality_holds(n - 1, o.delta, o.beta);
    const bool consistent = holds_at && !holds_below;
    const std::string digits = n.get_str();

    const Json config{{"delta", o.delta},
                      {"beta", o.beta},
                      {"seed", o.common.seed},
                      {"format", o.common.format}};
    const Json results{{"witness", digits},
                       {"digits", digits.size()},
                       {"holds_at_witness", holds_at},
                       {"holds_below", holds_below},
                       {"consistent", consistent}};
    return emit_json(o.common, "contradiction-witness", config, results, clock,
                     consistent ? kOk : kViolation);
}

// ---------------------------------------------------------------- proof-bounds

struct ProofOpts {
    CommonOpts common;
    double c = 1.0;
    double m = std::numeric_limits<double>::infinity();
    double beta = 0.0;
    double alpha = 0.0;
    double sigma = 0.0;
    double tau = 0.0;
    double sigma2 = 0.0;
    double tau2 = 0.0;
    CLI::Option* sigma2_opt = nullptr;
};

int run_proof_bounds(const ProofOpts& o) {
    const Clock clock;
    require_json(o.common, "proof-bounds");
    const bool pair = o.sigma2_opt->count() > 0;
    const double k1 = proof_bound_K(o.c, o.m, o.beta, o.sigma, o.tau);

    Json config{{"c", o.c},         {"m", o.m},     {"beta", o.beta},
                {"sigma", o.sigma}, {"tau", o.tau}, {"seed", o.common.seed},
                {"format", o.common.format}};
    Json results;
    if (pair) {
        config["alpha"] = o.alpha;
        config["sigma2"] = o.sigma2;
        config["tau2"] = o.tau2;
        const double k2 = proof_bound_K(o.c, o.m, o.beta, o.sigma2, o.tau2);
        const double diff = two_point_difference(o.alpha, o.sigma, o.tau, o.sigma2, o.tau2);
        results = Json{{"k1", k1},
                       {"k2", k2},
                       {"k_sum", k1 + k2},
                       {"two_point_difference", diff},
                       {"exceeds_sum", diff > k1 + k2}};
    } else {
        results = Json{{"k", k1}};
    }
    return emit_json(o.common, "proof-bounds", config, results, clock, kOk);
}

// ---------------------------------------------------------------- sweep

struct SweepOpts {
    CommonOpts common;
    std::string experiment;
    // residual-vs-sigma-max
    double alpha = 1.0;
    double beta = 0.0;
    std::vector<std::uint64_t> nmax_list = {256, 16384, 1048576};
    double ratio = 2.0;
    std::size_t restarts = 32;
    std::size_t evals = 10000;
    // oscillation-vs-alpha
    double kappa = 2.0;
    std::vector<double> alphas = {0.0, 0.5, 1.0, 2.0, 3.0};
    double sigma_min = 1.0;
    double sigma_max = 100.0;
    // inequalities
    std::string check = "upper";
    double tmax = 1000.0;
    double beta_max = 10.0;
    double tol = kDefaultIneqTol;
    // 0 = per-experiment default (1024 oscillation rows, 100000 inequality samples)
    std::size_t samples = 0;
};

int run_sweep_residual(const SweepOpts& o) {
    const Clock clock;
    if (o.nmax_list.empty()) throw std::invalid_argument("sweep: --nmax-list is empty");
    std::string rows;
    Json json_rows = Json::array();
    bool nondecreasing = true;
    double prev = -std::numeric_limits<double>::infinity();
    for (std::uint64_t n : o.nmax_list) {
        const SigmaGrid grid = SigmaGrid::geometric(n, o.ratio);
        FitConfig cfg;
        cfg.restarts = o.restarts;
        cfg.max_evals_per_restart = o.evals;
        cfg.seed = o.common.seed;
        cfg.threads = o.common.threads;
        const FitReport rep = diagonal_fit(o.alpha, o.beta, grid, cfg);
        nondecreasing = nondecreasing && rep.residual >= prev;
        prev = rep.residual;
        rows += std::to_string(n) + ',' + csv_number(grid.sigma_max()) + ',' +
                csv_number(rep.residual) + ',' + (rep.improved ? '1' : '0') + '\n';
        json_rows.push_back(Json{{"n_max", n},
                                 {"sigma_max", grid.sigma_max()},
                                 {"residual", rep.residual},
                                 {"improved", rep.improved}});
    }
    const Json config{{"experiment", o.experiment},
                      {"alpha", o.alpha},
                      {"beta", o.beta},
                      {"nmax_list", o.nmax_list},
                      {"ratio", o.ratio},
                      {"restarts", o.restarts},
                      {"evals", o.evals},
                      {"seed", o.common.seed},
                      {"threads", o.common.threads},
                      {"format", o.common.format}};
    if (o.common.format == "csv")
        return emit_csv(o.common, "sweep", config, Json{{"nondecreasing", nondecreasing}},
                        "n_max,sigma_max,residual,improved\n" + rows, clock, kOk);
    return emit_json(o.common, "sweep", config,
                     Json{{"rows", json_rows}, {"nondecreasing", nondecreasing}}, clock, kOk);
}

int run_sweep_oscillation(const SweepOpts& o) {
    const Clock clock;
    if (o.alphas.empty()) throw std::invalid_argument("sweep: --alphas is empty");
    const std::size_t samples = o.samples == 0 ? 1024 : o.samples;
    std::string rows;
    Json json_rows = Json::array();
    int status = kOk;
    for (double a : o.alphas) {
        const OscillationReport rep = oscillation(a, o.kappa, o.sigma_min, o.sigma_max, samples);
        if (oscillation_out_of_bounds(rep)) status = kViolation;
        rows += csv_number(a) + ',' + csv_number(rep.radius) + ',' +
                csv_number(rep.oscillation) + '\n';
        json_rows.push_back(Json{
            {"alpha", a}, {"radius", rep.radius}, {"oscillation", rep.oscillation}});
    }
    const Json config{{"experiment", o.experiment},
                      {"kappa", o.kappa},
                      {"alphas", o.alphas},
                      {"sigma_min", o.sigma_min},
                      {"sigma_max", o.sigma_max},
                      {"samples", samples},
                      {"seed", o.common.seed},
                      {"format", o.common.format}};
    if (o.common.format == "csv")
        return emit_csv(o.common, "sweep", config, Json::object(),
                        "alpha,radius,oscillation\n" + rows, clock, status);
    return emit_json(o.common, "sweep", config, Json{{"rows", json_rows}}, clock, status);
}

int run_sweep_inequalities(const SweepOpts& o) {
    const Clock clock;
    const std::vector<int> kinds = parse_kinds(o.check);
    if (kinds.size() != 1)
        throw std::invalid_argument("sweep: inequalities needs a single --check");
    const std::size_t samples = o.samples == 0 ? 100000 : o.samples;
    const bool csv = o.common.format == "csv";
    std::string rows;
    KindStats stats[3];
    const std::size_t violations = run_ineq_sweep(samples, o.tmax, o.beta_max, o.tol,
                                                  o.common.seed, kinds, csv ? &rows : nullptr,
                                                  stats);
    const int status = violations == 0 ? kOk : kViolation;
    const Json config{{"experiment", o.experiment},
                      {"check", o.check},
                      {"samples", samples},
                      {"tmax", o.tmax},
                      {"beta_max", o.beta_max},
                      {"tol", o.tol},
                      {"seed", o.common.seed},
                      {"format", o.common.format}};
    const Json summary{{"violations", violations},
                       {"worst_ratio", stats[kinds[0]].worst_ratio}};
    if (csv)
        return emit_csv(o.common, "sweep", config, summary, "t,s,beta,lhs,rhs,holds\n" + rows,
                        clock, status);
    return emit_json(o.common, "sweep", config, summary, clock, status);
}

int run_sweep(const SweepOpts& o) {
    if (o.experiment == "residual-vs-sigma-max") return run_sweep_residual(o);
    if (o.experiment == "oscillation-vs-alpha") return run_sweep_oscillation(o);
    return run_sweep_inequalities(o);
}

// ------------------------------------------------------------- config files

std::string strip_ws(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Turns `--config FILE` into the equivalent command-line tokens, inserted
// right after the subcommand name. Keys also given on the command line keep
// the command-line value; keys the subcommand does not know fail the parse
// like any unknown flag.
std::vector<std::string> expand_config(const std::vector<std::string>& raw) {
    std::size_t sub = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (!raw[i].empty() && raw[i][0] != '-') {
            sub = i;
            break;
        }
    if (sub == raw.size()) return raw;

    std::string path;
    std::size_t flag_at = raw.size();
    std::size_t value_at = raw.size();
    for (std::size_t i = sub + 1; i < raw.size(); ++i) {
        if (raw[i] == "--config") {
            if (i + 1 == raw.size()) throw std::invalid_argument("--config needs a file path");
            flag_at = i;
            value_at = i + 1;
            path = raw[value_at];
            break;
        }
        if (raw[i].rfind("--config=", 0) == 0) {
            flag_at = i;
            path = raw[i].substr(9);
            break;
        }
    }
    if (flag_at == raw.size()) return raw;

    const auto given = [&](const std::string& flag) {
        for (std::size_t i = sub + 1; i < raw.size(); ++i) {
            if (i == flag_at || i == value_at) continue;
            if (raw[i] == flag || raw[i].rfind(flag + "=", 0) == 0) return true;
        }
        return false;
    };

    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot read config file " + path);
    std::vector<std::string> out(raw.begin(), raw.begin() + static_cast<std::ptrdiff_t>(sub) + 1);
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const std::string t = strip_ws(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = strip_ws(t.substr(0, eq));
        std::string val = strip_ws(t.substr(eq + 1));
        if (key == "config")
            throw std::invalid_argument(path + ": config files cannot chain config");
        if (val.size() >= 2 && (val.front() == '"' || val.front() == '\'') &&
            val.back() == val.front())
            val = val.substr(1, val.size() - 2);
        if (given("--" + key)) continue;
        if (key == "structured" && given("--no-structured")) continue;
        out.push_back("--" + key + "=" + val);
    }
    out.insert(out.end(), raw.begin() + static_cast<std::ptrdiff_t>(sub) + 1, raw.end());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"twisted-sum experiment runner"};
    app.name("z2lab");
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);

    NormOpts norm_o;
    {
        auto* sub = app.add_subcommand("norm", "quasi-norm of a twisted pair");
        norm_o.alpha_opt = sub->add_option("--alpha", norm_o.alpha, "twist parameter");
        norm_o.indicator_opt = sub->add_option("--indicator", norm_o.indicator,
                                               "use the canonical pair on {1..n}");
        norm_o.input_opt = sub->add_option("--input", norm_o.input, "twisted-pair JSON file");
        add_common(sub, norm_o.common, "json");
    }

    OmegaOpts omega_o;
    {
        auto* sub = app.add_subcommand("omega", "the twist map on a vector");
        sub->add_option("--alpha", omega_o.alpha, "twist parameter")->required();
        omega_o.indicator_opt =
            sub->add_option("--indicator", omega_o.indicator, "use xi_{1..n}");
        omega_o.input_opt = sub->add_option("--input", omega_o.input, "vector JSON file");
        add_common(sub, omega_o.common, "json");
    }

    BoundsOpts bounds_o;
    {
        auto* sub = app.add_subcommand("bounds-check", "randomized scalar inequality sweeps");
        sub->add_option("--samples", bounds_o.samples, "sample count")->capture_default_str();
        sub->add_option("--tmax", bounds_o.tmax, "t, s drawn from (0, tmax]")
            ->capture_default_str();
        sub->add_option("--beta-max", bounds_o.beta_max, "beta drawn from [-beta-max, beta-max]")
            ->capture_default_str();
        sub->add_option("--tol", bounds_o.tol, "relative slack")->capture_default_str();
        sub->add_option("--check", bounds_o.check, "lower | upper | taylor | all")
            ->check(CLI::IsMember({"lower", "upper", "taylor", "all"}))
            ->capture_default_str();
        add_common(sub, bounds_o.common, "json");
    }

    GapOpts gap_o;
    {
        auto* sub = app.add_subcommand("omega-gap",
                                       "two-form agreement bound on the unit ball");
        sub->add_option("--beta", gap_o.beta, "twist parameter of the closed form")->required();
        sub->add_option("--samples", gap_o.samples, "random vectors")->capture_default_str();
        sub->add_option("--max-dim", gap_o.max_dim, "largest support size")
            ->capture_default_str();
        gap_o.input_opt =
            sub->add_option("--input", gap_o.input, "check one vector from a JSON file");
        add_common(sub, gap_o.common, "json");
    }

    CentOpts cent_o;
    {
        auto* sub = app.add_subcommand("centralizer-search",
                                       "randomized sup of the multiplier defect");
        sub->add_option("--alpha", cent_o.alpha, "twist parameter")->required();
        sub->add_option("--samples", cent_o.samples, "random samples")->capture_default_str();
        sub->add_option("--max-dim", cent_o.max_dim, "largest support size")
            ->capture_default_str();
        sub->add_flag("--structured,!--no-structured", cent_o.structured,
                      "also sweep the deterministic two-level family")
            ->capture_default_str();
        add_common(sub, cent_o.common, "json", /*with_threads=*/true);
    }

    QuasiOpts quasi_o;
    {
        auto* sub = app.add_subcommand("quasilinearity-search",
                                       "randomized sup of the additivity defect");
        sub->add_option("--alpha", quasi_o.alpha, "twist parameter")->required();
        sub->add_option("--samples-per-dim", quasi_o.samples_per_dim, "samples at each dim")
            ->capture_default_str();
        sub->add_option("--dims", quasi_o.dims, "support sizes")
            ->delimiter(',')
            ->capture_default_str();
        add_common(sub, quasi_o.common, "json", /*with_threads=*/true);
    }

    OscOpts osc_o;
    {
        auto* sub = app.add_subcommand("oscillation",
                                       "value-set diameter of the limit quantity");
        sub->add_option("--alpha", osc_o.alpha, "twist parameter")->required();
        sub->add_option("--kappa", osc_o.kappa, "ratio kappa > 1")->required();
        sub->add_option("--sigma-min", osc_o.sigma_min, "window start")->required();
        sub->add_option("--sigma-max", osc_o.sigma_max, "window end")->required();
        sub->add_option("--samples", osc_o.samples, "log-uniform sample count")
            ->capture_default_str();
        add_common(sub, osc_o.common, "json");
    }

    FitOpts fit_o;
    {
        auto* sub = app.add_subcommand("diagonal-fit",
                                       "best diagonal equivalence over a sigma grid");
        sub->add_option("--alpha", fit_o.alpha, "source twist")->required();
        sub->add_option("--beta", fit_o.beta, "target twist")->required();
        sub->add_option("--nmax", fit_o.nmax, "grid endpoint N, sigma_max = (1/2) log N")
            ->capture_default_str();
        sub->add_option("--ratio", fit_o.ratio, "geometric grid ratio")->capture_default_str();
        sub->add_option("--restarts", fit_o.restarts, "optimizer restarts")
            ->capture_default_str();
        sub->add_option("--evals", fit_o.evals, "objective evaluations per restart")
            ->capture_default_str();
        sub->add_option("--budget", fit_o.budget, "residual budget echoed as within_budget")
            ->capture_default_str();
        add_common(sub, fit_o.common, "json", /*with_threads=*/true);
    }

    WitnessOpts wit_o;
    {
        auto* sub = app.add_subcommand("contradiction-witness",
                                       "smallest N defeating a proposed bound");
        sub->add_option("--delta", wit_o.delta, "lower bound parameter in (0, 1]")->required();
        sub->add_option("--beta", wit_o.beta, "twist parameter")->capture_default_str();
        add_common(sub, wit_o.common, "json");
    }

    ProofOpts proof_o;
    {
        auto* sub = app.add_subcommand("proof-bounds",
                                       "mean-value constant K and two-point differences");
        sub->add_option("--c", proof_o.c, "lower norm constant, > 0")->required();
        sub->add_option("--m", proof_o.m, "upper norm constant, inf allowed")
            ->capture_default_str();
        sub->add_option("--beta", proof_o.beta, "twist parameter")->capture_default_str();
        sub->add_option("--sigma", proof_o.sigma, "first interval start")->required();
        sub->add_option("--tau", proof_o.tau, "first interval end")->required();
        proof_o.sigma2_opt =
            sub->add_option("--sigma2", proof_o.sigma2, "second interval start");
        auto* tau2_opt = sub->add_option("--tau2", proof_o.tau2, "second interval end");
        sub->add_option("--alpha", proof_o.alpha, "twist for the two-point difference")
            ->capture_default_str();
        proof_o.sigma2_opt->needs(tau2_opt);
        tau2_opt->needs(proof_o.sigma2_opt);
        add_common(sub, proof_o.common, "json");
    }

    SweepOpts sweep_o;
    {
        auto* sub = app.add_subcommand("sweep", "parameter sweeps as plot-ready tables");
        sub->add_option("--experiment", sweep_o.experiment,
                        "residual-vs-sigma-max | oscillation-vs-alpha | inequalities")
            ->required()
            ->check(CLI::IsMember(
                {"residual-vs-sigma-max", "oscillation-vs-alpha", "inequalities"}));
        sub->add_option("--alpha", sweep_o.alpha, "source twist (residual sweep)")
            ->capture_default_str();
        sub->add_option("--beta", sweep_o.beta, "target twist (residual sweep)")
            ->capture_default_str();
        sub->add_option("--nmax-list", sweep_o.nmax_list, "grid endpoints (residual sweep)")
            ->delimiter(',')
            ->capture_default_str();
        sub->add_option("--ratio", sweep_o.ratio, "geometric grid ratio")
            ->capture_default_str();
        sub->add_option("--restarts", sweep_o.restarts, "optimizer restarts per fit")
            ->capture_default_str();
        sub->add_option("--evals", sweep_o.evals, "evaluations per restart")
            ->capture_default_str();
        sub->add_option("--kappa", sweep_o.kappa, "ratio (oscillation sweep)")
            ->capture_default_str();
        sub->add_option("--alphas", sweep_o.alphas, "twist values (oscillation sweep)")
            ->delimiter(',')
            ->capture_default_str();
        sub->add_option("--sigma-min", sweep_o.sigma_min, "window start (oscillation sweep)")
            ->capture_default_str();
        sub->add_option("--sigma-max", sweep_o.sigma_max, "window end (oscillation sweep)")
            ->capture_default_str();
        sub->add_option("--check", sweep_o.check, "lower | upper | taylor (inequality sweep)")
            ->check(CLI::IsMember({"lower", "upper", "taylor"}))
            ->capture_default_str();
        sub->add_option("--tmax", sweep_o.tmax, "t, s range (inequality sweep)")
            ->capture_default_str();
        sub->add_option("--beta-max", sweep_o.beta_max, "beta range (inequality sweep)")
            ->capture_default_str();
        sub->add_option("--tol", sweep_o.tol, "relative slack (inequality sweep)")
            ->capture_default_str();
        sub->add_option("--samples", sweep_o.samples, "rows or samples, 0 = per-experiment default")
            ->capture_default_str();
        add_common(sub, sweep_o.common, "csv", /*with_threads=*/true);
    }

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = expand_config(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadConfig;
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadConfig;
    }

    try {
        if (app.got_subcommand("norm")) return run_norm(norm_o);
        if (app.got_subcommand("omega")) return run_omega(omega_o);
        if (app.got_subcommand("bounds-check")) return run_bounds_check(bounds_o);
        if (app.got_subcommand("omega-gap")) return run_omega_gap(gap_o);
        if (app.got_subcommand("centralizer-search")) return run_centralizer(cent_o);
        if (app.got_subcommand("quasilinearity-search")) return run_quasilinearity(quasi_o);
        if (app.got_subcommand("oscillation")) return run_oscillation(osc_o);
        if (app.got_subcommand("diagonal-fit")) return run_diagonal_fit(fit_o);
        if (app.got_subcommand("contradiction-witness")) return run_witness(wit_o);
        if (app.got_subcommand("proof-bounds")) return run_proof_bounds(proof_o);
        if (app.got_subcommand("sweep")) return run_sweep(sweep_o);
        std::cerr << "error: no subcommand\n";
        return kBadConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadConfig;
    }
}
