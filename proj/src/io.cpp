#include "z2lab/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace z2lab {

namespace {

Json complex_to_json(Complex z) {
    return Json::array({z.real(), z.imag()});
}

[[noreturn]] void bad(const std::string& what) {
    throw std::invalid_argument("parse: " + what);
}

double number_at(const Json& row, std::size_t k) {
    if (!row[k].is_number()) bad("entry component is not a number");
    return row[k].get<double>();
}

}  // namespace

Json vector_to_json(const FiniteVector& x) {
    Json entries = Json::array();
    for (const auto& e : x.entries())
        entries.push_back(Json::array({e.index, e.value.real(), e.value.imag()}));
    return Json{{"entries", std::move(entries)}};
}

FiniteVector vector_from_json(const Json& j) {
    if (!j.is_object() || j.size() != 1 || !j.contains("entries"))
        bad("vector must be an object with a single \"entries\" key");
    const Json& entries = j["entries"];
    if (!entries.is_array()) bad("\"entries\" must be an array");
    std::vector<FiniteVector::Entry> rows;
    rows.reserve(entries.size());
    for (const Json& row : entries) {
        if (!row.is_array() || row.size() != 3) bad("entry must be [index, re, im]");
        if (!row[0].is_number_integer() && !row[0].is_number_unsigned())
            bad("entry index must be an integer");
        if (row[0].is_number_integer() && row[0].get<std::int64_t>() < 1)
            bad("entry index must be >= 1");
        rows.push_back({row[0].get<Index>(), Complex(number_at(row, 1), number_at(row, 2))});
    }
    return FiniteVector::from_entries(std::move(rows));
}

Json twisted_to_json(double alpha, const TwistedVector& v) {
    return Json{{"alpha", alpha}, {"x", vector_to_json(v.x)}, {"y", vector_to_json(v.y)}};
}

std::pair<double, TwistedVector> twisted_from_json(const Json& j) {
    if (!j.is_object() || j.size() != 3 || !j.contains("alpha") || !j.contains("x") ||
        !j.contains("y"))
        bad("twisted vector must be an object with keys alpha, x, y");
    if (!j["alpha"].is_number()) bad("alpha must be a number");
    return {j["alpha"].get<double>(),
            TwistedVector{vector_from_json(j["x"]), vector_from_json(j["y"])}};
}

Json report_to_json(const OscillationReport& r) {
    return Json{{"alpha", r.alpha},           {"kappa", r.kappa},
                {"sigma_min", r.sigma_min},   {"sigma_max", r.sigma_max},
                {"radius", r.radius},         {"oscillation", r.oscillation},
                {"samples", r.samples}};
}

Json report_to_json(const FitReport& r) {
    return Json{{"alpha", r.alpha},
                {"beta", r.beta},
                {"grid", r.grid},
                {"best",
                 Json{{"lambda", complex_to_json(r.best.lambda)},
                      {"mu", complex_to_json(r.best.mu)},
                      {"nu", complex_to_json(r.best.nu)}}},
                {"residual", r.residual},
                {"restarts", r.restarts},
                {"evaluations", r.evaluations},
                {"seed", r.seed},
                {"improved", r.improved}};
}

Json report_to_json(const CentralizerSearchReport& r) {
    return Json{{"alpha", r.alpha},
                {"dim", r.max_dim},
                {"samples", r.samples},
                {"seed", r.seed},
                {"sup_ratio", r.sup_ratio},
                {"bound", r.bound},
                {"arg_max",
                 Json{{"multiplier", vector_to_json(r.best_multiplier)},
                      {"vector", vector_to_json(r.best_vector)}}}};
}

Json report_to_json(const QuasilinearitySearchReport& r) {
    return Json{{"alpha", r.alpha},
                {"dims", r.dims},
                {"max_per_dim", r.max_per_dim},
                {"samples_per_dim", r.samples_per_dim},
                {"seed", r.seed},
                {"sup_ratio", r.sup_ratio},
                {"best_dim", r.best_dim},
                {"arg_max",
                 Json{{"x1", vector_to_json(r.best_x1)}, {"x2", vector_to_json(r.best_x2)}}}};
}

std::string csv_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string vector_to_csv(const FiniteVector& x) {
    std::string out = "index,re,im\n";
    for (const auto& e : x.entries()) {
        out += std::to_string(e.index);
        out += ',';
        out += csv_number(e.value.real());
        out += ',';
        out += csv_number(e.value.imag());
        out += '\n';
    }
    return out;
}

std::string path_to_csv(const std::vector<std::pair<double, Complex>>& path) {
    std::string out = "sigma,re,im\n";
    for (const auto& [sigma, z] : path) {
        out += csv_number(sigma);
        out += ',';
        out += csv_number(z.real());
        out += ',';
        out += csv_number(z.imag());
        out += '\n';
    }
    return out;
}

}  // namespace z2lab
