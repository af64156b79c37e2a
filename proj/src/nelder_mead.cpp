#include "z2lab/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace z2lab {

namespace {

struct Corner {
    std::vector<double> x;
    double value;
};

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, const std::vector<double>& steps,
                             std::size_t max_evals, double tol_abs, double tol_rel) {
    const std::size_t n = x0.size();
    if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");
    if (steps.size() != n) throw std::invalid_argument("nelder_mead: steps size mismatch");

    std::size_t evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };

    std::vector<Corner> simplex;
    simplex.reserve(n + 1);
    simplex.push_back({x0, eval(x0)});
    const double start_value = simplex.front().value;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x = x0;
        x[i] += steps[i];
        const double v = eval(x);
        simplex.push_back({std::move(x), v});
    }

    auto by_value = [](const Corner& a, const Corner& b) { return a.value < b.value; };
    std::stable_sort(simplex.begin(), simplex.end(), by_value);

    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    while (evals < max_evals) {
        const double best = simplex.front().value;
        const double worst = simplex.back().value;
        if (worst - best <= tol_abs + tol_rel * std::abs(best)) break;

        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += simplex[i].x[j];
            centroid[j] = acc / double(n);
        }
        const std::vector<double>& w = simplex.back().x;

        for (std::size_t j = 0; j < n; ++j) xr[j] = centroid[j] + (centroid[j] - w[j]);
        const double fr = eval(xr);

        if (fr < best) {
            for (std::size_t j = 0; j < n; ++j) xe[j] = centroid[j] + 2.0 * (centroid[j] - w[j]);
            const double fe = evals < max_evals ? eval(xe) : fr;
            if (fe < fr) {
                simplex.back() = {xe, fe};
            } else {
                simplex.back() = {xr, fr};
            }
        } else if (fr < simplex[n - 1].value) {
            simplex.back() = {xr, fr};
        } else {
            const bool outside = fr < worst;
            for (std::size_t j = 0; j < n; ++j) {
                const double towards = outside ? xr[j] : w[j];
                xc[j] = centroid[j] + 0.5 * (towards - centroid[j]);
            }
            const double fc = evals < max_evals ? eval(xc) : worst;
            if (fc < std::min(fr, worst)) {
                simplex.back() = {xc, fc};
            } else {
                // shrink towards the best corner
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        simplex[i].x[j] =
                            simplex[0].x[j] + 0.5 * (simplex[i].x[j] - simplex[0].x[j]);
                    simplex[i].value = eval(simplex[i].x);
                    if (evals >= max_evals) break;
                }
            }
        }
        std::stable_sort(simplex.begin(), simplex.end(), by_value);
    }

    NelderMeadResult out;
    out.x = simplex.front().x;
    out.value = simplex.front().value;
    out.evaluations = evals;
    out.improved = out.value < start_value;
    return out;
}

}  // namespace z2lab
