#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace z2lab {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
    bool improved = false;  // final value strictly below f(x0)
};

// Derivative-free simplex descent (reflection 1, expansion 2, contraction 1/2,
// shrink 1/2). Deterministic given x0 and steps. Stops once the value spread
// across the simplex drops below tol_abs + tol_rel * |best|, or when the
// evaluation budget runs out; the initial simplex (n + 1 evaluations) is
// always built.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, const std::vector<double>& steps,
                             std::size_t max_evals, double tol_abs = 1e-12,
                             double tol_rel = 1e-12);

}  // namespace z2lab
