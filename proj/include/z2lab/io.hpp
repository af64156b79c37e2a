#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "z2lab/defect_search.hpp"
#include "z2lab/kalton_peck.hpp"
#include "z2lab/obstruction.hpp"
#include "z2lab/seq.hpp"

namespace z2lab {

// Key order is fixed at insertion, so serialized reports are reproducible
// byte for byte.
using Json = nlohmann::ordered_json;

// {"entries": [[index, re, im], ...]} sorted by index.
Json vector_to_json(const FiniteVector& x);

// Inverse of vector_to_json. Throws std::invalid_argument on anything but an
// object with a single "entries" array of [index >= 1, re, im] rows; duplicate
// indices are rejected, exact zeros dropped (canonical form).
FiniteVector vector_from_json(const Json& j);

// {"alpha": a, "x": <vector>, "y": <vector>}
Json twisted_to_json(double alpha, const TwistedVector& v);
std::pair<double, TwistedVector> twisted_from_json(const Json& j);

Json report_to_json(const OscillationReport& r);
Json report_to_json(const FitReport& r);
Json report_to_json(const CentralizerSearchReport& r);
Json report_to_json(const QuasilinearitySearchReport& r);

// 17 significant digits: parsing the text back reproduces the double exactly.
std::string csv_number(double value);

// "index,re,im" rows.
std::string vector_to_csv(const FiniteVector& x);

// "sigma,re,im" rows for an oscillation sample path.
std::string path_to_csv(const std::vector<std::pair<double, Complex>>& path);

}  // namespace z2lab
