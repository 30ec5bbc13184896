#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace modloc {

// Outcome of a growth-bound check |f| <= C (1 + |zeta|)^N e^{H}.
struct BoundReport {
    std::string check;
    double n_declared = 0.0;
    double n_est = 0.0;     // slope of the upper envelope of log(|f| e^{-H}) against log(1 + |zeta|)
    double n_used = 0.0;    // exponent used for the ratio
    double c = 0.0;         // max ratio on the base grid
    std::vector<double> max_ratio_at;  // real and imaginary parts of the worst point
    double c_doubled = 0.0;  // max ratio on the refined and enlarged grid
    bool pass = false;
    std::size_t samples = 0;
    std::size_t skipped = 0;
    nlohmann::json grid;
    nlohmann::json extra;

    nlohmann::json to_json() const;
};

// Least-squares slope through the per-bin maxima of (x, y) pairs.
double upper_envelope_slope(const std::vector<std::pair<double, double>>& xy, int bins = 12);

// Finite and c_doubled <= (1 + tolerance) c.
bool bound_stable(double c, double c_doubled, double tolerance = 0.2);

}  // namespace modloc
