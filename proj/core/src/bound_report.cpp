#include "modloc/bound_report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace modloc {
namespace {

nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace

nlohmann::json BoundReport::to_json() const {
    nlohmann::json j;
    j["check"] = check;
    j["N_declared"] = num(n_declared);
    j["N_est"] = num(n_est);
    j["N_used"] = num(n_used);
    j["C"] = num(c);
    j["C_doubled"] = num(c_doubled);
    j["max_ratio_at"] = max_ratio_at;
    j["samples"] = samples;
    j["skipped"] = skipped;
    j["grid"] = grid;
    j["pass"] = pass;
    if (!extra.is_null()) j["extra"] = extra;
    return j;
}

double upper_envelope_slope(const std::vector<std::pair<double, double>>& xy, int bins) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& [x, y] : xy) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (!(hi > lo)) return 0.0;
    std::vector<double> bx(bins, 0.0), by(bins, -std::numeric_limits<double>::infinity());
    for (const auto& [x, y] : xy) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        int b = static_cast<int>((x - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        if (y > by[b]) {
            by[b] = y;
            bx[b] = x;
        }
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int b = 0; b < bins; ++b) {
        if (!std::isfinite(by[b])) continue;
        sx += bx[b];
        sy += by[b];
        sxx += bx[b] * bx[b];
        sxy += bx[b] * by[b];
        ++n;
    }
    if (n < 2) return 0.0;
    const double den = n * sxx - sx * sx;
    return den > 0.0 ? (n * sxy - sx * sy) / den : 0.0;
}

bool bound_stable(double c, double c_doubled, double tolerance) {
    return std::isfinite(c) && std::isfinite(c_doubled) && c_doubled <= (1.0 + tolerance) * c + 1e-300;
}

}  // namespace modloc
