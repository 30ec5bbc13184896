#include <algorithm>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "modloc/errors.hpp"

namespace modloc::cli {
namespace {

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

double number(const nlohmann::json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError("field '" + field + "': expected a number");
    return j.get<double>();
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ConfigError((origin.empty() ? std::string("config") : origin.string()) + ":" + std::to_string(line) +
                          ":" + std::to_string(col) + ": JSON syntax error: " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");

    RunConfig c;
    c.source = j;
    if (!origin.empty()) c.base_dir = origin.parent_path().empty() ? std::filesystem::path(".") : origin.parent_path();
    if (j.contains("mode")) {
        if (!j["mode"].is_string()) throw ConfigError("field 'mode': expected a string");
        c.mode = j["mode"].get<std::string>();
        if (std::find(modes().begin(), modes().end(), c.mode) == modes().end())
            throw ConfigError("field 'mode': unknown mode '" + c.mode + "'");
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) throw ConfigError("field 'output_dir': expected a string");
        c.out_dir = j["output_dir"].get<std::string>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ConfigError("field 'seed': expected a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("tol")) {
        const double t = number(j["tol"], "tol");
        if (!(t > 0.0)) throw ConfigError("field 'tol': tolerance must be positive");
        c.tol = t;
    }
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (!g.is_object()) throw ConfigError("field 'grid': expected an object");
        if (g.contains("mass")) c.grid.mass = number(g["mass"], "grid.mass");
        if (g.contains("theta_min")) c.grid.theta_min = number(g["theta_min"], "grid.theta_min");
        if (g.contains("theta_max")) c.grid.theta_max = number(g["theta_max"], "grid.theta_max");
        if (g.contains("n_theta")) {
            if (!g["n_theta"].is_number_integer() || g["n_theta"].get<int>() < 8)
                throw ConfigError("field 'grid.n_theta': expected an integer >= 8");
            c.grid.n_theta = g["n_theta"].get<int>();
        }
        if (g.contains("transverse")) {
            const auto& t = g["transverse"];
            if (!t.is_array() || t.empty()) throw ConfigError("field 'grid.transverse': expected a nonempty array");
            c.grid.transverse.clear();
            for (std::size_t i = 0; i < t.size(); ++i) {
                const std::string f = "grid.transverse[" + std::to_string(i) + "]";
                if (!t[i].is_array() || t[i].size() != 2) throw ConfigError("field '" + f + "': expected [p1, p2]");
                c.grid.transverse.emplace_back(number(t[i][0], f + "[0]"), number(t[i][1], f + "[1]"));
            }
        }
        if (!(c.grid.mass > 0.0)) throw ConfigError("field 'grid.mass': must be positive");
        if (!(c.grid.theta_max > c.grid.theta_min)) throw ConfigError("field 'grid.theta_max': must exceed theta_min");
    }
    if (j.contains("params")) {
        if (!j["params"].is_object()) throw ConfigError("field 'params': expected an object");
        c.params = j["params"];
    }
    static const std::vector<std::string> known{"mode", "output_dir", "seed", "tol", "grid", "params", "comment"};
    for (const auto& [key, value] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("field '" + key + "': unknown top-level key");
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open config");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

}  // namespace modloc::cli
