#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace modloc::cli {

inline const std::vector<std::string>& modes() {
    static const std::vector<std::string> m{"tomita", "localize", "boundary", "pws", "hormander",
                                            "epstein", "support-estimate", "cauchy"};
    return m;
}

struct GridConfig {
    double mass = 1.0;
    double theta_min = -16.0;
    double theta_max = 16.0;
    int n_theta = 1024;
    std::vector<std::pair<double, double>> transverse{{0.0, 0.0}};
};

struct RunConfig {
    std::string mode;
    std::filesystem::path out_dir = "modloc_out";
    std::filesystem::path base_dir = ".";  // relative input paths resolve here
    std::uint64_t seed = 1;
    std::optional<double> tol;  // overrides the mode's primary tolerance
    GridConfig grid;
    nlohmann::json params = nlohmann::json::object();
    nlohmann::json source;  // config as parsed, echoed into the report
};

// Throws ConfigError with line/column for syntax errors and a field path otherwise.
RunConfig parse_config(const std::string& text, const std::filesystem::path& origin = {});
RunConfig load_config(const std::filesystem::path& path);

struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation;  // "<=", ">", "==" ...
    bool pass = false;
};

struct CsvFile {
    std::string name;
    std::string content;
};

struct Outcome {
    nlohmann::json report;  // without metadata
    std::vector<Check> checks;
    std::vector<CsvFile> csv;

    bool pass() const;
};

Outcome run(const RunConfig& cfg);

// Writes report.json (plus metadata) and CSV files atomically; returns the exit code.
int emit(const RunConfig& cfg, const Outcome& out);

// Full pipeline with exit codes 0 (pass), 2 (check failure), 1 (input error).
int run_main(const std::string& mode, const std::filesystem::path& config, const std::optional<std::string>& out,
             const std::optional<std::uint64_t>& seed, const std::optional<double>& tol);

// Throws ConfigError for an unknown mode.
std::string describe(const std::string& mode);

void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace modloc::cli
