#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/cli.hpp"
#include "modloc/errors.hpp"

namespace fs = std::filesystem;
using namespace modloc::cli;

namespace {

const fs::path kConfigs = MODLOC_CONFIG_DIR;

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("modloc_test_" + name);
    fs::remove_all(p);
    return p;
}

nlohmann::json read_report(const fs::path& dir) {
    std::ifstream is(dir / "report.json");
    return nlohmann::json::parse(is);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

int run_config(const std::string& mode, const std::string& file, const std::string& out) {
    return run_main(mode, kConfigs / file, scratch(out).string(), std::nullopt, std::nullopt);
}

}  // namespace

TEST(Cli, ParseErrorsCarryPosition) {
    try {
        parse_config("{\n  \"mode\": \"pws\",\n  \"params\": [1 2]\n}", "inline.json");
        FAIL() << "expected ConfigError";
    } catch (const modloc::ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("inline.json:3:"), std::string::npos) << e.what();
    }
}

TEST(Cli, FieldErrorsNameTheField) {
    try {
        parse_config(R"({"mode": "tomita", "grid": {"n_theta": "many"}})");
        FAIL() << "expected ConfigError";
    } catch (const modloc::ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("grid.n_theta"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_config(R"({"mode": "tomita", "colour": 1})"), modloc::ConfigError);
}

TEST(Cli, DefaultsAndOverrides) {
    const RunConfig c = parse_config(R"({"mode": "pws", "seed": 9, "tol": 0.5, "grid": {"n_theta": 64}})");
    EXPECT_EQ(c.mode, "pws");
    EXPECT_EQ(c.seed, 9u);
    ASSERT_TRUE(c.tol.has_value());
    EXPECT_DOUBLE_EQ(*c.tol, 0.5);
    EXPECT_EQ(c.grid.n_theta, 64);
    EXPECT_DOUBLE_EQ(c.grid.theta_max, 16.0);
}

TEST(Cli, DescribeEveryMode) {
    for (const auto& m : modes()) {
        const std::string d = describe(m);
        EXPECT_NE(d.find("exit"), std::string::npos) << m;
    }
    EXPECT_THROW(describe("frobnicate"), modloc::ConfigError);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_config("pws", "pws_interval.json", "pws_ok"), 0);
    EXPECT_EQ(run_config("pws", "negative/pws_wrong_hull.json", "pws_bad"), 2);
    EXPECT_EQ(run_config("hormander", "negative/hormander_gaussian_tail.json", "horm_bad"), 1);
    EXPECT_EQ(run_config("tomita", "negative/malformed.json", "malformed"), 1);
    EXPECT_EQ(run_config("tomita", "negative/bad_field.json", "bad_field"), 1);
    EXPECT_EQ(run_config("cauchy", "pws_interval.json", "mode_mismatch"), 1);
    EXPECT_EQ(run_main("pws", kConfigs / "does_not_exist.json", scratch("missing").string(), std::nullopt,
                       std::nullopt),
              1);
}

TEST(Cli, ReportsAreReproducible) {
    for (const auto& [mode, file] : std::vector<std::pair<std::string, std::string>>{
             {"pws", "pws_interval.json"}, {"cauchy", "cauchy_rational.json"}, {"tomita", "tomita_standard.json"}}) {
        ASSERT_EQ(run_config(mode, file, "rep_a"), 0);
        nlohmann::json a = read_report(fs::temp_directory_path() / "modloc_test_rep_a");
        ASSERT_EQ(run_config(mode, file, "rep_b"), 0);
        nlohmann::json b = read_report(fs::temp_directory_path() / "modloc_test_rep_b");
        ASSERT_TRUE(a.contains("metadata"));
        a.erase("metadata");
        b.erase("metadata");
        EXPECT_EQ(a.dump(), b.dump()) << mode;
    }
}

TEST(Cli, ReportCarriesConventionsAndChecks) {
    ASSERT_EQ(run_config("tomita", "tomita_standard.json", "conv"), 0);
    const fs::path dir = fs::temp_directory_path() / "modloc_test_conv";
    const nlohmann::json r = read_report(dir);
    EXPECT_EQ(r["conventions"]["support_pairing"], "minkowski");
    EXPECT_TRUE(r["conventions"].contains("boost_sign"));
    EXPECT_TRUE(r["conventions"].contains("continuation"));
    EXPECT_TRUE(r["pass"].get<bool>());
    for (const auto& c : r["checks"]) EXPECT_TRUE(c["pass"].get<bool>()) << c.dump();
    EXPECT_TRUE(fs::exists(dir / "relations.csv"));
    EXPECT_FALSE(fs::exists(dir / "report.json.tmp"));
    const std::string csv = slurp(dir / "continuation.csv");
    EXPECT_FALSE(csv.empty());

    ASSERT_EQ(run_config("pws", "pws_interval.json", "conv_pws"), 0);
    EXPECT_EQ(read_report(fs::temp_directory_path() / "modloc_test_conv_pws")["conventions"]["support_pairing"],
              "euclidean");
}

TEST(Cli, SeedOverrideIsEchoed) {
    const fs::path out = scratch("seed");
    ASSERT_EQ(run_main("pws", kConfigs / "pws_point.json", out.string(), 42u, std::nullopt), 0);
    EXPECT_EQ(read_report(out)["seed"], 42);
}

TEST(Cli, AtomicWriteReplacesFile) {
    const fs::path dir = scratch("atomic");
    fs::create_directories(dir);
    write_atomic(dir / "x.txt", "first");
    write_atomic(dir / "x.txt", "second");
    EXPECT_EQ(slurp(dir / "x.txt"), "second");
    EXPECT_FALSE(fs::exists(dir / "x.txt.tmp"));
}
