#include "actm_cli/commands.hpp"
#include "actm_cli/config.hpp"

#include "actm/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace actm;
using namespace actm::cli;
namespace fs = std::filesystem;

namespace {

// Loop between close pins; tensioned over the whole crank travel.
const char *kLoopConfig = R"({
  "box": {"pin_start_mm": [14, 0], "pin_end_mm": [16, 0]},
  "design": {"key_points_mm": [[14, 0], [0.058, 7.514], [2.636, 10.841], [29.783, 6.546], [16, 0]]}
})";

fs::path scratch(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / ("actm_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path &p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(cells);
    }
    return rows;
}

int run_binary(const std::string &args) {
    const std::string cmd = std::string(ACTM_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ProjectConfig loop_config(const fs::path &out) {
    auto c = parse_config(kLoopConfig);
    c.output_dir = out;
    return c;
}

} // namespace

TEST(Config, DefaultsAndUnknownKeys) {
    const auto c = parse_config("{}");
    EXPECT_EQ(c.w_mm, 12.0);
    EXPECT_EQ(c.k_mNm_per_deg, 0.3);
    EXPECT_EQ(c.ga.population_size, 30);
    EXPECT_EQ(c.targets_mNm, (std::vector<double>{10, 20, 30}));
    EXPECT_THROW(parse_config(R"({"geometry": {"w": 12}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"geometri": {}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"geometry": {"w_mm": "twelve"}})"), ConfigError);
    EXPECT_THROW(parse_config("{"), ConfigError);
    EXPECT_THROW(parse_config(R"({"spring": {"k_mNm_per_deg": -1}})"), ConfigError);
}

TEST(Config, ScalesSearchProblem) {
    const auto c = parse_config("{}");
    const auto search = c.search_problem();
    const auto final_problem = c.final_problem();
    EXPECT_NEAR(search.section.width * 3.0, final_problem.section.width, 1e-15);
    EXPECT_NEAR(*search.target_slope * 3.0, *final_problem.target_slope, 1e-15);
    EXPECT_NEAR(search.min_mean_torque * 3.0, final_problem.min_mean_torque, 1e-15);
}

TEST(ParseList, Values) {
    EXPECT_EQ(parse_list("10,20, 30"), (std::vector<double>{10, 20, 30}));
    EXPECT_THROW(parse_list("10,,x"), ConfigError);
}

TEST(Binary, ExitCodes) {
    const auto dir = scratch("exit");
    std::ofstream(dir / "unknown.json") << R"({"fem": {"n_elemnts": 40}})";
    std::ofstream(dir / "malformed.json") << R"({"fem": )";
    std::ofstream(dir / "coarse.json") << R"({"fem": {"n_elements": 2}})";
    std::ofstream(dir / "nogen.json") << R"({"ga": {"max_generations": 0, "surrogate": true}})";
    const std::string out = " --out " + (dir / "out").string() + " ";
    EXPECT_EQ(run_binary("--config " + (dir / "unknown.json").string() + out + "validate-fem"), 2);
    EXPECT_EQ(run_binary("--config " + (dir / "malformed.json").string() + out + "validate-fem"), 2);
    EXPECT_EQ(run_binary("--config " + (dir / "coarse.json").string() + out + "validate-fem"), 1);
    EXPECT_EQ(run_binary("--config " + (dir / "nogen.json").string() + out + "optimize"), 1);
    EXPECT_EQ(run_binary(out + "sweep bogus 1,2"), 2);
    EXPECT_EQ(run_binary(out + "sweep k \"\""), 2);
    EXPECT_EQ(run_binary("--no-such-flag"), 2);
    EXPECT_EQ(run_binary("--config " + (dir / "missing.json").string() + " validate-fem"), 2);
}

TEST(Optimize, SurrogateRunsAreBitIdentical) {
    auto c = parse_config(R"({"ga": {"surrogate": true, "max_generations": 15, "seed": 5}})");
    std::ostringstream log;
    const auto a = scratch("sur_a");
    const auto b = scratch("sur_b");
    c.output_dir = a;
    ASSERT_EQ(cmd_optimize(c, log), kExitOk) << log.str();
    c.output_dir = b;
    ASSERT_EQ(cmd_optimize(c, log), kExitOk) << log.str();
    for (const char *f : {"ga_history.csv", "best_design.json"}) {
        EXPECT_FALSE(slurp(a / f).empty()) << f;
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
    EXPECT_EQ(read_csv(c.output_dir / "ga_history.csv").size(), 16u);
}

TEST(Synthesize, WritesCurvesAndConsistentReport) {
    const auto dir = scratch("synth");
    auto c = loop_config(dir);
    c.targets_mNm = {10, 20, 30, 0};
    std::ostringstream log;
    ASSERT_EQ(cmd_synthesize(c, log), kExitOk) << log.str();
    for (const char *f : {"curve_10mNm.csv", "curve_20mNm.csv", "curve_30mNm.csv", "report.txt", "nsm_window.csv"}) {
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    }
    const auto curve = read_csv(dir / "curve_20mNm.csv");
    ASSERT_EQ(curve.size(), 8u);  // header + 45..135 in 15 degree steps
    double mean = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        mean += std::stod(curve[i][1]) / 7.0;
    }
    EXPECT_NEAR(mean, 20.0, 1e-9);
    const auto report = slurp(dir / "report.txt");
    EXPECT_NE(report.find("target_mNm: 0\n"), std::string::npos);
    EXPECT_NE(report.find("jaw: opens"), std::string::npos);
}

TEST(Synthesize, InfeasibleTargetExitsOne) {
    auto c = loop_config(scratch("infeasible"));
    c.targets_mNm = {1e6};
    std::ostringstream log;
    EXPECT_EQ(cmd_synthesize(c, log), kExitDomain);
}

TEST(Synthesize, MissingDesignIsConfigError) {
    auto c = parse_config("{}");
    c.output_dir = scratch("nodesign");
    std::ostringstream log;
    EXPECT_EQ(cmd_synthesize(c, log), kExitUsage);
}

TEST(Sweep, RowCountsAndWidthLinearity) {
    const auto dir = scratch("sweep");
    auto c = loop_config(dir);
    std::ostringstream log;
    ASSERT_EQ(cmd_sweep(c, "k", {0.2, 0.3, 0.4}, log), kExitOk) << log.str();
    EXPECT_EQ(read_csv(dir / "sweep_k.csv").size(), 4u);

    ASSERT_EQ(cmd_sweep(c, "width", {2, 4, 6}, log), kExitOk) << log.str();
    const auto rows = read_csv(dir / "sweep_width.csv");
    ASSERT_EQ(rows.size(), 4u);
    const double base = std::stod(rows[1][3]);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double width = std::stod(rows[i][1]);
        EXPECT_NEAR(std::stod(rows[i][3]), base * width / 2.0, 1e-9 * std::abs(base * width));
        EXPECT_NEAR(std::stod(rows[i][8]), std::stod(rows[1][8]), 1e-9 * std::stod(rows[1][8]));
    }
    EXPECT_EQ(cmd_sweep(c, "bogus", {1}, log), kExitUsage);
    EXPECT_EQ(cmd_sweep(c, "w", {}, log), kExitUsage);
}

TEST(ValidateFem, DefaultConfigPasses) {
    auto c = parse_config("{}");
    c.output_dir = scratch("validate");
    std::ostringstream log;
    EXPECT_EQ(cmd_validate_fem(c, log), kExitOk) << log.str();
    EXPECT_TRUE(fs::exists(c.output_dir / "validation.csv"));
}
