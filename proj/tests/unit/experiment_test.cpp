#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "experiment/commands.hpp"
#include "experiment/config.hpp"

namespace mecgame::experiment {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mecgame_unit_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

TEST(Config, EmptyObjectIsThePreset) {
  EXPECT_EQ(parse_config_text("{}"), preset_config());
}

TEST(Config, PresetValues) {
  const ExperimentConfig c = preset_config();
  EXPECT_EQ(c.generator.num_bs, 5u);
  EXPECT_EQ(c.generator.cell_radius_m, 50.0);
  EXPECT_EQ(c.generator.channel_bandwidth_hz, 5e6);
  EXPECT_EQ(c.generator.user.p_max_w, 0.15);
  EXPECT_EQ(c.generator.noise_power_w, 1e-13);
  EXPECT_EQ(c.generator.input_bits, 5e6);
  EXPECT_EQ(c.generator.workload_cycles, 1e9);
  EXPECT_EQ(c.engine.max_rounds, 500);
  EXPECT_EQ(c.engine.eps_power_w, 1e-6);
}

TEST(Config, RoundTripsThroughJson) {
  ExperimentConfig c = preset_config();
  c.seed = 9;
  c.generator.num_users = 33;
  c.engine.schedule = Schedule::kParallel;
  c.poa.multipliers = {0.0, 3.0};
  EXPECT_EQ(parse_config(to_json(c)), c);
}

TEST(Config, EmptyFileIsAnError) {
  EXPECT_THROW(parse_config_text(""), ConfigError);
}

TEST(Config, UnknownKeyReportsPath) {
  try {
    parse_config_text(R"({"generator": {"num_userz": 4}})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path(), "generator.num_userz");
  }
}

TEST(Config, WrongTypeReportsPath) {
  try {
    parse_config_text(R"({"user": {"p_max_w": "high"}})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path(), "user.p_max_w");
  }
}

TEST(Config, InvalidValueIsAnError) {
  EXPECT_THROW(parse_config_text(R"({"generator": {"num_users": 0}})"), ConfigError);
  EXPECT_THROW(parse_config_text(R"({"engine": {"schedule": "random"}})"), ConfigError);
  EXPECT_THROW(parse_config_text(R"({"seed": -1})"), ConfigError);
}

TEST(Axes, InputBitsKeepsCyclesPerBit) {
  const ExperimentConfig c = apply_axis(preset_config(), "input_bits", 1e7);
  EXPECT_EQ(c.generator.input_bits, 1e7);
  EXPECT_DOUBLE_EQ(c.generator.workload_cycles, 2e9);
}

TEST(Axes, AlphaSetsComplement) {
  const ExperimentConfig c = apply_axis(preset_config(), "alpha_t", 0.25);
  EXPECT_EQ(c.generator.user.alpha_e, 0.75);
}

TEST(Axes, UnknownAxisIsAnError) {
  EXPECT_THROW(apply_axis(preset_config(), "bandwidth", 1.0), ConfigError);
  EXPECT_THROW(apply_axis(preset_config(), "num_users", 2.5), ConfigError);
}

TEST(Run, WritesTraceAndSummary) {
  const fs::path out = scratch("run");
  std::ostringstream log;
  EXPECT_EQ(cmd_run(preset_config(), out, log), exit_code::kOk);
  const nlohmann::json summary = nlohmann::json::parse(slurp(out / "summary.json"));
  EXPECT_TRUE(summary["converged"].get<bool>());
  EXPECT_EQ(summary["num_users"].get<int>(), 20);

  // Potential column equals the sum of the overhead columns.
  std::istringstream csv(slurp(out / "trace.csv"));
  std::string line;
  std::getline(csv, line);
  const auto header = split(line);
  ASSERT_EQ(header.size(), 4u + 5u * 20u);
  std::vector<std::string> last;
  while (std::getline(csv, line)) {
    const auto cells = split(line);
    double phi = 0.0;
    for (std::size_t n = 0; n < 20; ++n) phi += std::stod(cells[4 + 5 * n + 3]);
    EXPECT_NEAR(std::stod(cells[1]), phi, 1e-12 * phi);
    last = cells;
  }
  for (std::size_t n = 0; n < 20; ++n) {
    const double lambda = std::stod(last[4 + 5 * n]);
    EXPECT_TRUE(lambda == 0.0 || lambda == 1.0);
  }
}

TEST(Run, RerunIsByteIdentical) {
  const fs::path a = scratch("rerun_a");
  const fs::path b = scratch("rerun_b");
  std::ostringstream log;
  cmd_run(preset_config(), a, log);
  cmd_run(preset_config(), b, log);
  EXPECT_EQ(slurp(a / "trace.csv"), slurp(b / "trace.csv"));
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
}

TEST(Run, RoundLimitExitsWithNonConvergence) {
  ExperimentConfig c = preset_config();
  c.engine.max_rounds = 1;
  std::ostringstream log;
  const fs::path out = scratch("limit");
  EXPECT_EQ(cmd_run(c, out, log), exit_code::kNoConvergence);
  EXPECT_TRUE(fs::exists(out / "trace.csv"));
}

TEST(Sweep, SingleValueMatchesRun) {
  ExperimentConfig c = preset_config();
  std::ostringstream log;
  const fs::path run_dir = scratch("single_run");
  cmd_run(c, run_dir, log);
  const auto rows = run_sweep(c, "num_users", {20}, 1);
  ASSERT_EQ(rows.size(), 1u);
  const auto summary = nlohmann::json::parse(slurp(run_dir / "summary.json"));
  EXPECT_EQ(rows[0].final_potential, summary["final_potential"].get<double>());
  EXPECT_EQ(rows[0].rounds, summary["rounds"].get<int>());
  EXPECT_EQ(rows[0].offloaders, summary["offloaders"].get<std::size_t>());
}

TEST(Sweep, RowsComeBackInOrder) {
  const auto rows = run_sweep(preset_config(), "num_users", {25, 20}, 3);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].value, 25.0);
  EXPECT_EQ(rows[2].seed, 44u);
  EXPECT_EQ(rows[3].value, 20.0);
  EXPECT_EQ(rows[3].num_users, 20u);
}

TEST(Sweep, UnknownAxisIsAConfigError) {
  std::ostringstream log;
  EXPECT_THROW(cmd_sweep(preset_config(), "colour", {1.0}, 1, scratch("bad"), log),
               ConfigError);
}

TEST(Poa, RefusesTooManyUsers) {
  std::ostringstream log;
  EXPECT_THROW(cmd_poa(preset_config(), scratch("poa_big"), log), ConfigError);
}

TEST(Poa, SingleUserIsOne) {
  ExperimentConfig c = preset_config();
  c.generator.num_users = 1;
  c.generator.num_bs = 1;
  c.poa.multipliers = {0.0, 1.0};
  const fs::path out = scratch("poa_one");
  std::ostringstream log;
  EXPECT_EQ(cmd_poa(c, out, log), exit_code::kOk);
  const auto doc = nlohmann::json::parse(slurp(out / "poa.json"));
  EXPECT_NEAR(doc["poa"].get<double>(), 1.0, 1e-12);
  EXPECT_TRUE(fs::exists(out / "poa_sweep.csv"));
}

TEST(Validate, PresetPasses) {
  std::ostringstream out;
  EXPECT_EQ(cmd_validate(preset_config(), 1000, 42, std::nullopt, std::nullopt, out),
            exit_code::kOk);
  const auto doc = nlohmann::json::parse(out.str());
  EXPECT_TRUE(doc["passed"].get<bool>());
  EXPECT_LE(doc["exact_potential"]["max_residual"].get<double>(), 1e-9);
  EXPECT_TRUE(doc["converged_run_is_nash"]["passed"].get<bool>());
}

TEST(Validate, CorruptedProfileIsReported) {
  ExperimentConfig c = preset_config();
  c.generator.num_users = 2;
  const fs::path dir = scratch("corrupt");
  fs::create_directories(dir);
  std::ofstream(dir / "profile.json") << "[[1, 0, 0], [0, 0, 1e9]]";
  std::ostringstream out;
  EXPECT_EQ(cmd_validate(c, 10, 1, dir / "profile.json", std::nullopt, out),
            exit_code::kPropertyViolation);
  EXPECT_NE(out.str().find("\"feasible\": false"), std::string::npos);
  EXPECT_NE(out.str().find("replay with --seed 1"), std::string::npos);
}

}  // namespace
}  // namespace mecgame::experiment
