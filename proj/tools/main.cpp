#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "experiment/commands.hpp"
#include "experiment/config.hpp"

namespace ex = mecgame::experiment;

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> schedule;
  std::optional<int> max_rounds;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file (preset if omitted)");
  cmd->add_option("--seed", f.seed, "scenario seed");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--schedule", f.schedule, "sequential or parallel");
  cmd->add_option("--max-rounds", f.max_rounds, "round limit");
}

ex::ExperimentConfig resolve(const CommonFlags& f) {
  ex::ExperimentConfig c =
      f.config_path.empty() ? ex::preset_config() : ex::load_config(f.config_path);
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.output_dir = *f.out;
  if (f.schedule) {
    try {
      c.engine.schedule = mecgame::parse_schedule(*f.schedule);
    } catch (const mecgame::ValidationError& e) {
      throw ex::ConfigError("--schedule", e.what());
    }
  }
  if (f.max_rounds) {
    c.engine.max_rounds = *f.max_rounds;
    try {
      c.engine.validate();
    } catch (const mecgame::ValidationError& e) {
      throw ex::ConfigError("--max-rounds", e.what());
    }
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-user edge offloading game simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, poa_flags, validate_flags;
  CLI::App* run = app.add_subcommand("run", "best-response dynamics on one scenario");
  add_common(run, run_flags);

  CLI::App* sweep = app.add_subcommand("sweep", "dynamics over a parameter axis and seeds");
  add_common(sweep, sweep_flags);
  std::optional<std::string> axis;
  std::vector<double> values;
  std::optional<std::size_t> seeds;
  sweep->add_option("--axis", axis, "num_users, input_bits, workload_cycles, alpha_t, interference_scale");
  sweep->add_option("--values", values, "comma separated values")->delimiter(',');
  sweep->add_option("--seeds", seeds, "seeds per value");

  CLI::App* poa = app.add_subcommand("poa", "price of anarchy against exhaustive optimum");
  add_common(poa, poa_flags);

  CLI::App* validate = app.add_subcommand("validate", "potential and equilibrium checks");
  add_common(validate, validate_flags);
  std::size_t trials = 1000;
  std::optional<std::string> profile_path;
  validate->add_option("--trials", trials, "random deviation trials");
  validate->add_option("--profile", profile_path,
                       "JSON array of [lambda, power_w, freq_hz] to check");

  app.add_subcommand("preset", "print the built-in configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ex::exit_code::kConfig;
  }

  try {
    if (*run) {
      const auto c = resolve(run_flags);
      return ex::cmd_run(c, c.output_dir, std::cerr);
    }
    if (*sweep) {
      auto c = resolve(sweep_flags);
      if (axis) c.sweep.axis = *axis;
      if (!values.empty()) c.sweep.values = values;
      if (seeds) c.sweep.seeds = *seeds;
      return ex::cmd_sweep(c, c.sweep.axis, c.sweep.values, c.sweep.seeds,
                           c.output_dir, std::cerr);
    }
    if (*poa) {
      const auto c = resolve(poa_flags);
      return ex::cmd_poa(c, c.output_dir, std::cerr);
    }
    if (*validate) {
      const auto c = resolve(validate_flags);
      std::optional<std::filesystem::path> out_dir;
      if (validate_flags.out) out_dir = *validate_flags.out;
      std::optional<std::filesystem::path> profile;
      if (profile_path) profile = *profile_path;
      return ex::cmd_validate(c, trials, c.seed, profile, out_dir, std::cout);
    }
    ex::cmd_preset(std::cout);
    return ex::exit_code::kOk;
  } catch (const ex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ex::exit_code::kConfig;
  } catch (const mecgame::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return ex::exit_code::kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ex::exit_code::kFailure;
  }
}
