#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mecgame/game.hpp"
#include "mecgame/poa.hpp"
#include "mecgame/scenario.hpp"

namespace mecgame::experiment {

/// A config problem, reported with the JSON path of the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(path) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct PoaStudyConfig {
  std::size_t grid_points = 16;
  std::size_t exhaustive_limit = 6;
  std::vector<double> multipliers{0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0};

  friend bool operator==(const PoaStudyConfig&, const PoaStudyConfig&) = default;
};

struct SweepConfig {
  std::string axis = "num_users";
  std::vector<double> values{20, 30, 40, 50};
  std::size_t seeds = 10;

  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct ExperimentConfig {
  GeneratorConfig generator;
  EngineConfig engine;
  PoaStudyConfig poa;
  SweepConfig sweep;
  std::string output_dir = "out";
  std::uint64_t seed = 42;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

/// The 5-cell evaluation setup: 5 BSs, 50 m cells, 20 users, 5 MHz
/// subchannels, p_max 150 mW, -100 dBm noise, path loss 4, 5000 kb tasks of
/// 1000 Megacycles, 10 GHz server, kappa 1e-27, f_max 1 GHz, latency-only
/// weights.
ExperimentConfig preset_config();

/// Parses a config document. Missing keys keep their preset values; unknown
/// keys and wrong types raise ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const ExperimentConfig& config);

/// Axes accepted by sweeps.
const std::vector<std::string>& sweep_axes();

/// Returns `config` with `axis` set to `value`. `input_bits` keeps cycles per
/// bit fixed (the workload grows with the input); `alpha_t` sets
/// alpha_e = 1 - alpha_t. Throws ConfigError for unknown axes.
ExperimentConfig apply_axis(ExperimentConfig config, const std::string& axis,
                            double value);

/// Scenario and channel plan for one seed.
Network build_network(const GeneratorConfig& generator, std::uint64_t seed);

}  // namespace mecgame::experiment
