#pragma once

// Subcommand implementations behind the mecgame CLI. Each returns a process
// exit code and writes its artifacts under the given directory.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"

namespace mecgame::experiment {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kConfig = 2;
inline constexpr int kNoConvergence = 3;
inline constexpr int kPropertyViolation = 4;
}  // namespace exit_code

// -- artifacts ---------------------------------------------------------------

/// One row per recorded round: round, potential, offloaders, changes, then
/// lambda/power/freq/overhead/utility for every user.
std::string trace_csv(const GameTrace& trace);

nlohmann::json summary_json(const GameTrace& trace, std::uint64_t seed,
                            Schedule schedule);

/// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

std::string format_double(double v);

// -- sweeps ------------------------------------------------------------------

struct SweepRow {
  double value = 0.0;
  std::uint64_t seed = 0;
  std::size_t num_users = 0;
  bool converged = false;
  int rounds = 0;
  double final_potential = 0.0;
  std::size_t offloaders = 0;
};

/// One dynamics run per (value, seed); seeds are config.seed + k for
/// k < seeds. Points run concurrently; rows come back in (value, seed) order.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config,
                                const std::string& axis,
                                const std::vector<double>& values,
                                std::size_t seeds);

std::string sweep_csv(const std::string& axis, const std::vector<SweepRow>& rows);
/// Median potential, offloaders and rounds per value, plus converged share.
std::string sweep_summary_csv(const std::string& axis,
                              const std::vector<SweepRow>& rows);

double median(std::vector<double> v);

// -- price of anarchy --------------------------------------------------------

struct PoaStudy {
  GameTrace trace;
  OptimumResult optimum;
  PoaReport report;
  GlobalOptimalityReport global;
};

/// Dynamics to an equilibrium, then exhaustive optimum with that equilibrium
/// among the candidates.
PoaStudy study_poa(const Network& net, const ExperimentConfig& config);

struct PoaSweepRow {
  double multiplier = 0.0;
  double inverse_sinr = 0.0;
  double ne_potential = 0.0;
  double opt_potential = 0.0;
  double poa = 1.0;
  double bound = 1.0;
  bool converged = false;
};

std::vector<PoaSweepRow> run_poa_sweep(const Network& net,
                                       const ExperimentConfig& config);

std::string poa_sweep_csv(const std::vector<PoaSweepRow>& rows);
nlohmann::json poa_json(const PoaStudy& study);

// -- subcommands -------------------------------------------------------------

int cmd_run(const ExperimentConfig& config, const std::filesystem::path& out_dir,
            std::ostream& log);

int cmd_sweep(const ExperimentConfig& config, const std::string& axis,
              const std::vector<double>& values, std::size_t seeds,
              const std::filesystem::path& out_dir, std::ostream& log);

int cmd_poa(const ExperimentConfig& config, const std::filesystem::path& out_dir,
            std::ostream& log);

/// Exact-potential trials plus an equilibrium check of a converged run. When
/// `profile_path` names a JSON array of [lambda, power, freq] triples, that
/// profile is checked for feasibility and equilibrium too. The JSON report
/// goes to `out` and, if `out_dir` is set, to validate.json.
int cmd_validate(const ExperimentConfig& config, std::size_t trials,
                 std::uint64_t seed,
                 const std::optional<std::filesystem::path>& profile_path,
                 const std::optional<std::filesystem::path>& out_dir,
                 std::ostream& out);

void cmd_preset(std::ostream& out);

}  // namespace mecgame::experiment
