#pragma once

// Best-response dynamics over the altruistic-utility game, plus the
// equilibrium and exact-potential checks.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mecgame/best_response.hpp"
#include "mecgame/overhead.hpp"
#include "mecgame/random.hpp"

namespace mecgame {

enum class Schedule {
  kSequential,  // users update one at a time against the live profile
  kParallel,    // all users respond to the previous round's profile
};

std::string to_string(Schedule s);
/// Accepts "sequential" or "parallel"; throws ValidationError otherwise.
Schedule parse_schedule(const std::string& name);

struct EngineConfig {
  Schedule schedule = Schedule::kSequential;
  int max_rounds = 500;
  double eps_power_w = 1e-6;
  // Parallel mode: a profile repeating within this many rounds is a cycle.
  int cycle_window = 64;
  BestResponseConfig best_response;

  void validate() const;

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

struct IterationRecord {
  int round = 0;  // 0 is the initial profile
  StrategyProfile profile;
  std::vector<double> overheads;  // O_n
  std::vector<double> utilities;  // U_n
  double potential = 0.0;         // sum of overheads, in user order
  std::size_t offloaders = 0;     // users with lambda = 1
  std::size_t changes = 0;        // strategies that moved during this round
};

struct GameTrace {
  std::vector<IterationRecord> rounds;
  bool converged = false;
  bool cycle_detected = false;
  // Last round in which any strategy changed (0 if the start was already a
  // fixed point). Meaningful when converged.
  int rounds_to_converge = 0;

  const StrategyProfile& final_profile() const { return rounds.back().profile; }
  double final_potential() const { return rounds.back().potential; }
};

/// Every user fully offloads at p_max with the local CPU idle.
StrategyProfile initial_profile(const Network& net);

IterationRecord make_record(const Network& net, const StrategyProfile& profile,
                            int round, std::size_t changes);

GameTrace run_dynamics(const Network& net, const StrategyProfile& initial,
                       const EngineConfig& cfg);

inline GameTrace run_dynamics(const Network& net, const EngineConfig& cfg) {
  return run_dynamics(net, initial_profile(net), cfg);
}

/// Largest relative gain any single user could get by switching to its best
/// response: max_n (U_n(profile) - U_n(BR_n)) / max(1, |U_n(BR_n)|).
double nash_gap(const Network& net, const StrategyProfile& profile,
                const BestResponseConfig& cfg = {});

/// True iff no user can lower its U_n by more than tol (relative) alone.
bool is_nash(const Network& net, const StrategyProfile& profile,
             const BestResponseConfig& cfg = {}, double tol = 1e-9);

/// Which strategy components a unilateral deviation touches.
enum DeviationComponent : unsigned {
  kLambda = 1u,
  kPower = 2u,
  kFrequency = 4u,
};

struct PotentialTrial {
  std::size_t user = 0;
  unsigned pattern = 0;  // bitmask of DeviationComponent
  StrategyProfile profile;
  Strategy deviation;
  double delta_utility = 0.0;
  double delta_potential = 0.0;
  double residual = 0.0;  // |dU - dPhi| / max(1, |dPhi|)

  /// One-line JSON with everything needed to replay the trial.
  std::string to_json() const;
};

struct PotentialReport {
  std::size_t trials = 0;
  double max_residual = 0.0;
  std::vector<std::size_t> pattern_counts = std::vector<std::size_t>(8, 0);
  std::vector<PotentialTrial> violations;

  bool passed() const { return violations.empty(); }
};

/// Random feasible strategy for a user. Offload ratios mix 0, 1 and interior
/// values so both branches and partial offloading are exercised.
Strategy random_strategy(const UserProfile& user, Rng& rng);

StrategyProfile random_profile(const Network& net, Rng& rng);

/// Samples (profile, user, feasible deviation) triples cycling through all
/// seven component patterns and checks dU == dPhi on each.
PotentialReport verify_exact_potential(const Network& net, std::size_t trials,
                                       std::uint64_t seed,
                                       double tolerance = 1e-9);

}  // namespace mecgame
