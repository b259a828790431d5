#pragma once

// Latency/energy cost model. All functions are pure over an immutable Network
// and a strategy profile.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mecgame/scenario.hpp"

namespace mecgame {

/// One user's decision: offload ratio, transmit power and local CPU frequency.
struct Strategy {
  double lambda = 0.0;
  double power_w = 0.0;
  double freq_hz = 0.0;

  friend bool operator==(const Strategy&, const Strategy&) = default;
};

using StrategyProfile = std::vector<Strategy>;

/// Scenario plus its channel plan and interference graph, with the path-loss
/// gains tabulated once.
class Network {
 public:
  Network(Scenario scenario, ChannelPlan plan);

  const Scenario& scenario() const { return scenario_; }
  const ChannelPlan& plan() const { return plan_; }
  const InterferenceGraph& graph() const { return graph_; }
  std::size_t num_users() const { return scenario_.num_users(); }

  const UserProfile& profile(std::size_t n) const {
    return scenario_.profiles[n];
  }
  const TaskSpec& task(std::size_t n) const { return scenario_.tasks[n]; }

  /// G_n: gain from user n to its own BS.
  double own_gain(std::size_t n) const {
    return gain_to_bs_[n * scenario_.num_cells() + scenario_.cell_of[n]];
  }
  /// Gain of interferer `from` toward the BS that serves `victim`, scaled by
  /// the scenario's interference multiplier.
  double cross_gain(std::size_t from, std::size_t victim) const {
    return scenario_.interference_scale *
           gain_to_bs_[from * scenario_.num_cells() + scenario_.cell_of[victim]];
  }

 private:
  Scenario scenario_;
  ChannelPlan plan_;
  InterferenceGraph graph_;
  std::vector<double> gain_to_bs_;  // row-major [user][bs]
};

/// Describes why `s` is infeasible for `user`, or nullopt when it is feasible.
std::optional<std::string> feasibility_violation(const Strategy& s,
                                                 const UserProfile& user);

/// Throws ValidationError naming the first infeasible user.
void validate_profile(const Network& net, const StrategyProfile& profile);

/// Aggregate co-channel power received at n's BS from transmitting
/// in-neighbors. Local-only users contribute nothing.
double interference_power(const Network& net, const StrategyProfile& profile,
                          std::size_t n);

double sinr(const Network& net, const StrategyProfile& profile, std::size_t n);

/// Shannon rate on n's subchannel, bits/s. Meaningful only while n transmits.
double transmission_rate(const Network& net, const StrategyProfile& profile,
                         std::size_t n);

/// alpha_t * W/f + alpha_e * kappa * W * f^2 with W scaled by
/// `workload_fraction`. A zero fraction short-circuits to 0.
double local_overhead(const Scenario& scenario, std::size_t n, double freq_hz,
                      double workload_fraction = 1.0);

/// Uplink plus server cost of the offloaded fraction lambda (zero at
/// lambda = 0, with no rate evaluated).
double cloud_overhead(const Network& net, const StrategyProfile& profile,
                      std::size_t n);

/// O_n: cloud part for fraction lambda plus local part for 1 - lambda.
double total_overhead(const Network& net, const StrategyProfile& profile,
                      std::size_t n);

/// U_n = O_n + sum of O_i over n's out-neighbors.
double altruistic_utility(const Network& net, const StrategyProfile& profile,
                          std::size_t n);

/// Phi = sum over all users of O_n.
double potential(const Network& net, const StrategyProfile& profile);

std::vector<double> all_overheads(const Network& net,
                                  const StrategyProfile& profile);

/// Every user's U_n, reusing one pass of O_n evaluations.
std::vector<double> all_utilities(const Network& net,
                                  const StrategyProfile& profile);

}  // namespace mecgame
