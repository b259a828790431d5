#pragma once

// World description for the multi-cell offloading game: geometry, cells,
// subchannels, tasks and per-user hardware. Everything here is immutable once
// built and validated.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mecgame {

/// Raised when a scenario, configuration or profile violates its invariants.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a cell holds more users than there are orthogonal subchannels.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

double distance(const Point2& a, const Point2& b);

struct TaskSpec {
  double input_bits = 0.0;      // L_n
  double cycles_per_bit = 0.0;  // C_n

  /// Total CPU cycles W_n = L_n * C_n. The overhead model only consumes this
  /// product.
  double workload_cycles() const { return input_bits * cycles_per_bit; }

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct UserProfile {
  double kappa = 1e-27;  // effective switched capacitance, J*s^2/cycle^3
  double f_max_hz = 1e9;
  // Floor for the local CPU frequency when the energy-only optimum is 0.
  double f_min_positive_hz = 1e6;
  double p_min_w = 0.01;
  double p_max_w = 0.15;
  double alpha_t = 1.0;
  double alpha_e = 0.0;
  double tx_range_m = 1e6;

  friend bool operator==(const UserProfile&, const UserProfile&) = default;
};

struct Scenario {
  std::vector<Point2> bs_positions;
  std::vector<Point2> user_positions;
  std::vector<std::size_t> cell_of;  // user -> BS index
  std::size_t num_channels = 1;
  double channel_bandwidth_hz = 5e6;
  double noise_power_w = 1e-13;
  double path_loss_exponent = 4.0;
  double cloud_frequency_hz = 1e10;
  double cloud_kappa = 1e-27;
  // Multiplies every cross-cell gain. 1 reproduces the plain path-loss model;
  // sweeps use it to dial interference up or down.
  double interference_scale = 1.0;
  std::vector<TaskSpec> tasks;
  std::vector<UserProfile> profiles;

  std::size_t num_users() const { return user_positions.size(); }
  std::size_t num_cells() const { return bs_positions.size(); }

  /// Throws ValidationError describing the first violated invariant.
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parameters for random scenario generation. Defaults follow the 5-cell
/// evaluation setup (50 m cells, 5 MHz subchannels, -100 dBm noise).
struct GeneratorConfig {
  std::size_t num_bs = 5;
  std::size_t num_users = 20;
  double cell_radius_m = 50.0;
  double bs_spacing_m = 100.0;
  // Users closer than this to their BS are re-drawn.
  double min_user_distance_m = 1.0;
  std::size_t num_channels = 10;
  double channel_bandwidth_hz = 5e6;
  double noise_power_w = 1e-13;
  double path_loss_exponent = 4.0;
  double interference_scale = 1.0;
  double cloud_frequency_hz = 1e10;
  double cloud_kappa = 1e-27;
  double input_bits = 5e6;
  double workload_cycles = 1e9;
  UserProfile user;

  void validate() const;

  friend bool operator==(const GeneratorConfig&,
                         const GeneratorConfig&) = default;
};

/// Places BSs on a near-square grid and users uniformly in their BS's disc.
/// User n is attached to cell n mod num_bs. Pure function of (config, seed).
Scenario generate_scenario(const GeneratorConfig& config, std::uint64_t seed);

/// Path-loss gain d^{-gamma} between a user and a BS.
double channel_gain(std::size_t user, std::size_t bs, const Scenario& scenario);

struct ChannelPlan {
  std::vector<std::size_t> channel_of;  // user -> subchannel in [0, K)

  friend bool operator==(const ChannelPlan&, const ChannelPlan&) = default;
};

/// Orthogonal within each cell, full reuse across cells. The j-th user of a
/// cell (in user-index order) gets subchannel (offset + j) mod K, where the
/// per-cell offset is drawn from the seed. Throws CapacityError when a cell
/// holds more than K users.
ChannelPlan assign_channels(const Scenario& scenario, std::uint64_t seed);

/// Same as assign_channels with every cell offset at zero.
ChannelPlan assign_channels_in_order(const Scenario& scenario);

/// Throws ValidationError if the plan has the wrong size, names a missing
/// subchannel, or reuses a subchannel inside one cell.
void validate_plan(const Scenario& scenario, const ChannelPlan& plan);

struct InterferenceGraph {
  // in_neighbors[n]: other-cell co-channel users whose range reaches n.
  std::vector<std::vector<std::size_t>> in_neighbors;
  // out_neighbors[n]: other-cell co-channel users that n's range reaches.
  std::vector<std::vector<std::size_t>> out_neighbors;

  friend bool operator==(const InterferenceGraph&,
                         const InterferenceGraph&) = default;
};

InterferenceGraph build_interference_graph(const Scenario& scenario,
                                           const ChannelPlan& plan);

}  // namespace mecgame
