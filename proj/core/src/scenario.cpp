#include "mecgame/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "mecgame/random.hpp"

namespace mecgame {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void validate_profile(const UserProfile& p, const std::string& where) {
  require(p.alpha_t >= 0.0 && p.alpha_t <= 1.0,
          where + ".alpha_t must lie in [0, 1]");
  require(p.alpha_e >= 0.0 && p.alpha_e <= 1.0,
          where + ".alpha_e must lie in [0, 1]");
  require(p.alpha_t + p.alpha_e > 0.0,
          where + ": alpha_t and alpha_e cannot both be zero");
  require(positive_finite(p.kappa), where + ".kappa must be positive");
  require(positive_finite(p.f_max_hz), where + ".f_max_hz must be positive");
  require(positive_finite(p.f_min_positive_hz) &&
              p.f_min_positive_hz <= p.f_max_hz,
          where + ".f_min_positive_hz must lie in (0, f_max_hz]");
  require(positive_finite(p.p_min_w), where + ".p_min_w must be positive");
  require(std::isfinite(p.p_max_w) && p.p_max_w >= p.p_min_w,
          where + ".p_max_w must be >= p_min_w");
  require(positive_finite(p.tx_range_m), where + ".tx_range_m must be positive");
}

}  // namespace

double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void Scenario::validate() const {
  const std::size_t n = num_users();
  require(n >= 1, "scenario needs at least one user");
  require(num_cells() >= 1, "scenario needs at least one base station");
  require(num_channels >= 1, "scenario needs at least one subchannel");
  require(cell_of.size() == n, "cell_of must have one entry per user");
  require(tasks.size() == n, "tasks must have one entry per user");
  require(profiles.size() == n, "profiles must have one entry per user");
  require(positive_finite(channel_bandwidth_hz),
          "channel_bandwidth_hz must be positive");
  require(positive_finite(noise_power_w), "noise_power_w must be positive");
  require(positive_finite(path_loss_exponent),
          "path_loss_exponent must be positive");
  require(positive_finite(cloud_frequency_hz),
          "cloud_frequency_hz must be positive");
  require(std::isfinite(cloud_kappa) && cloud_kappa >= 0.0,
          "cloud_kappa must be non-negative");
  require(std::isfinite(interference_scale) && interference_scale >= 0.0,
          "interference_scale must be non-negative");
  for (std::size_t u = 0; u < n; ++u) {
    require(cell_of[u] < num_cells(),
            fmt::format("user {} attached to missing cell {}", u, cell_of[u]));
    require(positive_finite(tasks[u].input_bits),
            fmt::format("tasks[{}].input_bits must be positive", u));
    require(positive_finite(tasks[u].cycles_per_bit),
            fmt::format("tasks[{}].cycles_per_bit must be positive", u));
    validate_profile(profiles[u], fmt::format("profiles[{}]", u));
    require(distance(user_positions[u], bs_positions[cell_of[u]]) > 0.0,
            fmt::format("user {} coincides with its base station", u));
  }
}

void GeneratorConfig::validate() const {
  require(num_bs >= 1, "num_bs must be at least 1");
  require(num_users >= 1, "num_users must be at least 1");
  require(positive_finite(cell_radius_m), "cell_radius_m must be positive");
  require(positive_finite(bs_spacing_m), "bs_spacing_m must be positive");
  require(std::isfinite(min_user_distance_m) && min_user_distance_m > 0.0 &&
              min_user_distance_m < cell_radius_m,
          "min_user_distance_m must lie in (0, cell_radius_m)");
  require(num_channels >= 1, "num_channels must be at least 1");
  require(positive_finite(channel_bandwidth_hz),
          "channel_bandwidth_hz must be positive");
  require(positive_finite(noise_power_w), "noise_power_w must be positive");
  require(positive_finite(path_loss_exponent),
          "path_loss_exponent must be positive");
  require(std::isfinite(interference_scale) && interference_scale >= 0.0,
          "interference_scale must be non-negative");
  require(positive_finite(cloud_frequency_hz),
          "cloud_frequency_hz must be positive");
  require(std::isfinite(cloud_kappa) && cloud_kappa >= 0.0,
          "cloud_kappa must be non-negative");
  require(positive_finite(input_bits), "input_bits must be positive");
  require(positive_finite(workload_cycles), "workload_cycles must be positive");
  validate_profile(user, "user");
}

Scenario generate_scenario(const GeneratorConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);

  Scenario s;
  s.num_channels = config.num_channels;
  s.channel_bandwidth_hz = config.channel_bandwidth_hz;
  s.noise_power_w = config.noise_power_w;
  s.path_loss_exponent = config.path_loss_exponent;
  s.cloud_frequency_hz = config.cloud_frequency_hz;
  s.cloud_kappa = config.cloud_kappa;
  s.interference_scale = config.interference_scale;

  const auto cols = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(config.num_bs))));
  s.bs_positions.reserve(config.num_bs);
  for (std::size_t b = 0; b < config.num_bs; ++b) {
    s.bs_positions.push_back({static_cast<double>(b % cols) * config.bs_spacing_m,
                              static_cast<double>(b / cols) * config.bs_spacing_m});
  }

  const double r_min_sq = config.min_user_distance_m * config.min_user_distance_m;
  const double r_max_sq = config.cell_radius_m * config.cell_radius_m;
  for (std::size_t u = 0; u < config.num_users; ++u) {
    const std::size_t cell = u % config.num_bs;
    // Uniform in the annulus [min distance, radius] by inverting the area CDF.
    const double radius = std::sqrt(rng.uniform(r_min_sq, r_max_sq));
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const Point2& bs = s.bs_positions[cell];
    s.user_positions.push_back(
        {bs.x + radius * std::cos(angle), bs.y + radius * std::sin(angle)});
    s.cell_of.push_back(cell);
    s.tasks.push_back(
        {config.input_bits, config.workload_cycles / config.input_bits});
    s.profiles.push_back(config.user);
  }
  s.validate();
  return s;
}

double channel_gain(std::size_t user, std::size_t bs, const Scenario& scenario) {
  const double d =
      distance(scenario.user_positions.at(user), scenario.bs_positions.at(bs));
  if (!(d > 0.0)) {
    throw ValidationError(
        fmt::format("user {} coincides with base station {}", user, bs));
  }
  return std::pow(d, -scenario.path_loss_exponent);
}

namespace {

ChannelPlan assign_with_offsets(const Scenario& scenario,
                                const std::vector<std::size_t>& offsets) {
  const std::size_t k = scenario.num_channels;
  std::vector<std::size_t> next(scenario.num_cells(), 0);
  ChannelPlan plan;
  plan.channel_of.resize(scenario.num_users());
  for (std::size_t u = 0; u < scenario.num_users(); ++u) {
    const std::size_t cell = scenario.cell_of[u];
    if (next[cell] >= k) {
      throw CapacityError(fmt::format(
          "cell {} holds more than {} users; subchannels cannot stay orthogonal",
          cell, k));
    }
    plan.channel_of[u] = (offsets[cell] + next[cell]) % k;
    ++next[cell];
  }
  return plan;
}

}  // namespace

ChannelPlan assign_channels(const Scenario& scenario, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> offsets(scenario.num_cells());
  for (auto& o : offsets) o = rng.below(scenario.num_channels);
  return assign_with_offsets(scenario, offsets);
}

ChannelPlan assign_channels_in_order(const Scenario& scenario) {
  return assign_with_offsets(scenario,
                             std::vector<std::size_t>(scenario.num_cells(), 0));
}

void validate_plan(const Scenario& scenario, const ChannelPlan& plan) {
  const std::size_t n_users = scenario.num_users();
  require(plan.channel_of.size() == n_users,
          "channel plan must have one entry per user");
  for (std::size_t n = 0; n < n_users; ++n) {
    require(plan.channel_of[n] < scenario.num_channels,
            fmt::format("user {} assigned to missing subchannel {}", n,
                        plan.channel_of[n]));
    for (std::size_t i = 0; i < n; ++i) {
      require(scenario.cell_of[i] != scenario.cell_of[n] ||
                  plan.channel_of[i] != plan.channel_of[n],
              fmt::format("users {} and {} share subchannel {} in cell {}", i,
                          n, plan.channel_of[n], scenario.cell_of[n]));
    }
  }
}

InterferenceGraph build_interference_graph(const Scenario& scenario,
                                           const ChannelPlan& plan) {
  scenario.validate();
  validate_plan(scenario, plan);
  const std::size_t n_users = scenario.num_users();
  InterferenceGraph g;
  g.in_neighbors.resize(n_users);
  g.out_neighbors.resize(n_users);
  for (std::size_t n = 0; n < n_users; ++n) {
    for (std::size_t i = 0; i < n_users; ++i) {
      if (i == n || scenario.cell_of[i] == scenario.cell_of[n] ||
          plan.channel_of[i] != plan.channel_of[n]) {
        continue;
      }
      const double d =
          distance(scenario.user_positions[i], scenario.user_positions[n]);
      if (scenario.profiles[i].tx_range_m >= d) g.in_neighbors[n].push_back(i);
      if (scenario.profiles[n].tx_range_m >= d) g.out_neighbors[n].push_back(i);
    }
  }
  return g;
}

}  // namespace mecgame
