#include "mecgame/overhead.hpp"

#include <cmath>

#include <fmt/format.h>

namespace mecgame {

Network::Network(Scenario scenario, ChannelPlan plan)
    : scenario_(std::move(scenario)), plan_(std::move(plan)) {
  graph_ = build_interference_graph(scenario_, plan_);
  const std::size_t cells = scenario_.num_cells();
  gain_to_bs_.resize(scenario_.num_users() * cells);
  for (std::size_t u = 0; u < scenario_.num_users(); ++u) {
    for (std::size_t b = 0; b < cells; ++b) {
      gain_to_bs_[u * cells + b] = channel_gain(u, b, scenario_);
    }
  }
}

std::optional<std::string> feasibility_violation(const Strategy& s,
                                                 const UserProfile& user) {
  if (!(s.lambda >= 0.0 && s.lambda <= 1.0)) {
    return fmt::format("offload ratio {} outside [0, 1]", s.lambda);
  }
  if (!(s.freq_hz >= 0.0 && s.freq_hz <= user.f_max_hz)) {
    return fmt::format("cpu frequency {} outside [0, {}]", s.freq_hz,
                       user.f_max_hz);
  }
  if (s.lambda == 0.0) {
    if (s.power_w != 0.0) {
      return fmt::format("local-only strategy transmits at {} W", s.power_w);
    }
  } else if (!(s.power_w >= user.p_min_w && s.power_w <= user.p_max_w)) {
    return fmt::format("offloading with power {} W outside [{}, {}]", s.power_w,
                       user.p_min_w, user.p_max_w);
  }
  if (s.lambda < 1.0 && !(s.freq_hz > 0.0)) {
    return std::string("local work remains but cpu frequency is 0");
  }
  return std::nullopt;
}

void validate_profile(const Network& net, const StrategyProfile& profile) {
  if (profile.size() != net.num_users()) {
    throw ValidationError(fmt::format("profile has {} strategies for {} users",
                                      profile.size(), net.num_users()));
  }
  for (std::size_t n = 0; n < profile.size(); ++n) {
    if (auto why = feasibility_violation(profile[n], net.profile(n))) {
      throw ValidationError(fmt::format("user {}: {}", n, *why));
    }
  }
}

double interference_power(const Network& net, const StrategyProfile& profile,
                          std::size_t n) {
  double total = 0.0;
  for (std::size_t i : net.graph().in_neighbors[n]) {
    if (profile[i].lambda > 0.0) {
      total += profile[i].power_w * net.cross_gain(i, n);
    }
  }
  return total;
}

double sinr(const Network& net, const StrategyProfile& profile, std::size_t n) {
  return profile[n].power_w * net.own_gain(n) /
         (net.scenario().noise_power_w + interference_power(net, profile, n));
}

double transmission_rate(const Network& net, const StrategyProfile& profile,
                         std::size_t n) {
  return net.scenario().channel_bandwidth_hz *
         std::log2(1.0 + sinr(net, profile, n));
}

double local_overhead(const Scenario& scenario, std::size_t n, double freq_hz,
                      double workload_fraction) {
  if (workload_fraction == 0.0) return 0.0;
  if (!(freq_hz > 0.0)) {
    throw ValidationError(fmt::format(
        "user {} has local work but cpu frequency {}", n, freq_hz));
  }
  const UserProfile& u = scenario.profiles[n];
  const double w = workload_fraction * scenario.tasks[n].workload_cycles();
  return u.alpha_t * (w / freq_hz) + u.alpha_e * u.kappa * w * freq_hz * freq_hz;
}

double cloud_overhead(const Network& net, const StrategyProfile& profile,
                      std::size_t n) {
  const Strategy& s = profile[n];
  if (s.lambda == 0.0) return 0.0;
  if (!(s.power_w > 0.0)) {
    throw ValidationError(
        fmt::format("user {} offloads with non-positive power {}", n, s.power_w));
  }
  const Scenario& sc = net.scenario();
  const UserProfile& u = net.profile(n);
  const double bits = s.lambda * net.task(n).input_bits;
  const double cycles = s.lambda * net.task(n).workload_cycles();
  const double rate = transmission_rate(net, profile, n);
  const double t_trans = bits / rate;
  const double e_trans = s.power_w * t_trans;
  const double t_server = cycles / sc.cloud_frequency_hz;
  const double e_server =
      sc.cloud_kappa * cycles * sc.cloud_frequency_hz * sc.cloud_frequency_hz;
  return u.alpha_t * (t_trans + t_server) + u.alpha_e * (e_trans + e_server);
}

double total_overhead(const Network& net, const StrategyProfile& profile,
                      std::size_t n) {
  const Strategy& s = profile[n];
  return cloud_overhead(net, profile, n) +
         local_overhead(net.scenario(), n, s.freq_hz, 1.0 - s.lambda);
}

double altruistic_utility(const Network& net, const StrategyProfile& profile,
                          std::size_t n) {
  double u = total_overhead(net, profile, n);
  for (std::size_t i : net.graph().out_neighbors[n]) {
    u += total_overhead(net, profile, i);
  }
  return u;
}

double potential(const Network& net, const StrategyProfile& profile) {
  double phi = 0.0;
  for (std::size_t n = 0; n < net.num_users(); ++n) {
    phi += total_overhead(net, profile, n);
  }
  return phi;
}

std::vector<double> all_overheads(const Network& net,
                                  const StrategyProfile& profile) {
  std::vector<double> o(net.num_users());
  for (std::size_t n = 0; n < o.size(); ++n) o[n] = total_overhead(net, profile, n);
  return o;
}

std::vector<double> all_utilities(const Network& net,
                                  const StrategyProfile& profile) {
  const std::vector<double> o = all_overheads(net, profile);
  std::vector<double> u(o.size());
  for (std::size_t n = 0; n < o.size(); ++n) {
    u[n] = o[n];
    for (std::size_t i : net.graph().out_neighbors[n]) u[n] += o[i];
  }
  return u;
}

}  // namespace mecgame
