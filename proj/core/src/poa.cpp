#include "mecgame/poa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "mecgame/game.hpp"

namespace mecgame {

namespace {

bool strategy_less(const Strategy& a, const Strategy& b) {
  if (a.lambda != b.lambda) return a.lambda < b.lambda;
  if (a.power_w != b.power_w) return a.power_w < b.power_w;
  return a.freq_hz < b.freq_hz;
}

void canonicalize(std::vector<Strategy>& list) {
  std::sort(list.begin(), list.end(), strategy_less);
  list.erase(std::unique(list.begin(), list.end()), list.end());
}

// Calls visit(profile) for every profile of the cross product in
// lexicographic index order.
template <typename Visit>
void for_each_profile(const CandidateSets& sets, Visit&& visit) {
  const std::size_t n = sets.size();
  std::vector<std::size_t> idx(n, 0);
  StrategyProfile profile(n);
  for (std::size_t u = 0; u < n; ++u) profile[u] = sets[u].front();
  while (true) {
    visit(profile);
    std::size_t u = n;
    while (u > 0) {
      --u;
      if (++idx[u] < sets[u].size()) {
        profile[u] = sets[u][idx[u]];
        break;
      }
      idx[u] = 0;
      profile[u] = sets[u].front();
      if (u == 0) return;
    }
    if (n == 0) return;
  }
}

double uplink_overhead(const Network& net, std::size_t n, double power_w,
                       double interference_w) {
  const Scenario& sc = net.scenario();
  const UserProfile& u = net.profile(n);
  const double rate =
      sc.channel_bandwidth_hz *
      std::log2(1.0 + power_w * net.own_gain(n) /
                          (sc.noise_power_w + interference_w));
  const double cycles = net.task(n).workload_cycles();
  const double t_server = cycles / sc.cloud_frequency_hz;
  const double e_server =
      sc.cloud_kappa * cycles * sc.cloud_frequency_hz * sc.cloud_frequency_hz;
  return (u.alpha_t + u.alpha_e * power_w) * net.task(n).input_bits / rate +
         u.alpha_t * t_server + u.alpha_e * e_server;
}

}  // namespace

CandidateSets candidate_strategies(const Network& net, std::size_t grid_points,
                                   const std::optional<StrategyProfile>& ne_hint) {
  if (grid_points < 1) throw ValidationError("grid_points must be >= 1");
  if (ne_hint) validate_profile(net, *ne_hint);
  CandidateSets sets(net.num_users());
  for (std::size_t n = 0; n < sets.size(); ++n) {
    const UserProfile& u = net.profile(n);
    auto& list = sets[n];
    list.push_back({0.0, 0.0, best_cpu_frequency(u)});
    for (std::size_t k = 0; k < grid_points; ++k) {
      const double p =
          grid_points == 1
              ? u.p_max_w
              : (k + 1 == grid_points
                     ? u.p_max_w
                     : u.p_min_w + (u.p_max_w - u.p_min_w) *
                                       static_cast<double>(k) /
                                       static_cast<double>(grid_points - 1));
      list.push_back({1.0, p, 0.0});
    }
    if (ne_hint && (*ne_hint)[n].lambda == 1.0) {
      list.push_back({1.0, (*ne_hint)[n].power_w, 0.0});
    }
    canonicalize(list);
  }
  return sets;
}

OptimumResult enumerate_minimum(const Network& net, CandidateSets candidates) {
  if (candidates.size() != net.num_users()) {
    throw ValidationError("need one candidate list per user");
  }
  for (auto& list : candidates) {
    if (list.empty()) throw ValidationError("empty candidate list");
    canonicalize(list);
  }
  OptimumResult best;
  best.potential = std::numeric_limits<double>::infinity();
  for_each_profile(candidates, [&](const StrategyProfile& p) {
    const double phi = potential(net, p);
    ++best.evaluated;
    if (phi < best.potential) {
      best.potential = phi;
      best.profile = p;
    }
  });
  return best;
}

OptimumResult centralized_optimum(const Network& net,
                                  const CentralizedOptions& options,
                                  const std::optional<StrategyProfile>& ne_hint) {
  if (net.num_users() > options.exhaustive_limit) {
    throw ValidationError(fmt::format(
        "{} users exceed the exhaustive-search limit of {}; lower the user "
        "count or raise the limit",
        net.num_users(), options.exhaustive_limit));
  }
  return enumerate_minimum(
      net, candidate_strategies(net, options.grid_points, ne_hint));
}

double price_of_anarchy(const Network& net, const StrategyProfile& ne,
                        const StrategyProfile& opt) {
  return potential(net, ne) / potential(net, opt);
}

double utility_total(const Network& net, const StrategyProfile& profile) {
  const auto u = all_utilities(net, profile);
  return std::accumulate(u.begin(), u.end(), 0.0);
}

double worst_case_cloud_overhead(const Network& net,
                                 const StrategyProfile& profile, std::size_t n,
                                 double worst_power_w) {
  double interference = 0.0;
  for (std::size_t j : net.graph().in_neighbors[n]) {
    if (profile[j].lambda > 0.0) {
      interference += worst_power_w * net.cross_gain(j, n);
    }
  }
  return uplink_overhead(net, n, profile[n].power_w, interference);
}

double interference_free_cloud_overhead(const Network& net,
                                        const StrategyProfile& profile,
                                        std::size_t n) {
  return uplink_overhead(net, n, profile[n].power_w, 0.0);
}

double poa_upper_bound(const Network& net, const StrategyProfile& ne) {
  validate_profile(net, ne);
  const std::vector<double> o = all_overheads(net, ne);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t n = 0; n < ne.size(); ++n) {
    double shared = 0.0;
    for (std::size_t i : net.graph().out_neighbors[n]) shared += o[i];
    if (ne[n].lambda > 0.0) {
      double worst_power = 0.0;
      for (std::size_t j : net.graph().in_neighbors[n]) {
        worst_power = std::max(worst_power, ne[j].power_w);
      }
      num += worst_case_cloud_overhead(net, ne, n, worst_power) + shared;
      den += interference_free_cloud_overhead(net, ne, n) + shared;
    } else {
      const UserProfile& u = net.profile(n);
      num += local_overhead(net.scenario(), n, u.f_max_hz) + shared;
      den += local_overhead(net.scenario(), n, best_cpu_frequency(u)) + shared;
    }
  }
  return num / den;
}

double inverse_total_sinr(const Network& net, const StrategyProfile& profile) {
  double total = 0.0;
  for (std::size_t n = 0; n < profile.size(); ++n) {
    if (profile[n].lambda > 0.0) total += sinr(net, profile, n);
  }
  return total > 0.0 ? 1.0 / total : std::numeric_limits<double>::infinity();
}

PoaReport make_poa_report(const Network& net, const StrategyProfile& ne,
                          const OptimumResult& opt, std::size_t grid_points) {
  PoaReport r;
  r.ne_total = potential(net, ne);
  r.opt_total = opt.potential;
  r.poa = r.ne_total / r.opt_total;
  r.bound_upper = poa_upper_bound(net, ne);
  r.ne_utility_total = utility_total(net, ne);
  r.opt_utility_total = utility_total(net, opt.profile);
  r.inverse_sinr = inverse_total_sinr(net, ne);
  r.grid_points = grid_points;
  r.candidates_evaluated = opt.evaluated;
  r.ne_profile = ne;
  r.opt_profile = opt.profile;
  return r;
}

GlobalOptimalityReport check_global_optimality(
    const Network& net, const StrategyProfile& ne, const CandidateSets& candidates,
    const StrategyProfile& opt, double tol, const BestResponseConfig& cfg) {
  GlobalOptimalityReport r;
  r.ne_potential = potential(net, ne);
  r.opt_potential = potential(net, opt);
  r.ne_is_global_min =
      r.ne_potential <= r.opt_potential + tol * std::max(1.0, r.opt_potential);

  StrategyProfile trial = opt;
  for (std::size_t n = 0; n < opt.size(); ++n) {
    const double current = altruistic_utility(net, opt, n);
    double best = current;
    for (const Strategy& s : candidates[n]) {
      trial[n] = s;
      best = std::min(best, altruistic_utility(net, trial, n));
    }
    trial[n] = opt[n];
    r.opt_restricted_gap = std::max(
        r.opt_restricted_gap, (current - best) / std::max(1.0, std::abs(best)));
  }
  r.opt_is_nash = r.opt_restricted_gap <= tol;
  r.opt_continuous_gap = nash_gap(net, opt, cfg);

  const std::vector<double> base = all_utilities(net, ne);
  for_each_profile(candidates, [&](const StrategyProfile& p) {
    if (r.pareto_dominator) return;
    const std::vector<double> u = all_utilities(net, p);
    bool weakly = true;
    bool strictly = false;
    for (std::size_t n = 0; n < u.size() && weakly; ++n) {
      const double slack = tol * std::max(1.0, std::abs(base[n]));
      if (u[n] > base[n] + slack) weakly = false;
      if (u[n] < base[n] - slack) strictly = true;
    }
    if (weakly && strictly) r.pareto_dominator = p;
  });
  r.ne_is_pareto_efficient = !r.pareto_dominator.has_value();
  return r;
}

Network with_interference_scale(const Network& net, double scale) {
  Scenario s = net.scenario();
  s.interference_scale = scale;
  return Network(std::move(s), net.plan());
}

}  // namespace mecgame
