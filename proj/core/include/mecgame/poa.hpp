#pragma once

// Brute-force centralized baseline and price-of-anarchy measurement for small
// instances.

#include <cstddef>
#include <optional>
#include <vector>

#include "mecgame/best_response.hpp"
#include "mecgame/overhead.hpp"

namespace mecgame {

/// Per-user strategies the exhaustive search may pick.
using CandidateSets = std::vector<std::vector<Strategy>>;

/// For each user: the local strategy (0, 0, f*) followed by full offloading on
/// `grid_points` powers spanning [p_min, p_max], plus the user's power in
/// `ne_hint` when it offloads there. Lists come back sorted by
/// (lambda, power, freq) without duplicates.
CandidateSets candidate_strategies(
    const Network& net, std::size_t grid_points,
    const std::optional<StrategyProfile>& ne_hint = std::nullopt);

struct OptimumResult {
  StrategyProfile profile;
  double potential = 0.0;
  std::size_t evaluated = 0;  // number of profiles scored
};

/// Exact argmin of Phi over the cross product of `candidates`. Each list is
/// canonicalized first, and ties keep the lexicographically smallest profile,
/// so the result does not depend on candidate order.
OptimumResult enumerate_minimum(const Network& net, CandidateSets candidates);

struct CentralizedOptions {
  std::size_t grid_points = 16;
  std::size_t exhaustive_limit = 6;
};

/// Throws ValidationError when the instance exceeds the exhaustive limit.
OptimumResult centralized_optimum(
    const Network& net, const CentralizedOptions& options,
    const std::optional<StrategyProfile>& ne_hint = std::nullopt);

/// Phi(ne) / Phi(opt).
double price_of_anarchy(const Network& net, const StrategyProfile& ne,
                        const StrategyProfile& opt);

/// Sum over users of U_n.
double utility_total(const Network& net, const StrategyProfile& profile);

/// Offloading overhead of n when every transmitting in-neighbor is pushed up
/// to `worst_power_w` (the largest in-neighbor power at the equilibrium).
double worst_case_cloud_overhead(const Network& net,
                                 const StrategyProfile& profile, std::size_t n,
                                 double worst_power_w);

/// Offloading overhead of n at its current power with no interference.
double interference_free_cloud_overhead(const Network& net,
                                        const StrategyProfile& profile,
                                        std::size_t n);

/// Upper bound on the PoA built from the equilibrium's offload partition:
/// worst-case vs interference-free uplink for offloaders, local cost at f_max
/// vs at f* for local users, with each user's out-neighbor overheads added to
/// both sides.
double poa_upper_bound(const Network& net, const StrategyProfile& ne);

/// 1 / sum of SINR over transmitting users; +inf when nobody transmits.
double inverse_total_sinr(const Network& net, const StrategyProfile& profile);

struct PoaReport {
  double ne_total = 0.0;   // Phi at the equilibrium
  double opt_total = 0.0;  // Phi at the centralized optimum
  double poa = 1.0;
  double bound_upper = 1.0;
  double ne_utility_total = 0.0;   // sum of U_n at the equilibrium
  double opt_utility_total = 0.0;  // sum of U_n at the optimum
  double inverse_sinr = 0.0;
  std::size_t grid_points = 0;
  std::size_t candidates_evaluated = 0;
  StrategyProfile ne_profile;
  StrategyProfile opt_profile;
};

PoaReport make_poa_report(const Network& net, const StrategyProfile& ne,
                          const OptimumResult& opt, std::size_t grid_points);

struct GlobalOptimalityReport {
  double ne_potential = 0.0;
  double opt_potential = 0.0;
  bool ne_is_global_min = false;  // Phi(ne) <= Phi(opt) + tol
  // Largest relative gain a user of the optimum gets by deviating within its
  // own candidate list; the potential minimizer must make this <= tol.
  double opt_restricted_gap = 0.0;
  bool opt_is_nash = false;
  // Same gap against the continuous best response, for information.
  double opt_continuous_gap = 0.0;
  bool ne_is_pareto_efficient = true;
  std::optional<StrategyProfile> pareto_dominator;
};

GlobalOptimalityReport check_global_optimality(
    const Network& net, const StrategyProfile& ne, const CandidateSets& candidates,
    const StrategyProfile& opt, double tol = 1e-9,
    const BestResponseConfig& cfg = {});

/// Copy of `net` with the cross-cell gain multiplier replaced.
Network with_interference_scale(const Network& net, double scale);

}  // namespace mecgame
