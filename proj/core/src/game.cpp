#include "mecgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>

#include <fmt/format.h>

namespace mecgame {

std::string to_string(Schedule s) {
  return s == Schedule::kSequential ? "sequential" : "parallel";
}

Schedule parse_schedule(const std::string& name) {
  if (name == "sequential") return Schedule::kSequential;
  if (name == "parallel") return Schedule::kParallel;
  throw ValidationError(
      fmt::format("unknown schedule '{}' (expected sequential|parallel)", name));
}

void EngineConfig::validate() const {
  if (max_rounds < 1) throw ValidationError("max_rounds must be >= 1");
  if (!(eps_power_w >= 0.0)) {
    throw ValidationError("eps_power_w must be non-negative");
  }
  if (cycle_window < 1) throw ValidationError("cycle_window must be >= 1");
  best_response.validate();
}

StrategyProfile initial_profile(const Network& net) {
  StrategyProfile p(net.num_users());
  for (std::size_t n = 0; n < p.size(); ++n) {
    p[n] = {1.0, net.profile(n).p_max_w, 0.0};
  }
  return p;
}

IterationRecord make_record(const Network& net, const StrategyProfile& profile,
                            int round, std::size_t changes) {
  IterationRecord rec;
  rec.round = round;
  rec.profile = profile;
  rec.overheads = all_overheads(net, profile);
  rec.utilities.resize(profile.size());
  for (std::size_t n = 0; n < profile.size(); ++n) {
    rec.utilities[n] = rec.overheads[n];
    for (std::size_t i : net.graph().out_neighbors[n]) {
      rec.utilities[n] += rec.overheads[i];
    }
    rec.potential += rec.overheads[n];
    if (profile[n].lambda == 1.0) ++rec.offloaders;
  }
  rec.changes = changes;
  return rec;
}

namespace {

bool moved(const Strategy& before, const Strategy& after, double eps_power) {
  return before.lambda != after.lambda || before.freq_hz != after.freq_hz ||
         std::abs(before.power_w - after.power_w) > eps_power;
}

std::size_t hash_profile(const StrategyProfile& p) {
  std::size_t h = 1469598103934665603ull;
  auto mix = [&h](double v) {
    h ^= std::hash<double>{}(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (const auto& s : p) {
    mix(s.lambda);
    mix(s.power_w);
    mix(s.freq_hz);
  }
  return h;
}

}  // namespace

GameTrace run_dynamics(const Network& net, const StrategyProfile& initial,
                       const EngineConfig& cfg) {
  cfg.validate();
  validate_profile(net, initial);

  GameTrace trace;
  StrategyProfile profile = initial;
  trace.rounds.push_back(make_record(net, profile, 0, 0));

  std::deque<std::pair<std::size_t, StrategyProfile>> window;
  int last_change = 0;

  for (int round = 1; round <= cfg.max_rounds; ++round) {
    std::size_t changes = 0;
    if (cfg.schedule == Schedule::kSequential) {
      for (std::size_t n = 0; n < profile.size(); ++n) {
        const Strategy next =
            best_response(net, profile, n, cfg.best_response).strategy;
        if (moved(profile[n], next, cfg.eps_power_w)) ++changes;
        profile[n] = next;
      }
    } else {
      StrategyProfile next = profile;
      for (std::size_t n = 0; n < profile.size(); ++n) {
        next[n] = best_response(net, profile, n, cfg.best_response).strategy;
        if (moved(profile[n], next[n], cfg.eps_power_w)) ++changes;
      }
      profile = std::move(next);
    }
    trace.rounds.push_back(make_record(net, profile, round, changes));

    if (changes == 0) {
      trace.converged = true;
      trace.rounds_to_converge = last_change;
      return trace;
    }
    last_change = round;

    if (cfg.schedule == Schedule::kParallel) {
      const std::size_t h = hash_profile(profile);
      for (const auto& [seen_hash, seen] : window) {
        if (seen_hash == h && seen == profile) {
          trace.cycle_detected = true;
          trace.rounds_to_converge = last_change;
          return trace;
        }
      }
      window.emplace_back(h, profile);
      if (window.size() > static_cast<std::size_t>(cfg.cycle_window)) {
        window.pop_front();
      }
    }
  }
  trace.rounds_to_converge = last_change;
  return trace;
}

double nash_gap(const Network& net, const StrategyProfile& profile,
                const BestResponseConfig& cfg) {
  validate_profile(net, profile);
  double gap = 0.0;
  for (std::size_t n = 0; n < profile.size(); ++n) {
    const double current = altruistic_utility(net, profile, n);
    const double best = best_response(net, profile, n, cfg).utility();
    gap = std::max(gap, (current - best) / std::max(1.0, std::abs(best)));
  }
  return gap;
}

bool is_nash(const Network& net, const StrategyProfile& profile,
             const BestResponseConfig& cfg, double tol) {
  return nash_gap(net, profile, cfg) <= tol;
}

std::string PotentialTrial::to_json() const {
  std::string s = fmt::format(
      "{{\"user\":{},\"pattern\":{},\"deviation\":[{:.17g},{:.17g},{:.17g}],"
      "\"delta_utility\":{:.17g},\"delta_potential\":{:.17g},"
      "\"residual\":{:.17g},\"profile\":[",
      user, pattern, deviation.lambda, deviation.power_w, deviation.freq_hz,
      delta_utility, delta_potential, residual);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    s += fmt::format("{}[{:.17g},{:.17g},{:.17g}]", i ? "," : "",
                     profile[i].lambda, profile[i].power_w, profile[i].freq_hz);
  }
  return s + "]}";
}

namespace {

double draw_lambda(Rng& rng) {
  const double r = rng.uniform();
  if (r < 0.3) return 0.0;
  if (r < 0.6) return 1.0;
  const double v = rng.uniform();
  return v > 0.0 ? v : 0.5;
}

double draw_power(const UserProfile& u, Rng& rng) {
  return rng.uniform(u.p_min_w, u.p_max_w);
}

double draw_freq(const UserProfile& u, Rng& rng) {
  return rng.uniform(u.f_min_positive_hz, u.f_max_hz);
}

unsigned changed_components(const Strategy& a, const Strategy& b) {
  unsigned m = 0;
  if (a.lambda != b.lambda) m |= kLambda;
  if (a.power_w != b.power_w) m |= kPower;
  if (a.freq_hz != b.freq_hz) m |= kFrequency;
  return m;
}

}  // namespace

Strategy random_strategy(const UserProfile& user, Rng& rng) {
  Strategy s;
  s.lambda = draw_lambda(rng);
  s.power_w = s.lambda > 0.0 ? draw_power(user, rng) : 0.0;
  if (s.lambda < 1.0 || rng.coin(0.5)) s.freq_hz = draw_freq(user, rng);
  return s;
}

StrategyProfile random_profile(const Network& net, Rng& rng) {
  StrategyProfile p(net.num_users());
  for (std::size_t n = 0; n < p.size(); ++n) {
    p[n] = random_strategy(net.profile(n), rng);
  }
  return p;
}

PotentialReport verify_exact_potential(const Network& net, std::size_t trials,
                                       std::uint64_t seed, double tolerance) {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  Rng rng(seed);
  PotentialReport report;
  report.trials = trials;

  for (std::size_t t = 0; t < trials; ++t) {
    const unsigned target = static_cast<unsigned>(t % 7) + 1;
    PotentialTrial trial;
    // Rejection-sample until the realized deviation touches exactly the
    // target components and stays feasible.
    for (int attempt = 0;; ++attempt) {
      if (attempt > 10000) {
        throw std::logic_error("could not sample a feasible deviation");
      }
      trial.profile = random_profile(net, rng);
      trial.user = rng.below(net.num_users());
      const UserProfile& u = net.profile(trial.user);
      const Strategy base = trial.profile[trial.user];
      Strategy dev = base;
      if (target & kLambda) dev.lambda = draw_lambda(rng);
      if (dev.lambda == 0.0) {
        dev.power_w = 0.0;
      } else if ((target & kPower) || base.lambda == 0.0) {
        dev.power_w = draw_power(u, rng);
      }
      if (target & kFrequency) {
        dev.freq_hz = dev.lambda == 1.0 && rng.coin(0.3) ? 0.0 : draw_freq(u, rng);
      }
      if (changed_components(base, dev) != target) continue;
      if (feasibility_violation(dev, u)) continue;
      trial.deviation = dev;
      break;
    }

    StrategyProfile deviated = trial.profile;
    deviated[trial.user] = trial.deviation;
    trial.pattern = target;
    trial.delta_utility = altruistic_utility(net, deviated, trial.user) -
                          altruistic_utility(net, trial.profile, trial.user);
    trial.delta_potential =
        potential(net, deviated) - potential(net, trial.profile);
    trial.residual = std::abs(trial.delta_utility - trial.delta_potential) /
                     std::max(1.0, std::abs(trial.delta_potential));

    ++report.pattern_counts[target];
    report.max_residual = std::max(report.max_residual, trial.residual);
    if (!(trial.residual <= tolerance)) {
      report.violations.push_back(std::move(trial));
    }
  }
  return report;
}

}  // namespace mecgame
