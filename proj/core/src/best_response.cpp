#include "mecgame/best_response.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mecgame {

void PowerSearchConfig::validate() const {
  if (newton_max_iter < 1) throw ValidationError("newton_max_iter must be >= 1");
  if (!(newton_tol > 0.0)) throw ValidationError("newton_tol must be positive");
  if (multistart_count < 2) {
    throw ValidationError("multistart_count must be >= 2");
  }
  if (fallback_grid < 1) throw ValidationError("fallback_grid must be >= 1");
}

void BestResponseConfig::validate() const {
  power.validate();
  if (!(tie_tolerance >= 0.0)) {
    throw ValidationError("tie_tolerance must be non-negative");
  }
}

TransmissionObjective::TransmissionObjective(const Network& net,
                                             const StrategyProfile& profile,
                                             std::size_t n) {
  const Scenario& sc = net.scenario();
  const UserProfile& user = net.profile(n);
  const double scale = std::numbers::ln2 / sc.channel_bandwidth_hz;

  a_ = net.task(n).input_bits * scale;
  alpha_t_ = user.alpha_t;
  alpha_e_ = user.alpha_e;
  snr_slope_ =
      net.own_gain(n) / (sc.noise_power_w + interference_power(net, profile, n));
  p_min_ = user.p_min_w;
  p_max_ = user.p_max_w;

  for (std::size_t i : net.graph().out_neighbors[n]) {
    const Strategy& si = profile[i];
    if (si.lambda <= 0.0) continue;
    const UserProfile& ui = net.profile(i);
    double base = sc.noise_power_w;
    for (std::size_t j : net.graph().in_neighbors[i]) {
      if (j != n && profile[j].lambda > 0.0) {
        base += profile[j].power_w * net.cross_gain(j, i);
      }
    }
    neighbors_.push_back(
        {si.lambda * net.task(i).input_bits *
             (ui.alpha_t + ui.alpha_e * si.power_w) * scale,
         si.power_w * net.own_gain(i), base, net.cross_gain(n, i)});
  }
}

double TransmissionObjective::value(double p) const {
  double t = a_ * (alpha_t_ + alpha_e_ * p) / std::log1p(snr_slope_ * p);
  for (const auto& nb : neighbors_) {
    t += nb.b / std::log1p(nb.signal / (nb.base + p * nb.gain));
  }
  return t;
}

double TransmissionObjective::derivative(double p) const {
  // own = a g / h, g = alpha_t + alpha_e p, h = ln(1 + c p)
  const double c = snr_slope_;
  const double h = std::log1p(c * p);
  const double dh = c / (1.0 + c * p);
  const double g = alpha_t_ + alpha_e_ * p;
  double d = a_ * (alpha_e_ * h - g * dh) / (h * h);
  for (const auto& nb : neighbors_) {
    // term = b / u, u = ln(1 + s), s = S / (D + h p)
    const double den = nb.base + p * nb.gain;
    const double s = nb.signal / den;
    const double u = std::log1p(s);
    const double ds = -nb.signal * nb.gain / (den * den);
    const double du = ds / (1.0 + s);
    d += -nb.b * du / (u * u);
  }
  return d;
}

double TransmissionObjective::second_derivative(double p) const {
  const double c = snr_slope_;
  const double h = std::log1p(c * p);
  const double dh = c / (1.0 + c * p);
  const double ddh = -dh * dh;
  const double g = alpha_t_ + alpha_e_ * p;
  const double dg = alpha_e_;
  double d2 = a_ * (-g * ddh * h - 2.0 * dh * (dg * h - g * dh)) / (h * h * h);
  for (const auto& nb : neighbors_) {
    const double den = nb.base + p * nb.gain;
    const double s = nb.signal / den;
    const double u = std::log1p(s);
    const double ds = -nb.signal * nb.gain / (den * den);
    const double dds = 2.0 * nb.signal * nb.gain * nb.gain / (den * den * den);
    const double du = ds / (1.0 + s);
    const double ddu = (dds * (1.0 + s) - ds * ds) / ((1.0 + s) * (1.0 + s));
    d2 += -nb.b * (ddu * u - 2.0 * du * du) / (u * u * u);
  }
  return d2;
}

double transmission_overhead(const Network& net, const StrategyProfile& profile,
                             std::size_t n, double power_w) {
  return TransmissionObjective(net, profile, n).value(power_w);
}

namespace {

bool newton_root(const TransmissionObjective& obj, double p,
                 const PowerSearchConfig& cfg, double& root) {
  for (int it = 0; it < cfg.newton_max_iter; ++it) {
    const double d1 = obj.derivative(p);
    if (std::abs(d1) <= cfg.newton_tol) {
      root = p;
      return true;
    }
    const double d2 = obj.second_derivative(p);
    if (!std::isfinite(d2) || d2 == 0.0) return false;
    p -= d1 / d2;
    if (!(p >= obj.p_min() && p <= obj.p_max())) return false;
  }
  return false;
}

// Bisection on a sign change of T'. Returns the last midpoint; `converged`
// reports whether |T'| reached the tolerance there.
double bisect_root(const TransmissionObjective& obj, double lo, double d_lo,
                   double hi, const PowerSearchConfig& cfg, bool& converged) {
  double mid = 0.5 * (lo + hi);
  converged = false;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double d_mid = obj.derivative(mid);
    if (std::abs(d_mid) <= cfg.newton_tol) {
      converged = true;
      return mid;
    }
    if (mid <= lo || mid >= hi) break;  // interval exhausted at double precision
    if ((d_mid < 0.0) == (d_lo < 0.0)) {
      lo = mid;
      d_lo = d_mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

}  // namespace

PowerSearchResult search_transmit_power(const Network& net,
                                        const StrategyProfile& profile,
                                        std::size_t n,
                                        const PowerSearchConfig& cfg) {
  const TransmissionObjective obj(net, profile, n);
  const double lo = obj.p_min();
  const double hi = obj.p_max();

  PowerSearchResult result;
  std::vector<double> candidates{lo, hi};

  if (hi > lo) {
    for (int k = 0; k < cfg.multistart_count; ++k) {
      const double seed = lo + (hi - lo) * k / (cfg.multistart_count - 1);
      double root = 0.0;
      if (newton_root(obj, seed, cfg, root)) {
        candidates.push_back(root);
        result.stationary_points.push_back(root);
      }
    }

    double p_prev = lo;
    double d_prev = obj.derivative(lo);
    for (int k = 1; k <= cfg.fallback_grid; ++k) {
      const double p = k == cfg.fallback_grid
                           ? hi
                           : lo + (hi - lo) * k / cfg.fallback_grid;
      const double d = obj.derivative(p);
      if (d_prev != 0.0 && d != 0.0 && (d_prev < 0.0) != (d < 0.0)) {
        bool converged = false;
        const double root = bisect_root(obj, p_prev, d_prev, p, cfg, converged);
        candidates.push_back(root);
        if (converged) result.stationary_points.push_back(root);
      }
      p_prev = p;
      d_prev = d;
    }
  }

  std::sort(candidates.begin(), candidates.end());
  result.power_w = candidates.front();
  result.overhead = obj.value(result.power_w);
  for (double p : candidates) {
    const double t = obj.value(p);
    if (t < result.overhead) {
      result.overhead = t;
      result.power_w = p;
    }
  }
  // Several seeds usually land on the same root.
  auto& roots = result.stationary_points;
  std::sort(roots.begin(), roots.end());
  const double merge = 1e-9 * (hi - lo);
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [merge](double a, double b) { return b - a <= merge; }),
              roots.end());
  return result;
}

double best_transmit_power(const Network& net, const StrategyProfile& profile,
                           std::size_t n, const PowerSearchConfig& cfg) {
  return search_transmit_power(net, profile, n, cfg).power_w;
}

double best_cpu_frequency(const UserProfile& user) {
  if (user.alpha_t == 0.0 && user.alpha_e == 0.0) {
    throw ValidationError("alpha_t and alpha_e cannot both be zero");
  }
  if (user.alpha_e == 0.0) return user.f_max_hz;
  if (user.alpha_t == 0.0) return user.f_min_positive_hz;
  const double f = std::cbrt(user.alpha_t / (2.0 * user.alpha_e * user.kappa));
  return std::clamp(f, user.f_min_positive_hz, user.f_max_hz);
}

BestResponse best_response(const Network& net, const StrategyProfile& profile,
                           std::size_t n, const BestResponseConfig& cfg) {
  StrategyProfile trial = profile;
  BestResponse br;

  const Strategy local{0.0, 0.0, best_cpu_frequency(net.profile(n))};
  trial[n] = local;
  br.u_zero = altruistic_utility(net, trial, n);

  const Strategy offload{1.0,
                         best_transmit_power(net, profile, n, cfg.power), 0.0};
  trial[n] = offload;
  br.u_one = altruistic_utility(net, trial, n);

  const double slack = cfg.tie_tolerance * std::max(1.0, std::abs(br.u_zero));
  br.strategy = br.u_one < br.u_zero - slack ? offload : local;
  return br;
}

}  // namespace mecgame
