#pragma once

#include <cstddef>
#include <vector>

#include "mecgame/overhead.hpp"

namespace mecgame {

/// Knobs for the transmit-power search.
struct PowerSearchConfig {
  int newton_max_iter = 50;
  double newton_tol = 1e-9;  // |dT/dp| accepted as stationary
  int multistart_count = 8;  // Newton seeds spread evenly over [p_min, p_max]
  int fallback_grid = 64;    // intervals scanned for derivative sign changes

  void validate() const;

  friend bool operator==(const PowerSearchConfig&,
                         const PowerSearchConfig&) = default;
};

struct BestResponseConfig {
  PowerSearchConfig power;
  // |U1 - U0| <= tie_tolerance * max(1, |U0|) counts as a tie; ties go local.
  double tie_tolerance = 1e-14;

  void validate() const;

  friend bool operator==(const BestResponseConfig&,
                         const BestResponseConfig&) = default;
};

/// The part of U_n that depends on n's transmit power while n fully
/// offloads: n's own uplink latency/energy plus the uplink cost of every
/// transmitting out-neighbor, with all other strategies frozen.
///
///   T(p) = a (alpha_t + alpha_e p) / ln(1 + p G / (N0 + Gamma))
///        + sum_i b_i / ln(1 + S_i / (D_i + p h_i))
///
/// where a = L ln2 / w, b_i = lambda_i L_i (alpha_t,i + alpha_e,i p_i) ln2 / w,
/// S_i is neighbor i's received signal, h_i the gain from n toward i's BS and
/// D_i the noise plus every other interferer at i's BS.
class TransmissionObjective {
 public:
  TransmissionObjective(const Network& net, const StrategyProfile& profile,
                        std::size_t n);

  double value(double p) const;
  double derivative(double p) const;
  double second_derivative(double p) const;

  double p_min() const { return p_min_; }
  double p_max() const { return p_max_; }
  std::size_t neighbor_terms() const { return neighbors_.size(); }

 private:
  struct NeighborTerm {
    double b;       // weight numerator
    double signal;  // S_i
    double base;    // D_i
    double gain;    // h_i
  };

  double a_;
  double alpha_t_;
  double alpha_e_;
  double snr_slope_;  // G / (N0 + Gamma)
  double p_min_;
  double p_max_;
  std::vector<NeighborTerm> neighbors_;
};

/// T(p) for user n; `profile[n]` itself is ignored.
double transmission_overhead(const Network& net, const StrategyProfile& profile,
                             std::size_t n, double power_w);

struct PowerSearchResult {
  double power_w = 0.0;
  double overhead = 0.0;  // T at power_w
  // Interior points where |T'| <= newton_tol.
  std::vector<double> stationary_points;
};

PowerSearchResult search_transmit_power(const Network& net,
                                        const StrategyProfile& profile,
                                        std::size_t n,
                                        const PowerSearchConfig& cfg);

/// argmin of T over {p_min, p_max} and the interior stationary points.
double best_transmit_power(const Network& net, const StrategyProfile& profile,
                           std::size_t n, const PowerSearchConfig& cfg);

/// Minimizer of the local overhead over (0, f_max]:
/// (alpha_t / (2 alpha_e kappa))^{1/3}, clamped to [f_min_positive, f_max].
double best_cpu_frequency(const UserProfile& user);

inline double best_cpu_frequency(std::size_t n, const Scenario& scenario) {
  return best_cpu_frequency(scenario.profiles.at(n));
}

struct BestResponse {
  Strategy strategy;
  double u_one = 0.0;   // U_n with (1, best power, 0)
  double u_zero = 0.0;  // U_n with (0, 0, best frequency)

  double utility() const { return strategy.lambda == 0.0 ? u_zero : u_one; }
};

/// Exact best response of user n against the rest of `profile`.
BestResponse best_response(const Network& net, const StrategyProfile& profile,
                           std::size_t n, const BestResponseConfig& cfg = {});

}  // namespace mecgame
