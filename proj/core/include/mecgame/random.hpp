#pragma once

#include <cstdint>
#include <random>

namespace mecgame {

// std::uniform_real_distribution is implementation-defined, so draws are
// mapped from raw engine output by hand to keep runs bit-identical across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Rejection-free modulo bias is negligible for
  /// the small n used here.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

  bool coin(double p_true) { return uniform() < p_true; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mecgame
