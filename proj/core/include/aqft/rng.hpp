#pragma once

#include <cstdint>
#include <random>

namespace aqft {

/// Seeded RNG wrapper that maps engine output to doubles itself, so that
/// sequences are identical across standard library implementations
/// (std::uniform_real_distribution is not pinned down by the standard).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Symmetric around zero, handy for generic test data.
  double signed_unit() { return 2.0 * uniform() - 1.0; }

  /// Uniform integer in [0, n).
  int index(int n) {
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace aqft
