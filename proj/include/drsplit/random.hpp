#pragma once

#include <cstdint>
#include <random>

namespace drsplit {

/// Portable seeded generator. std::mt19937_64 is fully specified by the
/// standard; the conversions to double below are done by hand because the
/// standard distributions are implementation-defined.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal deviate, Box-Muller with both outputs used in turn.
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace drsplit
