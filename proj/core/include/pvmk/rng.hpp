#pragma once

#include <cstdint>

namespace pvmk {

/// SplitMix64 (Steele, Lea, Flood 2014). State advances by the golden-ratio
/// increment 0x9E3779B97F4A7C15; output mixes with multipliers
/// 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB and shifts 30, 27, 31.
/// Every derived draw below is defined in terms of next_u64() only, so
/// sequences are reproducible across platforms and standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform in [0, 1) from the top 53 bits.
  double uniform();

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound) by rejection on the top bits.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal via the Box-Muller transform (no cached second variate).
  double gaussian();

  /// Stream for trial `index`, derived from the master seed without sharing state.
  static SplitMix64 derive(std::uint64_t master, std::uint64_t index);

 private:
  std::uint64_t state_;
};

}  // namespace pvmk
