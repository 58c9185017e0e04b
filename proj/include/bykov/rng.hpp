#pragma once

// Seeded generator for reproducible parameter draws. SplitMix64 is used
// directly (not std::uniform_real_distribution) so the draw sequence is
// identical on every platform and byte-stable in the report files.

#include <cstdint>

namespace bykov {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Log-uniform over [lo, hi], lo > 0.
  double log_uniform(double lo, double hi) {
    const double u = uniform01();
    return lo * std::exp(u * std::log(hi / lo));
  }

 private:
  std::uint64_t state_;
};

}  // namespace bykov
