#pragma once

#include <cmath>
#include <cstdint>

namespace eventpulse {

// SplitMix64 (Steele, Lea, Flood 2014). Chosen for bit-exact reproducibility
// across platforms and standard libraries; std::* distributions make no such
// guarantee. The algorithm name is pinned in synth output metadata.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Exponential with mean mu. next_double() < 1 keeps the log argument > 0.
  double next_exponential(double mu) {
    return -mu * std::log1p(-next_double());
  }

 private:
  std::uint64_t state_;
};

inline constexpr const char* kRngAlgorithm = "splitmix64";

} // namespace eventpulse
