#pragma once

#include <cstdint>

namespace robustface {

// SplitMix64 (Steele, Lea & Flood). Seed 0 yields 0xe220a8397b1dcdaf,
// 0x6e789e6aa1b965f4, 0x06c45d188009454f.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  // Uniform on [lo, hi].
  double uniform(double lo, double hi);
  // Uniform integer on [0, bound), bound >= 1; rejection sampling, no bias.
  std::uint64_t uniform_index(std::uint64_t bound);
  // Standard normal via Box-Muller (one draw per two uniforms).
  double normal();
  // Independent child stream.
  SplitMix64 split() { return SplitMix64(next()); }

 private:
  std::uint64_t state_;
};

// Deterministic seed derivation: mixes a stream id into a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace robustface
