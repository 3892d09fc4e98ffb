// Copyright 2026 The pdmp-switch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>

namespace pdmp {

/// SplitMix64 finalizer (Steele, Lea & Flood).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Counter-based generator: output k is splitmix64_mix(seed + (k+1)*gamma).
/// The stream is part of the golden-file contract; do not change it.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += kGoldenGamma;
    return splitmix64_mix(state_);
  }

  /// Uniform on the open interval (0,1) from the top 53 bits.
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // UniformRandomBitGenerator interface
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next_u64(); }

 private:
  std::uint64_t state_;
};

/// Seed of run k in an ensemble: the (k+1)-th splitmix64 output of base.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k) {
  return splitmix64_mix(base + (k + 1) * kGoldenGamma);
}

/// Inverse-CDF exponential variate for a given uniform u in (0,1).
inline double exponential_from_uniform(double rate, double u) { return -std::log(u) / rate; }

}  // namespace pdmp
