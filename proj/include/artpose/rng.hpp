#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace artpose {

/// Self-contained PCG32 generator. The standard library distributions are
/// implementation-defined, so every sampling helper lives here to keep
/// results bit-identical across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t stream = 0) {
    state_ = 0;
    inc_ = (stream << 1u) | 1u;
    next_u32();
    state_ += seed;
    next_u32();
  }

  /// Deterministically derive an independent generator, e.g. one per scene
  /// or per fitted instance.
  Rng derive(uint64_t stream_id) const {
    return Rng(split_mix(state_ ^ 0x9e3779b97f4a7c15ull), split_mix(stream_id));
  }

  uint32_t next_u32() {
    const uint64_t old = state_;
    state_ = old * 6364136223846793005ull + inc_;
    const uint32_t xorshifted = static_cast<uint32_t>(((old >> 18u) ^ old) >> 27u);
    const uint32_t rot = static_cast<uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  uint64_t next_u64() {
    const uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n), n >= 1. Rejection-free Lemire reduction is
  /// unnecessary here; modulo bias is < 2^-32 for the small n we use, but we
  /// reject anyway to stay exactly uniform.
  uint32_t uniform_int(uint32_t n) {
    const uint32_t threshold = (-n) % n;
    for (;;) {
      const uint32_t r = next_u32();
      if (r >= threshold) return r % n;
    }
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Standard normal via Box-Muller (no cached spare, for reproducibility
  /// independent of call interleaving).
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

  static uint64_t split_mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

 private:
  uint64_t state_;
  uint64_t inc_;
};

}  // namespace artpose
