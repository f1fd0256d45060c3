#pragma once

#include <cstdint>

#include "ekrlab/bitset.hpp"

namespace ekrlab {

/// Counter-based splittable generator keyed by (master seed, stream index).
///
/// Stream i of a given master seed is statistically independent of stream j
/// for i != j, so Monte Carlo trials can be farmed out to threads in any
/// order while staying bit-reproducible. The core transform is splitmix64.
class SplitRng {
 public:
  SplitRng(uint64_t master_seed, uint64_t stream)
      : state_(mix(master_seed ^ mix(stream + 0x9e3779b97f4a7c15ull))) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  /// Uniform double in [0, 1).
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return next_double() < p;
  }

  /// Uniform integer in [0, bound); bound must be positive.
  uint64_t below(uint64_t bound) {
    // Rejection sampling over the top multiple of bound.
    uint64_t threshold = -bound % bound;
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// Bitset over [0, size) with each bit set independently with probability p.
  Bitset bernoulli_mask(std::size_t size, double p) {
    Bitset b(size);
    for (std::size_t i = 0; i < size; ++i)
      if (bernoulli(p)) b.set(i);
    return b;
  }

  /// Each element of `from` kept independently with probability p.
  Bitset thin(const Bitset& from, double p) {
    Bitset b(from.size());
    from.for_each([&](std::size_t i) {
      if (bernoulli(p)) b.set(i);
    });
    return b;
  }

 private:
  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  uint64_t state_;
};

}  // namespace ekrlab
