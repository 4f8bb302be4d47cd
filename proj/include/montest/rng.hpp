#pragma once

#include <cstdint>

#include "montest/zp.hpp"

namespace montest {

/// Counter-based generator: output i is a fixed mixing function of (key, i).
///
/// Sampling helpers are defined here rather than through <random> distributions so
/// that a seed reproduces the same stream on every standard library.
class CounterRng {
 public:
  explicit CounterRng(u64 key) noexcept : key_(key) {}

  static u64 mix(u64 z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Seed for an independent sub-stream, e.g. one per trial.
  static u64 derive(u64 key, u64 stream) noexcept { return mix(mix(key) ^ mix(stream + 0x632be59bd9b4e019ULL)); }

  u64 next() noexcept { return mix(key_ ^ mix(counter_++)); }

  /// Uniform in [0, bound); bound must be positive.
  u64 uniform(u64 bound) noexcept {
    u64 threshold = (0 - bound) % bound;
    for (;;) {
      u64 r = next();
      if (r >= threshold) return r % bound;
    }
  }

  u64 counter() const noexcept { return counter_; }
  u64 key() const noexcept { return key_; }

 private:
  u64 key_;
  u64 counter_ = 0;
};

}  // namespace montest
