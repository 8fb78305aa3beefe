#pragma once

#include <cstdint>
#include <vector>

#include "cspsketch/util/errors.hpp"

namespace cspsketch {

// splitmix64 finalizer; full-period mixer, good enough for simulation work.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based draw keyed by up to three words; stateless, so parallel
// shards and merged sketches see identical values.
inline uint64_t keyed_bits(uint64_t seed, uint64_t a, uint64_t b = 0) {
  uint64_t h = mix64(seed ^ 0x243f6a8885a308d3ULL);
  h = mix64(h ^ a);
  h = mix64(h ^ (b + 0x452821e638d01377ULL));
  return h;
}

// uniform in [0, 1) with 53 random bits
inline double bits_to_unit(uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class SplitMix64 {
public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  double next_unit() { return bits_to_unit(next()); }

  // unbiased integer in [0, bound)
  uint64_t next_below(uint64_t bound) {
    if (bound == 0) throw ValidationError("next_below: bound must be positive");
    uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // k distinct values from {1, ..., n}, in draw order
  std::vector<int> distinct_indices(int k, int n) {
    std::vector<int> out;
    out.reserve(k);
    while (static_cast<int>(out.size()) < k) {
      int candidate = static_cast<int>(next_below(static_cast<uint64_t>(n))) + 1;
      bool dup = false;
      for (int v : out) dup = dup || (v == candidate);
      if (!dup) out.push_back(candidate);
    }
    return out;
  }

private:
  uint64_t state_;
};

}  // namespace cspsketch
