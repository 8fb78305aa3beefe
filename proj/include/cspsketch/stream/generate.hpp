#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cspsketch/core/symmetric_dist.hpp"
#include "cspsketch/stream/instance.hpp"
#include "cspsketch/util/errors.hpp"
#include "cspsketch/util/rng.hpp"

namespace cspsketch {

// Uniform negation patterns on random distinct index tuples, unit weights.
inline Instance generate_random_uniform(int k, int n, int m, uint64_t seed) {
  if (n < k) throw ValidationError("generate: need n >= k");
  if (m < 1) throw ValidationError("generate: need m >= 1");
  Instance inst(n, k);
  SplitMix64 rng(seed);
  for (int i = 0; i < m; ++i) {
    Constraint c;
    c.weight = 1.0;
    c.indices = rng.distinct_indices(k, n);
    c.negations.reserve(static_cast<size_t>(k));
    for (int t = 0; t < k; ++t) c.negations.push_back(rng.next() & 1 ? 1 : -1);
    inst.add_constraint(std::move(c));
  }
  return inst;
}

// Patterns drawn from the planted symmetric distribution: weight class by
// the masses, pattern uniform within the class.
inline Instance generate_planted(const SymmetricDist& dist, int n, int m, uint64_t seed) {
  const int k = dist.arity();
  if (n < k) throw ValidationError("generate: need n >= k");
  if (m < 1) throw ValidationError("generate: need m >= 1");
  Instance inst(n, k);
  SplitMix64 rng(seed);
  for (int i = 0; i < m; ++i) {
    const double u = rng.next_unit();
    int weight = k;
    double acc = 0.0;
    for (int w = 0; w <= k; ++w) {
      acc += dist[w];
      if (u < acc) {
        weight = w;
        break;
      }
    }
    // uniform weight-`weight` pattern: shuffle `weight` ones into k slots
    std::vector<int8_t> pattern(static_cast<size_t>(k), -1);
    for (int t = 0; t < weight; ++t) pattern[static_cast<size_t>(t)] = 1;
    for (int t = k - 1; t > 0; --t) {
      const int u2 = static_cast<int>(rng.next_below(static_cast<uint64_t>(t) + 1));
      std::swap(pattern[static_cast<size_t>(t)], pattern[static_cast<size_t>(u2)]);
    }
    Constraint c;
    c.weight = 1.0;
    c.negations = std::move(pattern);
    c.indices = rng.distinct_indices(k, n);
    inst.add_constraint(std::move(c));
  }
  return inst;
}

enum class GenKind { random_uniform, planted, canonical };

inline Instance generate_instance(GenKind kind, int k, int n, int m, uint64_t seed,
                                  const SymmetricDist* dist = nullptr) {
  switch (kind) {
    case GenKind::random_uniform:
      return generate_random_uniform(k, n, m, seed);
    case GenKind::planted:
      if (!dist) throw ValidationError("generate: planted kind needs a distribution");
      return generate_planted(*dist, n, m, seed);
    default:
      if (!dist) throw ValidationError("generate: canonical kind needs a distribution");
      return canonical_instance(*dist);
  }
}

}  // namespace cspsketch
