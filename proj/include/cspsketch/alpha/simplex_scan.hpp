#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "cspsketch/core/binomial.hpp"
#include "cspsketch/util/rng.hpp"

// Simplex sampling and local refinement shared by the ratio searches.

namespace cspsketch {

namespace detail {
// full-lattice scans switch to restricted supports beyond this many points
constexpr uint64_t kFullLatticeBudget = 3'000'000;
}  // namespace detail

// Visits every composition of `total` into `parts` nonnegative integers.
// Order is deterministic (lexicographic by leading coordinates).
template <typename Fn>
void for_each_composition(int parts, int total, Fn&& fn) {
  std::vector<int> c(static_cast<size_t>(parts), 0);
  c[0] = total;
  for (;;) {
    fn(static_cast<const std::vector<int>&>(c));
    // next composition: move one unit from the rightmost positive coordinate
    // before the last into the following slot, folding the tail back left
    int i = parts - 2;
    while (i >= 0 && c[i] == 0) --i;
    if (i < 0) return;
    --c[i];
    const int tail = c[parts - 1] + 1;
    c[static_cast<size_t>(i) + 1] = tail;
    for (int j = i + 2; j < parts; ++j) c[j] = 0;
  }
}

// C(total+parts-1, parts-1), saturating at UINT64_MAX; only compared against
// scan budgets, so saturation is harmless.
inline uint64_t composition_count(int parts, int total) {
  const uint64_t n = static_cast<uint64_t>(total) + parts - 1;
  uint64_t r = static_cast<uint64_t>(parts) - 1;
  if (r > n - r) r = n - r;
  unsigned __int128 v = 1;
  for (uint64_t i = 1; i <= r; ++i) {
    v = v * (n - r + i) / i;
    if (v > static_cast<unsigned __int128>(UINT64_MAX)) return UINT64_MAX;
  }
  return static_cast<uint64_t>(v);
}

// Restricted-support lattice: every subset of `support_size` coordinates out
// of `parts`, each carrying a full composition of `total`.
template <typename Fn>
void for_each_support_lattice(int parts, int support_size, int total, Fn&& fn) {
  std::vector<int> subset(static_cast<size_t>(support_size));
  for (int i = 0; i < support_size; ++i) subset[i] = i;
  std::vector<int> point(static_cast<size_t>(parts));
  for (;;) {
    for_each_composition(support_size, total, [&](const std::vector<int>& c) {
      std::fill(point.begin(), point.end(), 0);
      for (int i = 0; i < support_size; ++i) point[static_cast<size_t>(subset[i])] = c[i];
      fn(static_cast<const std::vector<int>&>(point));
    });
    // next subset in lexicographic order
    int i = support_size - 1;
    while (i >= 0 && subset[i] == parts - support_size + i) --i;
    if (i < 0) return;
    ++subset[i];
    for (int j = i + 1; j < support_size; ++j) subset[j] = subset[j - 1] + 1;
  }
}

// Seeded flat-Dirichlet sample (uniform on the simplex); keyed by sample
// index so shards agree on the draw.
inline std::vector<double> dirichlet_sample(int parts, uint64_t seed, uint64_t index) {
  std::vector<double> m(static_cast<size_t>(parts));
  double sum = 0.0;
  for (int i = 0; i < parts; ++i) {
    const double u = bits_to_unit(keyed_bits(seed, index, static_cast<uint64_t>(i)));
    m[i] = -std::log(1.0 - u);
    sum += m[i];
  }
  for (double& v : m) v /= sum;
  return m;
}

// Best point seen by a scan; ties broken toward the lexicographically
// smallest mass vector so reductions are order- and shard-independent.
struct ScanBest {
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> masses;

  void offer(double v, const std::vector<double>& m) {
    if (v < value || (v == value && !masses.empty() &&
                      std::lexicographical_compare(m.begin(), m.end(), masses.begin(),
                                                   masses.end()))) {
      value = v;
      masses = m;
    }
  }

  void merge(const ScanBest& other) {
    if (!other.masses.empty()) offer(other.value, other.masses);
  }
};

// Greedy pairwise mass-transfer descent with a shrinking step schedule.
// `evaluate` returns +inf for points it rejects.
inline ScanBest refine_on_simplex(const std::vector<double>& start,
                                  const std::function<double(const std::vector<double>&)>& evaluate,
                                  int rounds = 2, double initial_step = 0.05) {
  ScanBest best;
  best.offer(evaluate(start), start);
  std::vector<double> current = start;
  const int parts = static_cast<int>(start.size());
  for (int round = 0; round < rounds; ++round) {
    for (double step = initial_step; step > 1e-8; step *= 0.5) {
      bool moved = true;
      while (moved) {
        moved = false;
        for (int from = 0; from < parts; ++from) {
          if (current[from] < step) continue;
          for (int to = 0; to < parts; ++to) {
            if (to == from) continue;
            std::vector<double> cand = current;
            cand[from] -= step;
            cand[to] += step;
            const double v = evaluate(cand);
            if (v < best.value - 1e-15) {
              best.offer(v, cand);
              current = cand;
              moved = true;
            }
          }
        }
      }
    }
  }
  return best;
}

}  // namespace cspsketch
