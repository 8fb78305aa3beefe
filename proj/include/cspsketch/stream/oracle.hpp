#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "cspsketch/core/predicate.hpp"
#include "cspsketch/stream/instance.hpp"
#include "cspsketch/util/errors.hpp"
#include "cspsketch/util/parallel.hpp"

namespace cspsketch {

// Bitmask form of an instance over at most 32 variables: per constraint the
// index mask and the negated positions, so evaluating one assignment mask is
// two xors and a popcount per constraint.
class MaskedInstance {
public:
  MaskedInstance(const Instance& inst, const PredicateSpec& spec)
      : n_(inst.variables()),
        accept_mask_(spec.accept_mask),
        inv_weight_(1.0 / inst.total_weight()) {
    if (inst.variables() > 32)
      throw ValidationError("MaskedInstance: more than 32 variables");
    if (spec.k != inst.arity()) throw ValidationError("MaskedInstance: arity mismatch");
    if (inst.total_weight() <= 0.0)
      throw ValidationError("MaskedInstance: zero total weight");
    for (const Constraint& c : inst.constraints()) {
      Row row;
      for (int t = 0; t < inst.arity(); ++t) {
        const uint32_t bit = 1u << (c.indices[static_cast<size_t>(t)] - 1);
        row.index_mask |= bit;
        if (c.negations[static_cast<size_t>(t)] < 0) row.flip_mask |= bit;
      }
      row.weight = c.weight;
      rows_.push_back(row);
    }
  }

  // sigma_mask bit i-1 set means sigma_i = +1
  double value(uint32_t sigma_mask) const {
    double sat = 0.0;
    for (const Row& r : rows_) {
      const int w = std::popcount((sigma_mask ^ r.flip_mask) & r.index_mask);
      sat += ((accept_mask_ >> w) & 1u) ? r.weight : 0.0;
    }
    return sat * inv_weight_;
  }

  int variables() const { return n_; }

private:
  struct Row {
    uint32_t index_mask = 0;
    uint32_t flip_mask = 0;
    double weight = 0.0;
  };
  int n_;
  uint32_t accept_mask_;
  double inv_weight_;
  std::vector<Row> rows_;
};

inline Assignment assignment_from_mask(uint32_t mask, int n) {
  Assignment a;
  a.values.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) a.values.push_back(((mask >> i) & 1u) ? 1 : -1);
  return a;
}

inline uint32_t mask_from_assignment(const Assignment& a) {
  uint32_t mask = 0;
  for (int i = 0; i < a.size(); ++i)
    if (a.values[static_cast<size_t>(i)] > 0) mask |= 1u << i;
  return mask;
}

struct ExactResult {
  double value = 0.0;
  Assignment argmax;
};

namespace detail {

// sigma ordering with -1 before +1, first coordinate most significant
inline uint32_t lex_rank(uint32_t mask, int n) {
  uint32_t r = 0;
  for (int i = 0; i < n; ++i) r = (r << 1) | ((mask >> i) & 1u);
  return r;
}

}  // namespace detail

// Exhaustive maximum over all 2^n assignments; reports the lexicographically
// first maximizer (-1 sorts before +1). Desk-scale oracle, refuses n > 24.
inline ExactResult exact_value(const Instance& inst, const PredicateSpec& spec,
                               unsigned threads = 1) {
  if (inst.variables() > 24)
    throw ValidationError(
        "exact_value: exhaustive search capped at 24 variables; use estimate_value for larger "
        "instances");
  const MaskedInstance masked(inst, spec);
  const int n = inst.variables();
  const uint64_t count = 1ull << n;

  struct Best {
    double value = -1.0;
    uint32_t mask = 0;
    bool any = false;
  };
  auto better = [n](const Best& a, const Best& b) {
    if (!b.any) return false;
    if (!a.any || b.value > a.value) return true;
    return b.value == a.value && detail::lex_rank(b.mask, n) < detail::lex_rank(a.mask, n);
  };
  Best best = parallel_reduce<Best>(
      count, threads, {},
      [&](uint64_t begin, uint64_t end) {
        Best local;
        for (uint64_t m = begin; m < end; ++m) {
          const double v = masked.value(static_cast<uint32_t>(m));
          Best cand{v, static_cast<uint32_t>(m), true};
          if (better(local, cand)) local = cand;
        }
        return local;
      },
      [&](Best a, Best b) { return better(a, b) ? b : a; });

  return ExactResult{best.value, assignment_from_mask(best.mask, n)};
}

}  // namespace cspsketch
