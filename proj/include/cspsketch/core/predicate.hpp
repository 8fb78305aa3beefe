#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "cspsketch/core/binomial.hpp"
#include "cspsketch/util/errors.hpp"

namespace cspsketch {

// epsilon_{i,k} = -1 + 2i/k, the single-coordinate marginal of a point mass
// on Hamming weight i.
inline double epsilon_weight(int i, int k) {
  if (k < 1) throw ValidationError("epsilon_weight: arity must be >= 1");
  if (i < 0 || i > k) throw ValidationError("epsilon_weight: weight index out of [0, k]");
  return -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(k);
}

// A symmetric Boolean predicate of arity k accepting exactly the inputs whose
// Hamming weight (number of +1 coordinates) lies in `accepted`.
struct PredicateSpec {
  int k = 0;
  std::vector<int> accepted;  // sorted, distinct, subset of {0,...,k}
  double rho = 0.0;           // accepted fraction under the uniform distribution
  double eps_min = 0.0;       // epsilon_{min(S),k}
  double eps_max = 0.0;       // epsilon_{max(S),k}
  uint32_t accept_mask = 0;   // bit w set iff w in accepted

  bool accepts(int weight) const { return (accept_mask >> weight) & 1u; }
  int min_weight() const { return accepted.front(); }
  int max_weight() const { return accepted.back(); }

  // S = {i, ..., k} for some i
  bool is_threshold() const {
    return accepted.back() == k &&
           accepted.back() - accepted.front() + 1 == static_cast<int>(accepted.size());
  }

  // Some accepted weight on each side of k/2: the accepted set carries a
  // zero-marginal distribution, which makes the predicate resistant.
  bool supports_one_wise() const {
    return 2 * accepted.front() <= k && 2 * accepted.back() >= k;
  }

  std::string name() const {
    std::string s = "f_{";
    for (size_t i = 0; i < accepted.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(accepted[i]);
    }
    s += "}," + std::to_string(k);
    return s;
  }
};

inline PredicateSpec make_predicate(int k, const std::vector<int>& weights) {
  if (k < 1 || k > 31) throw ValidationError("make_predicate: arity must be in [1, 31]");
  if (weights.empty()) throw ValidationError("make_predicate: accepted weight set is empty");
  std::set<int> dedup(weights.begin(), weights.end());
  PredicateSpec spec;
  spec.k = k;
  for (int w : dedup) {
    if (w < 0 || w > k)
      throw ValidationError("make_predicate: accepted weight " + std::to_string(w) +
                            " outside {0,...," + std::to_string(k) + "}");
    spec.accepted.push_back(w);
    spec.accept_mask |= 1u << w;
  }
  uint64_t count = 0;
  for (int w : spec.accepted) count += binomial(k, w);
  spec.rho = static_cast<double>(count) / pow_int(2.0, k);
  spec.eps_min = epsilon_weight(spec.accepted.front(), k);
  spec.eps_max = epsilon_weight(spec.accepted.back(), k);
  return spec;
}

inline PredicateSpec kand_predicate(int k) { return make_predicate(k, {k}); }

// Th^i_k: at least i ones.
inline PredicateSpec threshold_predicate(int i, int k) {
  std::vector<int> s;
  for (int w = i; w <= k; ++w) s.push_back(w);
  return make_predicate(k, s);
}

// The complement-reindexed predicate f_{S',k}, S' = {k - s}. Instances of one
// are instances of the other with the same value (negate every variable).
inline PredicateSpec complement_predicate(const PredicateSpec& spec) {
  std::vector<int> s;
  for (int w : spec.accepted) s.push_back(spec.k - w);
  return make_predicate(spec.k, s);
}

}  // namespace cspsketch
