#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cspsketch/core/binomial.hpp"
#include "cspsketch/core/predicate.hpp"
#include "cspsketch/core/symmetric_dist.hpp"
#include "cspsketch/util/errors.hpp"

namespace cspsketch {

// One weighted constraint: the predicate applied to the signed literals
// (negations[t] * sigma[indices[t]]).
struct Constraint {
  std::vector<int8_t> negations;  // entries in {-1, +1}
  std::vector<int> indices;       // distinct, 1-based
  double weight = 0.0;

  int pattern_weight() const {
    int w = 0;
    for (int8_t b : negations) w += b > 0;
    return w;
  }
};

struct Assignment {
  std::vector<int8_t> values;  // entries in {-1, +1}

  static Assignment all_ones(int n) { return Assignment{std::vector<int8_t>(n, 1)}; }
  int size() const { return static_cast<int>(values.size()); }
};

class Instance {
public:
  Instance(int n, int k) : n_(n), k_(k) {
    if (n < 1) throw ValidationError("Instance: variable count must be >= 1");
    if (k < 1 || k > 31) throw ValidationError("Instance: arity must be in [1, 31]");
    if (k > n) throw ValidationError("Instance: arity exceeds variable count");
  }

  void add_constraint(Constraint c) {
    if (static_cast<int>(c.negations.size()) != k_ || static_cast<int>(c.indices.size()) != k_)
      throw ValidationError("add_constraint: arity mismatch");
    if (!(c.weight >= 0.0) || !std::isfinite(c.weight))
      throw ValidationError("add_constraint: weight must be finite and >= 0");
    for (int t = 0; t < k_; ++t) {
      if (c.negations[t] != 1 && c.negations[t] != -1)
        throw ValidationError("add_constraint: negation entries must be +-1");
      const int j = c.indices[t];
      if (j < 1 || j > n_)
        throw ValidationError("add_constraint: index " + std::to_string(j) + " outside [1, " +
                              std::to_string(n_) + "]");
      for (int u = t + 1; u < k_; ++u)
        if (c.indices[u] == j)
          throw ValidationError("add_constraint: duplicate index " + std::to_string(j));
    }
    total_weight_ += c.weight;
    constraints_.push_back(std::move(c));
  }

  int variables() const { return n_; }
  int arity() const { return k_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  double total_weight() const { return total_weight_; }

private:
  int n_;
  int k_;
  std::vector<Constraint> constraints_;
  double total_weight_ = 0.0;
};

// The canonical instance of a symmetric distribution: k variables,
// j = (1,...,k), one constraint per negation pattern of positive mass,
// weighted by the per-pattern probability D<wt>/C(k, wt).
inline Instance canonical_instance(const SymmetricDist& dist) {
  const int k = dist.arity();
  if (k > 20) throw ValidationError("canonical_instance: arity above 20 enumerates too many patterns");
  Instance inst(k, k);
  std::vector<int> indices(static_cast<size_t>(k));
  for (int t = 0; t < k; ++t) indices[static_cast<size_t>(t)] = t + 1;
  for (int w = 0; w <= k; ++w) {
    if (dist[w] <= 0.0) continue;
    const double per_pattern = dist[w] / static_cast<double>(binomial(k, w));
    // patterns of weight w in lexicographic position order
    uint32_t mask = (w == 0) ? 0u : (1u << w) - 1u;
    for (uint64_t count = binomial(k, w); count > 0; --count) {
      Constraint c;
      c.indices = indices;
      c.negations.resize(static_cast<size_t>(k));
      for (int t = 0; t < k; ++t)
        c.negations[static_cast<size_t>(t)] = ((mask >> t) & 1u) ? 1 : -1;
      c.weight = per_pattern;
      inst.add_constraint(std::move(c));
      if (w == 0 || count == 1) break;
      // Gosper's hack: next mask with the same popcount
      const uint32_t lowest = mask & (0u - mask);
      const uint32_t ripple = mask + lowest;
      mask = ripple | (((mask ^ ripple) >> 2) / lowest);
    }
  }
  return inst;
}

// Weighted satisfied fraction under sigma.
inline double eval_assignment(const Instance& inst, const PredicateSpec& spec,
                              const Assignment& sigma) {
  if (spec.k != inst.arity()) throw ValidationError("eval_assignment: predicate arity mismatch");
  if (sigma.size() != inst.variables())
    throw ValidationError("eval_assignment: assignment length mismatch");
  if (inst.total_weight() <= 0.0)
    throw ValidationError("eval_assignment: instance has zero total weight");
  double sat = 0.0;
  for (const Constraint& c : inst.constraints()) {
    int w = 0;
    for (int t = 0; t < inst.arity(); ++t)
      w += c.negations[static_cast<size_t>(t)] *
               sigma.values[static_cast<size_t>(c.indices[static_cast<size_t>(t)]) - 1] >
           0;
    if (spec.accepts(w)) sat += c.weight;
  }
  return sat / inst.total_weight();
}

struct DiffBias {
  std::vector<double> diff;  // signed occurrence weight per variable
  double bias = 0.0;         // sum |diff_i| / (k W)
};

inline DiffBias diff_and_bias(const Instance& inst) {
  DiffBias out;
  out.diff.assign(static_cast<size_t>(inst.variables()), 0.0);
  for (const Constraint& c : inst.constraints())
    for (int t = 0; t < inst.arity(); ++t)
      out.diff[static_cast<size_t>(c.indices[static_cast<size_t>(t)]) - 1] +=
          c.weight * c.negations[static_cast<size_t>(t)];
  double sum = 0.0;
  for (double d : out.diff) sum += std::abs(d);
  const double kw = static_cast<double>(inst.arity()) * inst.total_weight();
  out.bias = kw > 0.0 ? sum / kw : 0.0;
  return out;
}

// Flip variables by a: (b, j) -> (b * a|_j, j). Values are preserved up to
// relabeling assignments by a.
inline Instance flip_instance(const Instance& inst, const Assignment& a) {
  if (a.size() != inst.variables()) throw ValidationError("flip_instance: length mismatch");
  Instance out(inst.variables(), inst.arity());
  for (const Constraint& c : inst.constraints()) {
    Constraint f = c;
    for (int t = 0; t < inst.arity(); ++t)
      f.negations[static_cast<size_t>(t)] = static_cast<int8_t>(
          f.negations[static_cast<size_t>(t)] *
          a.values[static_cast<size_t>(c.indices[static_cast<size_t>(t)]) - 1]);
    out.add_constraint(std::move(f));
  }
  return out;
}

// The symmetrized pattern distribution: weight-classified negation patterns.
inline SymmetricDist sym_dist(const Instance& inst) {
  if (inst.total_weight() <= 0.0) throw ValidationError("sym_dist: zero total weight");
  std::vector<double> masses(static_cast<size_t>(inst.arity()) + 1, 0.0);
  for (const Constraint& c : inst.constraints())
    masses[static_cast<size_t>(c.pattern_weight())] += c.weight;
  for (double& m : masses) m /= inst.total_weight();
  return SymmetricDist(std::move(masses));
}

// maj_i = +1 iff diff_i >= 0.
inline Assignment majority_assignment(const std::vector<double>& diff) {
  Assignment a;
  a.values.reserve(diff.size());
  for (double d : diff) a.values.push_back(d >= 0.0 ? 1 : -1);
  return a;
}

}  // namespace cspsketch
