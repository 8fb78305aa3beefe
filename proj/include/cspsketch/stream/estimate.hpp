#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

#include "cspsketch/alpha/alpha_numeric.hpp"
#include "cspsketch/alpha/closed_forms.hpp"
#include "cspsketch/core/predicate.hpp"
#include "cspsketch/stream/bias_bounds.hpp"
#include "cspsketch/stream/instance.hpp"
#include "cspsketch/stream/l1_sketch.hpp"
#include "cspsketch/util/errors.hpp"
#include "cspsketch/util/rng.hpp"

// The bias-based single-pass value estimator for threshold predicates, and
// the majority-plus-biased-flips rounding scheme.

namespace cspsketch {

inline double alpha_for_estimator(const PredicateSpec& spec) {
  if (auto cf = closed_form_alpha(spec)) return cf->alpha;
  // no cataloged constant; fall back to the numeric engine
  return alpha_numeric(spec, 120, 1).alpha;
}

// Streams constraints into an l1 sketch of the per-variable signed
// occurrence weights. Shard sketches merge exactly, matching a single pass.
class BiasSketcher {
public:
  BiasSketcher(int variables, int arity, double delta, uint64_t seed)
      : sketch_(static_cast<uint32_t>(variables), delta, seed), arity_(arity) {}

  void feed(const Constraint& c) {
    for (size_t t = 0; t < c.indices.size(); ++t)
      sketch_.update(static_cast<uint32_t>(c.indices[t] - 1),
                     c.weight * static_cast<double>(c.negations[t]));
    total_weight_ += c.weight;
  }

  void merge(const BiasSketcher& other) {
    sketch_.merge(other.sketch_);
    total_weight_ += other.total_weight_;
  }

  // (1 +- delta)-estimate of bias with probability >= 2/3
  double bias_estimate() const {
    if (total_weight_ <= 0.0) throw ValidationError("BiasSketcher: zero total weight");
    return sketch_.estimate() / (static_cast<double>(arity_) * total_weight_);
  }

  const L1Sketch& sketch() const { return sketch_; }
  double total_weight() const { return total_weight_; }

private:
  L1Sketch sketch_;
  int arity_;
  double total_weight_ = 0.0;
};

struct EstimateResult {
  double value = 0.0;      // v_hat
  double bias = 0.0;       // sketched bias estimate
  double alpha = 0.0;
  double delta = 0.0;
  uint32_t sketch_rows = 0;
};

// Single pass over the constraint stream; with probability >= 2/3 the output
// satisfies (alpha - eps) val <= v_hat <= val.
inline EstimateResult estimate_value(const Instance& inst, const PredicateSpec& spec,
                                     double epsilon, uint64_t seed) {
  if (!spec.is_threshold())
    throw UnsupportedPredicateError("estimate_value: predicate is not a threshold family");
  if (!(epsilon > 0.0) || epsilon >= 1.0)
    throw ValidationError("estimate_value: epsilon must lie in (0, 1)");
  if (spec.k != inst.arity()) throw ValidationError("estimate_value: arity mismatch");

  const double alpha = alpha_for_estimator(spec);
  const double delta = std::min(epsilon / (2.0 * alpha), 0.5);

  BiasSketcher sketcher(inst.variables(), inst.arity(), delta, seed);
  for (const Constraint& c : inst.constraints()) sketcher.feed(c);

  const double b_hat = sketcher.bias_estimate();
  return EstimateResult{estimate_from_bias(spec, alpha, b_hat, delta), b_hat, alpha, delta,
                        sketcher.sketch().rows()};
}

// Majority by diff sign, then independent biased flips: a_i = +1 with
// probability p_star and the output is maj .* a, so each majority vote is
// kept with probability p_star. Expected value is at least alpha * val when
// (D_N*, p_star) came from a verified certificate.
inline Assignment round_assignment(const Instance& inst, const PredicateSpec& spec,
                                   double p_star, uint64_t seed) {
  if (spec.k != inst.arity()) throw ValidationError("round_assignment: arity mismatch");
  if (p_star < 0.0 || p_star > 1.0)
    throw ValidationError("round_assignment: p* outside [0, 1]");
  const DiffBias db = diff_and_bias(inst);
  Assignment maj = majority_assignment(db.diff);
  SplitMix64 rng(seed);
  Assignment out;
  out.values.reserve(maj.values.size());
  for (int8_t m : maj.values) {
    const int8_t a = rng.next_unit() < p_star ? 1 : -1;
    out.values.push_back(static_cast<int8_t>(m * a));
  }
  return out;
}

}  // namespace cspsketch
