#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cspsketch/alpha/closed_forms.hpp"
#include "cspsketch/stream/bias_bounds.hpp"
#include "cspsketch/stream/estimate.hpp"
#include "cspsketch/stream/generate.hpp"
#include "cspsketch/stream/oracle.hpp"
#include "cspsketch/util/rng.hpp"

using namespace cspsketch;

namespace {

PredicateSpec random_threshold(SplitMix64& rng) {
  const int k = 2 + static_cast<int>(rng.next_below(2));  // 2 or 3
  const int lo = k / 2 + 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(k - k / 2)));
  return threshold_predicate(std::min(lo, k), k);
}

}  // namespace

TEST_CASE("value is sandwiched between the bias curves") {
  SplitMix64 rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const PredicateSpec spec = random_threshold(rng);
    const Instance inst =
        generate_random_uniform(spec.k, 6 + static_cast<int>(rng.next_below(5)),
                                8 + static_cast<int>(rng.next_below(40)), rng.next());
    const double bias = diff_and_bias(inst).bias;
    const double val = exact_value(inst, spec).value;
    CHECK(val <= gamma_curve(spec, bias) + 1e-9);
    CHECK(val >= beta_curve_lower_bound(spec, bias) - 1e-9);
  }
}

TEST_CASE("the two beta-curve computations approximate the same function") {
  // both target beta_{S,k}(mu); the windowed lattice inf can land on either
  // side of the certified bound by roughly its marginal window
  const PredicateSpec and2 = kand_predicate(2);
  for (double m : {0.0, 0.1, 1.0 / 3.0, 0.6, 0.9}) {
    const double lb = beta_curve_lower_bound(and2, m);
    const double grid = beta_curve_grid(and2, m, 200);
    CHECK(std::abs(grid - lb) <= 3e-2);
  }
  // tight spots provable by hand: at mu = 0 the curve bottoms out at rho
  // (the weight-1 point mass has sup_p pq = 1/4), and for large mu the
  // all-ones probe pins beta(mu) = mu (accepted mass is at least mu, and the
  // (1,2) pair attains it)
  CHECK(beta_curve_lower_bound(and2, 0.0) == Catch::Approx(0.25).margin(1e-9));
  CHECK(beta_curve_lower_bound(and2, 0.6) == Catch::Approx(0.6).margin(1e-9));
  CHECK(beta_curve_lower_bound(and2, 0.9) == Catch::Approx(0.9).margin(1e-9));
}

TEST_CASE("estimate from an exact bias lands inside the contract window") {
  SplitMix64 rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const PredicateSpec spec = random_threshold(rng);
    const Instance inst =
        generate_random_uniform(spec.k, 8, 10 + static_cast<int>(rng.next_below(50)), rng.next());
    const double epsilon = 0.02 + 0.1 * rng.next_unit();
    const auto cf = closed_form_alpha(spec);
    REQUIRE(cf);
    const double delta = std::min(epsilon / (2.0 * cf->alpha), 0.5);
    const double bias = diff_and_bias(inst).bias;   // exact, no sketch noise
    const double v_hat = estimate_from_bias(spec, cf->alpha, bias, delta);
    const double val = exact_value(inst, spec).value;
    CHECK(v_hat <= val + 1e-12);
    CHECK(v_hat >= (cf->alpha - epsilon) * val - 1e-12);
  }
}

TEST_CASE("sketched estimates succeed at the advertised rate") {
  SplitMix64 rng(53);
  const PredicateSpec spec = kand_predicate(2);
  int hits = 0;
  const int runs = 60;
  for (int run = 0; run < runs; ++run) {
    const Instance inst = generate_random_uniform(2, 10, 60, rng.next());
    const double val = exact_value(inst, spec).value;
    const EstimateResult est = estimate_value(inst, spec, 0.05, 1000 + run);
    hits += (est.value >= (4.0 / 9.0 - 0.05) * val - 1e-12 && est.value <= val + 1e-12);
  }
  CHECK(hits >= 50);  // contract is 2/3; realized rate is near one
}

TEST_CASE("a fully biased instance estimates just below its value") {
  // many copies of the same all-positive conjunction: bias is exactly 1
  Instance inst(2, 2);
  for (int i = 0; i < 50; ++i) inst.add_constraint({{1, 1}, {1, 2}, 1.0});
  CHECK(diff_and_bias(inst).bias == 1.0);
  const PredicateSpec spec = kand_predicate(2);
  const EstimateResult est = estimate_value(inst, spec, 0.05, 17);
  CHECK(est.value <= 1.0 + 1e-12);
  CHECK(est.value >= (4.0 / 9.0 - 0.05) * 1.0);
  const double exact_path = estimate_from_bias(spec, est.alpha, 1.0, est.delta);
  CHECK(exact_path == Catch::Approx(est.alpha * gamma_curve(spec, 1.0 / (1.0 + est.delta)))
                          .margin(1e-15));
}

TEST_CASE("rounding the canonical midweight 3AND instance clears alpha * val") {
  const PredicateSpec spec = kand_predicate(3);
  const Instance inst = canonical_instance(SymmetricDist({0, 0, 1, 0}));
  const double val = exact_value(inst, spec).value;
  double sum = 0.0, sumsq = 0.0;
  const int samples = 10000;
  for (int s = 0; s < samples; ++s) {
    const double v = eval_assignment(
        inst, spec, round_assignment(inst, spec, 2.0 / 3.0, static_cast<uint64_t>(s)));
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / samples;
  const double se = std::sqrt(std::max(0.0, sumsq / samples - mean * mean) / (samples - 1));
  CHECK(mean >= (2.0 / 9.0) * val - 2.0 * se);
}

TEST_CASE("estimate_value validates its inputs") {
  const Instance inst = generate_random_uniform(3, 8, 10, 1);
  CHECK_THROWS_AS(estimate_value(inst, make_predicate(3, {1, 3}), 0.05, 1),
                  UnsupportedPredicateError);
  CHECK_THROWS_AS(estimate_value(inst, kand_predicate(3), 0.0, 1), ValidationError);
  CHECK_THROWS_AS(estimate_value(inst, kand_predicate(2), 0.05, 1), ValidationError);
}

TEST_CASE("rounding with p* = 1 returns the majority vote") {
  const Instance inst = generate_random_uniform(2, 9, 30, 4);
  const Assignment maj = majority_assignment(diff_and_bias(inst).diff);
  const Assignment rounded = round_assignment(inst, kand_predicate(2), 1.0, 12);
  CHECK(rounded.values == maj.values);
}

TEST_CASE("rounding is deterministic under the seed") {
  const Instance inst = generate_random_uniform(2, 9, 30, 4);
  const Assignment a = round_assignment(inst, kand_predicate(2), 2.0 / 3.0, 7);
  const Assignment b = round_assignment(inst, kand_predicate(2), 2.0 / 3.0, 7);
  const Assignment c = round_assignment(inst, kand_predicate(2), 2.0 / 3.0, 8);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
}

TEST_CASE("expected rounded value on the single positive conjunction") {
  // one all-positive 2AND constraint: keeping each majority vote with
  // probability 2/3 satisfies it with probability 4/9
  Instance inst(2, 2);
  inst.add_constraint({{1, 1}, {1, 2}, 1.0});
  const PredicateSpec spec = kand_predicate(2);
  double mean = 0.0;
  const int samples = 20000;
  for (int s = 0; s < samples; ++s)
    mean += eval_assignment(inst, spec,
                            round_assignment(inst, spec, 2.0 / 3.0, static_cast<uint64_t>(s)));
  mean /= samples;
  const double sigma = std::sqrt(4.0 / 9.0 * (1 - 4.0 / 9.0) / samples);
  CHECK(std::abs(mean - 4.0 / 9.0) <= 4.0 * sigma);
}
