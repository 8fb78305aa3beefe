#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <string>

#include "cspsketch/core/formulas.hpp"
#include "cspsketch/stream/generate.hpp"
#include "cspsketch/stream/instance.hpp"
#include "cspsketch/stream/instance_io.hpp"
#include "cspsketch/stream/oracle.hpp"
#include "cspsketch/util/rng.hpp"

using namespace cspsketch;

namespace {

// exhaustive E over Bern(p)^n assignments of val(sigma)
double bernoulli_expectation(const Instance& inst, const PredicateSpec& spec, double p) {
  const int n = inst.variables();
  double total = 0.0;
  for (uint32_t m = 0; m < (1u << n); ++m) {
    const int ones = std::popcount(m);
    const double prob = pow_int(p, ones) * pow_int(1.0 - p, n - ones);
    total += prob * eval_assignment(inst, spec, assignment_from_mask(m, n));
  }
  return total;
}

}  // namespace

TEST_CASE("parse accepts the documented format") {
  const Instance inst = parse_instance("p maxcsp 3 3 1\nc 1.0 +1 +2 +3\n");
  CHECK(inst.variables() == 3);
  CHECK(inst.arity() == 3);
  REQUIRE(inst.constraints().size() == 1);
  const Constraint& c = inst.constraints()[0];
  CHECK(c.weight == 1.0);
  CHECK(c.indices == std::vector<int>{1, 2, 3});
  CHECK(c.negations == std::vector<int8_t>{1, 1, 1});
}

TEST_CASE("parse errors carry line numbers") {
  using Catch::Matchers::ContainsSubstring;
  CHECK_THROWS_WITH(parse_instance("p maxcsp 3 3 1\nc 1.0 +1 +1 +2\n"),
                    ContainsSubstring("line 2") && ContainsSubstring("duplicate"));
  CHECK_THROWS_WITH(parse_instance("p maxcsp 3 3 1\nc 1.0 +1 +2 +4\n"),
                    ContainsSubstring("line 2"));
  CHECK_THROWS_WITH(parse_instance("p maxcsp 0 3 1\nc 1.0 +1 +2 +3\n"),
                    ContainsSubstring("positive"));
  CHECK_THROWS_WITH(parse_instance("p maxcsp 3 3 1\nq 1.0\n"), ContainsSubstring("line 2"));
  CHECK_THROWS_AS(parse_instance("c 1.0 +1\n"), ValidationError);          // missing header
  CHECK_THROWS_AS(parse_instance("p maxcsp 3 3 2\nc 1 +1 +2 +3\n"),
                  ValidationError);                                        // count mismatch
  CHECK_THROWS_AS(parse_instance("p maxcsp 3 3 1\nc -1 +1 +2 +3\n"), ValidationError);
}

TEST_CASE("serialize then parse is the identity") {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_below(3));
    Instance inst = generate_random_uniform(k, 9, 25, rng.next());
    // awkward weights to exercise shortest round-trip formatting
    Instance reweighted(inst.variables(), inst.arity());
    for (size_t i = 0; i < inst.constraints().size(); ++i) {
      Constraint c = inst.constraints()[i];
      c.weight = rng.next_unit() * 3.7 + (i % 5 == 0 ? 0.0 : 1e-3);
      reweighted.add_constraint(c);
    }
    const Instance back = parse_instance(serialize_instance(reweighted));
    CHECK(back.variables() == reweighted.variables());
    REQUIRE(back.constraints().size() == reweighted.constraints().size());
    for (size_t i = 0; i < back.constraints().size(); ++i) {
      CHECK(back.constraints()[i].weight == reweighted.constraints()[i].weight);  // bitwise
      CHECK(back.constraints()[i].indices == reweighted.constraints()[i].indices);
      CHECK(back.constraints()[i].negations == reweighted.constraints()[i].negations);
    }
  }
}

TEST_CASE("canonical instance of a weight-class distribution") {
  const Instance one = canonical_instance(SymmetricDist({0.0, 1.0}));
  REQUIRE(one.constraints().size() == 1);
  CHECK(one.constraints()[0].weight == 1.0);
  CHECK(one.constraints()[0].negations == std::vector<int8_t>{1});

  const Instance mid = canonical_instance(SymmetricDist({0, 0, 1, 0}));
  REQUIRE(mid.constraints().size() == 3);
  for (const Constraint& c : mid.constraints()) {
    CHECK(c.weight == Catch::Approx(1.0 / 3.0).margin(1e-15));
    CHECK(c.pattern_weight() == 2);
  }
}

TEST_CASE("canonical instance realizes lambda as the biased-assignment value") {
  SplitMix64 rng(22);
  for (int trial = 0; trial < 12; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_below(3));
    std::vector<double> m(static_cast<size_t>(k) + 1);
    double sum = 0.0;
    for (double& v : m) {
      v = -std::log(1.0 - rng.next_unit());
      sum += v;
    }
    for (double& v : m) v /= sum;
    const SymmetricDist dist(m);
    const Instance inst = canonical_instance(dist);
    std::vector<int> s;
    while (s.empty())
      for (int w = 0; w <= k; ++w)
        if (rng.next() & 1) s.push_back(w);
    const PredicateSpec spec = make_predicate(k, s);
    // all-ones assignment value equals the accepted mass
    double accepted = 0.0;
    for (int w : spec.accepted) accepted += dist[w];
    CHECK(eval_assignment(inst, spec, Assignment::all_ones(k)) ==
          Catch::Approx(accepted).margin(1e-12));
    const double p = rng.next_unit();
    CHECK(bernoulli_expectation(inst, spec, p) ==
          Catch::Approx(lambda_value(spec, dist, p)).margin(1e-10));
  }
}

TEST_CASE("eval_assignment basics") {
  Instance inst(2, 2);
  inst.add_constraint({{1, 1}, {1, 2}, 1.0});
  const PredicateSpec and2 = kand_predicate(2);
  CHECK(eval_assignment(inst, and2, Assignment{{1, 1}}) == 1.0);
  CHECK(eval_assignment(inst, and2, Assignment{{1, -1}}) == 0.0);

  // opposing conjunctions: the aligned assignments each satisfy one, the
  // mixed assignments satisfy neither, so the optimum is exactly 1/2
  inst.add_constraint({{-1, -1}, {1, 2}, 1.0});
  CHECK(eval_assignment(inst, and2, Assignment{{1, 1}}) == 0.5);
  CHECK(eval_assignment(inst, and2, Assignment{{-1, -1}}) == 0.5);
  CHECK(eval_assignment(inst, and2, Assignment{{1, -1}}) == 0.0);
  CHECK(eval_assignment(inst, and2, Assignment{{-1, 1}}) == 0.0);
  CHECK(exact_value(inst, and2).value == 0.5);
}

TEST_CASE("diff and bias hand counts") {
  Instance inst(3, 3);
  inst.add_constraint({{1, 1, 1}, {1, 2, 3}, 1.0});
  const DiffBias db = diff_and_bias(inst);
  CHECK(db.diff == std::vector<double>{1, 1, 1});
  CHECK(db.bias == 1.0);

  Instance two(3, 2);
  two.add_constraint({{1, 1}, {1, 2}, 1.0});
  two.add_constraint({{-1, 1}, {1, 3}, 1.0});
  const DiffBias db2 = diff_and_bias(two);
  CHECK(db2.diff == std::vector<double>{0, 1, 1});
  CHECK(db2.bias == 0.5);
}

TEST_CASE("flip identities hold on random instances") {
  SplitMix64 rng(23);
  const PredicateSpec spec = kand_predicate(3);
  for (int trial = 0; trial < 15; ++trial) {
    const Instance inst = generate_random_uniform(3, 8, 30, rng.next());
    Assignment a;
    for (int i = 0; i < 8; ++i) a.values.push_back(rng.next() & 1 ? 1 : -1);
    const Instance flipped = flip_instance(inst, a);

    const DiffBias before = diff_and_bias(inst);
    const DiffBias after = diff_and_bias(flipped);
    for (int i = 0; i < 8; ++i)
      CHECK(after.diff[static_cast<size_t>(i)] ==
            Catch::Approx(a.values[static_cast<size_t>(i)] * before.diff[static_cast<size_t>(i)])
                .margin(1e-12));
    CHECK(after.bias == Catch::Approx(before.bias).margin(1e-12));

    Assignment sigma;
    for (int i = 0; i < 8; ++i) sigma.values.push_back(rng.next() & 1 ? 1 : -1);
    Assignment composed;
    for (int i = 0; i < 8; ++i)
      composed.values.push_back(
          static_cast<int8_t>(a.values[static_cast<size_t>(i)] * sigma.values[static_cast<size_t>(i)]));
    CHECK(eval_assignment(flipped, spec, sigma) ==
          Catch::Approx(eval_assignment(inst, spec, composed)).margin(1e-12));

    CHECK(exact_value(flipped, spec).value ==
          Catch::Approx(exact_value(inst, spec).value).margin(1e-12));
  }

  // all-ones flip is the identity
  const Instance inst = generate_random_uniform(3, 8, 10, 5);
  const Instance same = flip_instance(inst, Assignment::all_ones(8));
  CHECK(serialize_instance(same) == serialize_instance(inst));
}

TEST_CASE("sym_dist inverts the canonical construction") {
  const SymmetricDist d({0.1, 0.4, 0.2, 0.3});
  const SymmetricDist back = sym_dist(canonical_instance(d));
  for (int i = 0; i <= 3; ++i) CHECK(back[i] == Catch::Approx(d[i]).margin(1e-12));

  Instance single(3, 3);
  single.add_constraint({{1, -1, 1}, {1, 2, 3}, 2.5});
  const SymmetricDist s = sym_dist(single);
  CHECK(s[2] == 1.0);
}

TEST_CASE("symmetrized distribution carries the biased-assignment value") {
  SplitMix64 rng(24);
  for (int trial = 0; trial < 8; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_below(2));
    const Instance inst = generate_random_uniform(k, 9, 20, rng.next());
    const PredicateSpec spec = threshold_predicate(k - 1 + static_cast<int>(rng.next() & 1), k);
    const SymmetricDist d = sym_dist(inst);
    const double p = rng.next_unit();
    CHECK(bernoulli_expectation(inst, spec, p) ==
          Catch::Approx(lambda_value(spec, d, p)).margin(1e-10));

    const DiffBias db = diff_and_bias(inst);
    double diff_sum = 0.0;
    for (double v : db.diff) diff_sum += v;
    CHECK(mu(d) == Catch::Approx(diff_sum / (k * inst.total_weight())).margin(1e-12));
    CHECK(mu(d) <= db.bias + 1e-12);

    // flipping by the majority aligns the marginal with the bias
    const Instance aligned = flip_instance(inst, majority_assignment(db.diff));
    CHECK(mu(sym_dist(aligned)) == Catch::Approx(db.bias).margin(1e-12));
  }
}

TEST_CASE("majority assignment resolves zero diffs upward") {
  CHECK(majority_assignment({0.0, -0.5, 0.5}).values ==
        std::vector<int8_t>{1, -1, 1});
}
