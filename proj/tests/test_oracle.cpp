#include <catch2/catch_amalgamated.hpp>

#include "cspsketch/stream/generate.hpp"
#include "cspsketch/stream/instance.hpp"
#include "cspsketch/stream/oracle.hpp"
#include "cspsketch/util/rng.hpp"

using namespace cspsketch;

TEST_CASE("single all-positive conjunction is satisfied at all-ones") {
  Instance inst(4, 4);
  inst.add_constraint({{1, 1, 1, 1}, {1, 2, 3, 4}, 1.0});
  const ExactResult r = exact_value(inst, kand_predicate(4));
  CHECK(r.value == 1.0);
  CHECK(r.argmax.values == std::vector<int8_t>{1, 1, 1, 1});
}

TEST_CASE("conflicting constraints cap the optimum at half") {
  Instance inst(2, 2);
  inst.add_constraint({{1, 1}, {1, 2}, 1.0});
  inst.add_constraint({{-1, -1}, {1, 2}, 1.0});
  CHECK(exact_value(inst, kand_predicate(2)).value == 0.5);
}

TEST_CASE("canonical 3AND midweight instance agrees with in-test enumeration") {
  const Instance inst = canonical_instance(SymmetricDist({0, 0, 1, 0}));
  const PredicateSpec spec = kand_predicate(3);
  double best = 0.0;
  for (uint32_t m = 0; m < 8; ++m)
    best = std::max(best, eval_assignment(inst, spec, assignment_from_mask(m, 3)));
  const ExactResult r = exact_value(inst, spec);
  CHECK(r.value == Catch::Approx(best).margin(1e-15));
  CHECK(r.value == Catch::Approx(1.0 / 3.0).margin(1e-12));  // any weight-2 pattern
}

TEST_CASE("argmax ties resolve to the lexicographically first assignment") {
  // XNOR-like predicate: both all-equal assignments are optimal
  Instance inst(2, 2);
  inst.add_constraint({{1, 1}, {1, 2}, 1.0});
  const ExactResult r = exact_value(inst, make_predicate(2, {0, 2}));
  CHECK(r.value == 1.0);
  CHECK(r.argmax.values == std::vector<int8_t>{-1, -1});
}

TEST_CASE("oracle refuses beyond the exhaustive cap") {
  using Catch::Matchers::ContainsSubstring;
  Instance inst(25, 2);
  inst.add_constraint({{1, 1}, {1, 2}, 1.0});
  CHECK_THROWS_WITH(exact_value(inst, kand_predicate(2)),
                    ContainsSubstring("estimate_value"));
}

TEST_CASE("masked evaluation matches the generic path") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_below(3));
    const Instance inst = generate_random_uniform(k, 10, 40, rng.next());
    const PredicateSpec spec = threshold_predicate(k - 1, k);
    const MaskedInstance masked(inst, spec);
    for (int probe = 0; probe < 16; ++probe) {
      const uint32_t m = static_cast<uint32_t>(rng.next_below(1u << 10));
      CHECK(masked.value(m) ==
            Catch::Approx(eval_assignment(inst, spec, assignment_from_mask(m, 10)))
                .margin(1e-12));
    }
  }
}

TEST_CASE("oracle is thread-count independent, ties included") {
  SplitMix64 rng(32);
  for (int trial = 0; trial < 6; ++trial) {
    const Instance inst = generate_random_uniform(2, 14, 25, rng.next());
    const PredicateSpec spec = make_predicate(2, {0, 2});  // plenty of ties
    const ExactResult a = exact_value(inst, spec, 1);
    const ExactResult b = exact_value(inst, spec, 4);
    CHECK(a.value == b.value);
    CHECK(a.argmax.values == b.argmax.values);
  }
}
