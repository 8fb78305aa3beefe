#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <utility>
#include <vector>

#include "cspsketch/core/formulas.hpp"
#include "cspsketch/core/predicate.hpp"
#include "cspsketch/core/symmetric_dist.hpp"
#include "cspsketch/util/rng.hpp"

using namespace cspsketch;

namespace {

// Exhaustive oracle for lambda: enumerate all 2^k x 2^k (pattern, flip)
// pairs with their probabilities. Independent of the coefficient formula.
double lambda_brute_force(const PredicateSpec& spec, const SymmetricDist& dist, double p) {
  const int k = spec.k;
  double total = 0.0;
  for (uint32_t a = 0; a < (1u << k); ++a) {
    const int wa = std::popcount(a);
    const double pa = dist[wa] / static_cast<double>(binomial(k, wa));
    if (pa == 0.0) continue;
    for (uint32_t b = 0; b < (1u << k); ++b) {
      const int wb = std::popcount(b);
      const double pb = pow_int(p, wb) * pow_int(1.0 - p, k - wb);
      // product coordinate is +1 iff the bits agree
      const int w_prod = k - std::popcount(a ^ b);
      if (spec.accepts(w_prod)) total += pa * pb;
    }
  }
  return total;
}

SymmetricDist random_dist(int k, SplitMix64& rng) {
  std::vector<double> m(static_cast<size_t>(k) + 1);
  double sum = 0.0;
  for (double& v : m) {
    v = -std::log(1.0 - rng.next_unit());
    sum += v;
  }
  for (double& v : m) v /= sum;
  return SymmetricDist(std::move(m));
}

PredicateSpec random_spec(int k, SplitMix64& rng) {
  std::vector<int> s;
  while (s.empty())
    for (int w = 0; w <= k; ++w)
      if (rng.next() & 1) s.push_back(w);
  return make_predicate(k, s);
}

}  // namespace

TEST_CASE("epsilon_weight endpoints and interior") {
  CHECK(epsilon_weight(0, 5) == -1.0);
  CHECK(epsilon_weight(5, 5) == 1.0);
  CHECK(epsilon_weight(2, 3) == Catch::Approx(1.0 / 3.0).margin(1e-15));
  CHECK_THROWS_AS(epsilon_weight(-1, 3), ValidationError);
  CHECK_THROWS_AS(epsilon_weight(4, 3), ValidationError);
}

TEST_CASE("mu of named distributions") {
  CHECK(mu(SymmetricDist({0, 0, 1, 0})) == Catch::Approx(1.0 / 3.0).margin(1e-15));
  CHECK(mu(SymmetricDist({1, 0, 0, 0})) == -1.0);
  CHECK(mu(SymmetricDist({1.0 / 3.0, 0, 0, 2.0 / 3.0})) ==
        Catch::Approx(1.0 / 3.0).margin(1e-15));
}

TEST_CASE("SymmetricDist validation and renormalization") {
  CHECK_THROWS_AS(SymmetricDist({0.5, -0.1, 0.6}), ValidationError);
  CHECK_THROWS_AS(SymmetricDist({0.5, 0.4}), ValidationError);  // off by 0.1
  SymmetricDist d({0.25, 0.25, 0.5 + 3e-7});
  double sum = 0.0;
  for (int i = 0; i <= d.arity(); ++i) sum += d[i];
  CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("lambda point examples") {
  const PredicateSpec and3 = kand_predicate(3);
  CHECK(lambda_value(and3, SymmetricDist({0, 0, 1, 0}), 2.0 / 3.0) ==
        Catch::Approx(4.0 / 27.0).margin(1e-15));
  CHECK(lambda_value(kand_predicate(4), SymmetricDist::point_mass(4, 4), 1.0) == 1.0);
  CHECK_THROWS_AS(lambda_value(and3, SymmetricDist({0, 0, 1, 0}), 1.5), ValidationError);
  CHECK_THROWS_AS(lambda_value(and3, SymmetricDist({0, 1, 0}), 0.5), ValidationError);
}

TEST_CASE("lambda equals the exhaustive pair expectation") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_below(5));
    const PredicateSpec spec = random_spec(k, rng);
    const SymmetricDist dist = random_dist(k, rng);
    const double p = rng.next_unit();
    CHECK(lambda_value(spec, dist, p) ==
          Catch::Approx(lambda_brute_force(spec, dist, p)).margin(1e-10));
  }
}

TEST_CASE("lambda at p = 1/2 is rho, independent of the distribution") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 1 + static_cast<int>(rng.next_below(8));
    const PredicateSpec spec = random_spec(k, rng);
    CHECK(lambda_value(spec, random_dist(k, rng), 0.5) ==
          Catch::Approx(spec.rho).margin(1e-12));
  }
}

TEST_CASE("lambda at p = 1 is the accepted mass") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 1 + static_cast<int>(rng.next_below(8));
    const PredicateSpec spec = random_spec(k, rng);
    const SymmetricDist dist = random_dist(k, rng);
    double accepted = 0.0;
    for (int w : spec.accepted) accepted += dist[w];
    CHECK(lambda_value(spec, dist, 1.0) == Catch::Approx(accepted).margin(1e-12));
  }
}

TEST_CASE("lambda is linear in the distribution") {
  SplitMix64 rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_below(5));
    const PredicateSpec spec = random_spec(k, rng);
    const SymmetricDist d1 = random_dist(k, rng);
    const SymmetricDist d2 = random_dist(k, rng);
    const double w = rng.next_unit();
    const double p = rng.next_unit();
    std::vector<double> mix(static_cast<size_t>(k) + 1);
    for (int i = 0; i <= k; ++i) mix[static_cast<size_t>(i)] = w * d1[i] + (1.0 - w) * d2[i];
    CHECK(lambda_value(spec, SymmetricDist(mix), p) ==
          Catch::Approx(w * lambda_value(spec, d1, p) + (1.0 - w) * lambda_value(spec, d2, p))
              .margin(1e-12));
  }
}

TEST_CASE("gamma_curve point values") {
  CHECK(gamma_curve(kand_predicate(3), 1.0 / 3.0) == Catch::Approx(2.0 / 3.0).margin(1e-15));
  CHECK(gamma_curve(threshold_predicate(3, 4), 0.5) == 1.0);
  CHECK(gamma_curve(kand_predicate(5), 1.0) == 1.0);
  CHECK(gamma_curve(kand_predicate(3), -1.0) == 0.0);
  CHECK_THROWS_AS(gamma_curve(kand_predicate(3), 1.5), ValidationError);
}

TEST_CASE("gamma_curve is the lattice supremum of accepted mass at fixed marginal") {
  for (const auto& [k, s] : std::vector<std::pair<int, std::vector<int>>>{
           {2, {2}}, {2, {1, 2}}, {3, {3}}, {3, {2}}, {3, {2, 3}}}) {
    const PredicateSpec spec = make_predicate(k, s);
    const int res = k == 2 ? 1000 : 333;
    const double slack = 2.0 / res;
    // the window lets gamma drift by (marginal slack) * (branch slope <= k/2),
    // plus one lattice pitch of mass quantization
    const double margin = slack * (k / 2.0) + 2.0 / res;
    std::vector<double> best(21, 0.0);  // targets -1, -0.9, ..., 1
    std::vector<double> masses(static_cast<size_t>(k) + 1);
    std::vector<int> c(static_cast<size_t>(k) + 1, 0);
    c[0] = res;
    for (;;) {
      for (int i = 0; i <= k; ++i)
        masses[static_cast<size_t>(i)] = static_cast<double>(c[static_cast<size_t>(i)]) / res;
      const double m = mu_of_masses(masses);
      double acc = 0.0;
      for (int w : spec.accepted) acc += masses[static_cast<size_t>(w)];
      for (int t = 0; t <= 20; ++t) {
        const double target = -1.0 + 0.1 * t;
        if (std::abs(m - target) <= slack)
          best[static_cast<size_t>(t)] = std::max(best[static_cast<size_t>(t)], acc);
      }
      int i = k - 1;
      while (i >= 0 && c[static_cast<size_t>(i)] == 0) --i;
      if (i < 0) break;
      --c[static_cast<size_t>(i)];
      const int tail = c[static_cast<size_t>(k)] + 1;
      c[static_cast<size_t>(i) + 1] = tail;
      for (int j = i + 2; j <= k; ++j) c[static_cast<size_t>(j)] = 0;
    }
    for (int t = 0; t <= 20; ++t) {
      const double target = -1.0 + 0.1 * t;
      CHECK(gamma_curve(spec, target) ==
            Catch::Approx(best[static_cast<size_t>(t)]).margin(margin));
    }
  }
}

TEST_CASE("beta on cataloged witnesses") {
  const BetaResult b3 = beta(kand_predicate(3), SymmetricDist({0, 0, 1, 0}));
  CHECK(b3.value == Catch::Approx(4.0 / 27.0).margin(1e-12));
  CHECK(b3.p == Catch::Approx(2.0 / 3.0).margin(1e-9));

  const BetaResult b2 = beta(kand_predicate(2), SymmetricDist({0, 0, 1}));
  CHECK(b2.value == Catch::Approx(1.0).margin(1e-12));
  CHECK(b2.p == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("beta agrees with an independent dense-grid oracle") {
  // 10^4-point grid plus golden-section refinement, written from scratch
  const PredicateSpec ex23 = make_predicate(3, {2});
  const SymmetricDist d({1.0 / 3.0, 0, 0, 2.0 / 3.0});
  double oracle = 0.0, op = 0.0;
  for (int g = 0; g <= 10000; ++g) {
    const double p = g / 10000.0;
    const double v = lambda_value(ex23, d, p);
    if (v > oracle) {
      oracle = v;
      op = p;
    }
  }
  double lo = std::max(0.0, op - 1e-4), hi = std::min(1.0, op + 1e-4);
  for (int it = 0; it < 200; ++it) {
    const double c = hi - 0.6180339887498949 * (hi - lo);
    const double dd = lo + 0.6180339887498949 * (hi - lo);
    if (lambda_value(ex23, d, c) > lambda_value(ex23, d, dd))
      hi = dd;
    else
      lo = c;
  }
  oracle = std::max(oracle, lambda_value(ex23, d, 0.5 * (lo + hi)));
  CHECK(beta(ex23, d).value == Catch::Approx(oracle).margin(1e-6));
}

TEST_CASE("beta dominates the endpoint probes and is grid-stable") {
  SplitMix64 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_below(4));
    const PredicateSpec spec = random_spec(k, rng);
    const SymmetricDist dist = random_dist(k, rng);
    const double b = beta(spec, dist).value;
    CHECK(b >= lambda_value(spec, dist, 0.0) - 1e-12);
    CHECK(b >= lambda_value(spec, dist, 0.5) - 1e-12);
    CHECK(b >= lambda_value(spec, dist, 1.0) - 1e-12);
    CHECK(std::abs(b - beta(spec, dist, 8192).value) < 1e-9);
  }
}
