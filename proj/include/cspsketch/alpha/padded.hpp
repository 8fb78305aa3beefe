#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "cspsketch/alpha/simplex_scan.hpp"
#include "cspsketch/core/formulas.hpp"
#include "cspsketch/core/predicate.hpp"
#include "cspsketch/core/symmetric_dist.hpp"
#include "cspsketch/util/errors.hpp"
#include "cspsketch/util/parallel.hpp"

// Padded one-wise pairs: (D_Y, D_N) = (tau D0 + (1-tau) D'_Y, tau D0 +
// (1-tau) D'_N) with zero-marginal residuals D'_Y, D'_N. Writing E = tau D0,
// a decomposition of a given pair is exactly a componentwise sub-vector
// 0 <= E <= min(D_Y, D_N) whose mass is tau and whose epsilon-weighted sum
// equals the (shared) marginal. That is a box-and-hyperplane feasibility
// question, solved exactly below.

namespace cspsketch {

struct PaddedPairDecomposition {
  double tau = 0.0;
  SymmetricDist d0;
  SymmetricDist dy_prime;
  SymmetricDist dn_prime;
};

namespace detail {

// Zero-marginal distribution maximizing gamma_S; its value is gamma_{S,k}(0).
inline SymmetricDist zero_marginal_gamma_max(const PredicateSpec& spec) {
  const int k = spec.k;
  const int s = spec.min_weight();
  const int t = spec.max_weight();
  if (spec.eps_min <= 0.0 && spec.eps_max >= 0.0) {
    if (s == t) return SymmetricDist::point_mass(k, s);
    const double x = spec.eps_max / (spec.eps_max - spec.eps_min);
    return SymmetricDist::two_point(k, s, x, t);
  }
  if (spec.eps_min > 0.0)
    return SymmetricDist::two_point(k, 0, spec.eps_min / (1.0 + spec.eps_min), s);
  return SymmetricDist::two_point(k, t, 1.0 / (1.0 - spec.eps_max), k);
}

// Piecewise-linear extremal fills for the knapsack { 0 <= E <= caps,
// sum E = tau }: greedy by epsilon, ascending for the minimum of
// sum epsilon_i E_i, descending for the maximum.
struct GreedyFill {
  std::vector<int> order;          // coordinate fill order
  std::vector<double> cum_mass;    // prefix masses
  std::vector<double> cum_value;   // prefix epsilon-weighted sums

  double value_at(double tau, const std::vector<double>& eps) const {
    double v = 0.0, remaining = tau;
    for (size_t r = 0; r < order.size() && remaining > 0.0; ++r) {
      const double take = std::min(remaining, cum_mass[r + 1] - cum_mass[r]);
      v += take * eps[static_cast<size_t>(order[r])];
      remaining -= take;
    }
    return v;
  }

  std::vector<double> fill_at(double tau, size_t parts) const {
    std::vector<double> e(parts, 0.0);
    double remaining = tau;
    for (size_t r = 0; r < order.size() && remaining > 0.0; ++r) {
      const double cap = cum_mass[r + 1] - cum_mass[r];
      const double take = std::min(remaining, cap);
      e[static_cast<size_t>(order[r])] = take;
      remaining -= take;
    }
    return e;
  }
};

inline GreedyFill make_fill(const std::vector<double>& caps, const std::vector<double>& eps,
                            bool descending) {
  GreedyFill f;
  for (int i = 0; i < static_cast<int>(caps.size()); ++i)
    if (caps[static_cast<size_t>(i)] > 0.0) f.order.push_back(i);
  std::sort(f.order.begin(), f.order.end(), [&](int a, int b) {
    return descending ? eps[static_cast<size_t>(a)] > eps[static_cast<size_t>(b)]
                      : eps[static_cast<size_t>(a)] < eps[static_cast<size_t>(b)];
  });
  f.cum_mass.assign(f.order.size() + 1, 0.0);
  f.cum_value.assign(f.order.size() + 1, 0.0);
  for (size_t r = 0; r < f.order.size(); ++r) {
    const auto i = static_cast<size_t>(f.order[r]);
    f.cum_mass[r + 1] = f.cum_mass[r] + caps[i];
    f.cum_value[r + 1] = f.cum_value[r] + caps[i] * eps[i];
  }
  return f;
}

// Sub-interval of [T_0, T_R] where the piecewise-linear polyline through
// (cum_mass, cum_value) satisfies the predicate (>= c for the concave
// descending fill, <= c for the convex ascending fill). Convexity makes the
// satisfying set an interval, so per-segment solutions union via min/max.
inline std::optional<std::pair<double, double>> level_interval(const GreedyFill& fill, double c,
                                                               bool want_geq) {
  constexpr double kTol = 1e-12;
  double a = std::numeric_limits<double>::infinity();
  double b = -std::numeric_limits<double>::infinity();
  auto include = [&](double x, double y) {
    a = std::min(a, x);
    b = std::max(b, y);
  };
  const size_t segments = fill.cum_mass.size() - 1;
  if (segments == 0) {
    const bool ok = want_geq ? 0.0 >= c - kTol : 0.0 <= c + kTol;
    if (!ok) return std::nullopt;
    return std::pair{0.0, 0.0};
  }
  for (size_t r = 0; r < segments; ++r) {
    const double t0 = fill.cum_mass[r], t1 = fill.cum_mass[r + 1];
    const double v0 = fill.cum_value[r], v1 = fill.cum_value[r + 1];
    if (t1 <= t0) continue;
    const double slope = (v1 - v0) / (t1 - t0);
    const bool ok0 = want_geq ? v0 >= c - kTol : v0 <= c + kTol;
    const bool ok1 = want_geq ? v1 >= c - kTol : v1 <= c + kTol;
    if (ok0 && ok1) {
      include(t0, t1);
    } else if (ok0 != ok1 && slope != 0.0) {
      const double cross = t0 + (c - v0) / slope;
      if (ok0)
        include(t0, std::clamp(cross, t0, t1));
      else
        include(std::clamp(cross, t0, t1), t1);
    }
  }
  if (a > b) return std::nullopt;
  return std::pair{a, b};
}

// Largest tau in [0, sum(caps)] such that some 0 <= E <= caps has mass tau
// and epsilon-sum target; the achievable epsilon-sum at mass tau is the
// interval [lo(tau), hi(tau)] between the two greedy fills.
inline std::optional<double> max_feasible_tau(const std::vector<double>& caps,
                                              const std::vector<double>& eps, double target) {
  const GreedyFill lo = make_fill(caps, eps, /*descending=*/false);
  const GreedyFill hi = make_fill(caps, eps, /*descending=*/true);
  const auto reach = level_interval(hi, target, /*want_geq=*/true);
  const auto stay = level_interval(lo, target, /*want_geq=*/false);
  if (!reach || !stay) return std::nullopt;
  const double a = std::max(reach->first, stay->first);
  const double b = std::min(reach->second, stay->second);
  if (a > b + 1e-12) return std::nullopt;
  return std::max(b, 0.0);
}

// Blend the two greedy fills at mass tau to hit the epsilon-sum target exactly.
inline std::vector<double> fill_for_target(const std::vector<double>& caps,
                                           const std::vector<double>& eps, double tau,
                                           double target) {
  const GreedyFill lo = make_fill(caps, eps, false);
  const GreedyFill hi = make_fill(caps, eps, true);
  const double vlo = lo.value_at(tau, eps);
  const double vhi = hi.value_at(tau, eps);
  const double theta = (vhi - vlo > 1e-15) ? std::clamp((target - vlo) / (vhi - vlo), 0.0, 1.0)
                                           : 0.0;
  std::vector<double> elo = lo.fill_at(tau, caps.size());
  std::vector<double> ehi = hi.fill_at(tau, caps.size());
  for (size_t i = 0; i < elo.size(); ++i) elo[i] = (1.0 - theta) * elo[i] + theta * ehi[i];
  return elo;
}

}  // namespace detail

// Decompose (D_Y, D_N) as a padded one-wise pair with maximal padding mass,
// or nullopt when no decomposition exists (in particular when the marginals
// differ).
inline std::optional<PaddedPairDecomposition> padded_decompose(const SymmetricDist& dy,
                                                               const SymmetricDist& dn) {
  if (dy.arity() != dn.arity())
    throw ValidationError("padded_decompose: arity mismatch");
  const int k = dy.arity();
  const double mu_y = mu(dy), mu_n = mu(dn);
  if (std::abs(mu_y - mu_n) > 1e-9) return std::nullopt;
  const double target = 0.5 * (mu_y + mu_n);

  std::vector<double> eps(static_cast<size_t>(k) + 1);
  std::vector<double> caps(static_cast<size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) {
    eps[static_cast<size_t>(i)] = epsilon_weight(i, k);
    caps[static_cast<size_t>(i)] = std::min(dy[i], dn[i]);
  }

  const auto tau_opt = detail::max_feasible_tau(caps, eps, target);
  if (!tau_opt) return std::nullopt;
  const double tau = std::min(*tau_opt, 1.0);

  const SymmetricDist zero_marg = SymmetricDist::uniform_binomial(k);
  if (tau <= 1e-12) {
    // no padding needed; residuals are the inputs themselves
    if (std::abs(target) > 1e-9) return std::nullopt;
    return PaddedPairDecomposition{0.0, dy, dy, dn};
  }

  const std::vector<double> pad = detail::fill_for_target(caps, eps, tau, target);
  std::vector<double> d0(pad);
  for (double& v : d0) v /= tau;

  auto residual = [&](const SymmetricDist& d) {
    if (1.0 - tau <= 1e-12) return zero_marg;  // pair is its own padding
    std::vector<double> r(static_cast<size_t>(k) + 1);
    for (int i = 0; i <= k; ++i) r[static_cast<size_t>(i)] =
        std::max(0.0, (d[i] - pad[static_cast<size_t>(i)]) / (1.0 - tau));
    return SymmetricDist(std::move(r));
  };

  return PaddedPairDecomposition{tau, SymmetricDist(std::move(d0)), residual(dy), residual(dn)};
}

struct PaddedSearchResult {
  SymmetricDist dy;
  SymmetricDist dn;
  PaddedPairDecomposition decomposition;
  double ratio = 0.0;        // beta_S(D_N) / gamma_S(D_Y)
  double beta_n = 0.0;
  double gamma_y = 0.0;
  long points = 0;
};

namespace detail {

// Over all decompositions of dn_masses as the no-side of a padded pair,
// the largest achievable gamma_S(D_Y): maximize gamma_S(E) + (1 - |E|)
// gamma0 over 0 <= E <= D_N with matching epsilon-sum. LP over a box and
// one hyperplane; optimal vertices have at most one fractional coordinate,
// enumerated over the support subsets.
struct PairGamma {
  double value = -1.0;
  std::vector<double> pad;  // E = tau * D0
};

inline PairGamma max_pair_gamma(const PredicateSpec& spec, const std::vector<double>& dn_masses,
                                double gamma0) {
  const int k = spec.k;
  const double target = mu_of_masses(dn_masses);
  std::vector<int> support;
  for (int i = 0; i <= k; ++i)
    if (dn_masses[static_cast<size_t>(i)] > 0.0) support.push_back(i);
  const int sz = static_cast<int>(support.size());
  if (sz > 20) throw ValidationError("max_pair_gamma: support too large");

  auto cost = [&](int i) { return (spec.accepts(i) ? 1.0 : 0.0) - gamma0; };

  PairGamma best;
  std::vector<double> e(static_cast<size_t>(k) + 1, 0.0);
  for (uint32_t upper = 0; upper < (1u << sz); ++upper) {
    double mass_sum = 0.0, eps_sum = 0.0, obj = 0.0;
    for (int b = 0; b < sz; ++b) {
      if (!((upper >> b) & 1u)) continue;
      const int i = support[static_cast<size_t>(b)];
      const double m = dn_masses[static_cast<size_t>(i)];
      mass_sum += m;
      eps_sum += m * epsilon_weight(i, k);
      obj += m * cost(i);
    }
    auto consider = [&](int frac_coord, double frac_amount) {
      const double total_obj =
          obj + (frac_coord >= 0 ? frac_amount * cost(frac_coord) : 0.0) + gamma0;
      const double mass =
          mass_sum + (frac_coord >= 0 ? frac_amount : 0.0);
      if (mass > 1.0 + 1e-9) return;
      if (total_obj > best.value) {
        std::fill(e.begin(), e.end(), 0.0);
        for (int b = 0; b < sz; ++b)
          if ((upper >> b) & 1u)
            e[static_cast<size_t>(support[static_cast<size_t>(b)])] =
                dn_masses[static_cast<size_t>(support[static_cast<size_t>(b)])];
        if (frac_coord >= 0) e[static_cast<size_t>(frac_coord)] = frac_amount;
        best.value = total_obj;
        best.pad = e;
      }
    };
    if (std::abs(eps_sum - target) <= 1e-12) consider(-1, 0.0);
    for (int b = 0; b < sz; ++b) {
      if ((upper >> b) & 1u) continue;
      const int f = support[static_cast<size_t>(b)];
      const double ef = epsilon_weight(f, k);
      if (ef == 0.0) continue;
      const double amount = (target - eps_sum) / ef;
      if (amount < -1e-12 || amount > dn_masses[static_cast<size_t>(f)] + 1e-12) continue;
      consider(f, std::clamp(amount, 0.0, dn_masses[static_cast<size_t>(f)]));
    }
  }
  return best;
}

}  // namespace detail

// Grid search over no-side distributions for the padded pair minimizing
// beta_S(D_N) / gamma_S(D_Y); the yes side is reconstructed from the best
// decomposition of the winner.
inline PaddedSearchResult padded_search(const PredicateSpec& spec, int resolution,
                                        unsigned threads = 1) {
  if (resolution < 50) throw ValidationError("padded_search: resolution must be >= 50");
  if (spec.k > 12) throw ValidationError("padded_search: arity above 12 not supported");
  const int parts = spec.k + 1;
  const SymmetricDist zm = detail::zero_marginal_gamma_max(spec);
  const double gamma0 = gamma_curve(spec, 0.0);
  const LambdaGrid table(spec, 513);

  struct Acc {
    ScanBest best;
    long points = 0;
  };
  auto scan_point = [&](Acc& acc, const std::vector<double>& masses) {
    ++acc.points;
    const auto pg = detail::max_pair_gamma(spec, masses, gamma0);
    if (pg.value <= 1e-12) return;
    acc.best.offer(table.max_over_grid(masses).first / pg.value, masses);
  };

  Acc acc;
  const uint64_t full_points = composition_count(parts, resolution);
  if (full_points <= detail::kFullLatticeBudget) {
    acc = parallel_reduce<Acc>(
        static_cast<uint64_t>(resolution) + 1, threads, {},
        [&](uint64_t begin, uint64_t end) {
          Acc local;
          std::vector<double> masses(static_cast<size_t>(parts));
          for (uint64_t lead = begin; lead < end; ++lead) {
            for_each_composition(parts - 1, resolution - static_cast<int>(lead),
                                 [&](const std::vector<int>& tail) {
                                   masses[0] = static_cast<double>(lead) / resolution;
                                   for (int i = 1; i < parts; ++i)
                                     masses[static_cast<size_t>(i)] =
                                         static_cast<double>(tail[static_cast<size_t>(i) - 1]) /
                                         resolution;
                                   scan_point(local, masses);
                                 });
          }
          return local;
        },
        [](Acc a, Acc b) {
          a.best.merge(b.best);
          a.points += b.points;
          return a;
        });
  } else {
    std::vector<double> masses(static_cast<size_t>(parts));
    for_each_support_lattice(parts, std::min(3, parts), resolution,
                             [&](const std::vector<int>& c) {
                               for (int i = 0; i < parts; ++i)
                                 masses[static_cast<size_t>(i)] =
                                     static_cast<double>(c[static_cast<size_t>(i)]) / resolution;
                               scan_point(acc, masses);
                             });
  }
  scan_point(acc, SymmetricDist::uniform_binomial(spec.k).mass_vector());
  if (acc.best.masses.empty())
    throw ValidationError("padded_search: no pair with positive gamma found");

  auto exact_ratio = [&](const std::vector<double>& masses) {
    for (double m : masses)
      if (m < 0.0) return std::numeric_limits<double>::infinity();
    const auto pg = detail::max_pair_gamma(spec, masses, gamma0);
    if (pg.value <= 1e-12) return std::numeric_limits<double>::infinity();
    return beta_of_masses(spec, masses).value / pg.value;
  };
  const ScanBest refined =
      refine_on_simplex(acc.best.masses, exact_ratio, 2, std::max(0.5 / resolution, 1e-4));

  const std::vector<double>& dn_masses = refined.masses;
  const auto pg = detail::max_pair_gamma(spec, dn_masses, gamma0);
  const double tau = std::accumulate(pg.pad.begin(), pg.pad.end(), 0.0);
  std::vector<double> dy_masses(dn_masses.size());
  for (size_t i = 0; i < dy_masses.size(); ++i)
    dy_masses[i] = pg.pad[i] + (1.0 - tau) * zm[static_cast<int>(i)];

  SymmetricDist dn(dn_masses);
  SymmetricDist dy(dy_masses);
  std::vector<double> d0 = pg.pad;
  if (tau > 1e-12)
    for (double& v : d0) v /= tau;
  else
    d0 = dn_masses;
  auto dn_residual = [&] {
    if (1.0 - tau <= 1e-12) return SymmetricDist::uniform_binomial(spec.k);
    std::vector<double> r(dn_masses.size());
    for (size_t i = 0; i < r.size(); ++i)
      r[i] = std::max(0.0, (dn_masses[i] - pg.pad[i]) / (1.0 - tau));
    return SymmetricDist(std::move(r));
  }();

  PaddedSearchResult out{
      .dy = dy,
      .dn = dn,
      .decomposition = PaddedPairDecomposition{tau, SymmetricDist(std::move(d0)),
                                               (1.0 - tau <= 1e-12)
                                                   ? SymmetricDist::uniform_binomial(spec.k)
                                                   : zm,
                                               dn_residual},
      .ratio = refined.value,
      .beta_n = beta_of_masses(spec, dn_masses).value,
      .gamma_y = pg.value,
      .points = acc.points};
  return out;
}

}  // namespace cspsketch
