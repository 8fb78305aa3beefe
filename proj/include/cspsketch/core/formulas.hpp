#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "cspsketch/core/binomial.hpp"
#include "cspsketch/core/predicate.hpp"
#include "cspsketch/core/symmetric_dist.hpp"
#include "cspsketch/util/errors.hpp"

// Core quantities of the symmetric-CSP framework.
//
// lambda_S(D, p) is the expected predicate value when a sample of D is
// multiplied coordinatewise by independent p-biased signs: the value of the
// p-biased symmetric assignment on D's canonical instance. For a point mass
// on weight i the probability that the product has weight s is
//
//   sum_j C(i,j) C(k-i, s-j) q^{s+i-2j} p^{k-s-i+2j},   q = 1 - p,
//
// where j counts accepted positions kept positive. gamma_{S,k}(mu) is the
// largest weight-in-S mass any symmetric distribution with marginal mu can
// carry; it is piecewise linear with knees at eps_{s,k} and eps_{t,k} for the
// smallest/largest accepted weights s, t, and branches with a vanishing
// denominator (eps = -1 or +1) are dropped.

namespace cspsketch {

// coefficient of D<i> in lambda_S(D, p)
inline double lambda_coefficient(const PredicateSpec& spec, int i, double p) {
  const int k = spec.k;
  const double q = 1.0 - p;
  double c = 0.0;
  for (int s : spec.accepted) {
    const int j_lo = std::max(0, s - (k - i));
    const int j_hi = std::min(i, s);
    for (int j = j_lo; j <= j_hi; ++j) {
      c += static_cast<double>(binomial(i, j)) * static_cast<double>(binomial(k - i, s - j)) *
           pow_int(q, s + i - 2 * j) * pow_int(p, k - s - i + 2 * j);
    }
  }
  return c;
}

// d/dp of lambda_coefficient
inline double lambda_coefficient_dp(const PredicateSpec& spec, int i, double p) {
  const int k = spec.k;
  const double q = 1.0 - p;
  double c = 0.0;
  for (int s : spec.accepted) {
    const int j_lo = std::max(0, s - (k - i));
    const int j_hi = std::min(i, s);
    for (int j = j_lo; j <= j_hi; ++j) {
      const double coef =
          static_cast<double>(binomial(i, j)) * static_cast<double>(binomial(k - i, s - j));
      const int a = s + i - 2 * j;          // exponent of q
      const int b = k - s - i + 2 * j;      // exponent of p
      double term = 0.0;
      if (a > 0) term -= static_cast<double>(a) * pow_int(q, a - 1) * pow_int(p, b);
      if (b > 0) term += static_cast<double>(b) * pow_int(q, a) * pow_int(p, b - 1);
      c += coef * term;
    }
  }
  return c;
}

inline void check_arity(const PredicateSpec& spec, std::span<const double> masses) {
  if (static_cast<int>(masses.size()) != spec.k + 1)
    throw ValidationError("arity mismatch: predicate k=" + std::to_string(spec.k) +
                          ", distribution has " + std::to_string(masses.size()) + " masses");
}

inline double lambda_of_masses(const PredicateSpec& spec, std::span<const double> masses,
                               double p) {
  check_arity(spec, masses);
  if (p < -1e-12 || p > 1.0 + 1e-12) throw ValidationError("lambda: p outside [0, 1]");
  p = std::clamp(p, 0.0, 1.0);
  double v = 0.0;
  for (int i = 0; i <= spec.k; ++i)
    if (masses[i] != 0.0) v += lambda_coefficient(spec, i, p) * masses[i];
  return v;
}

inline double lambda_value(const PredicateSpec& spec, const SymmetricDist& dist, double p) {
  return lambda_of_masses(spec, dist.masses(), p);
}

inline double lambda_dp(const PredicateSpec& spec, std::span<const double> masses, double p) {
  double v = 0.0;
  for (int i = 0; i <= spec.k; ++i)
    if (masses[i] != 0.0) v += lambda_coefficient_dp(spec, i, p) * masses[i];
  return v;
}

// gamma_{S,k}(mu): min of the surviving ratio branches, capped at 1.
inline double gamma_curve(const PredicateSpec& spec, double mu_val) {
  if (mu_val < -1.0 - 1e-9 || mu_val > 1.0 + 1e-9)
    throw ValidationError("gamma_curve: mu outside [-1, 1]");
  mu_val = std::clamp(mu_val, -1.0, 1.0);
  double g = 1.0;
  if (spec.eps_min > -1.0) g = std::min(g, (1.0 + mu_val) / (1.0 + spec.eps_min));
  if (spec.eps_max < 1.0) g = std::min(g, (1.0 - mu_val) / (1.0 - spec.eps_max));
  return g;
}

// Precomputed lambda coefficients on a fixed p grid (includes both
// endpoints); lets simplex scans evaluate sup_p lambda in one pass of
// fused multiply-adds per grid point.
class LambdaGrid {
public:
  LambdaGrid(const PredicateSpec& spec, int grid_points)
      : k_(spec.k), points_(grid_points), coef_(static_cast<size_t>(grid_points) * (spec.k + 1)) {
    for (int g = 0; g < grid_points; ++g) {
      const double p = static_cast<double>(g) / static_cast<double>(grid_points - 1);
      double* row = &coef_[static_cast<size_t>(g) * (k_ + 1)];
      for (int i = 0; i <= k_; ++i) row[i] = lambda_coefficient(spec, i, p);
    }
  }

  int points() const { return points_; }
  double p_at(int g) const { return static_cast<double>(g) / static_cast<double>(points_ - 1); }

  // (max_g lambda(masses, p_g), argmax grid index)
  std::pair<double, int> max_over_grid(std::span<const double> masses) const {
    double best = -1.0;
    int best_g = 0;
    const double* c = coef_.data();
    for (int g = 0; g < points_; ++g, c += k_ + 1) {
      double v = 0.0;
      for (int i = 0; i <= k_; ++i) v += c[i] * masses[i];
      if (v > best) {
        best = v;
        best_g = g;
      }
    }
    return {best, best_g};
  }

private:
  int k_;
  int points_;
  std::vector<double> coef_;
};

struct BetaResult {
  double value = 0.0;  // sup_p lambda_S(D, p)
  double p = 0.0;      // a maximizer
};

namespace detail {

// Polish a bracketed maximum: golden section to tighten, then bisection on
// the sign of dlambda/dp. Golden section alone stalls about 1e-8 from the
// optimum once lambda differences sink below double rounding, which is not
// enough for the 1e-9 vertex-tie checks downstream.
inline void polish_maximum(const PredicateSpec& spec, std::span<const double> masses, double lo,
                           double hi, double& best_v, double& best_p) {
  constexpr double kGolden = 0.6180339887498949;
  for (int it = 0; it < 40 && hi - lo > 1e-10; ++it) {
    const double c = hi - kGolden * (hi - lo);
    const double d = lo + kGolden * (hi - lo);
    if (lambda_of_masses(spec, masses, c) > lambda_of_masses(spec, masses, d))
      hi = d;
    else
      lo = c;
  }
  double p = 0.5 * (lo + hi);
  // derivative sign bisection around p, if a sign change brackets it
  double a = std::max(0.0, p - 1e-7), b = std::min(1.0, p + 1e-7);
  double da = lambda_dp(spec, masses, a), db = lambda_dp(spec, masses, b);
  if (da > 0.0 && db < 0.0) {
    for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
      const double m = 0.5 * (a + b);
      const double dm = lambda_dp(spec, masses, m);
      if (dm > 0.0)
        a = m;
      else
        b = m;
    }
    p = 0.5 * (a + b);
  }
  const double v = lambda_of_masses(spec, masses, p);
  if (v > best_v) {
    best_v = v;
    best_p = p;
  }
}

}  // namespace detail

// beta_S(D) = sup_{p in [0,1]} lambda_S(D, p), with a maximizer. Dense grid,
// then the top local maxima are polished; lambda_S(D, .) is a degree-k
// polynomial and may be multimodal, so a single local search is not trusted.
inline BetaResult beta_of_masses(const PredicateSpec& spec, std::span<const double> masses,
                                 int grid_points = 4096) {
  check_arity(spec, masses);
  std::vector<double> vals(static_cast<size_t>(grid_points));
  for (int g = 0; g < grid_points; ++g) {
    const double p = static_cast<double>(g) / static_cast<double>(grid_points - 1);
    vals[g] = lambda_of_masses(spec, masses, p);
  }
  double best_v = vals[0];
  double best_p = 0.0;
  for (int g = 0; g < grid_points; ++g) {
    if (vals[g] > best_v) {
      best_v = vals[g];
      best_p = static_cast<double>(g) / static_cast<double>(grid_points - 1);
    }
  }
  // top three interior local maxima
  struct Local {
    double v;
    int g;
  };
  std::vector<Local> locals;
  for (int g = 0; g < grid_points; ++g) {
    const bool up = g == 0 || vals[g] >= vals[g - 1];
    const bool down = g == grid_points - 1 || vals[g] >= vals[g + 1];
    if (up && down) locals.push_back({vals[g], g});
  }
  std::sort(locals.begin(), locals.end(), [](const Local& a, const Local& b) {
    return a.v > b.v || (a.v == b.v && a.g < b.g);
  });
  if (locals.size() > 3) locals.resize(3);
  const double h = 1.0 / static_cast<double>(grid_points - 1);
  for (const Local& l : locals) {
    const double lo = std::max(0.0, l.g * h - h);
    const double hi = std::min(1.0, l.g * h + h);
    detail::polish_maximum(spec, masses, lo, hi, best_v, best_p);
  }
  // contract: never below the obvious probes
  for (double p : {0.0, 0.5, 1.0}) {
    const double v = lambda_of_masses(spec, masses, p);
    if (v > best_v) {
      best_v = v;
      best_p = p;
    }
  }
  return {best_v, best_p};
}

inline BetaResult beta(const PredicateSpec& spec, const SymmetricDist& dist,
                       int grid_points = 4096) {
  return beta_of_masses(spec, dist.masses(), grid_points);
}

}  // namespace cspsketch
