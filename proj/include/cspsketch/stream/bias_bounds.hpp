#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cspsketch/core/formulas.hpp"
#include "cspsketch/core/predicate.hpp"
#include "cspsketch/util/errors.hpp"

// Bias-to-value bounds for threshold predicates: every instance satisfies
// beta_{S,k}(bias) <= val <= gamma_{S,k}(bias).
//
// gamma has the closed piecewise form. beta_{S,k}(mu) has no known closed
// form; for checking the left inequality we use a certified lower bound: for
// each p, the minimum of lambda_S(., p) over {mu(D) = mu} is attained at a
// support-2 vertex (simplex edge cut by the marginal hyperplane) and min-max
// <= max-min bounds sup_p of those minima from below.

namespace cspsketch {

// Exact min over {D : mu(D) = mu} of lambda_S(D, p).
inline double lambda_min_at_marginal(const PredicateSpec& spec, double mu_val, double p) {
  const int k = spec.k;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= k; ++i) {
    const double ei = epsilon_weight(i, k);
    if (ei == mu_val) best = std::min(best, lambda_coefficient(spec, i, p));
    for (int j = i + 1; j <= k; ++j) {
      const double ej = epsilon_weight(j, k);
      if (ei <= mu_val && mu_val <= ej && ej > ei) {
        const double x = (ej - mu_val) / (ej - ei);
        best = std::min(best, x * lambda_coefficient(spec, i, p) +
                                  (1.0 - x) * lambda_coefficient(spec, j, p));
      }
    }
  }
  return best;
}

// Certified lower bound on beta_{S,k}(mu) = inf over {mu(D) = mu} of beta_S.
inline double beta_curve_lower_bound(const PredicateSpec& spec, double mu_val,
                                     int p_grid = 513) {
  if (mu_val < -1.0 - 1e-9 || mu_val > 1.0 + 1e-9)
    throw ValidationError("beta_curve_lower_bound: mu outside [-1, 1]");
  mu_val = std::clamp(mu_val, -1.0, 1.0);
  double best = 0.0;
  for (int g = 0; g < p_grid; ++g) {
    const double p = static_cast<double>(g) / static_cast<double>(p_grid - 1);
    best = std::max(best, lambda_min_at_marginal(spec, mu_val, p));
  }
  return best;
}

// Direct grid estimate of beta_{S,k}(mu): inf of beta_S over lattice points
// whose marginal matches mu within the lattice pitch. Unlike the bound above
// this can overshoot by the discretization, so it is a cross-check, not a
// certificate.
inline double beta_curve_grid(const PredicateSpec& spec, double mu_val, int resolution = 60) {
  const int parts = spec.k + 1;
  const double tol = 2.0 / resolution;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> masses(static_cast<size_t>(parts));
  std::vector<int> c(static_cast<size_t>(parts), 0);
  c[0] = resolution;
  for (;;) {
    for (int i = 0; i < parts; ++i)
      masses[static_cast<size_t>(i)] = static_cast<double>(c[static_cast<size_t>(i)]) / resolution;
    if (std::abs(mu_of_masses(masses) - mu_val) <= tol)
      best = std::min(best, beta_of_masses(spec, masses, 1025).value);
    int i = parts - 2;
    while (i >= 0 && c[static_cast<size_t>(i)] == 0) --i;
    if (i < 0) break;
    --c[static_cast<size_t>(i)];
    const int tail = c[static_cast<size_t>(parts) - 1] + 1;
    c[static_cast<size_t>(i) + 1] = tail;
    for (int j = i + 2; j < parts; ++j) c[static_cast<size_t>(j)] = 0;
  }
  return best;
}

// v_hat = alpha * gamma_{S,k}(b_hat / (1 + delta)): with b_hat within
// (1 +- delta) of the true bias this lands in [(alpha - eps) val, val].
inline double estimate_from_bias(const PredicateSpec& spec, double alpha, double bias_estimate,
                                 double delta) {
  const double shrunk = std::clamp(bias_estimate / (1.0 + delta), 0.0, 1.0);
  return alpha * gamma_curve(spec, shrunk);
}

}  // namespace cspsketch
