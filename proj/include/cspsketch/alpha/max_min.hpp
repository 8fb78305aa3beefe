#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "cspsketch/alpha/certificate.hpp"
#include "cspsketch/core/formulas.hpp"
#include "cspsketch/core/predicate.hpp"
#include "cspsketch/core/symmetric_dist.hpp"
#include "cspsketch/util/errors.hpp"

// Max-min certification. gamma_{S,k}(mu(.)) is linear on each side of its
// knees (the marginals of the smallest/largest accepted weight), so on each
// linear piece the ratio lambda/gamma is minimized at an extreme point of
// that piece: the point masses D_i, plus the two-weight distributions pinned
// to a knee marginal. Checking
//
//   lambda_S(vertex, p*) >= alpha * gamma_{S,k}(mu(vertex))
//
// at every such vertex therefore bounds the ratio from below on all of the
// simplex, by convex decomposition (linearity makes the per-vertex inequality
// form sound even where gamma vanishes).

namespace cspsketch {

// Point masses and knee-pinned two-point distributions.
inline std::vector<std::pair<std::string, SymmetricDist>> ratio_extreme_points(
    const PredicateSpec& spec) {
  const int k = spec.k;
  std::vector<std::pair<std::string, SymmetricDist>> out;
  for (int i = 0; i <= k; ++i)
    out.emplace_back("D" + std::to_string(i), SymmetricDist::point_mass(k, i));
  std::vector<int> knees;
  if (spec.eps_min > -1.0) knees.push_back(spec.min_weight());
  if (spec.eps_max < 1.0 && spec.max_weight() != spec.min_weight())
    knees.push_back(spec.max_weight());
  for (int c : knees) {
    for (int i = 0; i < c; ++i) {
      for (int j = c + 1; j <= k; ++j) {
        const double x = static_cast<double>(j - c) / static_cast<double>(j - i);
        out.emplace_back(
            "D" + std::to_string(i) + "," + std::to_string(j) + "@eps" + std::to_string(c),
            SymmetricDist::two_point(k, i, x, j));
      }
    }
  }
  return out;
}

// Smallest lambda(v, p)/gamma(mu(v)) over extreme points with gamma > 0; this
// equals inf over the whole simplex of lambda(., p)/gamma(mu(.)).
inline double vertex_ratio_floor(const PredicateSpec& spec, double p) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& [name, v] : ratio_extreme_points(spec)) {
    const double g = gamma_curve(spec, mu(v));
    if (g <= 1e-15) continue;
    worst = std::min(worst, lambda_value(spec, v, p) / g);
  }
  return worst;
}

// Certify (D_N*, p*) as a saddle point: (a) p* must maximize
// lambda_S(D_N*, .), (b) every extreme point must satisfy the vertex
// inequality at alpha = lambda(D_N*, p*)/gamma(mu(D_N*)).
inline AlphaCertificate verify_max_min(const PredicateSpec& spec, const SymmetricDist& witness,
                                       double p_star) {
  check_arity(spec, witness.masses());
  if (p_star < -1e-12 || p_star > 1.0 + 1e-12)
    throw ValidationError("verify_max_min: p* outside [0, 1]");

  const double g_star = gamma_curve(spec, mu(witness));
  if (g_star <= 1e-12)
    throw ValidationError("verify_max_min: witness has gamma = 0, invalid");

  const double lam_star = lambda_value(spec, witness, p_star);
  const BetaResult b = beta(spec, witness);
  const bool p_is_max = std::abs(b.value - lam_star) <= 1e-9;

  AlphaCertificate cert{.alpha = lam_star / g_star,
                        .witness = witness,
                        .witness_p = p_star,
                        .verified = p_is_max,
                        .vertex_report = {},
                        .method = AlphaMethod::max_min_verified};
  for (const auto& [name, v] : ratio_extreme_points(spec)) {
    VertexCheck check;
    check.vertex = name;
    check.masses = v.mass_vector();
    check.lhs = lambda_value(spec, v, p_star);
    check.rhs = cert.alpha * gamma_curve(spec, mu(v));
    check.pass = check.lhs >= check.rhs - 1e-9;
    cert.verified = cert.verified && check.pass;
    cert.vertex_report.push_back(std::move(check));
  }
  return cert;
}

}  // namespace cspsketch
