#pragma once

#include <limits>
#include <vector>

#include "cspsketch/alpha/certificate.hpp"
#include "cspsketch/alpha/max_min.hpp"
#include "cspsketch/core/formulas.hpp"
#include "cspsketch/util/errors.hpp"

// Search over distributions supported on at most two Hamming weights; the
// cataloged optimal witnesses all have this shape. The returned lower bound
// comes from the max-min vertex floor at the witness's maximizer, the upper
// bound is the witness's own ratio.

namespace cspsketch {

struct Support2Result {
  SymmetricDist witness;
  double lower = 0.0;
  double upper = 0.0;
  double p_star = 0.0;
  bool verified = false;
  AlphaCertificate certificate;
};

inline Support2Result support2_search(const PredicateSpec& spec, int resolution) {
  if (resolution < 100) throw ValidationError("support2_search: resolution must be >= 100");
  const int k = spec.k;

  struct Best {
    double ratio = std::numeric_limits<double>::infinity();
    int i = 0, j = 0;
    double x = 1.0;
  } best;

  const LambdaGrid table(spec, 1025);
  std::vector<double> masses(static_cast<size_t>(k) + 1);
  auto ratio_with = [&](int i, int j, double x, bool exact) {
    std::fill(masses.begin(), masses.end(), 0.0);
    masses[static_cast<size_t>(i)] += x;
    masses[static_cast<size_t>(j)] += 1.0 - x;
    const double g = gamma_curve(spec, mu_of_masses(masses));
    if (g <= 1e-12) return std::numeric_limits<double>::infinity();
    const double b = exact ? beta_of_masses(spec, masses).value : table.max_over_grid(masses).first;
    return b / g;
  };
  auto ratio_at = [&](int i, int j, double x) { return ratio_with(i, j, x, false); };

  for (int i = 0; i <= k; ++i) {
    const double point = ratio_at(i, i, 1.0);
    if (point < best.ratio) best = {point, i, i, 1.0};
    for (int j = i + 1; j <= k; ++j) {
      for (int step = 0; step <= resolution; ++step) {
        const double x = static_cast<double>(step) / resolution;
        const double r = ratio_at(i, j, x);
        if (r < best.ratio) best = {r, i, j, x};
      }
    }
  }

  // golden refinement of the mixing fraction within the winning pair, on the
  // full-precision ratio (the scan grid is too jagged to localize flat minima)
  if (best.i != best.j) {
    constexpr double kGolden = 0.6180339887498949;
    best.ratio = ratio_with(best.i, best.j, best.x, true);  // same metric as the refinement
    double lo = std::max(0.0, best.x - 1.0 / resolution);
    double hi = std::min(1.0, best.x + 1.0 / resolution);
    for (int it = 0; it < 120 && hi - lo > 1e-13; ++it) {
      const double c = hi - kGolden * (hi - lo);
      const double d = lo + kGolden * (hi - lo);
      if (ratio_with(best.i, best.j, c, true) < ratio_with(best.i, best.j, d, true))
        hi = d;
      else
        lo = c;
    }
    const double x = 0.5 * (lo + hi);
    const double r = ratio_with(best.i, best.j, x, true);
    if (r < best.ratio) {
      best.ratio = r;
      best.x = x;
    }
  }

  SymmetricDist witness = SymmetricDist::two_point(k, best.i, best.x, best.j);
  const BetaResult b = beta(spec, witness);
  const double upper = b.value / gamma_curve(spec, mu(witness));

  Support2Result out{.witness = witness,
                     .lower = 0.0,
                     .upper = upper,
                     .p_star = b.p,
                     .verified = false,
                     .certificate = verify_max_min(spec, witness, b.p)};
  out.verified = out.certificate.verified;
  out.lower = out.verified ? out.certificate.alpha : vertex_ratio_floor(spec, b.p);
  return out;
}

}  // namespace cspsketch
