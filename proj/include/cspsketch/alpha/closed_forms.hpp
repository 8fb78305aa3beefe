#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cspsketch/alpha/certificate.hpp"
#include "cspsketch/core/formulas.hpp"
#include "cspsketch/core/predicate.hpp"
#include "cspsketch/core/symmetric_dist.hpp"

namespace cspsketch {

// alpha'_k = ((k-1)(k+1) / 4k^2)^{(k-1)/2}, the kAND ratio for odd k.
// Integer numerator/denominator first, one division, then the integer power.
inline double alpha_prime(int k) {
  const double num = static_cast<double>((k - 1)) * static_cast<double>(k + 1);
  const double den = 4.0 * static_cast<double>(k) * static_cast<double>(k);
  return pow_int(num / den, (k - 1) / 2);
}

// p'_k, the maximizer for the exactly-(k+1)/2 family witness.
inline double ex_mid_p_star(int k) {
  const double kk = static_cast<double>(k);
  const double disc = 4.0 * kk + kk * kk - 2.0 * kk * kk * kk + kk * kk * kk * kk;
  return (3.0 * kk - kk * kk + std::sqrt(disc)) / (4.0 * kk);
}

// Unique positive real root of c0 + c1 z + c2 z^2 + c3 z^3 by sign bisection.
inline double positive_root(const std::array<double, 4>& c) {
  auto eval = [&](double z) { return ((c[3] * z + c[2]) * z + c[1]) * z + c[0]; };
  double lo = 0.0, hi = 1.0;
  while (eval(hi) < 0.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (eval(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

struct ClosedForm {
  double alpha = 0.0;
  SymmetricDist witness;
  double p_star = 0.0;
  std::string family;  // which catalog entry fired
};

namespace detail {

inline SymmetricDist reverse_dist(const SymmetricDist& d) {
  std::vector<double> m(d.mass_vector().rbegin(), d.mass_vector().rend());
  return SymmetricDist(std::move(m));
}

inline std::optional<ClosedForm> closed_form_normalized(const PredicateSpec& spec) {
  const int k = spec.k;

  // Accepted weights on both sides of k/2: resistant, alpha = rho. The
  // binomial witness has constant lambda = rho in p, and every extreme point
  // satisfies lambda = rho >= rho * gamma since gamma <= 1.
  if (spec.supports_one_wise())
    return ClosedForm{spec.rho, SymmetricDist::uniform_binomial(k), 0.5, "one_wise_resistant"};

  // kAND
  if (spec.accepted.size() == 1 && spec.accepted[0] == k) {
    if (k % 2 == 1) {
      return ClosedForm{alpha_prime(k), SymmetricDist::point_mass(k, (k + 1) / 2),
                        static_cast<double>(k + 1) / static_cast<double>(2 * k), "kand_odd"};
    }
    const double lo = static_cast<double>((k / 2 + 1) * (k / 2 + 1));
    const double hi = static_cast<double>((k / 2) * (k / 2));
    return ClosedForm{2.0 * alpha_prime(k + 1),
                      SymmetricDist::two_point(k, k / 2, lo / (lo + hi), k / 2 + 1),
                      0.5 + 1.0 / static_cast<double>(2 * (k + 1)), "kand_even"};
  }

  // Th^{k-1}_k, even k >= 4 (k = 2 is one-wise resistant and handled above)
  if (k % 2 == 0 && k >= 4 && spec.accepted.size() == 2 && spec.accepted[0] == k - 1 &&
      spec.accepted[1] == k) {
    const double lo = static_cast<double>((k / 2) * (k / 2));
    const double hi = static_cast<double>((k / 2 - 1) * (k / 2 - 1));
    return ClosedForm{static_cast<double>(k) / 2.0 * alpha_prime(k - 1),
                      SymmetricDist::two_point(k, k / 2, lo / (lo + hi), k / 2 + 1),
                      0.5 + 1.0 / static_cast<double>(2 * (k - 1)), "th_k_minus_1"};
  }

  // Ex^{(k+1)/2}_k, odd k; the vertex inequalities are only established for
  // k <= 51, so larger arities fall through to the numeric path.
  if (k % 2 == 1 && k >= 3 && k <= 51 && spec.accepted.size() == 1 &&
      spec.accepted[0] == (k + 1) / 2) {
    const double p = ex_mid_p_star(k);
    const double q = 1.0 - p;
    const double w0 = static_cast<double>(k - 1) / static_cast<double>(2 * k);
    const double wk = static_cast<double>(k + 1) / static_cast<double>(2 * k);
    const double alpha =
        static_cast<double>(binomial(k, (k + 1) / 2)) *
        (w0 * pow_int(q, (k + 1) / 2) * pow_int(p, (k - 1) / 2) +
         wk * pow_int(q, (k - 1) / 2) * pow_int(p, (k + 1) / 2));
    std::vector<double> m(static_cast<size_t>(k) + 1, 0.0);
    m[0] = w0;
    m[static_cast<size_t>(k)] = wk;
    return ClosedForm{alpha, SymmetricDist(std::move(m)), p, "ex_mid"};
  }

  // Individually resolved cases: witness masses are rational or roots of the
  // cubics below, alpha is the paired constant.
  auto is = [&](std::initializer_list<int> s) {
    return spec.accepted == std::vector<int>(s);
  };
  if (k == 3 && is({2, 3})) {
    return ClosedForm{0.5 + std::sqrt(3.0) / 18.0, SymmetricDist({0.0, 0.5, 0.0, 0.5}),
                      beta(spec, SymmetricDist({0.0, 0.5, 0.0, 0.5})).p, "resolved_2of3"};
  }
  if (k == 5 && is({4, 5})) {
    const double a = 8.0 * positive_root({-72.0, 4890.0, -108999.0, 800000.0});
    const double r = positive_root({-908.0, 5021.0, -9001.0, 5158.0});
    SymmetricDist w({0.0, 0.0, 1.0 - r, r, 0.0, 0.0});
    return ClosedForm{a, w, beta(spec, w).p, "resolved_45of5"};
  }
  if (k == 5 && is({4})) {
    const double a = 8.0 * positive_root({-60.0, 5745.0, -183426.0, 1953125.0});
    const double r = positive_root({-344.0, 1770.0, -3102.0, 1811.0});
    SymmetricDist w({0.0, 0.0, 1.0 - r, r, 0.0, 0.0});
    return ClosedForm{a, w, beta(spec, w).p, "resolved_4of5"};
  }
  if (k == 5 && is({3, 4, 5})) {
    const double a = 0.5 + 3.0 * std::sqrt(5.0) / 125.0;
    SymmetricDist w({0.0, 0.5, 0.0, 0.0, 0.0, 0.5});
    return ClosedForm{a, w, beta(spec, w).p, "resolved_345of5"};
  }
  return std::nullopt;
}

}  // namespace detail

// Catalog lookup. Predicates whose accepted weights all sit below k/2 are
// solved through the complement predicate (same alpha; witness reverses).
inline std::optional<ClosedForm> closed_form_alpha(const PredicateSpec& spec) {
  if (!spec.supports_one_wise() && 2 * spec.max_weight() < spec.k) {
    auto flipped = detail::closed_form_normalized(complement_predicate(spec));
    if (!flipped) return std::nullopt;
    return ClosedForm{flipped->alpha, detail::reverse_dist(flipped->witness), flipped->p_star,
                      flipped->family + "_complement"};
  }
  return detail::closed_form_normalized(spec);
}

}  // namespace cspsketch
