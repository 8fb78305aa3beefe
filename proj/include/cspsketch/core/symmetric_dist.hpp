#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cspsketch/core/predicate.hpp"
#include "cspsketch/util/errors.hpp"

namespace cspsketch {

// A symmetric distribution on {-1,1}^k, stored as the k+1 weight-class masses
// D<0>, ..., D<k>. Masses within 1e-6 of summing to one are renormalized;
// anything further off is rejected rather than silently fixed.
class SymmetricDist {
public:
  explicit SymmetricDist(std::vector<double> masses) : masses_(std::move(masses)) {
    if (masses_.size() < 2) throw ValidationError("SymmetricDist: need at least 2 mass entries");
    double sum = 0.0;
    for (double& m : masses_) {
      if (!(m > -1e-9))  // also rejects NaN
        throw ValidationError("SymmetricDist: negative mass");
      if (m < 0.0) m = 0.0;
      sum += m;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw ValidationError("SymmetricDist: masses sum to " + std::to_string(sum) +
                            ", expected 1");
    if (sum != 1.0)
      for (double& m : masses_) m /= sum;
  }

  static SymmetricDist point_mass(int k, int weight) {
    std::vector<double> m(static_cast<size_t>(k) + 1, 0.0);
    m.at(weight) = 1.0;
    return SymmetricDist(std::move(m));
  }

  // x on weight i, 1-x on weight j
  static SymmetricDist two_point(int k, int i, double x, int j) {
    std::vector<double> m(static_cast<size_t>(k) + 1, 0.0);
    m.at(i) += x;
    m.at(j) += 1.0 - x;
    return SymmetricDist(std::move(m));
  }

  // binomial(k, 1/2): the distribution of a uniform pattern
  static SymmetricDist uniform_binomial(int k) {
    std::vector<double> m(static_cast<size_t>(k) + 1);
    double scale = pow_int(0.5, k);
    for (int i = 0; i <= k; ++i) m[i] = static_cast<double>(binomial(k, i)) * scale;
    return SymmetricDist(std::move(m));
  }

  int arity() const { return static_cast<int>(masses_.size()) - 1; }
  double operator[](int i) const { return masses_[static_cast<size_t>(i)]; }
  std::span<const double> masses() const { return masses_; }
  const std::vector<double>& mass_vector() const { return masses_; }

private:
  std::vector<double> masses_;
};

// mu of a raw mass span; hot paths use this without constructing a dist.
inline double mu_of_masses(std::span<const double> masses) {
  const int k = static_cast<int>(masses.size()) - 1;
  double m = 0.0;
  for (int i = 0; i <= k; ++i) m += epsilon_weight(i, k) * masses[i];
  return m;
}

// Scalar marginal mu(D) = sum_i epsilon_{i,k} D<i>.
inline double mu(const SymmetricDist& dist) { return mu_of_masses(dist.masses()); }

}  // namespace cspsketch
