#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "cspsketch/core/formulas.hpp"
#include "cspsketch/core/predicate.hpp"
#include "cspsketch/util/errors.hpp"
#include "cspsketch/util/parallel.hpp"

// Uniqueness scan for the 3AND minimizer. The proxy maximizer
// p(D) = D<1>/3 + 2 D<2>/3 + D<3> interpolates the per-vertex maximizers of
// lambda_{3}(D_i, .), which separates minimizers where a fixed p* cannot:
// G(D) = lambda(D, p(D)) / gamma(mu(D)) is minimized at (0,0,1,0) only.

namespace cspsketch {

struct UniquenessReport {
  double min_value = 0.0;
  std::vector<double> argmin;
  double margin = 0.0;   // min of G - 2/9 outside the 0.05 L1-ball around (0,0,1,0)
  long points = 0;
  long skipped = 0;      // gamma = 0 samples (the mu = -1 corner)
  int grid = 0;
};

inline UniquenessReport uniqueness_scan_3and(int grid, unsigned threads = 1) {
  if (grid < 100) throw ValidationError("uniqueness_scan_3and: grid must be >= 100");
  const PredicateSpec spec = kand_predicate(3);

  struct Acc {
    double min_value = std::numeric_limits<double>::infinity();
    std::vector<double> argmin;
    double margin = std::numeric_limits<double>::infinity();
    long points = 0;
    long skipped = 0;
  };

  auto chunk = [&](uint64_t begin, uint64_t end) {
    Acc acc;
    std::vector<double> d(4);
    for (uint64_t a = begin; a < end; ++a) {
      for (int b = 0; b <= grid - static_cast<int>(a); ++b) {
        for (int c = 0; c <= grid - static_cast<int>(a) - b; ++c) {
          const int e = grid - static_cast<int>(a) - b - c;
          d[0] = static_cast<double>(a) / grid;
          d[1] = static_cast<double>(b) / grid;
          d[2] = static_cast<double>(c) / grid;
          d[3] = static_cast<double>(e) / grid;
          ++acc.points;
          const double g = gamma_curve(spec, mu_of_masses(d));
          if (g <= 1e-14) {
            ++acc.skipped;
            continue;
          }
          const double proxy = d[1] / 3.0 + 2.0 * d[2] / 3.0 + d[3];
          const double value = lambda_of_masses(spec, d, proxy) / g;
          if (value < acc.min_value ||
              (value == acc.min_value &&
               std::lexicographical_compare(d.begin(), d.end(), acc.argmin.begin(),
                                            acc.argmin.end()))) {
            acc.min_value = value;
            acc.argmin = d;
          }
          const double l1 = std::abs(d[0]) + std::abs(d[1]) + std::abs(d[2] - 1.0) + std::abs(d[3]);
          if (l1 >= 0.05) acc.margin = std::min(acc.margin, value - 2.0 / 9.0);
        }
      }
    }
    return acc;
  };

  Acc acc = parallel_reduce<Acc>(
      static_cast<uint64_t>(grid) + 1, threads, {}, chunk, [](Acc x, Acc y) {
        if (y.argmin.empty()) {
        } else if (x.argmin.empty() || y.min_value < x.min_value ||
                   (y.min_value == x.min_value &&
                    std::lexicographical_compare(y.argmin.begin(), y.argmin.end(),
                                                 x.argmin.begin(), x.argmin.end()))) {
          x.min_value = y.min_value;
          x.argmin = y.argmin;
        }
        x.margin = std::min(x.margin, y.margin);
        x.points += y.points;
        x.skipped += y.skipped;
        return x;
      });

  return UniquenessReport{acc.min_value, acc.argmin, acc.margin, acc.points, acc.skipped, grid};
}

}  // namespace cspsketch
