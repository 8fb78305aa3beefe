#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <vector>

#include "cspsketch/alpha/certificate.hpp"
#include "cspsketch/alpha/simplex_scan.hpp"
#include "cspsketch/core/formulas.hpp"
#include "cspsketch/util/errors.hpp"
#include "cspsketch/util/parallel.hpp"

// Numeric minimization of beta_S(D) / gamma_{S,k}(mu(D)) over the simplex of
// symmetric distributions: lattice scan (sup_p lambda via a coefficient grid)
// followed by pairwise mass-transfer descent with the full beta.

namespace cspsketch {

namespace detail {

constexpr int kScanPGrid = 513;
constexpr int kDirichletSamples = 20000;

struct ScanAccumulator {
  ScanBest best;
  long skipped = 0;
};

}  // namespace detail

inline AlphaCertificate alpha_numeric(const PredicateSpec& spec, int grid, int refine_iters = 2,
                                      unsigned threads = 1) {
  if (grid < 10) throw ValidationError("alpha_numeric: grid must be >= 10");
  const auto t0 = std::chrono::steady_clock::now();
  const int parts = spec.k + 1;
  const LambdaGrid table(spec, detail::kScanPGrid);

  auto scan_point = [&](detail::ScanAccumulator& acc, const std::vector<double>& masses) {
    const double g = gamma_curve(spec, mu_of_masses(masses));
    if (g <= 1e-12) {
      ++acc.skipped;
      return;
    }
    acc.best.offer(table.max_over_grid(masses).first / g, masses);
  };

  detail::ScanAccumulator acc;
  const uint64_t full_points = composition_count(parts, grid);
  if (full_points <= detail::kFullLatticeBudget) {
    // full lattice, parallel over the leading coordinate
    acc = parallel_reduce<detail::ScanAccumulator>(
        static_cast<uint64_t>(grid) + 1, threads, {},
        [&](uint64_t begin, uint64_t end) {
          detail::ScanAccumulator local;
          std::vector<double> masses(static_cast<size_t>(parts));
          for (uint64_t lead = begin; lead < end; ++lead) {
            for_each_composition(parts - 1, grid - static_cast<int>(lead),
                                 [&](const std::vector<int>& tail) {
                                   masses[0] = static_cast<double>(lead) / grid;
                                   for (int i = 1; i < parts; ++i)
                                     masses[static_cast<size_t>(i)] =
                                         static_cast<double>(tail[static_cast<size_t>(i) - 1]) /
                                         grid;
                                   scan_point(local, masses);
                                 });
          }
          return local;
        },
        [](detail::ScanAccumulator a, detail::ScanAccumulator b) {
          a.best.merge(b.best);
          a.skipped += b.skipped;
          return a;
        });
  } else {
    // combinatorial blowup: restrict to supports of size <= 3, then pepper
    // the interior with seeded Dirichlet samples
    std::vector<double> masses(static_cast<size_t>(parts));
    for_each_support_lattice(parts, std::min(3, parts), grid, [&](const std::vector<int>& c) {
      for (int i = 0; i < parts; ++i)
        masses[static_cast<size_t>(i)] = static_cast<double>(c[static_cast<size_t>(i)]) / grid;
      scan_point(acc, masses);
    });
    for (uint64_t s = 0; s < detail::kDirichletSamples; ++s)
      scan_point(acc, dirichlet_sample(parts, /*seed=*/0x5eedu, s));
  }

  if (acc.best.masses.empty())
    throw ValidationError("alpha_numeric: every sample had gamma = 0");

  // local descent with the full-precision ratio
  auto exact_ratio = [&](const std::vector<double>& masses) {
    for (double m : masses)
      if (m < 0.0) return std::numeric_limits<double>::infinity();
    const double g = gamma_curve(spec, mu_of_masses(masses));
    if (g <= 1e-12) return std::numeric_limits<double>::infinity();
    return beta_of_masses(spec, masses).value / g;
  };
  ScanBest refined = refine_on_simplex(acc.best.masses, exact_ratio, refine_iters,
                                       std::max(0.5 / grid, 1e-4));

  SymmetricDist witness(refined.masses);
  AlphaCertificate cert{.alpha = refined.value,
                        .witness = witness,
                        .witness_p = beta(spec, witness).p,
                        .verified = false,
                        .vertex_report = {},
                        .method = AlphaMethod::numeric_only,
                        .grid = grid,
                        .skipped_samples = acc.skipped};
  cert.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return cert;
}

}  // namespace cspsketch
