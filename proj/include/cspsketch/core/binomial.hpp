#pragma once

#include <cstdint>

#include "cspsketch/util/errors.hpp"

namespace cspsketch {

// C(n, r) as an exact 64-bit integer. Arities are capped at 31 throughout the
// library, far inside the exact range of this table.
inline uint64_t binomial(int n, int r) {
  if (n < 0 || r < 0 || r > n) return 0;
  if (n > 62) throw ValidationError("binomial: n too large for exact 64-bit evaluation");
  static const auto table = [] {
    struct Table {
      uint64_t c[63][63];
    };
    Table t{};
    for (int i = 0; i < 63; ++i) {
      t.c[i][0] = 1;
      for (int j = 1; j <= i; ++j)
        t.c[i][j] = t.c[i - 1][j - 1] + (j <= i - 1 ? t.c[i - 1][j] : 0);
    }
    return t;
  }();
  return table.c[n][r];
}

// x^e for small integer e, with the 0^0 = 1 convention the lambda formula needs.
inline double pow_int(double x, int e) {
  double r = 1.0;
  double base = x;
  for (int n = e; n > 0; n >>= 1) {
    if (n & 1) r *= base;
    base *= base;
  }
  return r;
}

}  // namespace cspsketch
