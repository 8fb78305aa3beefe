#pragma once

#include <string>
#include <vector>

#include "cspsketch/core/symmetric_dist.hpp"

namespace cspsketch {

enum class AlphaMethod { closed_form, max_min_verified, numeric_only };

inline const char* to_string(AlphaMethod m) {
  switch (m) {
    case AlphaMethod::closed_form: return "closed_form";
    case AlphaMethod::max_min_verified: return "max_min_verified";
    default: return "numeric_only";
  }
}

// One extreme-point inequality lambda_S(vertex, p*) >= alpha * gamma(mu(vertex)).
struct VertexCheck {
  std::string vertex;
  std::vector<double> masses;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct AlphaCertificate {
  double alpha = 0.0;
  SymmetricDist witness;  // the no-side distribution D_N
  double witness_p = 0.0;
  bool verified = false;
  std::vector<VertexCheck> vertex_report;
  AlphaMethod method = AlphaMethod::numeric_only;
  long grid = 0;
  long skipped_samples = 0;
  double runtime_ms = 0.0;
};

}  // namespace cspsketch
