#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "cspsketch/alpha/certificate.hpp"
#include "cspsketch/alpha/padded.hpp"
#include "cspsketch/alpha/support2.hpp"
#include "cspsketch/alpha/uniqueness3and.hpp"
#include "cspsketch/util/errors.hpp"

namespace cspsketch {

using json = nlohmann::json;

// Every subcommand produces one of these; identical params + seed give a
// byte-identical `results` payload (runtime lives outside it).
struct RunReport {
  std::string command;
  json params = json::object();
  json results = json::object();
  uint64_t seed = 0;
  int64_t runtime_ms = 0;
};

inline json to_json(const AlphaCertificate& cert) {
  json vr = json::array();
  for (const VertexCheck& v : cert.vertex_report)
    vr.push_back({{"vertex", v.vertex},
                  {"masses", v.masses},
                  {"lhs", v.lhs},
                  {"rhs", v.rhs},
                  {"pass", v.pass}});
  return json{{"alpha", cert.alpha},
              {"witness", {{"masses", cert.witness.mass_vector()}, {"p_star", cert.witness_p}}},
              {"method", to_string(cert.method)},
              {"verified", cert.verified},
              {"vertex_report", vr},
              {"grid", cert.grid},
              {"skipped_samples", cert.skipped_samples},
              {"runtime_ms", cert.runtime_ms}};
}

inline json to_json(const Support2Result& r) {
  return json{{"witness", r.witness.mass_vector()},
              {"p_star", r.p_star},
              {"lower", r.lower},
              {"upper", r.upper},
              {"verified", r.verified},
              {"certificate", to_json(r.certificate)}};
}

inline json to_json(const PaddedPairDecomposition& d) {
  return json{{"tau", d.tau},
              {"d0", d.d0.mass_vector()},
              {"dy_prime", d.dy_prime.mass_vector()},
              {"dn_prime", d.dn_prime.mass_vector()}};
}

inline json to_json(const PaddedSearchResult& r) {
  return json{{"dy", r.dy.mass_vector()},
              {"dn", r.dn.mass_vector()},
              {"decomposition", to_json(r.decomposition)},
              {"ratio", r.ratio},
              {"beta_n", r.beta_n},
              {"gamma_y", r.gamma_y},
              {"points", r.points}};
}

inline json to_json(const UniquenessReport& r) {
  return json{{"min_value", r.min_value}, {"argmin", r.argmin},   {"margin", r.margin},
              {"points", r.points},       {"skipped", r.skipped}, {"grid", r.grid}};
}

inline json to_json(const RunReport& r) {
  return json{{"command", r.command},
              {"params", r.params},
              {"results", r.results},
              {"seed", r.seed},
              {"runtime_ms", r.runtime_ms}};
}

inline void write_report(const RunReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open report file: " + path);
  out << to_json(report).dump(2) << '\n';
  if (!out) throw IoError("failed writing report file: " + path);
}

inline void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  out << text;
  if (!out) throw IoError("failed writing output file: " + path);
}

}  // namespace cspsketch
