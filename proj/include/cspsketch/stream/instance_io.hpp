#pragma once

#include <charconv>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cspsketch/stream/instance.hpp"
#include "cspsketch/util/errors.hpp"

// Line-oriented instance text format:
//   # comment lines anywhere
//   p maxcsp <n> <k> <m>
//   c <weight> <±j1> ... <±jk>      (m of these; sign carries the negation)
// Weights are decimal literals; serialization emits shortest round-trip
// forms, so parse(serialize(x)) == x exactly.

namespace cspsketch {

namespace detail {

inline ValidationError parse_error(int line_no, const std::string& message) {
  return ValidationError("parse error at line " + std::to_string(line_no) + ": " + message);
}

inline bool significant(const std::string& line) {
  for (char ch : line) {
    if (ch == '#') return false;
    if (!isspace(static_cast<unsigned char>(ch))) return true;
  }
  return false;
}

}  // namespace detail

inline Instance parse_instance(std::istream& in) {
  std::string line;
  int line_no = 0;
  long n = 0, k = 0, m = 0;
  bool have_header = false;
  long seen = 0;
  Instance inst(1, 1);

  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::significant(line)) continue;
    std::istringstream tokens(line);
    std::string tag;
    tokens >> tag;
    if (!have_header) {
      std::string fmt;
      if (tag != "p" || !(tokens >> fmt >> n >> k >> m) || fmt != "maxcsp")
        throw detail::parse_error(line_no, "expected header 'p maxcsp <n> <k> <m>'");
      if (n < 1 || k < 1 || m < 1)
        throw detail::parse_error(line_no, "header values must be positive");
      if (k > 31) throw detail::parse_error(line_no, "arity above 31 unsupported");
      std::string extra;
      if (tokens >> extra) throw detail::parse_error(line_no, "trailing tokens after header");
      inst = Instance(static_cast<int>(n), static_cast<int>(k));
      have_header = true;
      continue;
    }
    if (tag != "c") throw detail::parse_error(line_no, "expected constraint line 'c ...'");
    if (seen == m) throw detail::parse_error(line_no, "more than m constraint lines");
    std::string weight_token;
    if (!(tokens >> weight_token)) throw detail::parse_error(line_no, "missing weight");
    char* endp = nullptr;
    const double w = std::strtod(weight_token.c_str(), &endp);
    if (endp == weight_token.c_str() || *endp != '\0')
      throw detail::parse_error(line_no, "bad weight '" + weight_token + "'");
    if (!(w >= 0.0)) throw detail::parse_error(line_no, "weight must be >= 0");
    Constraint c;
    c.weight = w;
    long lit = 0;
    while (tokens >> lit) {
      if (lit == 0) throw detail::parse_error(line_no, "literal 0 is invalid");
      c.negations.push_back(lit > 0 ? 1 : -1);
      c.indices.push_back(static_cast<int>(lit > 0 ? lit : -lit));
    }
    if (static_cast<long>(c.indices.size()) != k)
      throw detail::parse_error(line_no, "expected " + std::to_string(k) + " literals, got " +
                                             std::to_string(c.indices.size()));
    try {
      inst.add_constraint(std::move(c));
    } catch (const ValidationError& e) {
      throw detail::parse_error(line_no, e.what());
    }
    ++seen;
  }
  if (!have_header) throw ValidationError("parse error: missing header line");
  if (seen != m)
    throw ValidationError("parse error: header declares " + std::to_string(m) +
                          " constraints, file has " + std::to_string(seen));
  return inst;
}

inline Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

inline std::string format_weight(double w) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), w);
  return std::string(buf, ptr);
}

inline void serialize_instance(const Instance& inst, std::ostream& out) {
  out << "p maxcsp " << inst.variables() << ' ' << inst.arity() << ' '
      << inst.constraints().size() << '\n';
  for (const Constraint& c : inst.constraints()) {
    out << "c " << format_weight(c.weight);
    for (int t = 0; t < inst.arity(); ++t) {
      const int lit = c.indices[static_cast<size_t>(t)] * c.negations[static_cast<size_t>(t)];
      out << ' ' << (lit > 0 ? "+" : "") << lit;
    }
    out << '\n';
  }
}

inline std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  serialize_instance(inst, out);
  return out.str();
}

}  // namespace cspsketch
