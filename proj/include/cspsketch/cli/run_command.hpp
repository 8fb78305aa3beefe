#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cspsketch/cli/report.hpp"
#include "cspsketch/cspsketch.hpp"

namespace cspsketch {

namespace cli_detail {

// thrown when --help was requested; carries the rendered text
struct HelpRequested {
  std::string text;
};

inline uint64_t env_default_seed() {
  if (const char* e = std::getenv("CSPSKETCH_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(e, &end, 10);
    if (end != e && *end == '\0') return static_cast<uint64_t>(v);
  }
  return 1;
}

// mass lists accept decimals and fractions: "0,0.45,9/20,0.1"
inline std::vector<double> parse_masses(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) throw ValidationError("empty mass entry in '" + text + "'");
    const auto slash = tok.find('/');
    char* end = nullptr;
    if (slash == std::string::npos) {
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0')
        throw ValidationError("bad mass entry '" + tok + "'");
      out.push_back(v);
    } else {
      const std::string num = tok.substr(0, slash), den = tok.substr(slash + 1);
      const double a = std::strtod(num.c_str(), &end);
      if (end == num.c_str() || *end != '\0') throw ValidationError("bad mass entry '" + tok + "'");
      const double b = std::strtod(den.c_str(), &end);
      if (end == den.c_str() || *end != '\0' || b == 0.0)
        throw ValidationError("bad mass entry '" + tok + "'");
      out.push_back(a / b);
    }
  }
  if (out.empty()) throw ValidationError("empty mass list");
  return out;
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open instance file: " + path);
  return parse_instance(in);
}

inline json assignment_json(const Assignment& a) {
  json arr = json::array();
  for (int8_t v : a.values) arr.push_back(static_cast<int>(v));
  return arr;
}

// support-2 ratio sweep used for the --csv side table
inline std::string support2_sweep_csv(const PredicateSpec& spec, int resolution) {
  std::ostringstream csv;
  csv << "masses,mu,beta,gamma,ratio\n";
  csv.precision(12);
  auto row = [&](int i, int j, double x) {
    SymmetricDist d = SymmetricDist::two_point(spec.k, i, x, j);
    const double m = mu(d);
    const double g = gamma_curve(spec, m);
    const double b = beta(spec, d, 1025).value;
    csv << '"';
    for (int w = 0; w <= spec.k; ++w) csv << (w ? " " : "") << d[w];
    csv << "\"," << m << ',' << b << ',' << g << ','
        << (g > 1e-12 ? b / g : std::numeric_limits<double>::infinity()) << '\n';
  };
  for (int i = 0; i <= spec.k; ++i) {
    row(i, i, 1.0);
    for (int j = i + 1; j <= spec.k; ++j)
      for (int step = 0; step <= resolution; ++step)
        row(i, j, static_cast<double>(step) / resolution);
  }
  return csv.str();
}

struct FamilyCase {
  PredicateSpec spec;
  ClosedForm form;
};

inline FamilyCase family_case(const std::string& family, int k) {
  PredicateSpec spec = [&] {
    if (family == "kand") return kand_predicate(k);
    if (family == "th-k-1") {
      if (k < 2) throw ValidationError("th-k-1 needs k >= 2");
      return threshold_predicate(k - 1, k);
    }
    if (family == "ex-mid") {
      if (k % 2 == 0) throw ValidationError("ex-mid needs odd k");
      return make_predicate(k, {(k + 1) / 2});
    }
    throw ValidationError("unknown family '" + family + "' (kand, th-k-1, ex-mid)");
  }();
  auto cf = closed_form_alpha(spec);
  if (!cf)
    throw UnsupportedPredicateError("no cataloged witness for " + spec.name());
  return FamilyCase{spec, *cf};
}

}  // namespace cli_detail

// Parses argv (without the program name) and executes one subcommand.
// Throws ValidationError / UnsupportedPredicateError / IoError; CLI11 parse
// errors surface as CLI::ParseError.
inline RunReport run_command(const std::vector<std::string>& args) {
  CLI::App app{"cspsketch: optimal sketching approximation ratios and bias-based streaming "
               "algorithms for symmetric Boolean CSPs"};
  app.require_subcommand(1);

  uint64_t seed = cli_detail::env_default_seed();
  unsigned threads = default_thread_count();
  std::string out_path, csv_path;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "RNG seed (default: CSPSKETCH_SEED or 1)");
    cmd->add_option("--threads", threads, "worker threads for grid scans");
    cmd->add_option("--out", out_path, "also write the JSON report to this path");
  };

  RunReport report;
  std::function<void()> action;

  // ---- alpha ----
  int a_k = 2, a_grid = 200, a_refine = 2;
  std::vector<int> a_s;
  auto* alpha_cmd = app.add_subcommand(
      "alpha", "compute the optimal sketching approximation ratio alpha(f_{S,k}): closed form "
               "when cataloged plus a numeric grid minimization of beta/gamma");
  alpha_cmd->add_option("--k", a_k, "arity")->required();
  alpha_cmd->add_option("--S", a_s, "accepted Hamming weights, comma separated")
      ->required()
      ->delimiter(',');
  alpha_cmd->add_option("--grid", a_grid, "simplex lattice resolution");
  alpha_cmd->add_option("--refine-iters", a_refine, "local refinement rounds");
  alpha_cmd->add_option("--csv", csv_path, "write a support-2 ratio sweep (masses,mu,beta,gamma,ratio)");
  add_common(alpha_cmd);
  alpha_cmd->callback([&] {
    action = [&, a_k, a_grid, a_refine] {
      const PredicateSpec spec = make_predicate(a_k, a_s);
      report.params = {{"k", a_k}, {"S", spec.accepted}, {"grid", a_grid},
                       {"refine_iters", a_refine}};
      json results;
      results["predicate"] = spec.name();
      results["rho"] = spec.rho;
      const auto cf = closed_form_alpha(spec);
      if (cf) {
        AlphaCertificate cert = verify_max_min(spec, cf->witness, cf->p_star);
        cert.method = AlphaMethod::closed_form;
        results["closed_form"] = to_json(cert);
        results["closed_form"]["alpha"] = cf->alpha;
        results["closed_form"]["family"] = cf->family;
      } else {
        results["closed_form"] = nullptr;
      }
      const AlphaCertificate numeric = alpha_numeric(spec, a_grid, a_refine, threads);
      results["numeric"] = to_json(numeric);
      results["alpha"] = cf ? cf->alpha : numeric.alpha;
      results["method"] = cf ? "closed_form" : "numeric_only";
      report.results = results;
      if (!csv_path.empty())
        write_text_file(cli_detail::support2_sweep_csv(spec, 200), csv_path);
    };
  });

  // ---- verify ----
  std::string v_family;
  int v_k = 3;
  std::vector<int> v_s;
  std::string v_witness;
  double v_pstar = -1.0;
  auto* verify_cmd = app.add_subcommand(
      "verify", "certify an alpha witness (D_N*, p*) through the max-min saddle-point vertex "
                "inequalities");
  verify_cmd->add_option("--family", v_family, "cataloged family: kand, th-k-1, ex-mid");
  verify_cmd->add_option("--k", v_k, "arity")->required();
  verify_cmd->add_option("--S", v_s, "accepted weights (with --witness)")->delimiter(',');
  verify_cmd->add_option("--witness", v_witness, "witness masses, e.g. 0,0,1,0");
  verify_cmd->add_option("--p-star", v_pstar, "witness maximizer p*");
  add_common(verify_cmd);
  verify_cmd->callback([&] {
    action = [&, v_k, v_pstar] {
      PredicateSpec spec = make_predicate(1, {1});
      SymmetricDist witness({1.0, 0.0});
      double pstar = 0.0;
      double closed_alpha = -1.0;
      std::string family = "explicit";
      if (!v_family.empty()) {
        auto fam = cli_detail::family_case(v_family, v_k);
        spec = fam.spec;
        witness = fam.form.witness;
        pstar = fam.form.p_star;
        closed_alpha = fam.form.alpha;
        family = fam.form.family;
      } else {
        if (v_s.empty() || v_witness.empty() || v_pstar < 0.0)
          throw ValidationError("verify: pass --family, or --S with --witness and --p-star");
        spec = make_predicate(v_k, v_s);
        witness = SymmetricDist(cli_detail::parse_masses(v_witness));
        pstar = v_pstar;
      }
      report.params = {{"k", spec.k}, {"S", spec.accepted}, {"family", family},
                       {"p_star", pstar}};
      AlphaCertificate cert = verify_max_min(spec, witness, pstar);
      json results = {{"predicate", spec.name()}, {"certificate", to_json(cert)},
                      {"verified", cert.verified}, {"alpha", cert.alpha}};
      if (closed_alpha >= 0.0) {
        results["closed_form_alpha"] = closed_alpha;
        results["alpha_matches_closed_form"] = std::abs(closed_alpha - cert.alpha) <= 1e-10;
      }
      report.results = results;
    };
  });

  // ---- support2 ----
  int s2_k = 3, s2_res = 400;
  std::vector<int> s2_s;
  auto* s2_cmd = app.add_subcommand(
      "support2", "search no-side witnesses supported on at most two Hamming weights and report "
                  "the max-min lower / ratio upper bounds on alpha");
  s2_cmd->add_option("--k", s2_k, "arity")->required();
  s2_cmd->add_option("--S", s2_s, "accepted weights")->required()->delimiter(',');
  s2_cmd->add_option("--resolution", s2_res, "mixing-fraction resolution");
  s2_cmd->add_option("--csv", csv_path, "write the sweep table (masses,mu,beta,gamma,ratio)");
  add_common(s2_cmd);
  s2_cmd->callback([&] {
    action = [&, s2_k, s2_res] {
      const PredicateSpec spec = make_predicate(s2_k, s2_s);
      report.params = {{"k", s2_k}, {"S", spec.accepted}, {"resolution", s2_res}};
      const Support2Result r = support2_search(spec, s2_res);
      report.results = {{"predicate", spec.name()}, {"result", to_json(r)}};
      if (!csv_path.empty())
        write_text_file(cli_detail::support2_sweep_csv(spec, std::min(s2_res, 400)), csv_path);
    };
  });

  // ---- padded-search ----
  int ps_k = 3, ps_res = 50;
  std::vector<int> ps_s;
  auto* ps_cmd = app.add_subcommand(
      "padded-search", "search padded one-wise pairs (shared padding plus zero-marginal "
                       "residuals) minimizing beta(D_N)/gamma(D_Y); these pairs certify "
                       "streaming, not just sketching, hardness");
  ps_cmd->add_option("--k", ps_k, "arity")->required();
  ps_cmd->add_option("--S", ps_s, "accepted weights")->required()->delimiter(',');
  ps_cmd->add_option("--resolution", ps_res, "simplex lattice resolution");
  add_common(ps_cmd);
  ps_cmd->callback([&] {
    action = [&, ps_k, ps_res] {
      const PredicateSpec spec = make_predicate(ps_k, ps_s);
      report.params = {{"k", ps_k}, {"S", spec.accepted}, {"resolution", ps_res}};
      const PaddedSearchResult r = padded_search(spec, ps_res, threads);
      report.results = {{"predicate", spec.name()}, {"result", to_json(r)}};
    };
  });

  // ---- padded-check ----
  int pc_k = 3;
  std::string pc_dy, pc_dn;
  auto* pc_cmd = app.add_subcommand(
      "padded-check", "decompose a candidate (D_Y, D_N) as a padded one-wise pair with maximal "
                      "padding mass, or report that none exists");
  pc_cmd->add_option("--k", pc_k, "arity")->required();
  pc_cmd->add_option("--DY", pc_dy, "yes-side masses")->required();
  pc_cmd->add_option("--DN", pc_dn, "no-side masses")->required();
  add_common(pc_cmd);
  pc_cmd->callback([&] {
    action = [&, pc_k] {
      SymmetricDist dy(cli_detail::parse_masses(pc_dy));
      SymmetricDist dn(cli_detail::parse_masses(pc_dn));
      if (dy.arity() != pc_k || dn.arity() != pc_k)
        throw ValidationError("padded-check: mass lists must have k+1 entries");
      report.params = {{"k", pc_k}, {"DY", dy.mass_vector()}, {"DN", dn.mass_vector()}};
      const auto d = padded_decompose(dy, dn);
      json results = {{"found", d.has_value()}};
      if (d) results["decomposition"] = to_json(*d);
      report.results = results;
    };
  });

  // ---- uniqueness-3and ----
  int u_grid = 200;
  auto* u_cmd = app.add_subcommand(
      "uniqueness-3and", "scan the 3AND ratio with the interpolated proxy maximizer and report "
                         "the unique minimum at (0,0,1,0) with its isolation margin");
  u_cmd->add_option("--grid", u_grid, "simplex lattice resolution");
  add_common(u_cmd);
  u_cmd->callback([&] {
    action = [&, u_grid] {
      report.params = {{"grid", u_grid}};
      report.results = to_json(uniqueness_scan_3and(u_grid, threads));
    };
  });

  // ---- gen ----
  std::string g_kind = "random-uniform", g_dist, g_instance_out;
  int g_k = 2, g_n = 10, g_m = 10;
  auto* gen_cmd = app.add_subcommand(
      "gen", "generate instances: uniform random, planted from a symmetric distribution, or the "
             "canonical instance of a distribution");
  gen_cmd->add_option("--kind", g_kind, "random-uniform | planted | canonical");
  gen_cmd->add_option("--k", g_k, "arity");
  gen_cmd->add_option("--n", g_n, "variables");
  gen_cmd->add_option("--m", g_m, "constraints");
  gen_cmd->add_option("--dist", g_dist, "masses for planted/canonical kinds");
  gen_cmd->add_option("--instance-out", g_instance_out, "write the instance text here");
  add_common(gen_cmd);
  gen_cmd->callback([&] {
    action = [&, g_k, g_n, g_m] {
      std::optional<SymmetricDist> dist;
      if (!g_dist.empty()) dist.emplace(cli_detail::parse_masses(g_dist));
      const GenKind kind = [&] {
        if (g_kind == "random-uniform") return GenKind::random_uniform;
        if (g_kind == "planted") return GenKind::planted;
        if (g_kind == "canonical") return GenKind::canonical;
        throw ValidationError("gen: unknown kind '" + g_kind + "'");
      }();
      const int k = dist ? dist->arity() : g_k;
      const Instance inst =
          generate_instance(kind, k, g_n, g_m, seed, dist ? &*dist : nullptr);
      const std::string text = serialize_instance(inst);
      if (!g_instance_out.empty()) write_text_file(text, g_instance_out);
      report.params = {{"kind", g_kind}, {"k", k}, {"n", g_n}, {"m", g_m}};
      report.results = {{"n", inst.variables()},
                        {"k", inst.arity()},
                        {"m", inst.constraints().size()},
                        {"total_weight", inst.total_weight()},
                        {"sym_dist", sym_dist(inst).mass_vector()},
                        {"instance_text", text}};
    };
  });

  // ---- solve ----
  std::string so_input;
  int so_k = 2;
  std::vector<int> so_s;
  auto* so_cmd = app.add_subcommand(
      "solve", "exhaustive exact optimum over all assignments (desk-scale oracle, n <= 24)");
  so_cmd->add_option("--input", so_input, "instance file")->required();
  so_cmd->add_option("--k", so_k, "arity")->required();
  so_cmd->add_option("--S", so_s, "accepted weights")->required()->delimiter(',');
  add_common(so_cmd);
  so_cmd->callback([&] {
    action = [&, so_k] {
      const PredicateSpec spec = make_predicate(so_k, so_s);
      const Instance inst = cli_detail::load_instance(so_input);
      report.params = {{"input", so_input}, {"k", so_k}, {"S", spec.accepted}};
      const ExactResult r = exact_value(inst, spec, threads);
      report.results = {{"value", r.value},
                        {"assignment", cli_detail::assignment_json(r.argmax)},
                        {"n", inst.variables()},
                        {"m", inst.constraints().size()}};
    };
  });

  // ---- estimate ----
  std::string e_input;
  int e_k = 2, e_amplify = 1;
  std::vector<int> e_s;
  double e_eps = 0.05;
  auto* e_cmd = app.add_subcommand(
      "estimate", "single-pass bias-based value estimation for threshold predicates: sketch the "
                  "l1 norm of the signed occurrence vector, then output alpha * gamma(bias)");
  e_cmd->add_option("--input", e_input, "instance file")->required();
  e_cmd->add_option("--k", e_k, "arity")->required();
  e_cmd->add_option("--S", e_s, "accepted weights (must be a threshold family)")
      ->required()
      ->delimiter(',');
  e_cmd->add_option("--epsilon", e_eps, "approximation slack");
  e_cmd->add_option("--amplify", e_amplify, "median over this many independent seeds");
  add_common(e_cmd);
  e_cmd->callback([&] {
    action = [&, e_k, e_eps, e_amplify] {
      const PredicateSpec spec = make_predicate(e_k, e_s);
      const Instance inst = cli_detail::load_instance(e_input);
      report.params = {{"input", e_input}, {"k", e_k}, {"S", spec.accepted},
                       {"epsilon", e_eps}, {"amplify", e_amplify}};
      if (e_amplify < 1) throw ValidationError("estimate: --amplify must be >= 1");
      std::vector<double> estimates;
      json runs = json::array();
      EstimateResult last;
      for (int r = 0; r < e_amplify; ++r) {
        last = estimate_value(inst, spec, e_eps, seed + static_cast<uint64_t>(r));
        estimates.push_back(last.value);
        runs.push_back({{"seed", seed + static_cast<uint64_t>(r)},
                        {"estimate", last.value},
                        {"bias", last.bias}});
      }
      std::sort(estimates.begin(), estimates.end());
      const double median = estimates.size() % 2 == 1
                                ? estimates[estimates.size() / 2]
                                : 0.5 * (estimates[estimates.size() / 2 - 1] +
                                         estimates[estimates.size() / 2]);
      report.results = {{"estimate", median},       {"alpha", last.alpha},
                        {"delta", last.delta},      {"sketch_rows", last.sketch_rows},
                        {"runs", runs}};
    };
  });

  // ---- round ----
  std::string r_input;
  int r_k = 2, r_samples = 1;
  std::vector<int> r_s;
  double r_pstar = -1.0;
  auto* r_cmd = app.add_subcommand(
      "round", "output an assignment: majority by diff sign, then flip each variable with the "
               "certified bias p*; expected value at least alpha * val");
  r_cmd->add_option("--input", r_input, "instance file")->required();
  r_cmd->add_option("--k", r_k, "arity")->required();
  r_cmd->add_option("--S", r_s, "accepted weights")->required()->delimiter(',');
  r_cmd->add_option("--p-star", r_pstar, "flip bias (default: cataloged certificate)");
  r_cmd->add_option("--samples", r_samples, "Monte Carlo repetitions to average");
  add_common(r_cmd);
  r_cmd->callback([&] {
    action = [&, r_k, r_pstar, r_samples] {
      const PredicateSpec spec = make_predicate(r_k, r_s);
      const Instance inst = cli_detail::load_instance(r_input);
      double pstar = r_pstar;
      if (pstar < 0.0) {
        const auto cf = closed_form_alpha(spec);
        if (!cf)
          throw UnsupportedPredicateError(
              "round: no cataloged p* for this predicate; pass --p-star");
        pstar = cf->p_star;
      }
      report.params = {{"input", r_input}, {"k", r_k}, {"S", spec.accepted},
                       {"p_star", pstar}, {"samples", r_samples}};
      if (r_samples < 1) throw ValidationError("round: --samples must be >= 1");
      const Assignment first = round_assignment(inst, spec, pstar, seed);
      double sum = 0.0, sumsq = 0.0;
      for (int s = 0; s < r_samples; ++s) {
        const Assignment a =
            s == 0 ? first : round_assignment(inst, spec, pstar, seed + static_cast<uint64_t>(s));
        const double v = eval_assignment(inst, spec, a);
        sum += v;
        sumsq += v * v;
      }
      const double mean = sum / r_samples;
      const double var = std::max(0.0, sumsq / r_samples - mean * mean);
      report.results = {{"assignment", cli_detail::assignment_json(first)},
                        {"value", eval_assignment(inst, spec, first)},
                        {"mc_mean", mean},
                        {"mc_stderr", std::sqrt(var / std::max(1, r_samples - 1))},
                        {"p_star", pstar}};
    };
  });

  // ---- sketch-l1 ----
  std::string sk_input;
  int sk_n = 16, sk_shards = 1;
  double sk_eps = 0.1;
  auto* sk_cmd = app.add_subcommand(
      "sketch-l1", "mergeable l1-norm sketch over an update stream of (index, delta) lines; "
                   "median of Cauchy projections, exact under shard merging");
  sk_cmd->add_option("--input", sk_input, "update file: lines '<index> <delta>', 1-based")
      ->required();
  sk_cmd->add_option("--n", sk_n, "vector dimension")->required();
  sk_cmd->add_option("--epsilon", sk_eps, "target relative error");
  sk_cmd->add_option("--shards", sk_shards, "split the stream, sketch shards, merge");
  add_common(sk_cmd);
  sk_cmd->callback([&] {
    action = [&, sk_n, sk_eps, sk_shards] {
      std::ifstream in(sk_input);
      if (!in) throw IoError("cannot open update file: " + sk_input);
      std::vector<std::pair<uint32_t, double>> updates;
      long index;
      double delta;
      while (in >> index >> delta) {
        if (index < 1 || index > sk_n)
          throw ValidationError("sketch-l1: index out of range in update file");
        updates.push_back({static_cast<uint32_t>(index - 1), delta});
      }
      report.params = {{"input", sk_input}, {"n", sk_n}, {"epsilon", sk_eps},
                       {"shards", sk_shards}};
      if (sk_shards < 1) throw ValidationError("sketch-l1: --shards must be >= 1");
      L1Sketch single(static_cast<uint32_t>(sk_n), sk_eps, seed);
      for (auto [i, d] : updates) single.update(i, d);
      bool bit_exact = true;
      if (sk_shards > 1) {
        L1Sketch merged(static_cast<uint32_t>(sk_n), sk_eps, seed);
        const size_t per = (updates.size() + sk_shards - 1) / sk_shards;
        for (int s = 0; s < sk_shards; ++s) {
          L1Sketch shard(static_cast<uint32_t>(sk_n), sk_eps, seed);
          const size_t lo = std::min(updates.size(), static_cast<size_t>(s) * per);
          const size_t hi = std::min(updates.size(), lo + per);
          for (size_t u = lo; u < hi; ++u) shard.update(updates[u].first, updates[u].second);
          merged.merge(shard);
        }
        bit_exact = merged.raw_accumulators() == single.raw_accumulators();
      }
      report.results = {{"estimate", single.estimate()},
                        {"rows", single.rows()},
                        {"updates", updates.size()},
                        {"merge_bit_exact", bit_exact}};
    };
  });

  // ---- table ----
  std::string t_family = "kand";
  int t_kmax = 10;
  auto* t_cmd = app.add_subcommand(
      "table", "closed-form alpha per arity for a family, as CSV (k, alpha, 2*rho, alpha/2rho)");
  t_cmd->add_option("--family", t_family, "kand | th-k-1 | ex-mid");
  t_cmd->add_option("--kmax", t_kmax, "largest arity");
  t_cmd->add_option("--csv", csv_path, "write the CSV here");
  add_common(t_cmd);
  t_cmd->callback([&] {
    action = [&, t_kmax] {
      report.params = {{"family", t_family}, {"kmax", t_kmax}};
      std::ostringstream csv;
      csv << "k,alpha,two_rho,ratio\n";
      csv.precision(12);
      if (t_kmax < 2 || t_kmax > 31) throw ValidationError("table: kmax must be in [2, 31]");
      json rows = json::array();
      for (int k = t_family == "ex-mid" ? 3 : 2; k <= t_kmax; ++k) {
        if (t_family == "th-k-1" && k % 2 == 1) continue;
        if (t_family == "ex-mid" && k % 2 == 0) continue;
        const cli_detail::FamilyCase fam = cli_detail::family_case(t_family, k);
        const double two_rho = 2.0 * fam.spec.rho;
        csv << k << ',' << fam.form.alpha << ',' << two_rho << ',' << fam.form.alpha / two_rho
            << '\n';
        rows.push_back({{"k", k},
                        {"alpha", fam.form.alpha},
                        {"two_rho", two_rho},
                        {"ratio", fam.form.alpha / two_rho}});
      }
      if (!csv_path.empty()) write_text_file(csv.str(), csv_path);
      report.results = {{"rows", rows}, {"csv", csv.str()}};
    };
  });

  std::vector<std::string> cli_args(args.rbegin(), args.rend());
  try {
    app.parse(cli_args);
  } catch (const CLI::CallForHelp&) {
    for (CLI::App* sub : app.get_subcommands())
      throw cli_detail::HelpRequested{sub->help()};
    throw cli_detail::HelpRequested{app.help()};
  }

  const auto t0 = std::chrono::steady_clock::now();
  report.command = app.get_subcommands().front()->get_name();
  report.seed = seed;
  action();
  report.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  if (!out_path.empty()) write_report(report, out_path);
  return report;
}

// main()-shaped wrapper mapping errors to the documented exit codes.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    const RunReport report = run_command(args);
    out << to_json(report).dump(2) << '\n';
    return 0;
  } catch (const cli_detail::HelpRequested& h) {
    out << h.text;
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const UnsupportedPredicateError& e) {
    err << "unsupported predicate: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return 4;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace cspsketch
