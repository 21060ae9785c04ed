#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "moonshine/twisted.hpp"

namespace moonshine::cli {

using OJson = nlohmann::ordered_json;

namespace detail {

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

inline OJson series_json(const PSeries& f) {
  OJson s;
  s["denom"] = f.denom;
  s["certified"] =
      f.trunc >= kNoBound ? std::string("all") : exponent_to_string(f.trunc, f.denom);
  OJson terms = OJson::array();
  for (const auto& [e, c] : f.terms) {
    OJson t;
    t["n"] = exponent_to_string(e, f.denom);
    t["value"] = c.to_string();
    terms.push_back(std::move(t));
  }
  s["terms"] = std::move(terms);
  return s;
}

inline OJson bimismatch_json(const BiMismatch& m) {
  OJson j;
  j["p"] = m.i;
  j["q"] = exponent_to_string(m.j, m.denom);
  j["lhs"] = m.lhs;
  j["rhs"] = m.rhs;
  return j;
}

inline void render_text(const OJson& v, const std::string& prefix, std::ostream& os) {
  if (v.is_object()) {
    for (const auto& [k, val] : v.items()) {
      std::string key = prefix.empty() ? k : prefix + "." + k;
      if (val.is_object() || val.is_array())
        render_text(val, key, os);
      else
        os << key << ": " << (val.is_string() ? val.get<std::string>() : val.dump())
           << "\n";
    }
  } else if (v.is_array()) {
    size_t i = 0;
    for (const auto& val : v) {
      std::string key = prefix + "[" + std::to_string(i++) + "]";
      if (val.is_object() || val.is_array())
        render_text(val, key, os);
      else
        os << key << ": " << (val.is_string() ? val.get<std::string>() : val.dump())
           << "\n";
    }
  } else {
    os << prefix << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
}

}  // namespace detail

struct Options {
  std::string catalog_path, family_path, out_path;
  std::string format = "json";
  int64_t trunc = 32;
  int64_t level = 1;
  int64_t cap = 360;
  // per-command
  std::string name, fname, override_path;
  int64_t bound = -1, maxn = 6, n = 1, k = 1, l = 0, m = 1, target = 12;
};

inline Catalog get_catalog(const Options& opt) {
  if (!opt.catalog_path.empty())
    return parse_catalog(detail::read_json_file(opt.catalog_path));
  if (const char* env = std::getenv("MOONSHINE_FORGE_CATALOG"); env && *env)
    return parse_catalog(detail::read_json_file(env));
  return default_catalog();
}

// Expands a catalog name, falling back to a series literal such as
// "q^-1 + 2*q" when the catalog has no entry of that name.
inline PSeries expand_or_literal(const Catalog& cat, const std::string& what,
                                 int64_t trunc) {
  try {
    return catalog_expand(cat, what, trunc);
  } catch (const LookupError&) {
    try {
      // Literals parse as exact polynomials certified everywhere; clamp the
      // certification to the requested truncation so every downstream window
      // (Grunsky tables, Hecke remainders, ...) stays finite.
      PSeries lit = parse_series(what);
      return lit.with_trunc(trunc * lit.denom);
    } catch (const ParseError&) {
      throw LookupError("'" + what +
                        "' is neither a catalog entry nor a series literal");
    }
  }
}

// Builds the level-`level` algebra of f(q^{1/level}) from a catalog name or
// literal, with the grid certified through scaled product bound `bound`.
inline FrickeAlgebra algebra_for(const Catalog& cat, const Options& opt, int64_t bound) {
  int64_t texp = std::max(opt.trunc, bound);
  PSeries f = expand_or_literal(cat, opt.fname, texp);
  if (opt.level > 1) f = substitute(f, CycNumber(1), 1, opt.level);
  return root_multiplicities(f, bound);
}

struct LoadedFamily {
  std::optional<ReplicableFamily> rep;
  std::optional<TraceFamily> trace;
};

inline LoadedFamily load_family(const Catalog& cat, const Options& opt) {
  LoadedFamily out;
  if (!opt.family_path.empty()) {
    nlohmann::json j = detail::read_json_file(opt.family_path);
    if (j.is_object() && (j.contains("vtable") || j.contains("mckay")))
      out.trace = parse_trace_family(j, cat);
    else
      out.rep = parse_family(j, cat, opt.trunc);
  } else if (!opt.fname.empty()) {
    ReplicableFamily fam;
    fam.period = 1;
    fam.members = {expand_or_literal(cat, opt.fname, opt.trunc)};
    out.rep = std::move(fam);
  } else {
    throw ParseError("provide --family FILE or --f NAME");
  }
  return out;
}

inline std::map<std::pair<int64_t, int64_t>, Int> load_overrides(const std::string& path,
                                                                 int64_t level) {
  std::map<std::pair<int64_t, int64_t>, Int> out;
  nlohmann::json j = detail::read_json_file(path);
  if (!j.is_array()) throw ParseError("override file must be a JSON array");
  for (const auto& je : j) {
    if (!je.is_object() || !je.contains("m") || !je.contains("n") || !je.contains("mult"))
      throw ParseError("override entries need 'm', 'n', 'mult'");
    if (!je["m"].is_number_integer()) throw ParseError("override 'm' must be an integer");
    int64_t m = je["m"].get<int64_t>();
    int64_t jj = 0;
    if (je["n"].is_number_integer()) {
      jj = je["n"].get<int64_t>() * level;
    } else if (je["n"].is_string()) {
      Rational r = parse_rational(je["n"].get<std::string>()) * level;
      if (!rat_is_integer(r))
        throw ParseError("override exponent " + je["n"].get<std::string>() +
                         " is not on the 1/" + std::to_string(level) + " lattice");
      jj = static_cast<int64_t>(rat_num(r));
    } else {
      throw ParseError("override 'n' must be an integer or rational string");
    }
    Int mult;
    if (je["mult"].is_number_integer()) {
      mult = Int(je["mult"].get<int64_t>());
    } else if (je["mult"].is_string()) {
      try {
        mult = Int(je["mult"].get<std::string>());
      } catch (const std::exception&) {
        throw ParseError("override 'mult' is not an integer: " +
                         je["mult"].get<std::string>());
      }
    } else {
      throw ParseError("override 'mult' must be an integer or integer string");
    }
    out[{m, jj}] = mult;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Command handlers.  Each fills `rep` and returns the exit code.

inline int cmd_expand(const Catalog& cat, const Options& opt, OJson& rep) {
  PSeries f = catalog_expand(cat, opt.name, opt.trunc);
  rep["name"] = opt.name;
  rep["series"] = detail::series_json(f);
  return 0;
}

inline int cmd_grunsky(const Catalog& cat, const Options& opt, OJson& rep) {
  PSeries f = expand_or_literal(cat, opt.fname, opt.trunc);
  GrunskyTable t = grunsky(f);
  rep["f"] = opt.fname;
  rep["window"] = t.window;
  rep["depth"] = t.depth;
  OJson entries = OJson::array();
  for (const auto& [key, v] : t.h) {
    OJson e;
    e["m"] = key.first;
    e["n"] = key.second;
    e["value"] = v.to_string();
    entries.push_back(std::move(e));
  }
  rep["entries"] = std::move(entries);
  return 0;
}

inline int cmd_replicable(const Catalog& cat, const Options& opt, OJson& rep) {
  int64_t bound = opt.bound > 0 ? opt.bound : 10;
  int64_t texp = std::max(opt.trunc, 2 * bound - 1);
  PSeries f = expand_or_literal(cat, opt.fname, texp);
  ReplicableReport r = is_replicable(f, bound);
  rep["f"] = opt.fname;
  rep["bound"] = r.bound;
  rep["replicable"] = r.replicable;
  if (r.witness_pair) {
    OJson w;
    w["m1"] = (*r.witness_pair)[0];
    w["n1"] = (*r.witness_pair)[1];
    w["m2"] = (*r.witness_pair)[2];
    w["n2"] = (*r.witness_pair)[3];
    w["lhs"] = r.lhs;
    w["rhs"] = r.rhs;
    rep["witness"] = std::move(w);
  }
  return r.replicable ? 0 : 1;
}

inline int cmd_extend(const Catalog& cat, const Options& opt, OJson& rep) {
  if (opt.family_path.empty()) throw ParseError("extend needs --family FILE");
  nlohmann::json j = detail::read_json_file(opt.family_path);
  ReplicableFamily seeds = parse_family(j, cat, opt.trunc);
  ExtendOutcome out = extend_family(seeds, opt.target, opt.maxn);
  rep["target"] = opt.target;
  rep["solvedThrough"] = out.solved_through;
  rep["relationsUsed"] = out.relations_used;
  rep["period"] = out.family.period;
  OJson members = OJson::array();
  for (const auto& m : out.family.members) members.push_back(detail::series_json(m));
  rep["members"] = std::move(members);
  return 0;
}

inline int cmd_roots(const Catalog& cat, const Options& opt, OJson& rep) {
  int64_t bound = opt.bound > 0 ? opt.bound : 24;
  FrickeAlgebra alg = algebra_for(cat, opt, bound);
  rep["f"] = opt.fname;
  rep["level"] = alg.level;
  rep["bound"] = alg.bound;
  OJson roots = OJson::array();
  for (const auto& [key, c] : alg.mult) {
    OJson e;
    e["m"] = key.first;
    e["n"] = exponent_to_string(key.second, alg.level);
    e["mult"] = c.str();
    roots.push_back(std::move(e));
  }
  rep["roots"] = std::move(roots);
  return 0;
}

inline int cmd_cartan(const Catalog& cat, const Options& opt, OJson& rep) {
  int64_t bound = opt.bound > 0 ? opt.bound : 12;
  FrickeAlgebra alg = algebra_for(cat, opt, bound);
  int64_t maxj = std::min(opt.maxn, bound);
  CartanBlocks cb = cartan_block(alg, maxj);
  rep["f"] = opt.fname;
  rep["level"] = cb.level;
  rep["maxDegree"] = maxj;
  OJson degrees = OJson::array(), sizes = OJson::array(), matrix = OJson::array();
  for (size_t i = 0; i < cb.degrees.size(); ++i) {
    degrees.push_back(exponent_to_string(cb.degrees[i], cb.level));
    sizes.push_back(cb.sizes[i].str());
  }
  for (size_t a = 0; a < cb.degrees.size(); ++a) {
    OJson row = OJson::array();
    for (size_t b = 0; b < cb.degrees.size(); ++b)
      row.push_back(rat_to_string(cb.entry(a, b)));
    matrix.push_back(std::move(row));
  }
  rep["degrees"] = std::move(degrees);
  rep["blockSizes"] = std::move(sizes);
  rep["cartan"] = std::move(matrix);
  return 0;
}

inline int cmd_denom_check(const Catalog& cat, const Options& opt, OJson& rep) {
  int64_t D = opt.bound > 0 ? opt.bound : 12;
  int64_t grid = std::max((D * D) / 4, D);
  FrickeAlgebra alg = algebra_for(cat, opt, grid);
  std::map<std::pair<int64_t, int64_t>, Int> overrides;
  if (!opt.override_path.empty())
    overrides = load_overrides(opt.override_path, alg.level);
  DenomReport r = denominator_verify(alg, D, overrides);
  rep["f"] = opt.fname;
  rep["level"] = r.level;
  rep["degree"] = r.degree;
  rep["comparedP"] = r.compared_p;
  rep["comparedDegree"] = exponent_to_string(r.compared_d, r.level);
  rep["ok"] = r.ok;
  if (r.mismatch) rep["mismatch"] = detail::bimismatch_json(*r.mismatch);
  return r.ok ? 0 : 1;
}

inline int cmd_compat_check(const Catalog& cat, const Options& opt, OJson& rep) {
  int64_t bound = opt.bound > 0 ? opt.bound : 24;
  FrickeAlgebra alg = algebra_for(cat, opt, bound);
  CompatReport r = compat_predicate(alg, opt.n);
  rep["f"] = opt.fname;
  rep["algebraLevel"] = alg.level;
  rep["testedLevel"] = r.level;
  rep["bound"] = alg.bound;
  rep["compatible"] = r.compatible;
  if (!r.compatible) {
    OJson v;
    v["firstRoot"] = OJson::array({r.first_root[0], r.first_root[1]});
    v["secondRoot"] = OJson::array({r.second_root[0], r.second_root[1]});
    v["lhs"] = r.lhs;
    v["rhs"] = r.rhs;
    rep["violation"] = std::move(v);
  }
  return r.compatible ? 0 : 1;
}

inline int cmd_witness_set(const Options& opt, OJson& rep) {
  int64_t bound = opt.bound > 0 ? opt.bound : 200;
  std::vector<int64_t> exc = witness_exceptional_set(bound);
  rep["bound"] = bound;
  rep["exceptional"] = exc;
  OJson sample = OJson::array();
  for (int64_t n = 1; n <= std::min<int64_t>(bound, 12); ++n)
    if (auto w = witness(n)) {
      OJson e;
      e["n"] = n;
      e["a"] = (*w)[0];
      e["b"] = (*w)[1];
      e["c"] = (*w)[2];
      e["d"] = (*w)[3];
      sample.push_back(std::move(e));
    }
  rep["witnessesThrough12"] = std::move(sample);
  return 0;
}

inline int cmd_hecke(const Catalog& cat, const Options& opt, OJson& rep) {
  LoadedFamily fam = load_family(cat, opt);
  rep["n"] = opt.n;
  if (fam.trace) {
    int64_t window = opt.bound > 0 ? opt.bound : fam.trace->nmax / std::max<int64_t>(opt.n, 1);
    PSeries s = equivariant_hecke(*fam.trace, opt.n, opt.k, opt.l, opt.m, window);
    rep["kind"] = "equivariant";
    rep["k"] = opt.k;
    rep["l"] = opt.l;
    rep["m"] = opt.m;
    rep["series"] = detail::series_json(s);
  } else {
    PSeries s = hecke_classical(*fam.rep, opt.n);
    rep["kind"] = "classical";
    rep["series"] = detail::series_json(s);
  }
  return 0;
}

inline int cmd_hecke_monic(const Catalog& cat, const Options& opt, OJson& rep) {
  LoadedFamily fam = load_family(cat, opt);
  HeckeMonicReport r = fam.trace ? hecke_monic_report(*fam.trace, opt.maxn)
                                 : is_hecke_monic(*fam.rep, opt.maxn);
  rep["kind"] = fam.trace ? "equivariant" : "classical";
  rep["maxn"] = opt.maxn;
  rep["allPass"] = r.all_pass;
  OJson rows = OJson::array();
  for (const auto& row : r.rows) {
    OJson e;
    e["n"] = row.n;
    e["monic"] = row.monic;
    e["polynomial"] = row.polynomial;
    e["window"] = exponent_to_string(row.window_num, row.window_den);
    if (!row.detail.empty()) e["detail"] = row.detail;
    rows.push_back(std::move(e));
  }
  rep["rows"] = std::move(rows);
  return r.all_pass ? 0 : 1;
}

inline int cmd_corollary_check(const Catalog& cat, const Options& opt, OJson& rep) {
  LoadedFamily fam = load_family(cat, opt);
  if (!fam.trace) throw ParseError("corollary-check needs a trace-family file");
  int64_t D = opt.target;
  GradedCheckReport r = corollary_check(*fam.trace, D);
  rep["degree"] = r.degree;
  rep["level"] = r.level;
  rep["ok"] = r.ok;
  if (r.mismatch) rep["mismatch"] = detail::bimismatch_json(*r.mismatch);
  return r.ok ? 0 : 1;
}

inline int cmd_theorem_check(const Catalog& cat, const Options& opt, OJson& rep) {
  LoadedFamily fam = load_family(cat, opt);
  if (!fam.trace) throw ParseError("theorem-check needs a trace-family file");
  int64_t D = opt.target;
  GradedCheckReport r = theorem_check(*fam.trace, D);
  rep["degree"] = r.degree;
  rep["level"] = r.level;
  rep["ok"] = r.ok;
  if (r.mismatch) rep["mismatch"] = detail::bimismatch_json(*r.mismatch);
  return r.ok ? 0 : 1;
}

inline int cmd_classify(const Catalog& cat, const Options& opt, OJson& rep) {
  PSeries f = expand_or_literal(cat, opt.fname, opt.trunc);
  ClassifyReport r = classify_degenerate(f);
  rep["f"] = opt.fname;
  rep["class"] = r.trigonometric ? "trigonometric_type" : "candidate_nondegenerate";
  rep["level"] = r.level;
  if (!r.head.empty()) rep["head"] = r.head;
  if (!r.tail.empty()) rep["tail"] = r.tail;
  if (!r.reason.empty()) rep["reason"] = r.reason;
  return 0;
}

// ---------------------------------------------------------------------------

inline void emit(const OJson& rep, const Options& opt, std::ostream& out) {
  std::string payload;
  if (opt.format == "json") {
    payload = rep.dump(2);
    payload += "\n";
  } else {
    std::ostringstream os;
    detail::render_text(rep, "", os);
    payload = os.str();
  }
  if (!opt.out_path.empty()) {
    std::ofstream f(opt.out_path, std::ios::binary);
    if (!f) throw ParseError("cannot write output file: " + opt.out_path);
    f << payload;
  } else {
    out << payload;
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  Options opt;
  CLI::App app{"moonshine-forge: exact q-series, root multiplicities, and "
               "denominator-identity verification"};
  app.require_subcommand(1);
  app.add_option("--catalog", opt.catalog_path, "catalog JSON path");
  app.add_option("--family", opt.family_path, "family JSON path");
  app.add_option("--trunc", opt.trunc, "series truncation order")
      ->check(CLI::Range(int64_t{1}, int64_t{1} << 40));
  app.add_option("--level", opt.level, "rescale to q^{1/level} before grading")
      ->check(CLI::Range(int64_t{1}, int64_t{1} << 20));
  app.add_option("--modulus-cap", opt.cap, "largest allowed cyclotomic modulus")
      ->check(CLI::Range(int64_t{1}, int64_t{1} << 20));
  app.add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--out", opt.out_path, "write the report to this file");

  auto add_common = [&](CLI::App* sub) {
    sub->fallthrough();
    return sub;
  };
  auto positive = CLI::Range(int64_t{1}, int64_t{1} << 40);
  auto* c_expand = add_common(app.add_subcommand("expand", "expand a catalog entry"));
  c_expand->add_option("--name", opt.name, "catalog entry name")->required();
  auto* c_grunsky =
      add_common(app.add_subcommand("grunsky", "two-variable log coefficient table"));
  c_grunsky->add_option("--f", opt.fname, "series name or literal")->required();
  auto* c_repl = add_common(
      app.add_subcommand("replicable", "check H(m,n) depends only on (gcd, product)"));
  c_repl->add_option("--f", opt.fname, "series name or literal")->required();
  c_repl->add_option("--bound", opt.bound, "index bound")->check(positive);
  auto* c_extend = add_common(
      app.add_subcommand("extend", "solve for deeper family coefficients"));
  c_extend->add_option("--target", opt.target, "target coefficient depth")
      ->required()
      ->check(positive);
  c_extend->add_option("--maxn", opt.maxn, "largest Hecke index used")->check(positive);
  auto* c_roots =
      add_common(app.add_subcommand("roots", "root multiplicity grid via Moebius"));
  c_roots->add_option("--f", opt.fname, "series name or literal")->required();
  c_roots->add_option("--bound", opt.bound, "scaled product bound")->check(positive);
  auto* c_cartan = add_common(app.add_subcommand("cartan", "Cartan block data"));
  c_cartan->add_option("--f", opt.fname, "series name or literal")->required();
  c_cartan->add_option("--bound", opt.bound, "scaled product bound")->check(positive);
  c_cartan->add_option("--maxn", opt.maxn, "largest simple-root degree")->check(positive);
  auto* c_denom = add_common(
      app.add_subcommand("denom-check", "denominator-formula re-expansion check"));
  c_denom->add_option("--f", opt.fname, "series name or literal")->required();
  c_denom->add_option("--bound", opt.bound, "total comparison degree")->check(positive);
  c_denom->add_option("--mult-override", opt.override_path,
                      "JSON overrides for grid multiplicities");
  auto* c_compat = add_common(
      app.add_subcommand("compat-check", "level-N grading compatibility"));
  c_compat->add_option("--f", opt.fname, "series name or literal")->required();
  c_compat->add_option("--bound", opt.bound, "scaled product bound")->check(positive);
  c_compat->add_option("--n", opt.n, "level of the identification classes")
      ->required()
      ->check(positive);
  auto* c_witness =
      add_common(app.add_subcommand("witness-set", "product-sum witness exceptions"));
  c_witness->add_option("--bound", opt.bound, "largest n tested")->check(positive);
  auto* c_hecke = add_common(app.add_subcommand("hecke", "Hecke sum S_n"));
  c_hecke->add_option("--f", opt.fname, "series name or literal");
  c_hecke->add_option("--n", opt.n, "Hecke index")->required()->check(positive);
  c_hecke->add_option("--k", opt.k, "trace sector k");
  c_hecke->add_option("--l", opt.l, "trace sector l");
  c_hecke->add_option("--m", opt.m, "group-element power m");
  c_hecke->add_option("--bound", opt.bound, "output window (scaled)")->check(positive);
  auto* c_monic = add_common(
      app.add_subcommand("hecke-monic", "S_n monic-polynomial verification"));
  c_monic->add_option("--f", opt.fname, "series name or literal");
  c_monic->add_option("--maxn", opt.maxn, "largest Hecke index checked")->check(positive);
  auto* c_cor = add_common(app.add_subcommand(
      "corollary-check", "level-1 graded trace identity verification"));
  c_cor->add_option("--target", opt.target, "total comparison degree")->check(positive);
  auto* c_thm = add_common(app.add_subcommand(
      "theorem-check", "twisted denominator identity verification"));
  c_thm->add_option("--target", opt.target, "total comparison degree")->check(positive);
  auto* c_classify =
      add_common(app.add_subcommand("classify", "degenerate-series dichotomy"));
  c_classify->add_option("--f", opt.fname, "series name or literal")->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  if (opt.cap < opt.level) {
    err << "usage error: --modulus-cap must be at least --level\n";
    return 2;
  }
  set_modulus_cap(opt.cap);

  std::string command;
  for (const auto* sub :
       {c_expand, c_grunsky, c_repl, c_extend, c_roots, c_cartan, c_denom, c_compat,
        c_witness, c_hecke, c_monic, c_cor, c_thm, c_classify})
    if (sub->parsed()) command = sub->get_name();

  OJson rep;
  rep["command"] = command;
  int code = 0;
  try {
    if (command == "witness-set") {
      code = cmd_witness_set(opt, rep);
    } else {
      Catalog cat = get_catalog(opt);
      if (command == "expand")
        code = cmd_expand(cat, opt, rep);
      else if (command == "grunsky")
        code = cmd_grunsky(cat, opt, rep);
      else if (command == "replicable")
        code = cmd_replicable(cat, opt, rep);
      else if (command == "extend")
        code = cmd_extend(cat, opt, rep);
      else if (command == "roots")
        code = cmd_roots(cat, opt, rep);
      else if (command == "cartan")
        code = cmd_cartan(cat, opt, rep);
      else if (command == "denom-check")
        code = cmd_denom_check(cat, opt, rep);
      else if (command == "compat-check")
        code = cmd_compat_check(cat, opt, rep);
      else if (command == "hecke")
        code = cmd_hecke(cat, opt, rep);
      else if (command == "hecke-monic")
        code = cmd_hecke_monic(cat, opt, rep);
      else if (command == "corollary-check")
        code = cmd_corollary_check(cat, opt, rep);
      else if (command == "theorem-check")
        code = cmd_theorem_check(cat, opt, rep);
      else if (command == "classify")
        code = cmd_classify(cat, opt, rep);
    }
  } catch (const ParseError& e) {
    rep["error"] = e.kind();
    rep["reason"] = e.what();
    emit(rep, opt, out);
    return 2;
  } catch (const LookupError& e) {
    rep["error"] = e.kind();
    rep["reason"] = e.what();
    emit(rep, opt, out);
    return 2;
  } catch (const EngineError& e) {
    rep["error"] = e.kind();
    rep["reason"] = e.what();
    emit(rep, opt, out);
    return 1;
  }
  emit(rep, opt, out);
  return code;
}

}  // namespace moonshine::cli
