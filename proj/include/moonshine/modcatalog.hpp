#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "moonshine/series.hpp"

namespace moonshine {

// prod_{n>=1} (1 - q^{t n}), certified through q^trunc.
inline PSeries eta_factor(int64_t t, int64_t trunc) {
  PSeries p = PSeries::one().with_trunc(trunc);
  for (int64_t n = 1; t * n <= trunc; ++n) {
    PSeries f = PSeries::one();
    f.add_term(t * n, CycNumber(-1));
    p = p * f.with_trunc(trunc);
  }
  return p.with_trunc(trunc);
}

// prod_t ( q^{t r / 24} prod_n (1 - q^{t n})^{r} ) for the given (t, r) list.
// Exponents may be fractional; the result is normalized.
inline PSeries eta_quotient(const std::vector<std::pair<int64_t, int64_t>>& factors,
                            int64_t trunc) {
  int64_t shift24 = 0;
  for (auto [t, r] : factors) {
    if (t <= 0) throw DomainError("eta factor scale must be positive");
    shift24 += t * r;
  }
  int64_t extra = (shift24 < 0 ? (-shift24 + 23) / 24 : 0) + 1;
  int64_t T = trunc + extra;
  PSeries prod = PSeries::one().with_trunc(T);
  for (auto [t, r] : factors) {
    if (r == 0) continue;
    PSeries base = eta_factor(t, T);
    PSeries lg = log1p(base - PSeries::one());
    prod = prod * exp(lg.scaled(CycNumber(r)));
  }
  // Apply the q^{shift24/24} prefactor on the 1/24 lattice.
  PSeries out;
  out.denom = 24;
  out.trunc = T * 24 + shift24;
  for (const auto& [e, c] : prod.terms) out.terms.emplace(e * 24 + shift24, c);
  return out.normalized();
}

inline PSeries delta_series(int64_t trunc) {
  return eta_quotient({{1, 24}}, trunc);
}

inline PSeries e4_series(int64_t trunc) {
  PSeries e;
  e.trunc = trunc;
  e.add_term(0, CycNumber(1));
  for (int64_t n = 1; n <= trunc; ++n) {
    Int s3 = 0;
    for (int64_t d : divisors(n)) s3 += Int(d) * d * d;
    e.add_term(n, CycNumber(Rational(240 * s3)));
  }
  return e;
}

// E4^3 / Delta - 744 = q^-1 + 196884 q + ..., certified through q^trunc.
inline PSeries j_series(int64_t trunc) {
  int64_t T = trunc + 2;
  PSeries e4 = e4_series(T);
  PSeries num = e4 * e4 * e4;
  PSeries j = num * inverse(delta_series(T));
  PSeries c = PSeries::monomial(CycNumber(744), 0, 1);
  return (j - c).truncated(trunc);
}

struct CatalogEntry {
  std::string name;
  std::string builtin;  // "J", "Delta", "E4", or empty
  std::vector<std::pair<int64_t, int64_t>> eta;
  Rational constant = 0;
  std::vector<std::pair<Rational, std::string>> extra;
  std::optional<Rational> leading;  // expected leading exponent, checked
};

struct Catalog {
  std::map<std::string, CatalogEntry> entries;
  int64_t default_trunc = 32;
};

namespace detail {

struct CatalogExpander {
  const Catalog& cat;
  int64_t trunc;
  std::map<std::string, PSeries> memo;
  std::set<std::string> in_progress;

  PSeries expand(const std::string& name) {
    auto hit = memo.find(name);
    if (hit != memo.end()) return hit->second;
    auto it = cat.entries.find(name);
    if (it == cat.entries.end()) throw LookupError("no catalog entry named '" + name + "'");
    if (!in_progress.insert(name).second)
      throw DomainError("catalog entries reference each other in a cycle at '" + name + "'");
    const CatalogEntry& e = it->second;
    PSeries f;
    if (!e.builtin.empty()) {
      if (e.builtin == "J")
        f = j_series(trunc);
      else if (e.builtin == "Delta")
        f = delta_series(trunc);
      else if (e.builtin == "E4")
        f = e4_series(trunc);
      else
        throw ParseError("unknown builtin '" + e.builtin + "' in catalog entry '" + name + "'");
    } else {
      f = eta_quotient(e.eta, trunc);
    }
    if (e.constant != 0) f = f + PSeries::monomial(CycNumber(e.constant), 0, 1);
    for (const auto& [coeff, ref] : e.extra) {
      PSeries g = expand(ref);
      f = f + g.scaled(CycNumber(coeff));
    }
    in_progress.erase(name);
    if (e.leading) {
      if (f.is_zero())
        throw DomainError("catalog entry '" + name + "' expanded to zero");
      Rational got(f.order(), f.denom);
      if (got != *e.leading)
        throw DomainError("catalog entry '" + name + "' has leading exponent " +
                          rat_to_string(got) + ", expected " + rat_to_string(*e.leading));
    }
    memo.emplace(name, f);
    return f;
  }
};

}  // namespace detail

// Expands a catalog entry, certified through q^trunc (integer units).
inline PSeries catalog_expand(const Catalog& cat, const std::string& name, int64_t trunc) {
  detail::CatalogExpander ex{cat, trunc, {}, {}};
  return ex.expand(name).normalized();
}

inline Catalog default_catalog() {
  Catalog cat;
  auto put = [&](CatalogEntry e) { cat.entries.emplace(e.name, std::move(e)); };
  put({"J", "J", {}, 0, {}, Rational(-1)});
  put({"1A", "J", {}, 0, {}, Rational(-1)});
  put({"Delta", "Delta", {}, 0, {}, Rational(1)});
  put({"E4", "E4", {}, 0, {}, Rational(0)});
  put({"2B", "", {{1, 24}, {2, -24}}, 24, {}, Rational(-1)});
  put({"2Binv", "", {{2, 24}, {1, -24}}, 0, {}, Rational(1)});
  put({"2A", "", {{1, 24}, {2, -24}}, 24, {{Rational(4096), "2Binv"}}, Rational(-1)});
  put({"4A", "", {{2, 48}, {1, -24}, {4, -24}}, -24, {}, Rational(-1)});
  return cat;
}

inline Catalog parse_catalog(const nlohmann::json& j) {
  Catalog cat;
  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array())
    throw ParseError("catalog JSON must be an object with an 'entries' array");
  if (j.contains("trunc")) {
    if (!j["trunc"].is_number_integer() || j["trunc"].get<int64_t>() < 0)
      throw ParseError("catalog 'trunc' must be a nonnegative integer");
    cat.default_trunc = j["trunc"].get<int64_t>();
  }
  for (const auto& je : j["entries"]) {
    if (!je.is_object() || !je.contains("name") || !je["name"].is_string())
      throw ParseError("catalog entry must be an object with a 'name' string");
    CatalogEntry e;
    e.name = je["name"].get<std::string>();
    if (je.contains("builtin")) {
      if (!je["builtin"].is_string()) throw ParseError("catalog 'builtin' must be a string");
      e.builtin = je["builtin"].get<std::string>();
    }
    if (je.contains("eta")) {
      if (!je["eta"].is_array()) throw ParseError("catalog 'eta' must be an array of [t, r]");
      for (const auto& p : je["eta"]) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() ||
            !p[1].is_number_integer())
          throw ParseError("catalog 'eta' entries must be [t, r] integer pairs");
        e.eta.emplace_back(p[0].get<int64_t>(), p[1].get<int64_t>());
      }
    }
    if (je.contains("constant")) {
      if (je["constant"].is_number_integer())
        e.constant = Rational(je["constant"].get<int64_t>());
      else if (je["constant"].is_string())
        e.constant = parse_rational(je["constant"].get<std::string>());
      else
        throw ParseError("catalog 'constant' must be an integer or rational string");
    }
    if (je.contains("extra")) {
      if (!je["extra"].is_array())
        throw ParseError("catalog 'extra' must be an array of [coeff, name]");
      for (const auto& p : je["extra"]) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
          throw ParseError("catalog 'extra' entries must be [coeff, name] string pairs");
        e.extra.emplace_back(parse_rational(p[0].get<std::string>()),
                             p[1].get<std::string>());
      }
    }
    if (je.contains("leading")) {
      if (!je["leading"].is_string())
        throw ParseError("catalog 'leading' must be a rational string");
      e.leading = parse_rational(je["leading"].get<std::string>());
    }
    if (e.builtin.empty() && e.eta.empty() && e.extra.empty() && e.constant == 0)
      throw ParseError("catalog entry '" + e.name + "' has no content");
    if (!cat.entries.emplace(e.name, e).second)
      throw ParseError("duplicate catalog entry '" + e.name + "'");
  }
  return cat;
}

}  // namespace moonshine
