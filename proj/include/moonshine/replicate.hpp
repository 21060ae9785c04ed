#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "moonshine/biseries.hpp"
#include "moonshine/linexpr.hpp"
#include "moonshine/modcatalog.hpp"
#include "moonshine/series.hpp"

namespace moonshine {

// ---------------------------------------------------------------------------
// Grunsky coefficients and replicability.

struct GrunskyTable {
  int64_t depth = 0;  // all (m, n) with m, n >= 1 and m + n <= window are present
  int64_t window = 0;
  std::map<std::pair<int64_t, int64_t>, CycNumber> h;

  CycNumber at(int64_t m, int64_t n) const {
    if (m < 1 || n < 1 || m + n > window)
      throw TruncationError("Grunsky coefficient (" + std::to_string(m) + ", " +
                            std::to_string(n) + ") lies beyond the certified window");
    auto it = h.find({m, n});
    return it == h.end() ? CycNumber(0) : it->second;
  }
};

// Requires f = q^-1 + O(1) with integer exponents, certified to f.trunc.
// H_{m,n} = -[p^m q^n] log( p(f(p) - f(q)) / (p - q^{... }) restricted to the
// two-variable unit factor ), certified for m + n <= trunc + 1.
inline GrunskyTable grunsky(const PSeries& fin) {
  PSeries f = fin.normalized();
  if (f.denom != 1)
    throw DomainError("Grunsky table needs integer exponents; got denominator " +
                      std::to_string(f.denom));
  auto lg = bi_log1p(telescoped_tail(f));
  GrunskyTable t;
  t.window = f.trunc + 1;
  t.depth = t.window / 2;
  for (const auto& [key, c] : lg.terms)
    if (key.second >= 1) t.h.emplace(key, -c);
  return t;
}

struct ReplicableReport {
  bool replicable = true;
  int64_t bound = 0;
  // First violation, when present: H_{m1,n1} != H_{m2,n2} despite equal keys.
  std::optional<std::array<int64_t, 4>> witness_pair;
  std::string lhs, rhs;
};

// Checks H_{m,n} depends only on (gcd(m,n), m*n) for all m, n <= bound.
inline ReplicableReport is_replicable(const PSeries& f, int64_t bound) {
  PSeries fn = f.normalized();
  if (fn.trunc < 2 * bound - 1)
    throw TruncationError("replicability to bound " + std::to_string(bound) +
                          " needs coefficients through q^" + std::to_string(2 * bound - 1));
  GrunskyTable t = grunsky(fn);
  ReplicableReport rep;
  rep.bound = bound;
  std::map<std::pair<int64_t, int64_t>, std::pair<std::pair<int64_t, int64_t>, CycNumber>> seen;
  for (int64_t m = 1; m <= bound; ++m)
    for (int64_t n = m; n <= bound; ++n) {
      CycNumber v = t.at(m, n);
      auto key = std::make_pair(std::gcd(m, n), m * n);
      auto it = seen.find(key);
      if (it == seen.end()) {
        seen.emplace(key, std::make_pair(std::make_pair(m, n), v));
      } else if (!(it->second.second == v)) {
        rep.replicable = false;
        rep.witness_pair = {it->second.first.first, it->second.first.second, m, n};
        rep.lhs = it->second.second.to_string();
        rep.rhs = v.to_string();
        return rep;
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Faber fit: eliminate the principal part of g by a polynomial in f.

template <class C>
struct FaberFit {
  std::vector<C> coeffs;  // b_0 ... b_n, so g = sum b_d f^d + remainder
  Series<C> remainder;
  bool monic = false;
};

template <class C>
FaberFit<C> faber_fit(const Series<C>& gin, const Series<C>& fin) {
  auto [g, f] = unify_denoms(gin, fin);
  if (f.terms.empty() || f.order() >= 0)
    throw DomainError("Faber fit needs a basis series with a pole");
  int64_t e = -f.order();
  const C u = f.leading_coeff();
  const C uinv = coeff_inverse(u);
  int64_t n = 0;
  if (!g.terms.empty() && g.order() < 0) {
    if ((-g.order()) % e != 0)
      throw DomainError("Faber fit: pole order " + std::to_string(-g.order()) +
                        " is not a multiple of the basis pole order " + std::to_string(e));
    n = (-g.order()) / e;
  }
  std::vector<Series<C>> pw(n + 1);
  pw[0] = Series<C>::one().rescaled(f.denom);
  for (int64_t d = 1; d <= n; ++d) pw[d] = pw[d - 1] * f;
  FaberFit<C> fit;
  fit.coeffs.assign(n + 1, C(CycNumber(0)));
  Series<C> r = g;
  std::vector<C> uinvs(n + 1, C(CycNumber(1)));
  for (int64_t d = 1; d <= n; ++d) uinvs[d] = uinvs[d - 1] * uinv;
  for (int64_t d = n; d >= 0; --d) {
    C gamma = r.coeff_at(-d * e, f.denom);
    if (coeff_is_zero(gamma)) continue;
    C b = gamma * uinvs[d];
    fit.coeffs[d] = b;
    Series<C> scaledpw;
    scaledpw.denom = pw[d].denom;
    scaledpw.trunc = pw[d].trunc;
    for (const auto& [ee, cc] : pw[d].terms) {
      C v = cc * b;
      if (!coeff_is_zero(v)) scaledpw.terms.emplace(ee, v);
    }
    r = r - scaledpw;
  }
  fit.remainder = r;
  fit.monic = n >= 1 && coeff_is_zero(fit.coeffs[n] - C(CycNumber(1)));
  return fit;
}

// ---------------------------------------------------------------------------
// Replicable families and Hecke sums.

struct ReplicableFamily {
  int64_t period = 1;
  std::vector<PSeries> members;  // members[a-1] = f^{(a)}, cyclically extended

  const PSeries& member(int64_t a) const {
    if (a < 1) throw DomainError("family member index must be positive");
    return members[static_cast<size_t>((a - 1) % period)];
  }
};

// S_n = sum_{ad=n} sum_{0<=b<d} f^{(a)}(zeta_d^b q^{a/d}).  For a replicable
// family this is the monic normalization: S_n = q^{-n} + O(q).
template <class C>
Series<C> hecke_sum(int64_t period, const std::vector<Series<C>>& members, int64_t n) {
  if (n < 1) throw DomainError("Hecke index must be positive");
  Series<C> total;
  for (int64_t a = 1; a <= n; ++a) {
    if (n % a != 0) continue;
    int64_t d = n / a;
    const Series<C>& fa = members[static_cast<size_t>((a - 1) % period)];
    for (int64_t b = 0; b < d; ++b)
      total = total + substitute(fa, zeta(d, b), a, d);
  }
  Series<C> norm = total.normalized();
  if (norm.denom != members[0].denom)
    throw DomainError("Hecke sum left fractional exponents uncancelled");
  return norm;
}

inline PSeries hecke_classical(const ReplicableFamily& fam, int64_t n) {
  return hecke_sum<CycNumber>(fam.period, fam.members, n);
}

struct HeckeMonicRow {
  int64_t n = 0;
  bool monic = false;
  bool polynomial = false;  // remainder vanishes on its certified window
  int64_t window_num = 0, window_den = 1;
  std::string detail;
};

struct HeckeMonicReport {
  bool all_pass = true;
  std::vector<HeckeMonicRow> rows;
};

// For each n <= maxn checks that S_n is a monic degree-n polynomial in f.
inline HeckeMonicReport is_hecke_monic(const ReplicableFamily& fam, int64_t maxn) {
  HeckeMonicReport rep;
  for (int64_t n = 1; n <= maxn; ++n) {
    PSeries s = hecke_classical(fam, n);
    auto fit = faber_fit(s, fam.member(1));
    HeckeMonicRow row;
    row.n = n;
    row.monic = fit.monic;
    row.polynomial = fit.remainder.is_zero();
    row.window_num = fit.remainder.trunc;
    row.window_den = fit.remainder.denom;
    if (!row.polynomial && !fit.remainder.terms.empty()) {
      auto lead = *fit.remainder.terms.begin();
      row.detail = "remainder " + lead.second.to_string() + " * q^" +
                   exponent_to_string(lead.first, fit.remainder.denom);
    }
    if (!row.monic)
      row.detail += std::string(row.detail.empty() ? "" : "; ") + "leading fit coefficient " +
                    (fit.coeffs.empty() ? std::string("0") : fit.coeffs.back().to_string());
    rep.all_pass = rep.all_pass && row.monic && row.polynomial;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Coefficient recovery: extend truncated family members so that every Hecke
// sum S_n (n <= maxn) is a monic polynomial in f^{(1)}.

namespace detail {

inline int64_t ext_var_id(int64_t member, int64_t e) { return member * 1000000 + e; }

}  // namespace detail

struct ExtendOutcome {
  ReplicableFamily family;
  int64_t solved_through = 0;
  int64_t relations_used = 0;
};

inline ExtendOutcome extend_family(const ReplicableFamily& seeds, int64_t target_depth,
                                   int64_t maxn = 6) {
  const int64_t period = seeds.period;
  if (period < 1 || seeds.members.size() < static_cast<size_t>(period))
    throw DomainError("family must provide one member per period class");
  int64_t seed_depth = kNoBound;
  std::vector<PSeries> base;
  for (const auto& m : seeds.members) {
    PSeries f = m.normalized();
    if (f.denom != 1 || f.is_zero() || f.order() != -1 ||
        !(f.leading_coeff() == CycNumber(1)))
      throw DomainError("family members must be normalized series q^-1 + O(1)");
    seed_depth = std::min(seed_depth, f.trunc);
    base.push_back(std::move(f));
  }
  if (seed_depth >= target_depth) {
    // Already complete: extending changes nothing.
    ExtendOutcome out;
    out.family.period = period;
    out.family.members = std::move(base);
    out.solved_through = seed_depth;
    out.relations_used = 0;
    return out;
  }
  const int64_t scratch = 2 * target_depth;
  std::map<int64_t, CycNumber> solved;
  auto unknown_or = [&](int64_t s, int64_t e) -> LinExpr {
    auto it = solved.find(detail::ext_var_id(s, e));
    if (it != solved.end()) return LinExpr(it->second);
    return LinExpr::variable(detail::ext_var_id(s, e));
  };
  int64_t relations = 0;
  bool done = false;
  for (int64_t pass = 0; pass < 1 + period * (scratch + 2) && !done; ++pass) {
    // Assemble the symbolic members with everything solved so far folded in.
    std::vector<Series<LinExpr>> sym(period);
    for (int64_t s = 1; s <= period; ++s) {
      Series<LinExpr> m;
      m.denom = 1;
      m.trunc = scratch;
      const PSeries& seed = base[s - 1];
      for (const auto& [e, c] : seed.terms)
        if (e <= seed.trunc) m.terms.emplace(e, LinExpr(c));
      for (int64_t e = seed.trunc + 1; e <= scratch; ++e) {
        LinExpr x = unknown_or(s, e);
        if (!coeff_is_zero(x)) m.terms.emplace(e, x);
      }
      sym[s - 1] = std::move(m);
    }
    auto targets_solved = [&] {
      for (int64_t s = 1; s <= period; ++s)
        for (int64_t e = base[s - 1].trunc + 1; e <= target_depth; ++e)
          if (!solved.count(detail::ext_var_id(s, e))) return false;
      return true;
    };
    if (targets_solved()) {
      done = true;
      break;
    }
    // Complete replicability: every replicate is itself replicable, so the
    // Hecke sums of each shifted family {f^{(shift*k)}}_k must be monic
    // polynomials in their own base member f^{(shift)}.
    bool progress = false;
    for (int64_t n = 2; n <= maxn && !progress; ++n) {
      for (int64_t shift = 1; shift <= period && !progress; ++shift) {
        std::vector<Series<LinExpr>> shifted(period);
        for (int64_t k = 1; k <= period; ++k)
          shifted[k - 1] = sym[static_cast<size_t>((shift * k - 1) % period)];
        Series<LinExpr> s_n = hecke_sum<LinExpr>(period, shifted, n);
        auto fit = faber_fit(s_n, shifted[0]);
        // Relations: every remainder coefficient is zero, and the fit is monic.
        std::vector<std::pair<int64_t, LinExpr>> rel;
        if (!fit.coeffs.empty())
          rel.emplace_back(-n, fit.coeffs.back() - LinExpr(CycNumber(1)));
        for (const auto& [e, c] : fit.remainder.terms) rel.emplace_back(e, c);
        for (const auto& [e, R] : rel) {
          if (R.poisoned) continue;
          if (R.lin.empty()) {
            if (!R.c0.is_zero())
              throw InconsistentError(
                  "Hecke sum S_" + std::to_string(n) + " of the shift-" +
                  std::to_string(shift) + " family forces the nonzero constant " +
                  R.c0.to_string() + " at exponent " + std::to_string(e));
            continue;
          }
          if (R.lin.size() == 1) {
            auto [v, beta] = *R.lin.begin();
            solved[v] = -(R.c0 / beta);
            ++relations;
            progress = true;
            break;
          }
        }
      }
    }
    if (!progress && !targets_solved()) {
      for (int64_t s = 1; s <= period; ++s)
        for (int64_t e = base[s - 1].trunc + 1; e <= target_depth; ++e)
          if (!solved.count(detail::ext_var_id(s, e)))
            throw UnderdeterminedError("no relation determines coefficient " +
                                       std::to_string(e) + " of member " + std::to_string(s) +
                                       " with Hecke sums up to n = " + std::to_string(maxn));
    }
  }
  ExtendOutcome out;
  out.relations_used = relations;
  out.solved_through = target_depth;
  out.family.period = period;
  for (int64_t s = 1; s <= period; ++s) {
    PSeries f = base[s - 1];
    PSeries ext;
    ext.denom = 1;
    ext.trunc = target_depth;
    for (const auto& [e, c] : f.terms)
      if (e <= target_depth) ext.terms.emplace(e, c);
    for (int64_t e = f.trunc + 1; e <= target_depth; ++e) {
      CycNumber v = solved.at(detail::ext_var_id(s, e));
      if (!v.is_zero()) ext.terms.emplace(e, v);
    }
    out.family.members.push_back(std::move(ext));
  }
  for (int64_t shift = 1; shift <= period; ++shift) {
    ReplicableFamily rotated;
    rotated.period = period;
    for (int64_t k = 1; k <= period; ++k)
      rotated.members.push_back(
          out.family.members[static_cast<size_t>((shift * k - 1) % period)]);
    auto verify = is_hecke_monic(rotated, maxn);
    if (!verify.all_pass)
      throw InconsistentError(
          "extended family fails the Hecke-monic verification for shift " +
          std::to_string(shift) + " at n = " + std::to_string([&] {
            for (const auto& r : verify.rows)
              if (!r.monic || !r.polynomial) return r.n;
            return int64_t(0);
          }()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Degenerate (trigonometric) forms.

struct ClassifyReport {
  bool trigonometric = false;
  int64_t level = 1;
  std::string head;    // a * q^{-1/N}
  std::string tail;    // c * q^{1/N} or empty
  std::string reason;  // why the series is not trigonometric
};

// f is trigonometric exactly when f = a q^{-1/N} + c q^{1/N} with a a root of
// unity and c zero or a root of unity.  Inspection is over the certified
// window; the window must contain q^{1/N}.
inline ClassifyReport classify_degenerate(const PSeries& fin) {
  PSeries f = fin.normalized();
  ClassifyReport rep;
  if (f.is_zero()) {
    rep.reason = "zero series";
    return rep;
  }
  if (f.order() != -1) {
    rep.reason = "leading exponent " + exponent_to_string(f.order(), f.denom) +
                 " is not of the form -1/N";
    return rep;
  }
  if (f.trunc < 1)
    throw TruncationError("classification needs the window to reach q^" +
                          exponent_to_string(1, f.denom));
  rep.level = f.denom;
  if (f.terms.size() > 2) {
    auto it = std::next(f.terms.begin(), 2);
    rep.reason = "extra term at exponent " + exponent_to_string(it->first, f.denom);
    return rep;
  }
  const CycNumber& a = f.leading_coeff();
  if (rou_order(a) == 0) {
    rep.reason = "leading coefficient " + a.to_string() + " is not a root of unity";
    return rep;
  }
  rep.head = "(" + a.to_string() + ")*q^" + exponent_to_string(-1, f.denom);
  if (f.terms.size() == 2) {
    auto second = *std::next(f.terms.begin());
    if (second.first != 1) {
      rep.reason = "second term at exponent " + exponent_to_string(second.first, f.denom) +
                   " is not q^" + exponent_to_string(1, f.denom);
      return rep;
    }
    if (rou_order(second.second) == 0) {
      rep.reason = "coefficient " + second.second.to_string() + " of q^" +
                   exponent_to_string(1, f.denom) + " is not a root of unity";
      return rep;
    }
    rep.tail = "(" + second.second.to_string() + ")*q^" + exponent_to_string(1, f.denom);
  }
  rep.trigonometric = true;
  return rep;
}

// ---------------------------------------------------------------------------
// Family JSON.

inline ReplicableFamily parse_family(const nlohmann::json& j, const Catalog& cat,
                                     int64_t trunc) {
  if (!j.is_object() || !j.contains("period") || !j.contains("members"))
    throw ParseError("family JSON must be an object with 'period' and 'members'");
  if (!j["period"].is_number_integer() || j["period"].get<int64_t>() < 1)
    throw ParseError("family 'period' must be a positive integer");
  ReplicableFamily fam;
  fam.period = j["period"].get<int64_t>();
  int64_t depth = trunc;
  if (j.contains("seedDepth")) {
    if (!j["seedDepth"].is_number_integer() || j["seedDepth"].get<int64_t>() < 1)
      throw ParseError("family 'seedDepth' must be a positive integer");
    depth = j["seedDepth"].get<int64_t>();
  }
  const auto& members = j["members"];
  if (!members.is_object()) throw ParseError("family 'members' must be an object");
  for (int64_t s = 1; s <= fam.period; ++s) {
    std::string key = std::to_string(s);
    if (!members.contains(key))
      throw ParseError("family members must include every index 1.." +
                       std::to_string(fam.period) + "; missing '" + key + "'");
    const auto& jm = members[key];
    if (jm.is_string()) {
      fam.members.push_back(catalog_expand(cat, jm.get<std::string>(), depth));
    } else if (jm.is_object() && jm.contains("coeffs") && jm["coeffs"].is_array()) {
      PSeries f;
      f.denom = 1;
      f.trunc = depth;
      f.add_term(-1, CycNumber(1));
      int64_t e = 1;
      for (const auto& v : jm["coeffs"]) {
        if (!v.is_string()) throw ParseError("family inline coeffs must be strings");
        f.add_term(e, parse_cyc(v.get<std::string>()));
        ++e;
      }
      if (e - 1 < depth)
        throw ParseError("family member " + key + " lists " + std::to_string(e - 1) +
                         " coefficients but seedDepth is " + std::to_string(depth));
      fam.members.push_back(std::move(f));
    } else {
      throw ParseError("family member '" + key +
                       "' must be a catalog name or an object with 'coeffs'");
    }
  }
  return fam;
}

}  // namespace moonshine
