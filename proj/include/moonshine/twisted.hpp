#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "moonshine/fricke.hpp"
#include "moonshine/modcatalog.hpp"
#include "moonshine/replicate.hpp"

namespace moonshine {

// Equivariant trace table for a finite-order symmetry h of a level-N graded
// algebra.  A slot (k, rN, e, m) holds Tr(h^m) on the degree-(d, e/(dN))
// subspace for any root with p-degree d = k (mod N), q-grading in sector
// r = rN/N (mod 1), and scaled product index e = d * (e/(dN)) * N.  Distinct
// roots sharing a slot must carry equal traces; that consistency is exactly
// level-N compatibility and is enforced by the constructors.
struct TraceFamily {
  int64_t level = 1;  // N
  int64_t order = 1;  // o: traces are defined for h^m with m mod o
  int64_t nmax = -1;  // slots are certified complete for indices e <= nmax
  CycNumber zeta_h{1};
  std::map<std::array<int64_t, 4>, CycNumber> vtable;

  CycNumber value(int64_t k, int64_t rN, int64_t e, int64_t m) const {
    if (e > nmax)
      throw TruncationError("trace slot index " + std::to_string(e) +
                            " lies beyond the certified bound " + std::to_string(nmax));
    auto it = vtable.find(
        {mod_nonneg(k, level), mod_nonneg(rN, level), e, mod_nonneg(m, order)});
    return it == vtable.end() ? CycNumber(0) : it->second;
  }

  void insert_slot(int64_t k, int64_t rN, int64_t e, int64_t m, const CycNumber& v) {
    if (v.is_zero()) return;
    std::array<int64_t, 4> key{mod_nonneg(k, level), mod_nonneg(rN, level), e,
                               mod_nonneg(m, order)};
    auto [it, fresh] = vtable.emplace(key, v);
    if (!fresh && !(it->second == v))
      throw DomainError("conflicting traces " + it->second.to_string() + " and " +
                        v.to_string() + " for slot (k=" + std::to_string(key[0]) +
                        ", r=" + std::to_string(key[1]) + "/" + std::to_string(level) +
                        ", e=" + std::to_string(e) + ", m=" + std::to_string(key[3]) +
                        "); the grading is not level-" + std::to_string(level) +
                        " compatible");
  }

  // Derives zeta_h from the real-root slot and validates it.
  void finalize() {
    CycNumber lead = value(1, -1, -1, 1);
    if (rou_order(lead) == 0)
      throw DomainError("real-root trace " + lead.to_string() + " is not a root of unity");
    zeta_h = lead;
  }
};

// f_{k,l,m}(q) = sum_e ( sum_{r : k r = e/N mod 1} e^{2 pi i l r} T(k,r,e,m) ) q^{e/N},
// certified through scaled index trunc.
inline PSeries f_series(const TraceFamily& fam, int64_t k, int64_t l, int64_t m,
                        int64_t trunc) {
  if (trunc > fam.nmax)
    throw TruncationError("trace series to index " + std::to_string(trunc) +
                          " exceeds the certified bound " + std::to_string(fam.nmax));
  int64_t N = fam.level;
  int64_t kn = mod_nonneg(k, N), mn = mod_nonneg(m, fam.order);
  PSeries f;
  f.denom = N;
  f.trunc = trunc;
  for (const auto& [key, v] : fam.vtable) {
    if (key[0] != kn || key[3] != mn || key[2] > trunc) continue;
    if (mod_nonneg(kn * key[1] - key[2], N) != 0) continue;
    f.add_term(key[2], zeta(N, l * key[1]) * v);
  }
  return f;
}

// S_n f_{k,l,m} = sum_{ad=n} sum_{0<=b<d} f_{dk, al-bk, am}(zeta_d^b q^{a/d}),
// certified through scaled index trunc (in 1/N units).  Fractional exponents
// must cancel; the result is returned on the 1/N lattice.
inline PSeries equivariant_hecke(const TraceFamily& fam, int64_t n, int64_t k, int64_t l,
                                 int64_t m, int64_t trunc) {
  if (n < 1) throw DomainError("Hecke index must be positive");
  PSeries total;
  for (int64_t a = 1; a <= n; ++a) {
    if (n % a != 0) continue;
    int64_t d = n / a;
    int64_t inner = (trunc * d) / a;
    for (int64_t b = 0; b < d; ++b) {
      PSeries fb = f_series(fam, d * k, a * l - b * k, a * m, inner);
      PSeries piece = substitute(fb, zeta(d, b), a, d);
      // Terms stride by a, so certification extends to the next lattice gap.
      piece.trunc = (inner + 1) * a - 1;
      total = total + piece;
    }
  }
  PSeries norm = total.normalized();
  if (fam.level % norm.denom != 0)
    throw DomainError("equivariant Hecke sum left fractional exponents uncancelled");
  return norm.rescaled(fam.level);
}

// ---------------------------------------------------------------------------
// Constructors.

inline TraceFamily trivial_trace_family(const FrickeAlgebra& alg) {
  TraceFamily fam;
  fam.level = alg.level;
  fam.order = 1;
  fam.nmax = alg.bound;
  for (const auto& [root, c] : alg.mult)
    fam.insert_slot(root.first, root.second, root.first * root.second, 0,
                    CycNumber(Int(c)));
  fam.finalize();
  return fam;
}

// h acts on the degree-(a, j/N) subspace by lambda^a mu^j; both twists must
// have order dividing N for the sectors to be well-defined.
inline TraceFamily inner_twisted_family(const FrickeAlgebra& alg, const CycNumber& lambda,
                                        const CycNumber& mu) {
  int64_t ol = rou_order(lambda), om = rou_order(mu);
  if (ol == 0 || om == 0)
    throw DomainError("inner twist parameters must be roots of unity");
  if (!(lambda.pow(alg.level) == CycNumber(1)) || !(mu.pow(alg.level) == CycNumber(1)))
    throw DomainError("inner twist parameters must have order dividing the level");
  TraceFamily fam;
  fam.level = alg.level;
  fam.order = lcm64(ol, om);
  fam.nmax = alg.bound;
  for (int64_t m = 0; m < fam.order; ++m)
    for (const auto& [root, c] : alg.mult) {
      CycNumber v = lambda.pow(m * root.first) * mu.pow(m * root.second) * CycNumber(Int(c));
      fam.insert_slot(root.first, root.second, root.first * root.second, m, v);
    }
  fam.finalize();
  return fam;
}

// Level-1 family from an order-o cycle of catalog entries: names[m] expands
// to the trace series of h^m, certified through q^trunc.
inline TraceFamily from_mckay_thompson(const Catalog& cat,
                                       const std::vector<std::string>& names,
                                       int64_t trunc) {
  if (names.empty()) throw DomainError("trace family needs at least one member");
  TraceFamily fam;
  fam.level = 1;
  fam.order = static_cast<int64_t>(names.size());
  fam.nmax = trunc;
  for (int64_t m = 0; m < fam.order; ++m) {
    PSeries f = catalog_expand(cat, names[static_cast<size_t>(m)], trunc).normalized();
    if (f.denom != 1 || f.is_zero() || f.order() != -1 ||
        !(f.leading_coeff() == CycNumber(1)))
      throw DomainError("trace family member '" + names[static_cast<size_t>(m)] +
                        "' is not a normalized series q^-1 + O(1)");
    for (const auto& [e, c] : f.terms)
      if (e <= trunc) fam.insert_slot(0, 0, e, m, c);
  }
  fam.finalize();
  return fam;
}

inline TraceFamily parse_trace_family(const nlohmann::json& j, const Catalog& cat) {
  if (!j.is_object()) throw ParseError("trace family JSON must be an object");
  if (j.contains("mckay")) {
    if (!j["mckay"].is_array()) throw ParseError("'mckay' must be an array of names");
    std::vector<std::string> names;
    for (const auto& v : j["mckay"]) {
      if (!v.is_string()) throw ParseError("'mckay' entries must be strings");
      names.push_back(v.get<std::string>());
    }
    int64_t trunc = 36;
    if (j.contains("trunc")) {
      if (!j["trunc"].is_number_integer() || j["trunc"].get<int64_t>() < 1)
        throw ParseError("trace family 'trunc' must be a positive integer");
      trunc = j["trunc"].get<int64_t>();
    }
    return from_mckay_thompson(cat, names, trunc);
  }
  for (const char* req : {"level", "order", "nmax", "vtable"})
    if (!j.contains(req))
      throw ParseError(std::string("trace family JSON needs '") + req + "'");
  TraceFamily fam;
  if (!j["level"].is_number_integer() || j["level"].get<int64_t>() < 1)
    throw ParseError("trace family 'level' must be a positive integer");
  fam.level = j["level"].get<int64_t>();
  if (!j["order"].is_number_integer() || j["order"].get<int64_t>() < 1)
    throw ParseError("trace family 'order' must be a positive integer");
  fam.order = j["order"].get<int64_t>();
  auto scaled_index = [&](const nlohmann::json& v, const char* what) -> int64_t {
    if (!v.is_string()) throw ParseError(std::string("trace family '") + what +
                                         "' must be a rational string");
    Rational r = parse_rational(v.get<std::string>());
    Rational s = r * fam.level;
    if (!rat_is_integer(s))
      throw ParseError(std::string("trace family '") + what + "' value " +
                       rat_to_string(r) + " is not on the 1/" +
                       std::to_string(fam.level) + " lattice");
    return static_cast<int64_t>(rat_num(s));
  };
  fam.nmax = scaled_index(j["nmax"], "nmax");
  if (!j["vtable"].is_array()) throw ParseError("trace family 'vtable' must be an array");
  for (const auto& je : j["vtable"]) {
    if (!je.is_object() || !je.contains("k") || !je.contains("r") || !je.contains("n") ||
        !je.contains("m") || !je.contains("value"))
      throw ParseError("vtable entries need 'k', 'r', 'n', 'm', 'value'");
    if (!je["k"].is_number_integer() || !je["m"].is_number_integer())
      throw ParseError("vtable 'k' and 'm' must be integers");
    if (!je["value"].is_string()) throw ParseError("vtable 'value' must be a string");
    int64_t e = scaled_index(je["n"], "n");
    int64_t rN = scaled_index(je["r"], "r");
    if (e > fam.nmax)
      throw ParseError("vtable entry at index " + std::to_string(e) +
                       " exceeds nmax " + std::to_string(fam.nmax));
    fam.insert_slot(je["k"].get<int64_t>(), rN, e, je["m"].get<int64_t>(),
                    parse_cyc(je["value"].get<std::string>()));
  }
  fam.finalize();
  if (j.contains("zetaH")) {
    if (!j["zetaH"].is_string()) throw ParseError("trace family 'zetaH' must be a string");
    CycNumber claimed = parse_cyc(j["zetaH"].get<std::string>());
    if (!(claimed == fam.zeta_h))
      throw ParseError("declared zetaH " + claimed.to_string() +
                       " does not match the real-root trace " + fam.zeta_h.to_string());
  }
  return fam;
}

// ---------------------------------------------------------------------------
// Identity checks.

struct GradedCheckReport {
  bool ok = true;
  int64_t degree = 0;
  int64_t level = 1;
  std::optional<BiMismatch> mismatch;
};

// Untwisted-grading identity at level 1: for every M, N' >= 1 with
// M + N' <= D,  [p^M q^N'] log(p(f_h(p) - f_h(q)))
//   = - sum_{t | gcd(M,N')} (1/t) Tr(h^t)_{M N' / t^2}.
inline GradedCheckReport corollary_check(const TraceFamily& fam, int64_t D) {
  if (fam.level != 1)
    throw DomainError("the untwisted-grading identity applies to level-1 families");
  if (D < 2) throw DomainError("comparison degree must be at least 2");
  int64_t need = std::max((D * D) / 4, D - 1);
  if (need > fam.nmax)
    throw TruncationError("degree " + std::to_string(D) + " needs trace slots through " +
                          std::to_string(need) + " but only " + std::to_string(fam.nmax) +
                          " are certified");
  PSeries fh = f_series(fam, 1, 0, 1, need);
  auto lg = bi_log1p(telescoped_tail(fh));
  GradedCheckReport rep;
  rep.degree = D;
  rep.level = 1;
  for (int64_t M = 1; M < D && rep.ok; ++M)
    for (int64_t Np = 1; M + Np <= D; ++Np) {
      CycNumber lhs = lg.coeff_at(M, Np);
      CycNumber rhs(0);
      for (int64_t t : divisors(std::gcd(M, Np)))
        rhs = rhs - fam.value(0, 0, (M * Np) / (t * t), t) * CycNumber(Rational(1, t));
      if (!(lhs == rhs)) {
        rep.ok = false;
        rep.mismatch = BiMismatch{M, Np, 1, lhs.to_string(), rhs.to_string()};
        break;
      }
    }
  return rep;
}

// Twisted denominator identity through total degree D (integer units):
// log( p ( f~(p) - f(q) ) ) = - sum_{m=1}^{D} (1/m) p^m S_m f_{1,0,1}(q),
// where f~ carries the multiplier zeta_h^e on the scaled index e.
inline GradedCheckReport theorem_check(const TraceFamily& fam, int64_t D) {
  if (D < 1) throw DomainError("comparison degree must be positive");
  int64_t N = fam.level;
  int64_t Ts = (D - 1) * N;
  if (Ts > fam.nmax)
    throw TruncationError("degree " + std::to_string(D) + " needs trace slots through " +
                          std::to_string(Ts) + " but only " + std::to_string(fam.nmax) +
                          " are certified");
  PSeries f101 = f_series(fam, 1, 0, 1, Ts);
  if (f101.is_zero() || f101.order() != -1)
    throw DomainError("f_{1,0,1} must have leading exponent -1/" + std::to_string(N));
  if (!(f101.leading_coeff() == fam.zeta_h))
    throw DomainError("f_{1,0,1} must lead with the real-root trace " +
                      fam.zeta_h.to_string());
  BiSeries<CycNumber> x;
  x.denom = N;
  x.ptrunc = D;
  x.dtrunc = D * N;
  for (const auto& [e, c] : f101.terms) {
    if (e >= 0) x.add_term(e + 1, 0, c * fam.zeta_h.pow(e));
    x.add_term(1, e, -c);
  }
  auto lhs = bi_log1p(x);
  BiSeries<CycNumber> rhs;
  rhs.denom = N;
  rhs.ptrunc = D;
  rhs.dtrunc = D * N;
  for (int64_t m = 1; m <= D; ++m) {
    PSeries s = equivariant_hecke(fam, m, 1, 0, 1, (D - m) * N);
    for (const auto& [e, c] : s.terms)
      rhs.add_term(m, e, c * CycNumber(Rational(-1, m)));
  }
  GradedCheckReport rep;
  rep.degree = D;
  rep.level = N;
  rep.mismatch = first_mismatch_bi(lhs, rhs);
  rep.ok = !rep.mismatch.has_value();
  return rep;
}

// Hecke-monicity rows for the equivariant sums S_n against f_{1,0,1};
// trunc (scaled index, default: everything certified) bounds the f window.
inline HeckeMonicReport hecke_monic_report(const TraceFamily& fam, int64_t maxn,
                                           int64_t trunc = -1) {
  if (trunc < 0) trunc = fam.nmax;
  if (trunc > fam.nmax)
    throw TruncationError("requested window " + std::to_string(trunc) +
                          " exceeds the certified bound " + std::to_string(fam.nmax));
  HeckeMonicReport rep;
  PSeries f101 = f_series(fam, 1, 0, 1, trunc);
  for (int64_t n = 1; n <= maxn; ++n) {
    int64_t window = trunc / n;
    if (window < 1)
      throw TruncationError("Hecke monicity at n = " + std::to_string(n) +
                            " needs trace slots through " + std::to_string(n));
    PSeries s = equivariant_hecke(fam, n, 1, 0, 1, window);
    auto fit = faber_fit(s, f101);
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

}  // namespace moonshine
