#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "moonshine/cyclotomic.hpp"
#include "moonshine/errors.hpp"
#include "moonshine/numutil.hpp"

namespace moonshine {

inline bool coeff_is_zero(const CycNumber& c) { return c.is_zero(); }
inline CycNumber coeff_from_cyc(const CycNumber& c, const CycNumber*) { return c; }
inline CycNumber coeff_inverse(const CycNumber& c) { return c.inverse(); }

// Truncated series with rational exponents e/denom, e running over integers.
// Invariant: every term with scaled exponent e <= trunc is stored exactly;
// nothing is stored (or claimed) beyond trunc.  trunc == kNoBound marks an
// exact (polynomial) value.
template <class C>
class Series {
 public:
  int64_t denom = 1;
  int64_t trunc = kNoBound;
  std::map<int64_t, C> terms;

  Series() = default;

  static Series zero() { return Series(); }

  static Series one() { return monomial(C(CycNumber(1)), 0, 1); }

  static Series monomial(const C& c, int64_t e, int64_t den) {
    Series s;
    s.denom = den;
    if (!coeff_is_zero(c)) s.terms.emplace(e, c);
    return s;
  }

  bool is_zero() const { return terms.empty(); }

  Series& add_term(int64_t e, const C& c) {
    if (e > trunc) return *this;
    auto it = terms.find(e);
    if (it == terms.end()) {
      if (!coeff_is_zero(c)) terms.emplace(e, c);
    } else {
      it->second = it->second + c;
      if (coeff_is_zero(it->second)) terms.erase(it);
    }
    return *this;
  }

  // Scaled leading exponent; requires a nonzero certified term.
  int64_t order() const {
    if (terms.empty()) throw DomainError("order of zero series");
    return terms.begin()->first;
  }

  const C& leading_coeff() const {
    if (terms.empty()) throw DomainError("leading term of zero series");
    return terms.begin()->second;
  }

  // Minimum stored exponent, used for truncation propagation in products.
  int64_t floor_exp() const { return terms.empty() ? kNoBound : terms.begin()->first; }

  Series truncated(int64_t t) const {
    Series s = *this;
    s.trunc = std::min(trunc, t);
    s.terms.erase(s.terms.upper_bound(s.trunc), s.terms.end());
    return s;
  }

  Series with_trunc(int64_t t) const {
    Series s = truncated(t);
    s.trunc = t;
    return s;
  }

  // Exponents rescaled to a denominator that is a multiple of the current one.
  Series rescaled(int64_t newden) const {
    if (newden == denom) return *this;
    if (newden % denom != 0) throw DomainError("denominator rescale must be a multiple");
    int64_t k = newden / denom;
    Series s;
    s.denom = newden;
    s.trunc = trunc >= kNoBound / k ? kNoBound : trunc * k;
    for (const auto& [e, c] : terms) s.terms.emplace(e * k, c);
    return s;
  }

  // Canonical form: minimal exponent denominator.
  Series normalized() const {
    Series s = *this;
    int64_t g = s.denom;
    for (const auto& [e, c] : s.terms) g = std::gcd(g, e < 0 ? -e : e);
    if (g > 1) {
      Series out;
      out.denom = s.denom / g;
      out.trunc = s.trunc >= kNoBound ? kNoBound : (s.trunc >= 0 ? s.trunc / g
                                                                 : -((-s.trunc + g - 1) / g));
      for (const auto& [e, c] : s.terms) out.terms.emplace(e / g, c);
      return out;
    }
    return s;
  }

  // Coefficient of q^{num/den}; throws when the exponent lies beyond the
  // certified window.
  C coeff_at(int64_t num, int64_t den = 1) const {
    int64_t L = lcm64(den, denom);
    int64_t e = num * (L / den);
    int64_t t = trunc >= kNoBound ? kNoBound : trunc * (L / denom);
    if (e > t)
      throw TruncationError("coefficient of q^" + std::to_string(num) +
                            (den == 1 ? "" : "/" + std::to_string(den)) +
                            " lies beyond the certified truncation");
    if (e % (L / denom) != 0) return C(CycNumber(0));
    auto it = terms.find(e / (L / denom));
    return it == terms.end() ? C(CycNumber(0)) : it->second;
  }

  friend std::pair<Series, Series> unify_denoms(const Series& a, const Series& b) {
    int64_t L = lcm64(a.denom, b.denom);
    return {a.rescaled(L), b.rescaled(L)};
  }

  friend Series operator+(const Series& a, const Series& b) {
    auto [x, y] = unify_denoms(a, b);
    Series s;
    s.denom = x.denom;
    s.trunc = std::min(x.trunc, y.trunc);
    for (const auto& [e, c] : x.terms)
      if (e <= s.trunc) s.terms.emplace(e, c);
    for (const auto& [e, c] : y.terms)
      if (e <= s.trunc) s.add_term(e, c);
    return s;
  }

  friend Series operator-(const Series& a, const Series& b) { return a + (-b); }

  Series operator-() const {
    Series s = *this;
    for (auto& [e, c] : s.terms) c = -c;
    return s;
  }

  friend Series operator*(const Series& a, const Series& b) {
    auto [x, y] = unify_denoms(a, b);
    Series s;
    s.denom = x.denom;
    s.trunc = std::min(sat_add(x.trunc, y.floor_exp()), sat_add(y.trunc, x.floor_exp()));
    if (x.terms.empty() || y.terms.empty()) {
      if (x.trunc >= kNoBound && y.trunc >= kNoBound) s.trunc = kNoBound;
      return s;
    }
    for (const auto& [e1, c1] : x.terms)
      for (const auto& [e2, c2] : y.terms) {
        int64_t e = e1 + e2;
        if (e <= s.trunc) s.add_term(e, c1 * c2);
      }
    return s;
  }

  Series scaled(const CycNumber& k) const {
    Series s;
    s.denom = denom;
    s.trunc = trunc;
    if (k.is_zero()) return s;
    for (const auto& [e, c] : terms) {
      C v = c * k;
      if (!coeff_is_zero(v)) s.terms.emplace(e, v);
    }
    return s;
  }
};

using PSeries = Series<CycNumber>;

// Multiplicative inverse.  The output is certified to trunc_a - 2*ord_a.
template <class C>
Series<C> inverse(const Series<C>& a) {
  if (a.terms.empty()) throw DomainError("inverse of zero series");
  int64_t e0 = a.order();
  const C c0inv = coeff_inverse(a.leading_coeff());
  if (a.terms.size() == 1) {
    Series<C> s = Series<C>::monomial(c0inv, -e0, a.denom);
    s.trunc = a.trunc >= kNoBound ? kNoBound : a.trunc - 2 * e0;
    return s;
  }
  if (a.trunc >= kNoBound)
    throw TruncationError("inverse of a multi-term exact polynomial needs a finite truncation");
  // a = c0 q^{e0} (1 + u); invert (1 + u) by v_E = -sum u_{e} v_{E-e}.
  std::map<int64_t, C> u;
  int64_t ut = a.trunc - e0;
  for (auto it = std::next(a.terms.begin()); it != a.terms.end(); ++it)
    u.emplace(it->first - e0, it->second * c0inv);
  std::map<int64_t, C> v;
  v.emplace(0, C(CycNumber(1)));
  for (int64_t E = 1; E <= ut; ++E) {
    C acc = C(CycNumber(0));
    for (const auto& [e, c] : u) {
      if (e > E) break;
      auto it = v.find(E - e);
      if (it != v.end()) acc = acc - c * it->second;
    }
    if (!coeff_is_zero(acc)) v.emplace(E, acc);
  }
  Series<C> s;
  s.denom = a.denom;
  s.trunc = a.trunc - 2 * e0;
  for (const auto& [e, c] : v) {
    if (e - e0 > s.trunc) break;
    C val = c * c0inv;
    if (!coeff_is_zero(val)) s.terms.emplace(e - e0, val);
  }
  return s;
}

// log(1 + x) for x of strictly positive order; output certified to x.trunc.
template <class C>
Series<C> log1p(const Series<C>& x) {
  if (!x.terms.empty() && x.order() <= 0)
    throw DomainError("log1p requires a series of strictly positive order");
  if (x.trunc >= kNoBound)
    throw TruncationError("log1p needs a finite truncation");
  Series<C> g;
  g.denom = x.denom;
  g.trunc = x.trunc;
  for (int64_t E = 1; E <= x.trunc; ++E) {
    C acc = C(CycNumber(0));
    auto xe = x.terms.find(E);
    if (xe != x.terms.end()) acc = xe->second * CycNumber(Rational(E));
    for (const auto& [e1, c1] : x.terms) {
      if (e1 >= E) break;
      auto it = g.terms.find(E - e1);
      if (it != g.terms.end())
        acc = acc - c1 * (it->second * CycNumber(Rational(E - e1)));
    }
    if (!coeff_is_zero(acc)) {
      C val = acc * CycNumber(Rational(1, E));
      if (!coeff_is_zero(val)) g.terms.emplace(E, val);
    }
  }
  return g;
}

// exp(x) for x of strictly positive order; includes the constant term 1.
template <class C>
Series<C> exp(const Series<C>& x) {
  if (!x.terms.empty() && x.order() <= 0)
    throw DomainError("exp requires a series of strictly positive order");
  if (x.trunc >= kNoBound)
    throw TruncationError("exp needs a finite truncation");
  Series<C> s;
  s.denom = x.denom;
  s.trunc = x.trunc;
  s.terms.emplace(0, C(CycNumber(1)));
  for (int64_t E = 1; E <= x.trunc; ++E) {
    C acc = C(CycNumber(0));
    for (const auto& [e1, c1] : x.terms) {
      if (e1 > E) break;
      auto it = s.terms.find(E - e1);
      if (it != s.terms.end())
        acc = acc + (c1 * CycNumber(Rational(e1))) * it->second;
    }
    if (!coeff_is_zero(acc)) {
      C val = acc * CycNumber(Rational(1, E));
      if (!coeff_is_zero(val)) s.terms.emplace(E, val);
    }
  }
  return s;
}

// q |-> root * q^{num/den} along the canonical branch: the term c q^{e/D}
// picks up the multiplier zeta(o*D, k0*e) where root = zeta(o, k0).
template <class C>
Series<C> substitute(const Series<C>& a, const CycNumber& root, int64_t num, int64_t den) {
  if (num < 1 || den < 1)
    throw DomainError("substitution exponent must be a positive rational");
  auto [o, k0] = rou_decompose(root);
  int64_t branch_order = o * a.denom;
  if (branch_order > modulus_cap())
    throw CapError("substitution needs zeta of order " + std::to_string(branch_order) +
                   " beyond cap " + std::to_string(modulus_cap()));
  Series<C> s;
  s.denom = a.denom * den;
  s.trunc = a.trunc >= kNoBound / std::max<int64_t>(num, 1) ? kNoBound : a.trunc * num;
  for (const auto& [e, c] : a.terms) {
    C v = c * zeta(branch_order, k0 * e);
    if (!coeff_is_zero(v)) s.terms.emplace(e * num, v);
  }
  return s;
}

struct SeriesMismatch {
  int64_t exp = 0;    // scaled exponent in `denom` units
  int64_t denom = 1;
  std::string lhs, rhs;
};

// First differing coefficient on the common certified window, if any.
// Returns the compared window bound through `compared_to` (scaled, in the
// common denominator) when provided.
template <class C>
std::optional<SeriesMismatch> first_mismatch(const Series<C>& a, const Series<C>& b,
                                             int64_t* compared_to = nullptr,
                                             int64_t* compared_denom = nullptr) {
  auto [x, y] = unify_denoms(a, b);
  int64_t T = std::min(x.trunc, y.trunc);
  if (compared_to) *compared_to = T;
  if (compared_denom) *compared_denom = x.denom;
  auto ix = x.terms.begin(), iy = y.terms.begin();
  auto emit = [&](int64_t e, const C& l, const C& r) {
    return SeriesMismatch{e, x.denom, coeff_to_string(l), coeff_to_string(r)};
  };
  while (ix != x.terms.end() || iy != y.terms.end()) {
    int64_t ex = ix == x.terms.end() ? kNoBound : ix->first;
    int64_t ey = iy == y.terms.end() ? kNoBound : iy->first;
    int64_t e = std::min(ex, ey);
    if (e > T) break;
    if (ex < ey) {
      if (!coeff_is_zero(ix->second)) return emit(ex, ix->second, C(CycNumber(0)));
      ++ix;
    } else if (ey < ex) {
      if (!coeff_is_zero(iy->second)) return emit(ey, C(CycNumber(0)), iy->second);
      ++iy;
    } else {
      if (!coeff_is_zero(ix->second - iy->second)) return emit(ex, ix->second, iy->second);
      ++ix;
      ++iy;
    }
  }
  return std::nullopt;
}

inline std::string coeff_to_string(const CycNumber& c) { return c.to_string(); }

inline std::string exponent_to_string(int64_t e, int64_t den) {
  int64_t g = std::gcd(e < 0 ? -e : e, den);
  if (g == 0) g = den;
  int64_t n = e / g, d = den / g;
  std::string s = std::to_string(n);
  if (d != 1) s += "/" + std::to_string(d);
  return s;
}

inline std::string to_string(const PSeries& f, bool with_order = false) {
  std::string out;
  for (const auto& [e, c] : f.terms) {
    CycNumber cm = c.minimized();
    bool rational = cm.is_rational();
    bool negative = rational && cm.as_rational() < 0;
    CycNumber mag = negative ? -cm : cm;
    std::string piece;
    std::string qpart;
    if (e != 0) {
      qpart = "q";
      if (e != f.denom || f.denom != 1) {
        std::string es = exponent_to_string(e, f.denom);
        if (es != "1") qpart += "^" + es;
      }
    }
    if (qpart.empty()) {
      piece = rational ? rat_to_string(mag.as_rational()) : "(" + cm.to_string() + ")";
    } else if (rational) {
      Rational r = mag.as_rational();
      piece = (r == 1 ? "" : rat_to_string(r) + "*") + qpart;
    } else {
      piece = "(" + cm.to_string() + ")*" + qpart;
    }
    if (out.empty())
      out = (negative ? "-" : "") + piece;
    else
      out += (negative ? " - " : " + ") + piece;
  }
  if (out.empty()) out = "0";
  if (with_order && f.trunc < kNoBound)
    out += " + O(q^" + exponent_to_string(f.trunc + 1, f.denom) + ")";
  return out;
}

// Parses sums of terms: "q^-1 + 196884*q", "(z8)*q^1/2 - 2", "q^-1/2 + q^1/2".
inline PSeries parse_series(const std::string& text) {
  detail::CycLexer lx(text);
  if (lx.eof()) throw ParseError("empty series literal");
  std::vector<std::tuple<int64_t, int64_t, CycNumber>> found;  // (num, den, coeff)
  bool neg = false;
  if (lx.accept('-'))
    neg = true;
  else
    lx.accept('+');
  while (true) {
    CycNumber coeff(1);
    bool have_coeff = false, have_q = false;
    int64_t enum_ = 0, eden = 1;
    if (lx.peek() == '(') {
      lx.accept('(');
      coeff = detail::lex_cyc_expr(lx);
      if (!lx.accept(')')) throw ParseError("missing ')' in series literal");
      have_coeff = true;
    } else if (lx.peek() >= '0' && lx.peek() <= '9') {
      coeff = CycNumber(detail::lex_rational(lx));
      have_coeff = true;
    }
    if (have_coeff && lx.accept('*')) {
      if (lx.peek() != 'q') throw ParseError("expected q after '*' in series literal");
    }
    if (lx.peek() == 'q') {
      lx.accept('q');
      have_q = true;
      enum_ = 1;
      if (lx.accept('^')) {
        bool eneg = lx.accept('-');
        enum_ = std::stoll(lx.integer());
        if (lx.accept('/')) eden = std::stoll(lx.integer());
        if (eneg) enum_ = -enum_;
      }
    }
    if (!have_coeff && !have_q) throw ParseError("expected term in series literal");
    found.emplace_back(enum_, eden, neg ? -coeff : coeff);
    if (lx.accept('+'))
      neg = false;
    else if (lx.accept('-'))
      neg = true;
    else
      break;
  }
  if (!lx.eof()) throw ParseError("trailing characters in series literal");
  int64_t L = 1;
  for (const auto& [n, d, c] : found) L = lcm64(L, d);
  PSeries f;
  f.denom = L;
  for (const auto& [n, d, c] : found) f.add_term(n * (L / d), c);
  return f.normalized();
}

}  // namespace moonshine
