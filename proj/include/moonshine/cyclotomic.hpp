#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "moonshine/config.hpp"
#include "moonshine/errors.hpp"
#include "moonshine/numutil.hpp"
#include "moonshine/rational.hpp"

namespace moonshine {

namespace detail {

// Exact division of integer polynomials by a monic divisor.
inline void divide_monic(std::vector<Int>& num, const std::vector<Int>& div) {
  int64_t dd = static_cast<int64_t>(div.size()) - 1;
  int64_t dn = static_cast<int64_t>(num.size()) - 1;
  std::vector<Int> q(dn - dd + 1);
  for (int64_t i = dn - dd; i >= 0; --i) {
    Int c = num[i + dd];
    q[i] = c;
    if (c != 0)
      for (int64_t j = 0; j <= dd; ++j) num[i + j] -= c * div[j];
  }
  num = std::move(q);
}

// Rational polynomial helpers (dense, index = power).
inline int64_t rp_deg(const std::vector<Rational>& p) {
  for (int64_t i = static_cast<int64_t>(p.size()) - 1; i >= 0; --i)
    if (p[i] != 0) return i;
  return -1;
}

inline void rp_divmod(std::vector<Rational> a, const std::vector<Rational>& b,
                      std::vector<Rational>& q, std::vector<Rational>& r) {
  int64_t db = rp_deg(b);
  if (db < 0) throw DomainError("polynomial division by zero");
  int64_t da = rp_deg(a);
  q.assign(da >= db ? da - db + 1 : 1, Rational(0));
  while (da >= db) {
    Rational c = a[da] / b[db];
    q[da - db] = c;
    for (int64_t j = 0; j <= db; ++j) a[da - db + j] -= c * b[j];
    a[da] = 0;
    da = rp_deg(a);
  }
  r = std::move(a);
}

}  // namespace detail

// Coefficients of the M-th cyclotomic polynomial (degree phi(M), monic).
inline const std::vector<Int>& cyclotomic_poly(int64_t M) {
  static std::map<int64_t, std::vector<Int>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::function<const std::vector<Int>&(int64_t)> get =
      [&](int64_t m) -> const std::vector<Int>& {
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    std::vector<Int> num(m + 1);
    num[0] = -1;
    num[m] = 1;
    for (int64_t d : divisors(m))
      if (d != m) detail::divide_monic(num, get(d));
    return cache.emplace(m, std::move(num)).first->second;
  };
  if (M <= 0) throw DomainError("cyclotomic modulus must be positive");
  return get(M);
}

// Reduce a power-basis polynomial in zeta_M modulo Phi_M, in place.
inline void reduce_mod_phi(std::vector<Rational>& p, const std::vector<Int>& phi) {
  size_t deg = phi.size() - 1;
  if (p.size() < deg) p.resize(deg);
  for (size_t i = p.size(); i-- > deg;) {
    Rational c = p[i];
    if (c != 0)
      for (size_t j = 0; j < deg; ++j) p[i - deg + j] -= c * Rational(phi[j]);
  }
  p.resize(deg);
}

// Element of a cyclotomic field, stored as a residue mod Phi_M in the power
// basis 1, zeta_M, ..., zeta_M^{phi(M)-1}.  Rational numbers use modulus 1.
class CycNumber {
 public:
  CycNumber() : modulus_(1), coeffs_(1) {}
  CycNumber(const Rational& r) : modulus_(1), coeffs_{r} {}
  CycNumber(const Int& n) : modulus_(1), coeffs_{Rational(n)} {}
  CycNumber(int64_t n) : modulus_(1), coeffs_{Rational(n)} {}
  CycNumber(int n) : modulus_(1), coeffs_{Rational(n)} {}

  static CycNumber raw(int64_t modulus, std::vector<Rational> coeffs) {
    CycNumber a;
    a.modulus_ = modulus;
    a.coeffs_ = std::move(coeffs);
    size_t deg = static_cast<size_t>(euler_phi(modulus));
    if (a.coeffs_.size() > deg)
      reduce_mod_phi(a.coeffs_, cyclotomic_poly(modulus));
    else
      a.coeffs_.resize(deg);
    a.collapse();
    return a;
  }

  int64_t modulus() const { return modulus_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (c != 0) return false;
    return true;
  }

  bool is_rational() const {
    for (size_t i = 1; i < coeffs_.size(); ++i)
      if (coeffs_[i] != 0) return false;
    return true;
  }

  // The value as a rational number; requires is_rational() after minimization.
  Rational as_rational() const {
    if (is_rational()) return coeffs_[0];
    CycNumber m = minimized();
    if (!m.is_rational()) throw DomainError("value is not rational: " + to_string());
    return m.coeffs_[0];
  }

  friend CycNumber operator+(const CycNumber& a, const CycNumber& b) {
    if (a.modulus_ == b.modulus_) {
      CycNumber r = a;
      for (size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] += b.coeffs_[i];
      r.collapse();
      return r;
    }
    auto [ua, ub] = unified(a, b);
    return ua + ub;
  }

  friend CycNumber operator-(const CycNumber& a, const CycNumber& b) {
    if (a.modulus_ == b.modulus_) {
      CycNumber r = a;
      for (size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] -= b.coeffs_[i];
      r.collapse();
      return r;
    }
    auto [ua, ub] = unified(a, b);
    return ua - ub;
  }

  CycNumber operator-() const {
    CycNumber r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  friend CycNumber operator*(const CycNumber& a, const CycNumber& b) {
    if (a.modulus_ == 1) return b.scaled(a.coeffs_[0]);
    if (b.modulus_ == 1) return a.scaled(b.coeffs_[0]);
    if (a.modulus_ == b.modulus_) {
      std::vector<Rational> prod(2 * a.coeffs_.size() - 1);
      for (size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] == 0) continue;
        for (size_t j = 0; j < b.coeffs_.size(); ++j) {
          if (b.coeffs_[j] == 0) continue;
          prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
      }
      reduce_mod_phi(prod, cyclotomic_poly(a.modulus_));
      return raw(a.modulus_, std::move(prod));
    }
    auto [ua, ub] = unified(a, b);
    return ua * ub;
  }

  CycNumber inverse() const {
    if (modulus_ == 1) {
      if (coeffs_[0] == 0) throw DomainError("division by zero");
      return CycNumber(Rational(1) / coeffs_[0]);
    }
    // Extended Euclid against Phi_M in Q[x].
    const auto& phi = cyclotomic_poly(modulus_);
    std::vector<Rational> r0(phi.size()), r1 = coeffs_, s0{Rational(0)}, s1{Rational(1)};
    for (size_t i = 0; i < phi.size(); ++i) r0[i] = Rational(phi[i]);
    if (detail::rp_deg(r1) < 0) throw DomainError("division by zero");
    while (detail::rp_deg(r1) > 0) {
      std::vector<Rational> q, rem;
      detail::rp_divmod(r0, r1, q, rem);
      r0 = std::move(r1);
      r1 = std::move(rem);
      // s_next = s0 - q * s1
      std::vector<Rational> qs(q.size() + s1.size());
      for (size_t i = 0; i < q.size(); ++i) {
        if (q[i] == 0) continue;
        for (size_t j = 0; j < s1.size(); ++j) qs[i + j] += q[i] * s1[j];
      }
      std::vector<Rational> snext(std::max(s0.size(), qs.size()));
      for (size_t i = 0; i < s0.size(); ++i) snext[i] = s0[i];
      for (size_t i = 0; i < qs.size(); ++i) snext[i] -= qs[i];
      s0 = std::move(s1);
      s1 = std::move(snext);
      if (detail::rp_deg(r1) < 0) throw DomainError("division by zero");
    }
    Rational unit = r1[detail::rp_deg(r1)];
    for (auto& c : s1) c /= unit;
    reduce_mod_phi(s1, phi);
    return raw(modulus_, std::move(s1));
  }

  friend CycNumber operator/(const CycNumber& a, const CycNumber& b) {
    return a * b.inverse();
  }

  CycNumber pow(Int e) const {
    CycNumber base = *this;
    if (e < 0) {
      base = base.inverse();
      e = -e;
    }
    CycNumber r(1);
    while (e > 0) {
      if ((e & 1) != 0) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }
  CycNumber pow(int64_t e) const { return pow(Int(e)); }

  friend bool operator==(const CycNumber& a, const CycNumber& b) {
    if (a.modulus_ == b.modulus_) return a.coeffs_ == b.coeffs_;
    auto [ua, ub] = unified(a, b);
    return ua.coeffs_ == ub.coeffs_;
  }
  friend bool operator!=(const CycNumber& a, const CycNumber& b) { return !(a == b); }

  // Image under the Galois map zeta_M -> zeta_M^j, gcd(j, M) = 1.
  CycNumber galois(int64_t j) const {
    if (modulus_ == 1) return *this;
    std::vector<Rational> raw_poly(modulus_);
    for (size_t i = 0; i < coeffs_.size(); ++i)
      raw_poly[static_cast<size_t>(mod_nonneg(static_cast<int64_t>(i) * j, modulus_))] +=
          coeffs_[i];
    reduce_mod_phi(raw_poly, cyclotomic_poly(modulus_));
    return raw(modulus_, std::move(raw_poly));
  }

  // Rewrite over the smallest cyclotomic subfield Q(zeta_d), d | modulus.
  CycNumber minimized() const {
    CycNumber a = *this;
    a.collapse();
    if (a.modulus_ == 1) return a;
    for (int64_t d : divisors(a.modulus_)) {
      if (d == a.modulus_) return a;
      if (a.fixed_under_subgroup(d)) return a.rewritten_in(d);
    }
    return a;
  }

  std::string to_string() const;

  // Same value represented in the larger field Q(zeta_M2).
  CycNumber embedded(int64_t M2) const {
    if (M2 <= 0 || M2 % modulus_ != 0)
      throw DomainError("embedding target " + std::to_string(M2) +
                        " is not a multiple of modulus " +
                        std::to_string(modulus_));
    return embedded_unchecked(M2);
  }

 private:
  int64_t modulus_;
  std::vector<Rational> coeffs_;

  void collapse() {
    if (modulus_ == 1) return;
    if (is_rational()) {
      Rational c = coeffs_[0];
      modulus_ = 1;
      coeffs_.assign(1, c);
    }
  }

  CycNumber scaled(const Rational& r) const {
    if (r == 0) return CycNumber();
    CycNumber out = *this;
    for (auto& c : out.coeffs_) c *= r;
    return out;
  }

  CycNumber embedded_unchecked(int64_t M2) const {
    if (M2 == modulus_) return *this;
    int64_t k = M2 / modulus_;
    std::vector<Rational> raw_poly((coeffs_.size() - 1) * k + 1);
    for (size_t i = 0; i < coeffs_.size(); ++i) raw_poly[i * k] = coeffs_[i];
    reduce_mod_phi(raw_poly, cyclotomic_poly(M2));
    CycNumber out;
    out.modulus_ = M2;
    out.coeffs_ = std::move(raw_poly);
    return out;
  }

  static std::pair<CycNumber, CycNumber> unified(const CycNumber& a, const CycNumber& b) {
    int64_t L = lcm64(a.modulus_, b.modulus_);
    return {a.embedded_unchecked(L), b.embedded_unchecked(L)};
  }

  // True when fixed by every Galois map with j = 1 mod d, i.e. the value lies
  // in Q(zeta_d).
  bool fixed_under_subgroup(int64_t d) const {
    for (int64_t j = 1 + d; j < modulus_; j += d) {
      if (std::gcd(j, modulus_) != 1) continue;
      if (!(galois(j) == *this)) return false;
    }
    return true;
  }

  CycNumber rewritten_in(int64_t d) const {
    // Solve B c = a where columns of B are zeta_d^i embedded in Q(zeta_M).
    size_t rows = coeffs_.size(), cols = euler_phi(d);
    std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols + 1));
    for (size_t i = 0; i < cols; ++i) {
      std::vector<Rational> col(static_cast<size_t>(i) * (modulus_ / d) + 1);
      col.back() = 1;
      reduce_mod_phi(col, cyclotomic_poly(modulus_));
      for (size_t r = 0; r < rows; ++r) m[r][i] = col[r];
    }
    for (size_t r = 0; r < rows; ++r) m[r][cols] = coeffs_[r];
    // Gaussian elimination.
    size_t rank = 0;
    std::vector<size_t> pivot_of_col(cols, SIZE_MAX);
    for (size_t c = 0; c < cols && rank < rows; ++c) {
      size_t p = rank;
      while (p < rows && m[p][c] == 0) ++p;
      if (p == rows) continue;
      std::swap(m[p], m[rank]);
      Rational inv = Rational(1) / m[rank][c];
      for (size_t j = c; j <= cols; ++j) m[rank][j] *= inv;
      for (size_t r = 0; r < rows; ++r) {
        if (r == rank || m[r][c] == 0) continue;
        Rational f = m[r][c];
        for (size_t j = c; j <= cols; ++j) m[r][j] -= f * m[rank][j];
      }
      pivot_of_col[c] = rank;
      ++rank;
    }
    std::vector<Rational> sol(cols);
    for (size_t c = 0; c < cols; ++c)
      if (pivot_of_col[c] != SIZE_MAX) sol[c] = m[pivot_of_col[c]][cols];
    for (size_t r = rank; r < rows; ++r)
      if (m[r][cols] != 0) throw DomainError("subfield rewrite failed");
    return raw(d, std::move(sol));
  }
};

// Primitive root of unity e^{2 pi i k / M}, reduced to its minimal field.
inline CycNumber zeta(int64_t M, int64_t k) {
  if (M <= 0) throw DomainError("root-of-unity order must be positive");
  k = mod_nonneg(k, M);
  int64_t g = std::gcd(k == 0 ? M : k, M);
  int64_t M2 = M / g, k2 = k / g;
  if (M2 > modulus_cap())
    throw CapError("zeta order " + std::to_string(M2) + " exceeds cap " +
                   std::to_string(modulus_cap()));
  std::vector<Rational> p(static_cast<size_t>(k2) + 1);
  p[k2] = 1;
  reduce_mod_phi(p, cyclotomic_poly(M2));
  return CycNumber::raw(M2, std::move(p));
}

// Order of a as a root of unity; 0 if a is not a root of unity.
inline int64_t rou_order(const CycNumber& a) {
  if (a.is_zero()) return 0;
  CycNumber m = a.minimized();
  int64_t bound = lcm64(2, m.modulus());
  CycNumber p(1);
  for (int64_t d = 1; d <= bound; ++d) {
    p = p * m;
    if (p == CycNumber(1)) {
      for (int64_t dd : divisors(d))
        if (m.pow(dd) == CycNumber(1)) return dd;
    }
  }
  return 0;
}

// a = zeta(order, k); throws if a is not a root of unity.
inline std::pair<int64_t, int64_t> rou_decompose(const CycNumber& a) {
  int64_t o = rou_order(a);
  if (o == 0) throw DomainError("not a root of unity: " + a.to_string());
  CycNumber p(1);
  for (int64_t k = 0; k < o; ++k) {
    if (p == a) return {o, k};
    p = p * zeta(o, 1);
  }
  throw DomainError("root-of-unity decomposition failed");
}

inline std::string CycNumber::to_string() const {
  CycNumber m = minimized();
  if (m.modulus_ == 1) return rat_to_string(m.coeffs_[0]);
  std::string out;
  for (size_t i = 0; i < m.coeffs_.size(); ++i) {
    const Rational& c = m.coeffs_[i];
    if (c == 0) continue;
    Rational abs = c < 0 ? Rational(-c) : c;
    std::string piece;
    if (i == 0) {
      piece = rat_to_string(abs);
    } else {
      if (abs != 1) piece = rat_to_string(abs) + "*";
      piece += "z" + std::to_string(m.modulus_);
      if (i > 1) piece += "^" + std::to_string(i);
    }
    if (out.empty())
      out = (c < 0 ? "-" : "") + piece;
    else
      out += (c < 0 ? " - " : " + ") + piece;
  }
  return out.empty() ? "0" : out;
}

namespace detail {

struct CycLexer {
  const std::string& s;
  size_t i = 0;
  explicit CycLexer(const std::string& text) : s(text) {}
  void skip() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  bool eof() {
    skip();
    return i >= s.size();
  }
  char peek() {
    skip();
    return i < s.size() ? s[i] : '\0';
  }
  bool accept(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  std::string integer() {
    skip();
    size_t start = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    if (i == start) throw ParseError("expected digits at position " + std::to_string(start) +
                                     " in '" + s + "'");
    return s.substr(start, i - start);
  }
};

inline Rational lex_rational(CycLexer& lx) {
  std::string num = lx.integer();
  if (lx.accept('/')) return parse_rational(num + "/" + lx.integer());
  return parse_rational(num);
}

inline CycNumber lex_cyc_factor(CycLexer& lx) {
  if (lx.peek() == 'z') {
    lx.accept('z');
    int64_t M = std::stoll(lx.integer());
    int64_t e = 1;
    if (lx.accept('^')) {
      bool neg = lx.accept('-');
      e = std::stoll(lx.integer());
      if (neg) e = -e;
    }
    return zeta(M, e);
  }
  return CycNumber(lex_rational(lx));
}

inline CycNumber lex_cyc_term(CycLexer& lx) {
  CycNumber v = lex_cyc_factor(lx);
  while (lx.accept('*')) v = v * lex_cyc_factor(lx);
  return v;
}

inline CycNumber lex_cyc_expr(CycLexer& lx) {
  CycNumber total(0);
  bool neg = false;
  if (lx.accept('-'))
    neg = true;
  else
    lx.accept('+');
  while (true) {
    CycNumber t = lex_cyc_term(lx);
    total = neg ? total - t : total + t;
    if (lx.accept('+'))
      neg = false;
    else if (lx.accept('-'))
      neg = true;
    else
      break;
  }
  return total;
}

}  // namespace detail

// Parses sums of terms like "2/3", "z8", "-1/2*z12^5", "z8^3 - z8 + 1".
inline CycNumber parse_cyc(const std::string& text) {
  detail::CycLexer lx(text);
  if (lx.eof()) throw ParseError("empty cyclotomic literal");
  CycNumber v = detail::lex_cyc_expr(lx);
  if (!lx.eof())
    throw ParseError("trailing characters in cyclotomic literal '" + text + "'");
  return v;
}

}  // namespace moonshine
