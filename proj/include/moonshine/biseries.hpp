#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "moonshine/series.hpp"

namespace moonshine {

// Truncated series in p and q with q-exponents scaled by `denom`.  A term
// (i, j) stands for p^i q^{j/denom} with i >= 0 and j >= -i*denom, so the
// scaled total degree t = i*denom + j is never negative.  The certified
// region is { i <= ptrunc and t <= dtrunc }.
template <class C>
class BiSeries {
 public:
  int64_t denom = 1;
  int64_t ptrunc = kNoBound;
  int64_t dtrunc = kNoBound;
  std::map<std::pair<int64_t, int64_t>, C> terms;

  bool in_region(int64_t i, int64_t j) const {
    return i <= ptrunc && (dtrunc >= kNoBound || i * denom + j <= dtrunc);
  }

  BiSeries& add_term(int64_t i, int64_t j, const C& c) {
    if (i < 0 || j < -i * denom)
      throw DomainError("bivariate term out of range: p^" + std::to_string(i) + " q^" +
                        std::to_string(j) + "/" + std::to_string(denom));
    if (!in_region(i, j)) return *this;
    auto key = std::make_pair(i, j);
    auto it = terms.find(key);
    if (it == terms.end()) {
      if (!coeff_is_zero(c)) terms.emplace(key, c);
    } else {
      it->second = it->second + c;
      if (coeff_is_zero(it->second)) terms.erase(it);
    }
    return *this;
  }

  C coeff_at(int64_t i, int64_t j) const {
    if (!in_region(i, j))
      throw TruncationError("bivariate coefficient (" + std::to_string(i) + ", " +
                            std::to_string(j) + ") lies beyond the certified region");
    auto it = terms.find({i, j});
    return it == terms.end() ? C(CycNumber(0)) : it->second;
  }

  BiSeries rescaled(int64_t newden) const {
    if (newden == denom) return *this;
    if (newden % denom != 0) throw DomainError("denominator rescale must be a multiple");
    int64_t k = newden / denom;
    BiSeries s;
    s.denom = newden;
    s.ptrunc = ptrunc;
    s.dtrunc = dtrunc >= kNoBound / k ? kNoBound : dtrunc * k;
    for (const auto& [key, c] : terms) s.terms.emplace(std::make_pair(key.first, key.second * k), c);
    return s;
  }

  friend std::pair<BiSeries, BiSeries> unify_denoms(const BiSeries& a, const BiSeries& b) {
    int64_t L = lcm64(a.denom, b.denom);
    return {a.rescaled(L), b.rescaled(L)};
  }

  friend BiSeries operator+(const BiSeries& a, const BiSeries& b) {
    auto [x, y] = unify_denoms(a, b);
    BiSeries s;
    s.denom = x.denom;
    s.ptrunc = std::min(x.ptrunc, y.ptrunc);
    s.dtrunc = std::min(x.dtrunc, y.dtrunc);
    for (const auto& [key, c] : x.terms)
      if (s.in_region(key.first, key.second)) s.add_term(key.first, key.second, c);
    for (const auto& [key, c] : y.terms)
      if (s.in_region(key.first, key.second)) s.add_term(key.first, key.second, c);
    return s;
  }

  BiSeries operator-() const {
    BiSeries s = *this;
    for (auto& [key, c] : s.terms) c = -c;
    return s;
  }

  friend BiSeries operator-(const BiSeries& a, const BiSeries& b) { return a + (-b); }

  // Every term of either factor has nonnegative total degree and p-degree,
  // so the componentwise-min region is fully certified for the product.
  friend BiSeries operator*(const BiSeries& a, const BiSeries& b) {
    auto [x, y] = unify_denoms(a, b);
    BiSeries s;
    s.denom = x.denom;
    s.ptrunc = std::min(x.ptrunc, y.ptrunc);
    s.dtrunc = std::min(x.dtrunc, y.dtrunc);
    for (const auto& [k1, c1] : x.terms)
      for (const auto& [k2, c2] : y.terms) {
        int64_t i = k1.first + k2.first, j = k1.second + k2.second;
        if (s.in_region(i, j)) s.add_term(i, j, c1 * c2);
      }
    return s;
  }

  BiSeries scaled(const CycNumber& k) const {
    BiSeries s;
    s.denom = denom;
    s.ptrunc = ptrunc;
    s.dtrunc = dtrunc;
    if (k.is_zero()) return s;
    for (const auto& [key, c] : terms) {
      C v = c * k;
      if (!coeff_is_zero(v)) s.terms.emplace(key, v);
    }
    return s;
  }

  // Multiplies the p^i row by z^i.
  BiSeries p_weighted(const CycNumber& z) const {
    BiSeries s;
    s.denom = denom;
    s.ptrunc = ptrunc;
    s.dtrunc = dtrunc;
    std::map<int64_t, CycNumber> powers;
    for (const auto& [key, c] : terms) {
      auto it = powers.find(key.first);
      if (it == powers.end()) it = powers.emplace(key.first, z.pow(key.first)).first;
      C v = c * it->second;
      if (!coeff_is_zero(v)) s.terms.emplace(key, v);
    }
    return s;
  }
};

namespace detail {

// q-convolution of two sparse rows, keeping scaled exponents <= jmax.
template <class C>
std::map<int64_t, C> row_conv(const std::map<int64_t, C>& a, const std::map<int64_t, C>& b,
                              int64_t jmax) {
  std::map<int64_t, C> out;
  for (const auto& [e1, c1] : a)
    for (const auto& [e2, c2] : b) {
      int64_t e = e1 + e2;
      if (e > jmax) break;
      auto it = out.find(e);
      if (it == out.end()) {
        C v = c1 * c2;
        if (!coeff_is_zero(v)) out.emplace(e, std::move(v));
      } else {
        it->second = it->second + c1 * c2;
        if (coeff_is_zero(it->second)) out.erase(it);
      }
    }
  return out;
}

template <class C>
void row_add(std::map<int64_t, C>& into, const std::map<int64_t, C>& from,
             const CycNumber& scale, int64_t jmax) {
  for (const auto& [e, c] : from) {
    if (e > jmax) break;
    C v = c * scale;
    if (coeff_is_zero(v)) continue;
    auto it = into.find(e);
    if (it == into.end())
      into.emplace(e, std::move(v));
    else {
      it->second = it->second + v;
      if (coeff_is_zero(it->second)) into.erase(it);
    }
  }
}

template <class C>
std::vector<std::map<int64_t, C>> p_rows(const BiSeries<C>& x, int64_t pmax) {
  std::vector<std::map<int64_t, C>> rows(pmax + 1);
  for (const auto& [key, c] : x.terms)
    if (key.first <= pmax) rows[key.first].emplace(key.second, c);
  return rows;
}

}  // namespace detail

// log(1 + x) for x of p-order >= 1, via the p-degree derivative recurrence
// m g_m = m x_m - sum_{k=1}^{m-1} x_k * (m-k) g_{m-k}.
template <class C>
BiSeries<C> bi_log1p(const BiSeries<C>& x) {
  if (x.ptrunc >= kNoBound || x.dtrunc >= kNoBound)
    throw TruncationError("bivariate log1p needs finite truncations");
  for (const auto& [key, c] : x.terms)
    if (key.first < 1) throw DomainError("bivariate log1p requires p-order >= 1");
  int64_t P = x.ptrunc, D = x.dtrunc, dN = x.denom;
  auto xr = detail::p_rows(x, P);
  std::vector<std::map<int64_t, C>> g(P + 1);
  for (int64_t m = 1; m <= P; ++m) {
    int64_t jmax = D - m * dN;
    std::map<int64_t, C> acc;
    detail::row_add(acc, xr[m], CycNumber(Rational(m)), jmax);
    for (int64_t k = 1; k < m; ++k) {
      if (xr[k].empty() || g[m - k].empty()) continue;
      auto conv = detail::row_conv(xr[k], g[m - k], jmax);
      detail::row_add(acc, conv, CycNumber(Rational(-(m - k))), jmax);
    }
    for (auto& [e, c] : acc) {
      C v = c * CycNumber(Rational(1, m));
      if (!coeff_is_zero(v)) g[m].emplace(e, std::move(v));
    }
  }
  BiSeries<C> out;
  out.denom = dN;
  out.ptrunc = P;
  out.dtrunc = D;
  for (int64_t m = 1; m <= P; ++m)
    for (const auto& [e, c] : g[m]) out.terms.emplace(std::make_pair(m, e), c);
  return out;
}

// exp(x) for x of p-order >= 1, including the constant row exp(x)_0 = 1.
template <class C>
BiSeries<C> bi_exp(const BiSeries<C>& x) {
  if (x.ptrunc >= kNoBound || x.dtrunc >= kNoBound)
    throw TruncationError("bivariate exp needs finite truncations");
  for (const auto& [key, c] : x.terms)
    if (key.first < 1) throw DomainError("bivariate exp requires p-order >= 1");
  int64_t P = x.ptrunc, D = x.dtrunc, dN = x.denom;
  auto xr = detail::p_rows(x, P);
  std::vector<std::map<int64_t, C>> e(P + 1);
  e[0].emplace(0, C(CycNumber(1)));
  for (int64_t m = 1; m <= P; ++m) {
    int64_t jmax = D - m * dN;
    std::map<int64_t, C> acc;
    for (int64_t k = 1; k <= m; ++k) {
      if (xr[k].empty() || e[m - k].empty()) continue;
      auto conv = detail::row_conv(xr[k], e[m - k], jmax);
      detail::row_add(acc, conv, CycNumber(Rational(k)), jmax);
    }
    for (auto& [j, c] : acc) {
      C v = c * CycNumber(Rational(1, m));
      if (!coeff_is_zero(v)) e[m].emplace(j, std::move(v));
    }
  }
  BiSeries<C> out;
  out.denom = dN;
  out.ptrunc = P;
  out.dtrunc = D;
  for (int64_t m = 0; m <= P; ++m)
    for (const auto& [j, c] : e[m]) out.terms.emplace(std::make_pair(m, j), c);
  return out;
}

struct BiMismatch {
  int64_t i = 0, j = 0, denom = 1;
  std::string lhs, rhs;
};

template <class C>
std::optional<BiMismatch> first_mismatch_bi(const BiSeries<C>& a, const BiSeries<C>& b,
                                            int64_t* region_p = nullptr,
                                            int64_t* region_d = nullptr,
                                            int64_t* region_denom = nullptr) {
  auto [x, y] = unify_denoms(a, b);
  int64_t P = std::min(x.ptrunc, y.ptrunc), D = std::min(x.dtrunc, y.dtrunc);
  if (region_p) *region_p = P;
  if (region_d) *region_d = D;
  if (region_denom) *region_denom = x.denom;
  auto in = [&](const std::pair<int64_t, int64_t>& k) {
    return k.first <= P && k.first * x.denom + k.second <= D;
  };
  auto ix = x.terms.begin(), iy = y.terms.begin();
  std::optional<BiMismatch> best;
  auto consider = [&](const std::pair<int64_t, int64_t>& k, const C& l, const C& r) {
    if (best || !in(k)) return;
    if (!coeff_is_zero(l - r))
      best = BiMismatch{k.first, k.second, x.denom, coeff_to_string(l), coeff_to_string(r)};
  };
  while ((ix != x.terms.end() || iy != y.terms.end()) && !best) {
    if (iy == y.terms.end() || (ix != x.terms.end() && ix->first < iy->first)) {
      consider(ix->first, ix->second, C(CycNumber(0)));
      ++ix;
    } else if (ix == x.terms.end() || iy->first < ix->first) {
      consider(iy->first, C(CycNumber(0)), iy->second);
      ++iy;
    } else {
      consider(ix->first, ix->second, iy->second);
      ++ix;
      ++iy;
    }
  }
  return best;
}

// For f = u^{-1} + a_0 + a_1 u + ... (exponent scale 1, certified to trunc),
// the two-variable factor F with p(f(p) - f(q)) = (1 - p u^{-1}) F is
// F = 1 - sum_{m,j >= 1} a_{j+m-1} p^m u^j.  Returns F - 1, certified on
// the region { i <= T+1, i + j <= T+1 }.
template <class C>
BiSeries<C> telescoped_tail(const Series<C>& f) {
  if (f.denom != 1) throw DomainError("telescoped form needs exponent scale 1");
  if (f.trunc >= kNoBound) throw TruncationError("telescoped form needs a finite truncation");
  if (f.terms.empty() || f.order() != -1 ||
      !coeff_is_zero(f.leading_coeff() - C(CycNumber(1))))
    throw DomainError("telescoped form needs a series with leading term q^-1");
  BiSeries<C> x;
  x.denom = 1;
  x.ptrunc = f.trunc + 1;
  x.dtrunc = f.trunc + 1;
  for (int64_t m = 1; m <= f.trunc + 1; ++m)
    for (int64_t j = 1; m + j <= f.trunc + 1; ++j) {
      auto it = f.terms.find(j + m - 1);
      if (it != f.terms.end() && !coeff_is_zero(it->second))
        x.terms.emplace(std::make_pair(m, j), -it->second);
    }
  return x;
}

// p(f(p) - f(q)) assembled directly from the coefficients of f (exponent
// scale 1): the p-side contributes a_j p^{j+1}, the q-side -a_j p q^j.
template <class C>
BiSeries<C> difference_product_side(const Series<C>& f) {
  if (f.denom != 1) throw DomainError("difference form needs exponent scale 1");
  if (f.trunc >= kNoBound) throw TruncationError("difference form needs a finite truncation");
  if (f.terms.empty() || f.order() != -1 ||
      !coeff_is_zero(f.leading_coeff() - C(CycNumber(1))))
    throw DomainError("difference form needs a series with leading term q^-1");
  BiSeries<C> r;
  r.denom = 1;
  r.ptrunc = f.trunc + 1;
  r.dtrunc = f.trunc + 1;
  for (const auto& [j, c] : f.terms) {
    r.add_term(j + 1, 0, c);
    r.add_term(1, j, -c);
  }
  return r;
}

}  // namespace moonshine
