#pragma once

#include <map>
#include <string>

#include "moonshine/cyclotomic.hpp"
#include "moonshine/errors.hpp"

namespace moonshine {

// Affine-linear expression c0 + sum beta_v x_v over unknowns v, with exact
// cyclotomic coefficients.  A product of two non-constant expressions is not
// representable; the result is marked poisoned and must be skipped by any
// consumer that extracts relations.
class LinExpr {
 public:
  CycNumber c0;
  std::map<int64_t, CycNumber> lin;
  bool poisoned = false;

  LinExpr() : c0(0) {}
  explicit LinExpr(const CycNumber& c) : c0(c) {}

  static LinExpr variable(int64_t id) {
    LinExpr e;
    e.lin.emplace(id, CycNumber(1));
    return e;
  }

  bool is_constant() const { return !poisoned && lin.empty(); }

  friend LinExpr operator+(const LinExpr& a, const LinExpr& b) {
    LinExpr r = a;
    r.poisoned = a.poisoned || b.poisoned;
    r.c0 = a.c0 + b.c0;
    for (const auto& [v, c] : b.lin) {
      auto it = r.lin.find(v);
      if (it == r.lin.end())
        r.lin.emplace(v, c);
      else {
        it->second = it->second + c;
        if (it->second.is_zero()) r.lin.erase(it);
      }
    }
    return r;
  }

  LinExpr operator-() const {
    LinExpr r = *this;
    r.c0 = -r.c0;
    for (auto& [v, c] : r.lin) c = -c;
    return r;
  }

  friend LinExpr operator-(const LinExpr& a, const LinExpr& b) { return a + (-b); }

  friend LinExpr operator*(const LinExpr& a, const LinExpr& b) {
    if (a.poisoned || b.poisoned) return poisoned_value();
    if (!a.lin.empty() && !b.lin.empty()) return poisoned_value();
    const LinExpr& affine = a.lin.empty() ? b : a;
    const CycNumber& k = a.lin.empty() ? a.c0 : b.c0;
    return affine * k;
  }

  friend LinExpr operator*(const LinExpr& a, const CycNumber& k) {
    LinExpr r;
    r.poisoned = a.poisoned;
    if (r.poisoned) return r;
    if (k.is_zero()) return r;
    r.c0 = a.c0 * k;
    for (const auto& [v, c] : a.lin) {
      CycNumber x = c * k;
      if (!x.is_zero()) r.lin.emplace(v, x);
    }
    return r;
  }

  std::string to_string() const {
    if (poisoned) return "<nonlinear>";
    std::string s = c0.to_string();
    for (const auto& [v, c] : lin)
      s += " + (" + c.to_string() + ")*x" + std::to_string(v);
    return s;
  }

 private:
  static LinExpr poisoned_value() {
    LinExpr r;
    r.poisoned = true;
    return r;
  }
};

inline bool coeff_is_zero(const LinExpr& e) {
  return !e.poisoned && e.lin.empty() && e.c0.is_zero();
}

inline LinExpr coeff_inverse(const LinExpr& e) {
  if (!e.is_constant())
    throw DomainError("cannot invert a symbolic coefficient: " + e.to_string());
  return LinExpr(e.c0.inverse());
}

inline std::string coeff_to_string(const LinExpr& e) { return e.to_string(); }

}  // namespace moonshine
