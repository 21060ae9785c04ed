#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "moonshine/errors.hpp"

namespace moonshine {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool rat_is_integer(const Rational& r) { return rat_den(r) == 1; }

inline std::string rat_to_string(const Rational& r) {
  std::string s = rat_num(r).str();
  if (!rat_is_integer(r)) s += "/" + rat_den(r).str();
  return s;
}

// Accepts "n" or "n/d" with optional leading sign; d must be positive.
inline Rational parse_rational(const std::string& text) {
  auto bad = [&] { throw ParseError("invalid rational literal: '" + text + "'"); };
  size_t slash = text.find('/');
  std::string ns = slash == std::string::npos ? text : text.substr(0, slash);
  std::string ds = slash == std::string::npos ? "1" : text.substr(slash + 1);
  auto check_int = [&](const std::string& t, bool allow_sign) {
    if (t.empty()) bad();
    size_t i = 0;
    if (allow_sign && (t[0] == '+' || t[0] == '-')) i = 1;
    if (i >= t.size()) bad();
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') bad();
  };
  check_int(ns, true);
  check_int(ds, false);
  Int num(ns), den(ds);
  if (den == 0) bad();
  return Rational(num, den);
}

}  // namespace moonshine
