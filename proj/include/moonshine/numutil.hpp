#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace moonshine {

using std::int64_t;

// Saturating sentinel for "no truncation bound" exponents.
inline constexpr int64_t kNoBound = std::numeric_limits<int64_t>::max() / 4;

inline int64_t sat_add(int64_t a, int64_t b) {
  if (a >= kNoBound || b >= kNoBound) return kNoBound;
  int64_t s = a + b;
  return s >= kNoBound ? kNoBound : s;
}

inline int64_t gcd64(int64_t a, int64_t b) { return std::gcd(a, b); }

inline int64_t lcm64(int64_t a, int64_t b) {
  if (a == 0 || b == 0) return 0;
  return a / std::gcd(a, b) * b;
}

inline int64_t mod_nonneg(int64_t a, int64_t m) {
  int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline int64_t euler_phi(int64_t n) {
  int64_t result = n;
  int64_t m = n;
  for (int64_t p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      while (m % p == 0) m /= p;
      result -= result / p;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

inline std::vector<int64_t> divisors(int64_t n) {
  std::vector<int64_t> small, large;
  for (int64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d != n / d) large.push_back(n / d);
    }
  }
  for (auto it = large.rbegin(); it != large.rend(); ++it) small.push_back(*it);
  return small;
}

inline int moebius(int64_t n) {
  int mu = 1;
  for (int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      mu = -mu;
    }
  }
  if (n > 1) mu = -mu;
  return mu;
}

inline int64_t ipow64(int64_t base, int64_t exp) {
  int64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

}  // namespace moonshine
