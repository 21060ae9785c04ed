#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "moonshine/biseries.hpp"
#include "moonshine/series.hpp"

namespace moonshine {

// Borcherds-type algebra attached to a normalized series f of level N:
// roots (m, n) with m >= 1 and n in (1/N)Z.  Stored with n scaled by N.
// The grid holds every root with m * j <= bound (j = n N >= 1), plus the
// real root (1, -1) with multiplicity 1.  Multiplicities are certified
// nonnegative integers.
struct FrickeAlgebra {
  int64_t level = 1;
  PSeries f;          // exponent scale 1: index j stands for q^{j/level}
  int64_t bound = 0;  // scaled product bound on the stored imaginary grid
  std::map<std::pair<int64_t, int64_t>, Int> mult;

  bool in_grid(int64_t m, int64_t j) const {
    return (m == 1 && j == -1) || (m >= 1 && j >= 1 && m * j <= bound);
  }

  Int at(int64_t m, int64_t j) const {
    if (!in_grid(m, j))
      throw TruncationError("root (" + std::to_string(m) + ", " + std::to_string(j) + "/" +
                            std::to_string(level) + ") lies beyond the certified grid");
    auto it = mult.find({m, j});
    return it == mult.end() ? Int(0) : it->second;
  }
};

// Computes root multiplicities from f via the logarithm of the telescoped
// two-variable form and Moebius inversion over repeated roots.  `bound` is
// the scaled product bound: every (m, j) with m j <= bound is certified.
inline FrickeAlgebra root_multiplicities(const PSeries& fin, int64_t bound) {
  PSeries f = fin.normalized();
  if (bound < 1) throw DomainError("root grid bound must be positive");
  FrickeAlgebra alg;
  alg.level = f.denom;
  PSeries fu = f;
  fu.denom = 1;
  if (fu.trunc < bound)
    throw TruncationError("root grid to product bound " + std::to_string(bound) +
                          " needs series coefficients through index " + std::to_string(bound));
  fu = fu.truncated(bound);
  alg.f = fu;
  alg.bound = bound;
  auto lg = bi_log1p(telescoped_tail(fu));
  // B(M, J) = -[p^M u^J] log; certified for M + J <= bound + 1.
  alg.mult.emplace(std::make_pair(int64_t(1), int64_t(-1)), Int(1));
  for (int64_t m = 1; m <= bound; ++m) {
    for (int64_t j = 1; m * j <= bound; ++j) {
      Rational c = 0;
      for (int64_t d : divisors(std::gcd(m, j))) {
        CycNumber b = -lg.coeff_at(m / d, j / d);
        if (!b.is_rational())
          throw DomainError("root multiplicity data is not rational at (" +
                            std::to_string(m / d) + ", " + std::to_string(j / d) + ")");
        c += Rational(moebius(d)) / d * b.as_rational();
      }
      if (!rat_is_integer(c))
        throw DomainError("non-integral multiplicity " + rat_to_string(c) + " at root (" +
                          std::to_string(m) + ", " + std::to_string(j) + "/" +
                          std::to_string(alg.level) + ")");
      if (c < 0)
        throw DomainError("negative multiplicity " + rat_to_string(c) + " at root (" +
                          std::to_string(m) + ", " + std::to_string(j) + "/" +
                          std::to_string(alg.level) + ")");
      if (c != 0) alg.mult.emplace(std::make_pair(m, j), rat_num(c));
    }
  }
  return alg;
}

struct DenomReport {
  bool ok = false;
  int64_t level = 1;
  int64_t degree = 0;       // requested mixed-degree bound (u units)
  int64_t compared_p = 0;   // certified p bound actually compared
  int64_t compared_d = 0;   // certified scaled degree actually compared
  std::optional<BiMismatch> mismatch;
};

// Re-expands prod (1 - p^m u^j)^{c(m,j)} over the stored grid through total
// degree D (in u = q^{1/N} units) and compares it against p(f(p) - f(q)).
// `overrides` replaces grid multiplicities before re-expansion.
inline DenomReport denominator_verify(
    const FrickeAlgebra& alg, int64_t D,
    const std::map<std::pair<int64_t, int64_t>, Int>& overrides = {}) {
  if (D < 1) throw DomainError("comparison degree must be positive");
  // Coverage: every root with m + j <= D must lie inside the stored grid.
  if (alg.bound < (D * D) / 4)
    throw TruncationError("grid product bound " + std::to_string(alg.bound) +
                          " cannot certify total degree " + std::to_string(D) +
                          "; need at least " + std::to_string((D * D) / 4));
  if (alg.f.trunc + 1 < D)
    throw TruncationError("series truncation " + std::to_string(alg.f.trunc) +
                          " cannot certify total degree " + std::to_string(D));
  std::map<std::pair<int64_t, int64_t>, Int> grid = alg.mult;
  for (const auto& [key, v] : overrides) {
    if (v == 0)
      grid.erase(key);
    else
      grid[key] = v;
  }
  BiSeries<CycNumber> logsum;
  logsum.denom = 1;
  logsum.ptrunc = D;
  logsum.dtrunc = D;
  for (const auto& [root, c] : grid) {
    auto [m, j] = root;
    for (int64_t k = 1; k * m <= D; ++k) {
      if (k * (m + j) > D) break;
      logsum.add_term(k * m, k * j, CycNumber(Rational(-c, k)));
    }
  }
  auto expanded = bi_exp(logsum);
  auto direct = difference_product_side(alg.f);
  DenomReport rep;
  rep.level = alg.level;
  rep.degree = D;
  rep.mismatch = first_mismatch_bi(expanded, direct, &rep.compared_p, &rep.compared_d);
  rep.ok = !rep.mismatch.has_value();
  return rep;
}

// Dimensions of the free generator spaces: dim V_{(m, j)} = a_{j + m - 1}
// on the grid m, j >= 1, m j <= bound.
struct VPlusTable {
  int64_t level = 1;
  int64_t bound = 0;
  std::map<std::pair<int64_t, int64_t>, Int> dims;
};

inline VPlusTable vplus_dims(const FrickeAlgebra& alg, int64_t bound) {
  if (bound > alg.bound)
    throw TruncationError("generator table bound " + std::to_string(bound) +
                          " exceeds the certified grid bound " + std::to_string(alg.bound));
  VPlusTable t;
  t.level = alg.level;
  t.bound = bound;
  for (int64_t m = 1; m <= bound; ++m)
    for (int64_t j = 1; m * j <= bound; ++j) {
      CycNumber a = alg.f.coeff_at(j + m - 1, 1);
      if (!a.is_rational() || !rat_is_integer(a.as_rational()) || a.as_rational() < 0)
        throw DomainError("generator dimension at (" + std::to_string(m) + ", " +
                          std::to_string(j) + ") is not a nonnegative integer: " +
                          a.to_string());
      Int d = rat_num(a.as_rational());
      if (d != 0) t.dims.emplace(std::make_pair(m, j), d);
    }
  return t;
}

// Simple root blocks: degree -1 (the real root, block size 1) and degree j
// for each grid root (1, j) with nonzero multiplicity.  The Cartan pairing
// of blocks at degrees n_i, n_j (scaled j_i, j_j) is -(j_i + j_j)/N.
struct CartanBlocks {
  int64_t level = 1;
  std::vector<int64_t> degrees;  // scaled by level
  std::vector<Int> sizes;

  Rational entry(size_t a, size_t b) const {
    return Rational(-(degrees.at(a) + degrees.at(b)), level);
  }
};

inline CartanBlocks cartan_block(const FrickeAlgebra& alg, int64_t maxj) {
  if (maxj > alg.bound)
    throw TruncationError("Cartan block degree " + std::to_string(maxj) +
                          " exceeds the certified grid bound " + std::to_string(alg.bound));
  CartanBlocks cb;
  cb.level = alg.level;
  cb.degrees.push_back(-1);
  cb.sizes.push_back(1);
  for (int64_t j = 1; j <= maxj; ++j) {
    Int c = alg.at(1, j);
    if (c != 0) {
      cb.degrees.push_back(j);
      cb.sizes.push_back(c);
    }
  }
  return cb;
}

// Ranks of the general linear blocks of the diagram automorphism group:
// GL_{c(1,j)} at degree j (zero-rank blocks omitted).
inline std::vector<std::pair<int64_t, Int>> diagram_automorphism_ranks(
    const FrickeAlgebra& alg, int64_t maxj) {
  CartanBlocks cb = cartan_block(alg, maxj);
  std::vector<std::pair<int64_t, Int>> out;
  for (size_t i = 0; i < cb.degrees.size(); ++i) out.emplace_back(cb.degrees[i], cb.sizes[i]);
  return out;
}

struct CompatReport {
  bool compatible = true;
  int64_t level = 1;  // the level the grid was tested against
  // First violation: equal class keys, different multiplicities.
  std::array<int64_t, 2> first_root{0, 0}, second_root{0, 0};
  std::string lhs, rhs;
};

// Tests whether the multiplicity grid factors through the level-N classes
// (a b / N, a mod N, b mod N), where (a, b) is a root with b graded in 1/N
// units.  The grid's own grading is rescaled to level N; a root whose
// grading does not lie on the 1/N lattice is itself a violation.
inline CompatReport compat_predicate(const FrickeAlgebra& alg, int64_t N) {
  if (N < 1) throw DomainError("compatibility level must be positive");
  CompatReport rep;
  rep.level = N;
  std::map<std::tuple<int64_t, int64_t, int64_t>,
           std::pair<std::array<int64_t, 2>, Int>>
      seen;
  for (const auto& [root, c] : alg.mult) {
    auto [m, j] = root;
    if ((j * N) % alg.level != 0) {
      rep.compatible = false;
      rep.first_root = {m, j};
      rep.lhs = c.str();
      rep.rhs = "off-lattice at level " + std::to_string(N);
      return rep;
    }
    int64_t b = j * N / alg.level;
    auto key = std::make_tuple(m * b, mod_nonneg(m, N), mod_nonneg(b, N));
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(key, std::make_pair(std::array<int64_t, 2>{m, b}, c));
    } else if (it->second.second != c) {
      rep.compatible = false;
      rep.first_root = it->second.first;
      rep.second_root = {m, b};
      rep.lhs = it->second.second.str();
      rep.rhs = c.str();
      return rep;
    }
  }
  return rep;
}

// Witness quadruple for n: a + b = n + 1, c d = a b, c + d < n + 1.
inline std::optional<std::array<int64_t, 4>> witness(int64_t n) {
  for (int64_t a = 1; a <= n; ++a) {
    int64_t b = n + 1 - a;
    for (int64_t c : divisors(a * b)) {
      int64_t d = a * b / c;
      if (c + d < n + 1) return std::array<int64_t, 4>{a, b, c, d};
    }
  }
  return std::nullopt;
}

inline std::vector<int64_t> witness_exceptional_set(int64_t bound) {
  std::vector<int64_t> out;
  for (int64_t n = 1; n <= bound; ++n)
    if (!witness(n)) out.push_back(n);
  return out;
}

inline const std::vector<int64_t>& ogg_primes() {
  static const std::vector<int64_t> primes{2,  3,  5,  7,  11, 13, 17, 19,
                                           23, 29, 31, 41, 47, 59, 71};
  return primes;
}

inline const std::vector<std::pair<int64_t, int64_t>>& monster_order_factorization() {
  static const std::vector<std::pair<int64_t, int64_t>> f{
      {2, 46}, {3, 20}, {5, 9},  {7, 6},  {11, 2}, {13, 3}, {17, 1}, {19, 1},
      {23, 1}, {29, 1}, {31, 1}, {41, 1}, {47, 1}, {59, 1}, {71, 1}};
  return f;
}

inline Int monster_order() {
  Int n = 1;
  for (auto [p, e] : monster_order_factorization())
    for (int64_t i = 0; i < e; ++i) n *= p;
  return n;
}

}  // namespace moonshine
