#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "moonshine/fricke.hpp"
#include "moonshine/modcatalog.hpp"
#include "oracles.hpp"

using namespace moonshine;

namespace {

const Catalog& cat() {
  static const Catalog c = default_catalog();
  return c;
}

// Shared root grids; the deep one backs the total-degree-16 product check.
const FrickeAlgebra& j_alg24() {
  static const FrickeAlgebra alg = root_multiplicities(catalog_expand(cat(), "J", 24), 24);
  return alg;
}

const FrickeAlgebra& j_alg64() {
  static const FrickeAlgebra alg = root_multiplicities(catalog_expand(cat(), "J", 64), 64);
  return alg;
}

}  // namespace

TEST_CASE("root multiplicities of the coefficient-table algebra") {
  const FrickeAlgebra& alg = j_alg24();
  CHECK(alg.level == 1);
  CHECK(alg.bound == 24);

  // The real simple root carries multiplicity one; norm-zero roots are not
  // representable on the grid at all.
  CHECK(alg.at(1, -1) == Int(1));
  CHECK_FALSE(alg.in_grid(1, 0));
  CHECK_FALSE(alg.in_grid(0, 1));

  // Every computed multiplicity equals the coefficient at the product index.
  auto table = oracles::j_oracle(24);
  for (int64_t m = 1; m <= 24; ++m)
    for (int64_t j = 1; m * j <= 24; ++j) {
      auto it = table.find(m * j);
      Int want = it == table.end() ? Int(0) : it->second;
      CHECK(alg.at(m, j) == want);
    }

  // Equal products give equal multiplicities; the (2,2)/(1,4) pair is the
  // first nontrivial coincidence.
  CHECK(alg.at(2, 2) == alg.at(1, 4));
  CHECK(alg.at(2, 2) == Int("20245856256"));
  CHECK(alg.at(1, 1) == Int(196884));

  CHECK_THROWS_AS(alg.at(5, 5), TruncationError);
  CHECK_THROWS_AS(alg.at(1, 25), TruncationError);
  CHECK_THROWS_AS(alg.at(0, 1), TruncationError);
}

TEST_CASE("root multiplicities of small free algebras") {
  // Two generators in degree (1,1): the diagonal carries the aperiodic
  // necklace counts over a two-letter alphabet, everything else vanishes.
  PSeries two = parse_series("q^-1 + 2*q").with_trunc(12);
  FrickeAlgebra alg = root_multiplicities(two, 12);
  for (int64_t m = 1; m <= 3; ++m) CHECK(alg.at(m, m) == oracles::necklace(2, m));
  for (int64_t m = 1; m <= 12; ++m)
    for (int64_t j = 1; m * j <= 12; ++j)
      if (m != j) CHECK(alg.at(m, j) == Int(0));

  // One generator: the free Lie algebra is one-dimensional.
  PSeries one = parse_series("q^-1 + q").with_trunc(10);
  FrickeAlgebra tiny = root_multiplicities(one, 10);
  std::map<std::pair<int64_t, int64_t>, Int> want{{{1, -1}, Int(1)}, {{1, 1}, Int(1)}};
  CHECK(tiny.mult == want);
}

TEST_CASE("free Lie dimension oracle cross-check") {
  // Generators of the positive part sit at (m, j) with dimension a_{m+j-1};
  // the full multiplicity grid must reproduce the free Lie algebra on them.
  const FrickeAlgebra& alg = j_alg24();
  std::map<std::pair<int64_t, int64_t>, Int> gen;
  for (int64_t m = 1; m <= 7; ++m)
    for (int64_t j = 1; m + j <= 8; ++j) {
      CycNumber a = alg.f.coeff_at(m + j - 1, 1);
      gen[{m, j}] = rat_num(a.as_rational());
    }
  auto dims = oracles::free_lie_dims(gen, 8);
  for (int64_t m = 1; m <= 7; ++m)
    for (int64_t j = 1; m + j <= 8; ++j) {
      auto it = dims.find({m, j});
      Int want = it == dims.end() ? Int(0) : it->second;
      CHECK(alg.at(m, j) == want);
    }

  // Same cross-check for the two-generator algebra on its whole grid.
  PSeries two = parse_series("q^-1 + 2*q").with_trunc(36);
  FrickeAlgebra free2 = root_multiplicities(two, 36);
  auto dims2 = oracles::free_lie_dims({{{1, 1}, Int(2)}}, 12);
  for (int64_t m = 1; m <= 6; ++m) {
    auto it = dims2.find({m, m});
    CHECK(free2.at(m, m) == (it == dims2.end() ? Int(0) : it->second));
  }
  CHECK(free2.at(4, 4) == Int(3));
  CHECK(free2.at(6, 6) == Int(9));
}

TEST_CASE("product re-expansion matches the difference side") {
  DenomReport rep = denominator_verify(j_alg64(), 16);
  CHECK(rep.ok);
  CHECK(rep.level == 1);
  CHECK(rep.degree == 16);
  CHECK(rep.compared_p >= 16);
  CHECK(rep.compared_d >= 16);
  CHECK_FALSE(rep.mismatch.has_value());

  // No imaginary roots at all: both sides reduce to 1 - p/q.
  FrickeAlgebra bare = root_multiplicities(parse_series("q^-1").with_trunc(4), 4);
  CHECK(bare.mult.size() == 1);
  CHECK(denominator_verify(bare, 4).ok);

  // Two generators, deep window.
  PSeries two = parse_series("q^-1 + 2*q").with_trunc(36);
  FrickeAlgebra free2 = root_multiplicities(two, 36);
  CHECK(denominator_verify(free2, 12).ok);

  CHECK_THROWS_AS(denominator_verify(j_alg24(), 10), TruncationError);
  CHECK_THROWS_AS(denominator_verify(j_alg24(), 0), DomainError);
}

TEST_CASE("perturbed multiplicities break the product identity") {
  const FrickeAlgebra& alg = j_alg24();
  Int a4 = alg.at(2, 2);

  std::map<std::pair<int64_t, int64_t>, Int> bump{{{2, 2}, a4 + 1}};
  DenomReport rep = denominator_verify(alg, 8, bump);
  CHECK_FALSE(rep.ok);
  REQUIRE(rep.mismatch.has_value());
  CHECK(rep.mismatch->i == 2);
  CHECK(rep.mismatch->j == 2);
  CHECK(rep.mismatch->lhs != rep.mismatch->rhs);

  std::map<std::pair<int64_t, int64_t>, Int> drop{{{1, 1}, Int(0)}};
  rep = denominator_verify(alg, 8, drop);
  CHECK_FALSE(rep.ok);
  REQUIRE(rep.mismatch.has_value());
  CHECK(rep.mismatch->i == 1);
  CHECK(rep.mismatch->j == 1);

  std::map<std::pair<int64_t, int64_t>, Int> real{{{1, -1}, Int(2)}};
  rep = denominator_verify(alg, 8, real);
  CHECK_FALSE(rep.ok);
  REQUIRE(rep.mismatch.has_value());
  CHECK(rep.mismatch->i == 1);
  CHECK(rep.mismatch->j == -1);
}

TEST_CASE("multiplicity inversion rejects non-multiplicity input") {
  // A series with a negative coefficient cannot be a simple-root series.
  PSeries tb = catalog_expand(cat(), "2B", 8);
  CHECK_THROWS_AS(root_multiplicities(tb, 8), DomainError);

  CHECK_THROWS_AS(root_multiplicities(parse_series("q^-1 + 1/2*q").with_trunc(6), 6),
                  DomainError);
  CHECK_THROWS_AS(root_multiplicities(parse_series("q^-1 + (z3)*q").with_trunc(6), 6),
                  DomainError);
  CHECK_THROWS_AS(root_multiplicities(parse_series("1 + q").with_trunc(6), 6), DomainError);
  CHECK_THROWS_AS(root_multiplicities(parse_series("q^-1 + q").with_trunc(6), 0), DomainError);
  CHECK_THROWS_AS(root_multiplicities(parse_series("q^-1 + q").with_trunc(6), 7),
                  TruncationError);
}

TEST_CASE("Moebius inversion round trip on random series") {
  std::mt19937 rng(515151);
  std::uniform_int_distribution<int64_t> coeff(0, 4), depth(6, 10);
  for (int iter = 0; iter < 100; ++iter) {
    int64_t T = depth(rng);
    PSeries f;
    f.denom = 1;
    f.trunc = T;
    f.add_term(-1, CycNumber(1));
    for (int64_t n = 1; n <= T; ++n) f.add_term(n, CycNumber(coeff(rng)));
    FrickeAlgebra alg = root_multiplicities(f, T);
    // Inversion succeeded, so every exponent was a non-negative integer;
    // re-expanding the product must give back p(f(p) - f(q)) exactly.
    int64_t D = 1;
    while ((D + 1) * (D + 1) <= 4 * T) ++D;
    DenomReport rep = denominator_verify(alg, D);
    CHECK(rep.ok);
  }
}

TEST_CASE("generator dimension table") {
  const FrickeAlgebra& alg = j_alg24();
  VPlusTable t = vplus_dims(alg, 8);
  CHECK(t.level == 1);
  CHECK(t.bound == 8);
  CHECK(t.dims.at({1, 1}) == Int(196884));
  CHECK(t.dims.at({2, 3}) == Int("20245856256"));
  CHECK(t.dims.at({2, 3}) == alg.at(1, 4));
  // Anti-diagonal constancy: the dimension only depends on m + j.
  for (const auto& [key, d] : t.dims) {
    auto [m, j] = key;
    if (m + j - 2 >= 1 && (m + j - 2) * 1 <= 8) CHECK(d == t.dims.at({1, m + j - 1}));
  }

  PSeries one = parse_series("q^-1 + q").with_trunc(10);
  FrickeAlgebra tiny = root_multiplicities(one, 10);
  VPlusTable tt = vplus_dims(tiny, 6);
  std::map<std::pair<int64_t, int64_t>, Int> want{{{1, 1}, Int(1)}};
  CHECK(tt.dims == want);

  CHECK_THROWS_AS(vplus_dims(alg, 25), TruncationError);
}

TEST_CASE("Cartan pairing blocks") {
  CartanBlocks cb = cartan_block(j_alg24(), 3);
  REQUIRE(cb.degrees == std::vector<int64_t>{-1, 1, 2, 3});
  CHECK(cb.sizes == std::vector<Int>{Int(1), Int(196884), Int(21493760), Int(864299970)});
  CHECK(cb.entry(0, 0) == Rational(2));
  CHECK(cb.entry(1, 1) == Rational(-2));
  CHECK(cb.entry(2, 3) == Rational(-5));
  for (size_t a = 0; a < cb.degrees.size(); ++a)
    for (size_t b = 0; b < cb.degrees.size(); ++b) CHECK(cb.entry(a, b) == cb.entry(b, a));

  FrickeAlgebra bare = root_multiplicities(parse_series("q^-1").with_trunc(4), 4);
  CartanBlocks solo = cartan_block(bare, 4);
  CHECK(solo.degrees == std::vector<int64_t>{-1});
  CHECK(solo.sizes == std::vector<Int>{Int(1)});

  // Zero multiplicities contribute no block.
  PSeries one = parse_series("q^-1 + q").with_trunc(10);
  FrickeAlgebra tiny = root_multiplicities(one, 10);
  CartanBlocks small = cartan_block(tiny, 4);
  CHECK(small.degrees == std::vector<int64_t>{-1, 1});

  CHECK_THROWS_AS(cartan_block(j_alg24(), 25), TruncationError);
}

TEST_CASE("diagram automorphism block ranks") {
  auto ranks = diagram_automorphism_ranks(j_alg24(), 2);
  std::vector<std::pair<int64_t, Int>> want{
      {-1, Int(1)}, {1, Int(196884)}, {2, Int(21493760)}};
  CHECK(ranks == want);
  // The ranks are exactly the simple-root multiplicities.
  for (const auto& [deg, r] : ranks) CHECK(r == j_alg24().at(1, deg));

  FrickeAlgebra bare = root_multiplicities(parse_series("q^-1").with_trunc(4), 4);
  auto solo = diagram_automorphism_ranks(bare, 4);
  CHECK(solo == std::vector<std::pair<int64_t, Int>>{{-1, Int(1)}});
}

TEST_CASE("product-and-residue compatibility predicate") {
  // Multiplicities that depend only on the product pass at every level.
  for (int64_t N = 1; N <= 3; ++N) CHECK(compat_predicate(j_alg24(), N).compatible);

  PSeries one = parse_series("q^-1 + q").with_trunc(10);
  CHECK(compat_predicate(root_multiplicities(one, 10), 1).compatible);

  // A grid on the half-integer lattice, tested at its own level.
  PSeries jhalf = substitute(catalog_expand(cat(), "J", 20), CycNumber(1), 1, 2);
  FrickeAlgebra half = root_multiplicities(jhalf, 20);
  CHECK(half.level == 2);
  CHECK(compat_predicate(half, 2).compatible);
  // ... but its roots do not lie on the integer lattice.
  CompatReport off = compat_predicate(half, 1);
  CHECK_FALSE(off.compatible);
  CHECK(off.rhs.find("off-lattice") != std::string::npos);

  // Injected defect: equal product, equal residues, different values.
  FrickeAlgebra bad = j_alg24();
  bad.mult[{1, 4}] += 1;
  CompatReport rep = compat_predicate(bad, 1);
  CHECK_FALSE(rep.compatible);
  CHECK(rep.first_root == std::array<int64_t, 2>{1, 4});
  CHECK(rep.second_root == std::array<int64_t, 2>{2, 2});
  CHECK(rep.lhs != rep.rhs);

  CHECK_THROWS_AS(compat_predicate(j_alg24(), 0), DomainError);
}

TEST_CASE("witness quadruples") {
  auto w4 = witness(4);
  REQUIRE(w4.has_value());
  CHECK(*w4 == std::array<int64_t, 4>{1, 4, 2, 2});
  CHECK_FALSE(witness(5).has_value());
  auto w6 = witness(6);
  REQUIRE(w6.has_value());
  CHECK(*w6 == std::array<int64_t, 4>{1, 6, 2, 3});

  for (int64_t n = 1; n <= 200; ++n) {
    auto w = witness(n);
    if (!w) continue;
    auto [a, b, c, d] = *w;
    CHECK(a >= 1);
    CHECK(b >= 1);
    CHECK(c >= 1);
    CHECK(d >= 1);
    CHECK(a * b == c * d);
    CHECK(a + b == n + 1);
    CHECK(c + d < n + 1);
  }

  CHECK(witness_exceptional_set(200) == std::vector<int64_t>{1, 2, 3, 5});
  CHECK(witness_exceptional_set(5) == std::vector<int64_t>{1, 2, 3, 5});
  CHECK(witness_exceptional_set(3) == std::vector<int64_t>{1, 2, 3});
}

TEST_CASE("genus-zero prime list and the big group order") {
  const auto& primes = ogg_primes();
  CHECK(primes.size() == 15);
  CHECK(primes.front() == 2);
  CHECK(primes.back() == 71);
  for (size_t i = 0; i + 1 < primes.size(); ++i) CHECK(primes[i] < primes[i + 1]);
  CHECK(std::find(primes.begin(), primes.end(), 71) != primes.end());
  CHECK(std::find(primes.begin(), primes.end(), 73) == primes.end());

  const auto& fact = monster_order_factorization();
  REQUIRE(fact.size() == primes.size());
  for (size_t i = 0; i < fact.size(); ++i) {
    CHECK(fact[i].first == primes[i]);
    CHECK(fact[i].second >= 1);
  }

  Int order = monster_order();
  CHECK(order == Int("808017424794512875886459904961710757005754368000000000"));
  Int prod = 1;
  for (int64_t p : primes) {
    CHECK(order % p == 0);
    prod *= p;
  }
  CHECK(order % prod == 0);
}
