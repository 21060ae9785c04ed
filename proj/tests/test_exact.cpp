// Tests for the exact arithmetic layer: rationals and cyclotomic numbers.

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "moonshine/config.hpp"
#include "moonshine/cyclotomic.hpp"
#include "moonshine/errors.hpp"
#include "moonshine/rational.hpp"

using namespace moonshine;

namespace {

// Deterministic random cyclotomic element with small modulus and entries.
CycNumber random_cyc(std::mt19937& rng, int64_t max_modulus = 12) {
  std::uniform_int_distribution<int64_t> mod_pick(1, max_modulus);
  int64_t m = mod_pick(rng);
  std::uniform_int_distribution<int> num_pick(-4, 4);
  std::uniform_int_distribution<int> den_pick(1, 3);
  std::vector<Rational> coeffs(static_cast<size_t>(euler_phi(m)));
  for (auto& c : coeffs) c = Rational(num_pick(rng), den_pick(rng));
  return CycNumber::raw(m, std::move(coeffs));
}

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(rat_to_string(parse_rational("3/6")) == "1/2");
  CHECK(rat_to_string(parse_rational("-8/2")) == "-4");
  CHECK(rat_to_string(parse_rational("0")) == "0");
  CHECK(parse_rational("21493760") == Rational(21493760));
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK_THROWS_AS(parse_rational("2/-3"), ParseError);
  CHECK_THROWS_AS(parse_rational("a/3"), ParseError);
  CHECK_THROWS_AS(parse_rational("1/2/3"), ParseError);
}

TEST_CASE("cyclotomic polynomials through order 12") {
  auto iv = [](std::initializer_list<int64_t> xs) {
    std::vector<Int> v;
    for (int64_t x : xs) v.emplace_back(x);
    return v;
  };
  CHECK(cyclotomic_poly(1) == iv({-1, 1}));
  CHECK(cyclotomic_poly(2) == iv({1, 1}));
  CHECK(cyclotomic_poly(3) == iv({1, 1, 1}));
  CHECK(cyclotomic_poly(4) == iv({1, 0, 1}));
  CHECK(cyclotomic_poly(5) == iv({1, 1, 1, 1, 1}));
  CHECK(cyclotomic_poly(6) == iv({1, -1, 1}));
  CHECK(cyclotomic_poly(7) == iv({1, 1, 1, 1, 1, 1, 1}));
  CHECK(cyclotomic_poly(8) == iv({1, 0, 0, 0, 1}));
  CHECK(cyclotomic_poly(9) == iv({1, 0, 0, 1, 0, 0, 1}));
  CHECK(cyclotomic_poly(10) == iv({1, -1, 1, -1, 1}));
  CHECK(cyclotomic_poly(11) == iv({1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}));
  CHECK(cyclotomic_poly(12) == iv({1, 0, -1, 0, 1}));
  CHECK_THROWS_AS(cyclotomic_poly(0), DomainError);
}

TEST_CASE("zeta constructor basics") {
  CHECK(zeta(4, 2) == CycNumber(-1));
  CHECK(zeta(1, 0) == CycNumber(1));
  CHECK(zeta(3, 1) + zeta(3, 2) == CycNumber(-1));
  CHECK(zeta(6, 2) == zeta(3, 1));  // non-primitive input reduces
  CHECK(zeta(8, 8) == CycNumber(1));
  CHECK(zeta(5, -1) == zeta(5, 4));
  CHECK_THROWS_AS(zeta(0, 1), DomainError);
}

TEST_CASE("prime root-of-unity sums collapse to -1") {
  for (int64_t p : {2, 3, 5, 7, 11, 13}) {
    CycNumber s(0);
    for (int64_t k = 1; k < p; ++k) s = s + zeta(p, k);
    CHECK(s == CycNumber(-1));
  }
}

TEST_CASE("arithmetic identities in small fields") {
  CHECK((CycNumber(1) + zeta(3, 1)) * (-zeta(3, 1)) == CycNumber(1));
  CHECK(zeta(2, 1) + CycNumber(1) == CycNumber(0));
  CHECK(CycNumber(1) / zeta(8, 1) == zeta(8, 7));
  CHECK(zeta(4, 1) * zeta(4, 1) == CycNumber(-1));
  CHECK((zeta(8, 1) + zeta(8, 7)) * (zeta(8, 1) + zeta(8, 7)) == CycNumber(2));
  CHECK_THROWS_AS(CycNumber(1) / CycNumber(0), DomainError);
}

TEST_CASE("multiplicative order of zeta(M,k) is M/gcd(M,k)") {
  for (int64_t M = 1; M <= 16; ++M) {
    for (int64_t k = 0; k < M; ++k) {
      int64_t expected = k == 0 ? 1 : M / gcd64(M, k);
      CycNumber z = zeta(M, k);
      CycNumber p(1);
      int64_t order = 0;
      for (int64_t d = 1; d <= M; ++d) {
        p = p * z;
        if (p == CycNumber(1)) {
          order = d;
          break;
        }
      }
      CHECK(order == expected);
      CHECK(rou_order(z) == expected);
    }
  }
}

TEST_CASE("field axioms hold exactly on random triples") {
  std::mt19937 rng(20260817);
  for (int rep = 0; rep < 120; ++rep) {
    CycNumber a = random_cyc(rng), b = random_cyc(rng), c = random_cyc(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
  }
}

TEST_CASE("inverses round-trip on at least 100 random nonzero elements") {
  std::mt19937 rng(424242);
  int done = 0;
  while (done < 120) {
    CycNumber a = random_cyc(rng);
    if (a.is_zero()) continue;
    CHECK(a * a.inverse() == CycNumber(1));
    CHECK((CycNumber(1) / a) * a == CycNumber(1));
    ++done;
  }
  CHECK_THROWS_AS(CycNumber(0).inverse(), DomainError);
}

TEST_CASE("embedding into larger fields") {
  CHECK(CycNumber(-1).embedded(4) == zeta(4, 2));
  CHECK(CycNumber(-1).embedded(4).modulus() == 4);

  CycNumber v = zeta(3, 1).embedded(6);
  CHECK(v.modulus() == 6);
  CHECK(v * v + v + CycNumber(1) == CycNumber(0));  // satisfies x^2 + x + 1

  CHECK(CycNumber(5).embedded(12) == CycNumber(5));
  CHECK_THROWS_AS(zeta(4, 1).embedded(6), DomainError);
}

TEST_CASE("embed then minimize is the identity") {
  std::mt19937 rng(777);
  for (int rep = 0; rep < 60; ++rep) {
    CycNumber a = random_cyc(rng, 10);
    CycNumber big = a.embedded(a.modulus() * 4);
    CycNumber back = big.minimized();
    CHECK(back == a);
    CHECK(back.modulus() <= a.modulus());
  }
}

TEST_CASE("rational results collapse to modulus one") {
  CHECK((zeta(4, 1) * zeta(4, 1)).modulus() == 1);
  CHECK((zeta(3, 1) + zeta(3, 2)).modulus() == 1);
  CHECK((zeta(8, 1) * zeta(8, 7)).modulus() == 1);
}

TEST_CASE("minimized finds the smallest subfield") {
  // zeta_8 + zeta_8^7 = sqrt(2) generates a degree-2 field inside Q(zeta_8).
  CycNumber s = zeta(8, 1) + zeta(8, 7);
  CHECK(s.minimized().modulus() == 8);  // sqrt(2) needs the full field
  CHECK((s * s).minimized().modulus() == 1);
  CHECK(zeta(12, 4).minimized() == zeta(3, 1));
  CHECK(zeta(12, 4).minimized().modulus() == 3);
}

TEST_CASE("galois maps are ring automorphisms") {
  CHECK(zeta(5, 1).galois(2) == zeta(5, 2));
  CHECK(zeta(8, 1).galois(3) == zeta(8, 3));
  std::mt19937 rng(1009);
  for (int rep = 0; rep < 60; ++rep) {
    CycNumber a = random_cyc(rng, 12);
    CycNumber b = random_cyc(rng, 12);
    int64_t m = lcm64(a.modulus(), b.modulus());
    // pick j coprime to the joint modulus
    int64_t j = 1;
    for (int64_t cand = 2; cand <= m + 1; ++cand) {
      if (gcd64(cand, m) == 1) {
        j = cand;
        break;
      }
    }
    CHECK((a + b).embedded(m).galois(j) ==
          a.embedded(m).galois(j) + b.embedded(m).galois(j));
    CHECK((a * b).embedded(m).galois(j) ==
          a.embedded(m).galois(j) * b.embedded(m).galois(j));
  }
}

TEST_CASE("root-of-unity decomposition") {
  CHECK(rou_decompose(zeta(12, 8)) == std::pair<int64_t, int64_t>{3, 2});
  CHECK(rou_decompose(CycNumber(1)) == std::pair<int64_t, int64_t>{1, 0});
  CHECK(rou_decompose(CycNumber(-1)) == std::pair<int64_t, int64_t>{2, 1});
  CHECK(rou_decompose(zeta(7, 3)) == std::pair<int64_t, int64_t>{7, 3});
  CHECK(rou_order(CycNumber(2)) == 0);
  CHECK(rou_order(zeta(8, 1) + zeta(8, 7)) == 0);
  CHECK(rou_order(CycNumber(0)) == 0);
  CHECK_THROWS_AS(rou_decompose(CycNumber(2)), DomainError);
}

TEST_CASE("powers with negative and large exponents") {
  CHECK(zeta(5, 1).pow(-1) == zeta(5, 4));
  CHECK(zeta(5, 1).pow(int64_t{5000}) == CycNumber(1));
  CHECK(zeta(5, 1).pow(int64_t{5003}) == zeta(5, 3));
  CHECK(CycNumber(Rational(2, 3)).pow(3) == CycNumber(Rational(8, 27)));
  CHECK(CycNumber(Rational(2, 3)).pow(-2) == CycNumber(Rational(9, 4)));
  CHECK_THROWS_AS(CycNumber(0).pow(-1), DomainError);
}

TEST_CASE("printing and parsing round-trip") {
  CHECK(CycNumber(Rational(-7, 2)).to_string() == "-7/2");
  CHECK(zeta(4, 1).to_string() == "z4");
  CHECK(parse_cyc("z4") == zeta(4, 1));
  CHECK(parse_cyc("1 + z3^2") == CycNumber(1) + zeta(3, 2));
  CHECK(parse_cyc("-1/2*z8 + 3") ==
        CycNumber(3) - zeta(8, 1) * CycNumber(Rational(1, 2)));
  CHECK_THROWS_AS(parse_cyc("z4 +"), ParseError);
  CHECK_THROWS_AS(parse_cyc("zx"), ParseError);
  CHECK_THROWS_AS(parse_cyc(""), ParseError);

  std::mt19937 rng(555);
  for (int rep = 0; rep < 100; ++rep) {
    CycNumber a = random_cyc(rng, 12);
    CHECK(parse_cyc(a.to_string()) == a);
  }
}

TEST_CASE("modulus cap guards large constructions") {
  int64_t original = modulus_cap();
  set_modulus_cap(10);
  CHECK_THROWS_AS(zeta(11, 1), CapError);
  CHECK(zeta(10, 1) == zeta(10, 1));  // at the cap is fine
  set_modulus_cap(original);
  CHECK_NOTHROW(zeta(11, 1));
}
