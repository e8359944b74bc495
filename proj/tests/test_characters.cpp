#include <catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "towerinv/characters.hpp"

using namespace towerinv;

TEST_CASE("unit group mod 8", "[characters]") {
  const UnitGroup u(8);
  REQUIRE(u.size() == 4);
  REQUIRE(u.orders() == std::vector<u64>{2, 2});
}

TEST_CASE("unit group sizes equal totient", "[characters]") {
  for (u64 m = 1; m <= 300; ++m) {
    const UnitGroup u(m);
    INFO("m = " << m);
    CHECK(u.size() == totient(m));
    // discrete log is a bijection on units
    std::set<std::vector<u64>> logs;
    for (u64 a = 0; a < m; ++a) {
      if (u.is_unit(a)) logs.insert(u.log(a));
    }
    CHECK(logs.size() == u.size());
  }
}

TEST_CASE("from_table rejects invalid characters", "[characters]") {
  // chi_-4
  const auto chi = DirichletCharacter::from_table(4, 2, {-1, 0, -1, 1});
  CHECK(chi.conductor() == 4);
  CHECK(chi.is_odd());

  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::Internal;
  };
  CHECK(code_of([] { DirichletCharacter::from_table(4, 2, {-1, 0, -1}); }) == Errc::InvalidCharacter);
  CHECK(code_of([] { DirichletCharacter::from_table(4, 2, {0, 0, -1, 1}); }) == Errc::InvalidCharacter);
  CHECK(code_of([] { DirichletCharacter::from_table(4, 2, {-1, 1, -1, 1}); }) == Errc::InvalidCharacter);
  // not multiplicative mod 5: chi(2) = i forces chi(4) = -1
  CHECK(code_of([] { DirichletCharacter::from_table(5, 4, {-1, 0, 1, 3, 0}); }) == Errc::InvalidCharacter);
}

TEST_CASE("all characters are multiplicative with correct conductor", "[characters][property]") {
  for (u64 m : {1u, 2u, 3u, 4u, 5u, 8u, 9u, 12u, 15u, 16u, 20u, 21u, 24u, 45u, 63u, 100u}) {
    const UnitGroup u(m);
    const auto chars = DirichletCharacter::all(u);
    REQUIRE(chars.size() == u.size());
    u64 primitive = 0;
    for (const auto& chi : chars) {
      INFO("m = " << m);
      // rebuild through the validating constructor
      const auto again = DirichletCharacter::from_table(m, chi.order(), chi.table());
      CHECK(again == chi);
      CHECK(m % chi.conductor() == 0);
      // induced from its primitive part
      CHECK(chi.primitive().induced(m) == chi);
      CHECK(chi.primitive().is_primitive());
      // parity agrees with chi(-1)
      const auto v = chi.value(m - 1 + (m == 1));
      CHECK(chi.is_even() == (v->order == 1));
      if (chi.is_primitive()) ++primitive;
      // conductor is the smallest d with chi trivial on 1 + dZ
      for (u64 d : divisors(m)) {
        if (d >= chi.conductor()) break;
        bool trivial = true;
        for (u64 a = 1 % d; a < m; a += d) {
          if (chi.exponent(a) > 0) trivial = false;
        }
        CHECK_FALSE(trivial);
      }
    }
    if (m % 4 != 2) CHECK(primitive > 0);
  }
}

TEST_CASE("group law", "[characters][property]") {
  std::mt19937_64 rng(7);
  for (u64 m : {7u, 15u, 16u, 36u, 77u}) {
    const auto chars = DirichletCharacter::all(UnitGroup(m));
    for (int trial = 0; trial < 20; ++trial) {
      const auto& a = chars[rng() % chars.size()];
      const auto& b = chars[rng() % chars.size()];
      const auto ab = a * b;
      for (u64 x = 0; x < m; ++x) {
        const auto va = a.value(x);
        const auto vb = b.value(x);
        const auto vab = ab.value(x);
        if (!va) {
          CHECK_FALSE(vab);
          continue;
        }
        // exponents add over the common order
        const u64 n = std::lcm(va->order, vb->order);
        const auto expected = RootOfUnity::make(n, va->exponent * (n / va->order) + vb->exponent * (n / vb->order));
        CHECK(*vab == expected);
      }
      CHECK((a * a.conj()).is_principal());
      CHECK(a.pow(a.order()).is_principal());
    }
  }
}

TEST_CASE("primitive of induced character", "[characters]") {
  const auto chi = DirichletCharacter::from_table(4, 2, {-1, 0, -1, 1});
  const auto big = chi.induced(12);
  CHECK(big.conductor() == 4);
  CHECK_FALSE(big.is_primitive());
  CHECK(big.primitive() == chi);
  CHECK_THROWS_AS(chi.induced(6), Error);
}
