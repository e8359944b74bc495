#include <catch_amalgamated.hpp>

#include <functional>

#include "support/helpers.hpp"
#include "towerinv/generators.hpp"
#include "towerinv/reconstruct.hpp"

using namespace towerinv;
using boost::multiprecision::log;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Internal;
}

// U over {q0, q1}, with separating subgroups A (only q0), B (only q1), trivial 1.
SubgroupLattice two_prime_lattice(bool q1_in_s = false) {
  SubgroupLattice::Meet meet{{{"A", "B"}, "1"}, {{"A", "1"}, "1"}, {{"B", "1"}, "1"}};
  return SubgroupLattice::make({"U", "A", "B", "1"}, "U", meet,
                               {{"q0", false, {"U", "A"}}, {"q1", q1_in_s, {"U", "B"}}});
}

// t^f for small arguments, exactly.
u64 power(u64 t, u64 f) {
  u64 x = 1;
  for (u64 i = 0; i < f; ++i) x *= t;
  return x;
}

}  // namespace

TEST_CASE("z counts", "[reconstruct]") {
  const auto l = two_prime_lattice();
  CHECK(z_count(l, "U") == 2);
  CHECK(z_count(l, "A") == 1);
  CHECK(z_count(l, "1") == 0);
  CHECK(z_count(two_prime_lattice(true), "U") == 1);
  CHECK(code_of([&] { z_count(l, "V"); }) == Errc::UnknownSubgroup);
}

TEST_CASE("criterion 1", "[reconstruct]") {
  const auto l = two_prime_lattice();
  const auto top = criterion1(l, "U");
  CHECK(top.z_exceeds_one);
  CHECK(top.witness_verdict);
  REQUIRE(top.witness.has_value());
  CHECK(top.witness->first == "A");
  CHECK(top.witness->second == "B");

  const auto a = criterion1(l, "A");
  CHECK_FALSE(a.z_exceeds_one);
  CHECK_FALSE(a.witness_verdict);
  CHECK_FALSE(a.z_is_zero);
  CHECK(criterion1(l, "1").z_is_zero);

  // without separating subgroups the two verdicts cannot agree
  const auto bare = SubgroupLattice::make({"U", "1"}, "U", {{{"U", "1"}, "1"}},
                                          {{"q0", false, {"U"}}, {"q1", false, {"U"}}});
  CHECK(code_of([&] { criterion1(bare, "U"); }) == Errc::InconsistentLattice);
}

TEST_CASE("lattice validation", "[reconstruct]") {
  SubgroupLattice::Meet meet{{{"A", "B"}, "1"}, {{"A", "1"}, "1"}, {{"B", "1"}, "1"}};
  // lying under A but not under U
  CHECK(code_of([&] { SubgroupLattice::make({"U", "A", "B", "1"}, "U", meet, {{"q", false, {"A"}}}); }) ==
        Errc::InvalidSpec);
  // lying under A and B but not under their intersection
  CHECK(code_of([&] {
          SubgroupLattice::make({"U", "A", "B", "1"}, "U", meet, {{"q", false, {"U", "A", "B"}}});
        }) == Errc::InvalidSpec);
  // missing intersection
  CHECK(code_of([] { SubgroupLattice::make({"U", "A", "B"}, "U", {}, {}); }) == Errc::InvalidSpec);
  CHECK(code_of([] { SubgroupLattice::make({"U"}, "V", {}, {}); }) == Errc::InvalidSpec);
  CHECK(code_of([&] { SubgroupLattice::make({"U", "A", "B", "1"}, "U", meet, {{"q", false, {"X"}}}); }) ==
        Errc::UnknownSubgroup);
}

TEST_CASE("criterion 1 on seeded lattices", "[reconstruct][property]") {
  gen::Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto l = gen::lattice(rng);
    for (std::size_t h = 0; h < l.labels().size(); ++h) {
      const auto r = criterion1(l, l.labels()[h]);
      CHECK(r.witness_verdict == r.z_exceeds_one);
      // z is monotone along inclusion
      for (std::size_t k = 0; k < l.labels().size(); ++k) {
        if (l.leq(h, k)) CHECK(l.z(h) <= l.z(k));
      }
    }
  }
}

TEST_CASE("classify_behavior", "[reconstruct]") {
  ZTowerDatum constant;
  for (int i = 0; i < 5; ++i) constant.levels.push_back({"U" + std::to_string(i), 1, ln2()});
  const auto b = classify_behavior(constant, Real("1e-12"));
  CHECK(b.has_behavior);
  CHECK(b.c == ln2());

  ZTowerDatum decaying;
  for (u64 i = 0; i < 5; ++i) decaying.levels.push_back({"U" + std::to_string(i), u64{1} << i, norm_beta(2, u64{1} << i)});
  CHECK_FALSE(classify_behavior(decaying, Real("1e-12")).has_behavior);

  // only level 0 differs: still eventually constant
  auto late = constant;
  late.levels[0].beta = 1;
  CHECK(classify_behavior(late, Real("1e-12")).has_behavior);

  const auto t4 = ztower_from_truth(4, 1, 4);
  CHECK_NOTHROW(validate_ztower(t4));
  const auto c4 = classify_behavior(t4, Real("1e-12"));
  CHECK(c4.has_behavior);
  CHECK(th::close(c4.c, log(Real(4) / 3), exact_tolerance()));

  auto wrong = t4;
  wrong.levels[2].beta = ln2();
  CHECK(code_of([&] { validate_ztower(wrong); }) == Errc::InvalidSpec);
  ZTowerDatum single;
  single.levels.push_back({"U0", 1, ln2()});
  CHECK(code_of([&] { classify_behavior(single, Real("1e-12")); }) == Errc::InsufficientLevels);
}

TEST_CASE("norm_from_c", "[reconstruct]") {
  const auto two = norm_from_c(ln2());
  CHECK(two.t == 2);
  CHECK(two.f == 1);
  const auto nine = norm_from_c(log(Real(9) / 8));
  CHECK(nine.t == 9);
  CHECK(nine.f == 1);
  CHECK(nine.norm == PrimePower{3, 2});
  const auto half = norm_from_c(log(Real(4) / 3) / 2);
  CHECK(half.t == 2);
  CHECK(half.f == 2);

  // ln(7/6) corresponds to 7; ln(6/5) to 6, which is no prime power
  CHECK(norm_from_c(log(Real(7) / 6)).t == 7);
  CHECK(code_of([] { norm_from_c(log(Real(6) / 5)); }) == Errc::NoPrimePowerMatch);
  CHECK(code_of([] { norm_from_c(Real(0)); }) == Errc::InvalidArgument);
  // a loose tolerance catches neighbours
  CHECK(code_of([] { norm_from_c(log(Real(1000) / 999), Real("1e-2")); }) == Errc::AmbiguousMatch);
}

TEST_CASE("norm_from_c agrees with a brute-force grid", "[reconstruct][oracle]") {
  // oracle: scan every (t, f) with t <= 64, f <= 6 in long double
  for (u64 t = 2; t <= 64; ++t) {
    if (!as_prime_power(t)) continue;
    for (u64 f = 1; f <= 6; ++f) {
      const Real c = norm_beta(t, f);
      const long double cd = static_cast<long double>(c);
      u64 best_t = 0;
      u64 best_f = 0;
      long double best = 1;
      for (u64 t2 = 2; t2 <= 64; ++t2) {
        if (!as_prime_power(t2)) continue;
        for (u64 f2 = 1; f2 <= 6; ++f2) {
          const long double x = static_cast<long double>(power(t2, f2));
          const long double v = std::log(x / (x - 1)) / static_cast<long double>(f2);
          if (std::fabs(v - cd) / cd < best) {
            best = std::fabs(v - cd) / cd;
            best_t = t2;
            best_f = f2;
          }
        }
      }
      INFO("t = " << t << " f = " << f);
      CHECK(best_t == t);
      CHECK(best_f == f);
      const auto m = norm_from_c(classify_behavior(ztower_from_truth(t, f, 4), Real("1e-12")).c);
      CHECK(m.t == t);
      CHECK(m.f == f);
      CHECK(m.norm.value() == BigInt(t));
    }
  }
}

TEST_CASE("c_equals_one_search", "[reconstruct]") {
  // t = 2, f = f' = 1, c = 2: 2^1 * 1 = 2 against 2^2 - 1 = 3
  CHECK(c_equals_one_search(2, 2, 2).empty());
  CHECK(c_equals_one_search(64, 6, 6).empty());
  CHECK(code_of([] { c_equals_one_search(1, 6, 6); }) == Errc::InvalidArgument);
  CHECK(code_of([] { c_equals_one_search(64, 6, 1); }) == Errc::InvalidArgument);
}
