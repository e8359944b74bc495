#include <catch_amalgamated.hpp>

#include "support/helpers.hpp"
#include "support/poly_oracle.hpp"
#include "towerinv/fields.hpp"

using namespace towerinv;

namespace {

struct FieldCase {
  AbelianField field;
  oracle_poly::Poly minpoly;  // monogenic: disc(minpoly) = D_K
};

std::vector<FieldCase> corpus() {
  return {
      {th::gaussian(), {1, 0, 1}},
      {th::eisenstein(), {1, 1, 1}},
      {th::sqrt5(), {-1, -1, 1}},
      {th::sqrt2(), {-2, 0, 1}},
      {th::zeta5(), {1, 1, 1, 1, 1}},
      {cyclotomic_field(8), {1, 0, 0, 0, 1}},
      {cyclotomic_field(12), {1, 0, -1, 0, 1}},
      {real_subfield(cyclotomic_field(7)), {-1, -2, 1, 1}},
      {real_subfield(cyclotomic_field(9)), {1, -3, 0, 1}},
      {cyclotomic_field(7), {1, 1, 1, 1, 1, 1, 1}},
  };
}

}  // namespace

TEST_CASE("Q", "[fields]") {
  const auto q = rationals();
  CHECK(q.degree() == 1);
  CHECK(q.abs_disc() == 1);
  CHECK(q.genus() == 0);
  CHECK(q.r1() == 1);
  CHECK(q.r2() == 0);
  CHECK(roots_of_unity_count(q) == 2);
}

TEST_CASE("Q(i) and Q(zeta5)", "[fields]") {
  const auto chi = DirichletCharacter::from_table(4, 2, {-1, 0, -1, 1});
  const auto k = build_abelian_field(4, {chi}, "Q(i)");
  CHECK(k.degree() == 2);
  CHECK(k.abs_disc() == 4);
  CHECK(k.r1() == 0);
  CHECK(k.r2() == 1);
  CHECK(k == th::gaussian());

  const auto z5 = th::zeta5();
  CHECK(z5.degree() == 4);
  CHECK(z5.abs_disc() == 125);
  CHECK(z5.r2() == 2);
}

TEST_CASE("discriminant agrees with the resultant oracle", "[fields][oracle]") {
  for (const auto& [field, poly] : corpus()) {
    INFO(field.label());
    const auto d = oracle_poly::discriminant(poly);
    CHECK(abs(d) == field.abs_disc());
    CHECK(field.degree() == poly.size() - 1);
    // sign of the discriminant is (-1)^r2
    CHECK((d < 0) == (field.r2() % 2 == 1));
  }
}

TEST_CASE("relative genus", "[fields]") {
  const Real tol = exact_tolerance();
  const auto i = th::gaussian();
  CHECK(relative_genus(i, i) == 0);
  CHECK(th::close(relative_genus(i, rationals()), ln(4) / 2, tol));
  CHECK(th::close(relative_genus(th::zeta5(), th::sqrt5()), ln(5) / 2, tol));
  CHECK_THROWS_MATCHES(relative_genus(th::sqrt5(), th::gaussian()), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::NotASubfield; }));
}

TEST_CASE("genus bridge on nested chains", "[fields][property]") {
  const Real tol = exact_tolerance();
  std::vector<std::pair<AbelianField, AbelianField>> chains = {
      {cyclotomic_field(5), th::sqrt5()},
      {cyclotomic_field(8), th::sqrt2()},
      {cyclotomic_field(8), th::gaussian()},
      {cyclotomic_field(24), cyclotomic_field(8)},
      {cyclotomic_field(27), cyclotomic_field(9)},
      {cyclotomic_field(45), real_subfield(cyclotomic_field(9))},
      {cyclotomic_field(36), th::eisenstein()},
  };
  for (const auto& [L, K] : chains) {
    INFO(L.label() << " / " << K.label());
    const u64 n = relative_degree(L, K);
    const Real bridge = Real(n) * K.genus() + relative_genus(L, K);
    CHECK(th::close(L.genus(), bridge, tol));
    CHECK(L.genus() >= Real(n) * K.genus());
  }
}

TEST_CASE("roots of unity", "[fields]") {
  CHECK(roots_of_unity_count(th::gaussian()) == 4);
  CHECK(roots_of_unity_count(th::sqrt5()) == 2);
  CHECK(roots_of_unity_count(th::eisenstein()) == 6);
  CHECK(roots_of_unity_count(th::zeta5()) == 10);
  CHECK(roots_of_unity_count(cyclotomic_field(8)) == 8);
  CHECK(roots_of_unity_count(cyclotomic_field(12)) == 12);
  CHECK(roots_of_unity_count(cyclotomic_field(9)) == 18);
  CHECK(roots_of_unity_count(real_subfield(cyclotomic_field(13))) == 2);
}

TEST_CASE("subfield lattice of Q(zeta_n)", "[fields][property]") {
  for (u64 n : {5u, 7u, 8u, 9u, 12u, 15u, 16u, 21u}) {
    const auto z = cyclotomic_field(n);
    INFO("n = " << n);
    CHECK(z.degree() == totient(n));
    CHECK(z.conductor() == (n % 4 == 2 ? n / 2 : n));
    for (u64 k : divisors(z.degree())) {
      // subgroup of characters of order dividing k exists when the group has exponent divisible by k
      const auto sub = subfield_where(z, [k](const DirichletCharacter& chi) { return k % chi.order() == 0; });
      CHECK(sub.is_subfield_of(z));
      CHECK(z.degree() % sub.degree() == 0);
      // conductor-discriminant: |D_K| divides |D_L|^{1/[L:K]} in the sense of the genus bridge
      CHECK(relative_genus(z, sub) >= 0);
    }
  }
}
