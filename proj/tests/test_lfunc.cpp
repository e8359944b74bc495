#include <catch_amalgamated.hpp>

#include <cmath>

#include "support/helpers.hpp"
#include "towerinv/lfunc.hpp"
#include "towerinv/oracles.hpp"

using namespace towerinv;

namespace {

DirichletCharacter quadratic(u64 p) {
  const auto field = th::quadratic_in_zeta(p);
  for (const auto& chi : field.characters()) {
    if (!chi.is_principal()) return chi;
  }
  throw std::logic_error("no quadratic character");
}

/// sum_{n <= N} chi(n)/n in long double, and the tail bound 2 max|S(x)| / (N+1)
/// where S is the character sum (bounded by m/2 for a non-principal character).
std::pair<long double, long double> series(const DirichletCharacter& chi, u64 terms) {
  const u64 m = chi.modulus();
  long double re = 0;
  long double im = 0;
  for (u64 n = 1; n <= terms; ++n) {
    const i64 e = chi.exponent(n);
    if (e == DirichletCharacter::kZero) continue;
    const long double theta = 2.0L * 3.14159265358979323846264338327950288L * static_cast<long double>(e) /
                              static_cast<long double>(chi.order());
    re += std::cos(theta) / static_cast<long double>(n);
    im += std::sin(theta) / static_cast<long double>(n);
  }
  return {std::sqrt(re * re + im * im), static_cast<long double>(m) / static_cast<long double>(terms + 1)};
}

}  // namespace

TEST_CASE("L(1, chi_-4) against the Leibniz series", "[lfunc][oracle]") {
  const auto chi = DirichletCharacter::from_table(4, 2, {-1, 0, -1, 1});
  const auto v = l_one(chi);
  CHECK(th::close(v.value, pi() / 4, exact_tolerance()));
  // alternating series: the error is below the first omitted term
  long double s = 0;
  const u64 terms = 200000;
  for (u64 k = 0; k < terms; ++k) s += (k % 2 ? -1.0L : 1.0L) / static_cast<long double>(2 * k + 1);
  CHECK(std::abs(static_cast<long double>(v.value) - s) <= 1.0L / static_cast<long double>(2 * terms + 1));
  CHECK(static_cast<double>(v.value) == Catch::Approx(0.785398163).epsilon(1e-9));
}

TEST_CASE("quadratic L-values against direct series", "[lfunc][oracle]") {
  const auto chi5 = quadratic(5);
  CHECK(chi5.is_even());
  const auto v5 = l_one(chi5);
  const Real phi = (1 + boost::multiprecision::sqrt(Real(5))) / 2;
  CHECK(th::close(v5.value, 2 / boost::multiprecision::sqrt(Real(5)) * boost::multiprecision::log(phi), exact_tolerance()));
  const auto [s5, t5] = series(chi5, 1000000);
  CHECK(std::abs(static_cast<long double>(v5.value) - s5) <= t5);
  CHECK(static_cast<double>(v5.value) == Catch::Approx(0.430409).epsilon(1e-6));

  const auto chi3 = quadratic(3);
  CHECK(chi3.is_odd());
  const auto v3 = l_one(chi3);
  CHECK(th::close(v3.value, pi() / (3 * boost::multiprecision::sqrt(Real(3))), exact_tolerance()));
  const auto [s3, t3] = series(chi3, 1000000);
  CHECK(std::abs(static_cast<long double>(v3.value) - s3) <= t3);
  CHECK(static_cast<double>(v3.value) == Catch::Approx(0.604600).epsilon(1e-6));
}

TEST_CASE("closed forms agree with series and are conjugation symmetric", "[lfunc][property]") {
  for (u64 m : {5u, 7u, 8u, 9u, 11u, 13u, 15u, 16u, 21u, 27u, 40u}) {
    const auto field = cyclotomic_field(m);
    for (const auto& chi : field.characters()) {
      if (chi.is_principal()) continue;
      INFO("conductor " << chi.modulus());
      const auto v = l_one(chi);
      CHECK(v.value > 0);
      CHECK(std::abs(static_cast<double>(v.value) - v.series_partial) <= v.series_tail_bound);
      const auto [s, t] = series(chi, 200 * chi.modulus());
      CHECK(std::abs(static_cast<long double>(v.value) - s) <= t);
      CHECK(th::close(l_one(chi.conj()).value, v.value, exact_tolerance()));
    }
  }
}

TEST_CASE("principal character is rejected", "[lfunc]") {
  CHECK_THROWS_MATCHES(l_one(DirichletCharacter().induced(5)), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::PrincipalCharacter; }));
}

TEST_CASE("log(hR) against form and unit oracles", "[lfunc][oracle]") {
  const Real tol("1e-20");
  CHECK(log_hr(rationals()).log_hr == 0);
  CHECK(boost::multiprecision::abs(log_hr(th::gaussian()).log_hr) < tol);
  CHECK(boost::multiprecision::abs(log_hr(th::eisenstein()).log_hr) < tol);
  CHECK(oracle::imaginary_quadratic_class_number(-4) == 1);
  CHECK(oracle::imaginary_quadratic_class_number(-3) == 1);

  const Real lnphi = oracle::fundamental_unit(5).log();
  CHECK(th::close(log_hr(th::sqrt5()).log_hr, boost::multiprecision::log(lnphi), tol));
  CHECK(static_cast<double>(log_hr(th::sqrt5()).log_hr) == Catch::Approx(-0.731).margin(1e-3));

  // imaginary quadratic fields with h > 1
  for (u64 p : {23u, 31u, 47u, 71u, 103u}) {
    const auto K = th::quadratic_in_zeta(p);
    REQUIRE_FALSE(K.is_totally_real());
    const u64 h = oracle::imaginary_quadratic_class_number(-static_cast<i64>(p));
    INFO("p = " << p << " h = " << h);
    CHECK(th::close(log_hr(K).log_hr, ln(h), tol));
  }
  // real quadratic fields
  for (u64 p : {13u, 17u, 29u, 229u}) {
    const auto K = th::quadratic_in_zeta(p);
    REQUIRE(K.is_totally_real());
    const u64 h = oracle::real_quadratic_class_number(static_cast<i64>(p));
    const Real reg = oracle::fundamental_unit(static_cast<i64>(p)).log();
    INFO("p = " << p << " h = " << h);
    CHECK(th::close(log_hr(K).log_hr, ln(h) + boost::multiprecision::log(reg), tol));
  }
  {
    const u64 h = oracle::real_quadratic_class_number(8);
    const Real reg = oracle::fundamental_unit(2).log();
    CHECK(th::close(log_hr(th::sqrt2()).log_hr, ln(h) + boost::multiprecision::log(reg), tol));
  }
}

TEST_CASE("Q(zeta5) against the Bernoulli and unit oracles", "[lfunc][oracle]") {
  const auto K = th::zeta5();
  const u64 w = 10;
  const BigInt hminus = oracle::minus_class_number(K, w, 1);
  const u64 hplus = oracle::real_quadratic_class_number(5);
  CHECK(hminus == 1);
  CHECK(hplus == 1);
  // R_K = 2^{rank} R^+ / Q with rank 1, Q = 1
  const Real reg = 2 * oracle::fundamental_unit(5).log();
  const Real expected = boost::multiprecision::log(Real(hminus) * Real(hplus) * reg);
  CHECK(th::close(log_hr(K).log_hr, expected, Real("1e-20")));
  CHECK(log_hr(K).log_hr < 0);
  CHECK(th::close(bs_numerator(K), expected / (ln(125) / 2), Real("1e-20")));
}

TEST_CASE("bs_numerator", "[lfunc]") {
  CHECK(boost::multiprecision::abs(bs_numerator(th::gaussian())) < Real("1e-30"));
  CHECK(boost::multiprecision::abs(bs_numerator(th::eisenstein())) < Real("1e-30"));
  CHECK_THROWS_MATCHES(bs_numerator(rationals()), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::ZeroGenus; }));
}

TEST_CASE("precision escalation keeps values stable", "[lfunc]") {
  const auto chi = quadratic(13);
  Real at128, at256;
  {
    PrecisionScope p(128);
    at128 = l_one(chi).value;
  }
  {
    PrecisionScope p(256);
    at256 = l_one(chi).value;
  }
  CHECK(th::close(at128, at256, Real("1e-35")));
}
