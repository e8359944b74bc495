#include <catch_amalgamated.hpp>

#include <functional>

#include "support/helpers.hpp"
#include "towerinv/families.hpp"
#include "towerinv/generators.hpp"

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

LocalDegree fin(u64 e, u64 f) { return LocalDegree::finite(e, f); }

const Real kTol("1e-9");

// (1/(ef)) log(q^f/(q^f-1)) computed from the integer q^f directly.
Real summand(u64 q, u64 e, u64 f) {
  const Real x = Real(ipow(q, f));
  return log(x / (x - 1)) / Real(e * f);
}

}  // namespace

TEST_CASE("beta summands", "[families]") {
  CHECK(th::close(beta_summand({2, 1}, fin(1, 1)), ln2(), exact_tolerance()));
  CHECK(th::close(beta_summand({3, 1}, fin(2, 2)), summand(3, 2, 2), exact_tolerance()));
  CHECK(beta_summand({3, 1}, LocalDegree::unbounded()) == 0);
  // refinement never increases a summand
  for (u64 q : {2, 3, 4, 5, 7, 9}) {
    const auto pp = *as_prime_power(q);
    for (u64 e = 1; e <= 4; ++e) {
      for (u64 f = 1; f <= 4; ++f) {
        CHECK(beta_summand(pp, fin(e, f)) > 0);
        CHECK(beta_summand(pp, fin(2 * e, f)) < beta_summand(pp, fin(e, f)));
        CHECK(beta_summand(pp, fin(e, 2 * f)) < beta_summand(pp, fin(e, f)));
      }
    }
  }
}

TEST_CASE("limit exchange: stabilizing at n = 2", "[families]") {
  LimitExchangeFamily fam;
  fam.base = {"Q(i)", 2, 0, 1, 4};
  ExchangePrime p;
  p.label = "3";
  p.norm = {3, 1};
  p.fixed = {fin(2, 1), fin(2, 1), fin(2, 1), fin(2, 1)};
  p.full = {fin(2, 1), fin(2, 2), fin(4, 2), fin(4, 2)};
  p.fixed_limit = fin(2, 1);
  p.full_limit = fin(4, 2);
  fam.primes = {p};
  const auto r = check_limit_exchange(fam, kTol);
  CHECK(r.check.pass);
  CHECK(r.monotone);
  CHECK(r.check.rows[2].gap < Real("1e-25"));
  CHECK(r.check.rows[3].gap < Real("1e-25"));
  CHECK(th::close(r.check.rows[2].lhs, r.check.rows[3].lhs, Real("1e-25")));
  CHECK(th::close(r.check.rows[3].rhs, summand(3, 2, 1) - summand(3, 4, 2), exact_tolerance()));
}

TEST_CASE("limit exchange: L_inf has no finite-degree prime", "[families]") {
  LimitExchangeFamily fam;
  fam.base = {"Q", 1, 1, 0, 1};
  ExchangePrime ram;
  ram.label = "5";
  ram.norm = {5, 1};
  ram.fixed = std::vector<LocalDegree>(5, fin(2, 1));
  for (u64 n = 0; n < 5; ++n) ram.full.push_back(fin(2, u64{2} << n));
  ram.fixed_limit = fin(2, 1);
  ram.full_limit = LocalDegree::unbounded();
  ExchangePrime two;
  two.label = "2";
  two.norm = {2, 1};
  two.fixed = std::vector<LocalDegree>(5, fin(1, 1));
  for (u64 n = 0; n < 5; ++n) two.full.push_back(fin(1, u64{2} << n));
  two.fixed_limit = fin(1, 1);
  two.full_limit = LocalDegree::unbounded();
  fam.primes = {ram, two};
  const auto r = check_limit_exchange(fam, kTol);
  CHECK(th::close(r.check.rows.back().rhs, summand(5, 2, 1) + ln2(), exact_tolerance()));
  // the L_n side still carries sum_n 2^-(n+1)-type terms; they shrink with n
  CHECK(r.check.decreasing);
  CHECK(r.check.final_gap > 0);
  CHECK(r.check.final_gap < Real("1e-2"));
}

TEST_CASE("limit exchange: seeded families", "[families][property]") {
  gen::Rng rng(2024);
  for (int seed = 0; seed < 20; ++seed) {
    const auto fam = gen::exchange_family(rng);
    INFO("family " << seed);
    const auto r = check_limit_exchange(fam, kTol);
    CHECK(r.check.pass);
    CHECK(r.monotone);
    // LHS_n is beta(L_n^H/L) - beta(L_n/L) up to the residue of the f = 2^(m+1) primes
    for (std::size_t n = 0; n < r.check.rows.size(); ++n) {
      CHECK(boost::multiprecision::abs(r.check.rows[n].lhs - (r.beta_fixed[n] - r.beta_full[n])) < Real("1e-15"));
    }
  }
}

TEST_CASE("limit exchange: invalid families", "[families]") {
  LimitExchangeFamily fam;
  fam.base = {"Q(i)", 2, 0, 1, 4};
  ExchangePrime p;
  p.label = "3";
  p.norm = {3, 1};
  p.fixed = {fin(2, 1), fin(2, 1)};
  p.full = {fin(4, 1), fin(2, 1)};
  p.fixed_limit = fin(2, 1);
  p.full_limit = fin(2, 1);
  fam.primes = {p};
  CHECK(code_of([&] { check_limit_exchange(fam, kTol); }) == Errc::MonotonicityViolated);
  fam.primes[0].full = {fin(2, 1), fin(4, 1)};
  fam.primes[0].full_limit = fin(2, 1);
  CHECK(code_of([&] { check_limit_exchange(fam, kTol); }) == Errc::MonotonicityViolated);
  fam.primes[0].full = {fin(1, 1), fin(1, 1)};
  fam.primes[0].full_limit = fin(1, 1);
  CHECK(code_of([&] { check_limit_exchange(fam, kTol); }) == Errc::InvalidSpec);
}

TEST_CASE("beta continuity: constant family", "[families]") {
  ContinuityFamily fam;
  fam.degrees = {1};
  ContinuityPrime p;
  p.label = "2";
  p.norm = {2, 1};
  p.e_low = {1};
  p.f_low = {1};
  p.upper = {fin(2, 3)};
  p.limit = fin(2, 3);
  fam.primes = {p};
  const auto r = check_beta_continuity(fam, kTol);
  CHECK(r.pass);
  CHECK(r.rows.front().gap == 0);
}

TEST_CASE("beta continuity: two primes, doubling degrees", "[families]") {
  ContinuityFamily fam;
  fam.degrees = {1, 2, 4, 8, 16, 32};
  ContinuityPrime a;
  a.label = "3";
  a.norm = {3, 1};
  a.e_low = {1, 2, 2, 2, 2, 2};
  a.f_low = {1, 1, 2, 2, 2, 2};
  a.upper = {fin(1, 1), fin(1, 1), fin(1, 1), fin(1, 2), fin(1, 2), fin(1, 2)};
  a.limit = fin(2, 4);
  ContinuityPrime b;
  b.label = "4";
  b.norm = {2, 2};
  b.multiplicity = 2;
  b.e_low = {1, 1, 1, 1, 1, 1};
  b.f_low = {1, 1, 1, 1, 1, 1};
  b.upper = {fin(1, 1), fin(1, 1), fin(1, 1), fin(1, 1), fin(1, 1), fin(1, 1)};
  b.limit = fin(1, 1);
  fam.primes = {a, b};
  const auto r = check_beta_continuity(fam, kTol);
  CHECK(r.pass);
  CHECK(r.decreasing);
  CHECK(th::close(r.rows.back().rhs, summand(3, 2, 4) + 2 * summand(4, 1, 1), exact_tolerance()));
  CHECK(r.final_gap < Real("1e-25"));
}

TEST_CASE("beta continuity: union without finite-degree primes", "[families]") {
  ContinuityFamily fam;
  fam.degrees = {1, 2, 4};
  ContinuityPrime p;
  p.label = "5";
  p.norm = {5, 1};
  p.e_low = {1, 1, 1};
  p.f_low = {1, 2, 4};
  p.upper = {fin(1, 2), LocalDegree::unbounded(), LocalDegree::unbounded()};
  p.limit = LocalDegree::unbounded();
  fam.primes = {p};
  const auto r = check_beta_continuity(fam, kTol);
  CHECK(r.rows.back().rhs == 0);
  CHECK(r.rows.back().lhs == 0);
  CHECK(r.pass);
}

TEST_CASE("beta continuity: transitivity", "[families]") {
  ContinuityFamily fam;
  fam.degrees = {1, 2};
  ContinuityPrime p;
  p.label = "5";
  p.norm = {5, 1};
  p.e_low = {1, 2};
  p.f_low = {1, 2};
  p.upper = {fin(1, 1), fin(1, 1)};
  p.limit = fin(2, 2);
  fam.primes = {p};
  CHECK(code_of([&] { check_beta_continuity(fam, kTol); }) == Errc::TransitivityViolated);
  fam.primes[0].f_low = {1, 1};
  fam.primes[0].g_low = {1, 2};
  CHECK(code_of([&] { check_beta_continuity(fam, kTol); }) == Errc::TransitivityViolated);
  fam.primes[0].g_low = {1, 1};
  CHECK_NOTHROW(check_beta_continuity(fam, kTol));
  fam.primes[0].upper = {fin(1, 1), fin(1, 3)};
  CHECK(code_of([&] { check_beta_continuity(fam, kTol); }) == Errc::TransitivityViolated);
}

TEST_CASE("beta continuity: seeded families", "[families][property]") {
  gen::Rng rng(99);
  for (int seed = 0; seed < 20; ++seed) {
    const auto fam = gen::continuity_family(rng);
    INFO("family " << seed);
    const auto r = check_beta_continuity(fam, kTol);
    CHECK(r.pass);
  }
}
