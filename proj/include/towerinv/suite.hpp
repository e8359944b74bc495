#pragma once

// The acceptance suite: criteria 1-8 as functions of a seed, each producing a
// verdict and a deterministic JSON details block (no timings, fixed orders).

#include <functional>
#include <string>
#include <vector>

#include "towerinv/checks.hpp"
#include "towerinv/families.hpp"
#include "towerinv/generators.hpp"
#include "towerinv/io.hpp"
#include "towerinv/lfunc.hpp"
#include "towerinv/oracles.hpp"
#include "towerinv/reconstruct.hpp"

namespace towerinv::suite {

using io::ojson;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  ojson details = ojson::object();
};

struct Criterion {
  int id;
  std::string name;
  std::function<CriterionResult(u64 seed)> run;
};

namespace detail {

inline Real rel_error(const Real& a, const Real& b) {
  return boost::multiprecision::abs(a - b) / std::max(Real(1), Real(boost::multiprecision::abs(b)));
}

}  // namespace detail

/// logHR from L-values against h from forms and R from continued fractions.
inline CriterionResult class_number_formula(u64 /*seed*/) {
  CriterionResult r{1, "class-number-formula"};
  const Real tol("1e-20");
  struct Row {
    AbelianField K;
    Real expected;
    std::string oracle;
  };
  const Real unit5 = oracle::fundamental_unit(5).log();
  std::vector<Row> rows;
  rows.push_back({cyclotomic_field(4, "Q(i)"), ln(oracle::imaginary_quadratic_class_number(-4)), "forms"});
  rows.push_back({cyclotomic_field(3, "Q(sqrt-3)"), ln(oracle::imaginary_quadratic_class_number(-3)), "forms"});
  rows.push_back({real_subfield(cyclotomic_field(5), "Q(sqrt5)"),
                  ln(oracle::real_quadratic_class_number(5)) + boost::multiprecision::log(unit5), "forms+unit"});
  rows.push_back({real_subfield(cyclotomic_field(8), "Q(sqrt2)"),
                  ln(oracle::real_quadratic_class_number(8)) +
                      boost::multiprecision::log(oracle::fundamental_unit(2).log()),
                  "forms+unit"});
  {
    const auto Z5 = cyclotomic_field(5, "Q(zeta5)");
    const BigInt hminus = oracle::minus_class_number(Z5, 10, 1);
    const u64 hplus = oracle::real_quadratic_class_number(5);
    rows.push_back({Z5, boost::multiprecision::log(Real(hminus) * Real(hplus) * 2 * unit5), "bernoulli+unit"});
  }
  r.pass = true;
  ojson fields = ojson::array();
  for (const auto& row : rows) {
    const Real got = log_hr(row.K).log_hr;
    const Real err = detail::rel_error(got, row.expected);
    const bool ok = err < tol;
    r.pass = r.pass && ok;
    fields.push_back({{"field", row.K.label()}, {"logHR", io::fmt(got)}, {"oracle", io::fmt(row.expected)},
                      {"oracleKind", row.oracle}, {"relError", format_real(err, 6)}, {"pass", ok}});
  }
  r.details = {{"tolerance", "1e-20"}, {"fields", fields}};
  return r;
}

/// Wild exponents of seeded abelian pairs and the exact discriminant product.
inline CriterionResult disc_exactness(u64 seed) {
  CriterionResult r{2, "discriminant-exactness"};
  gen::Rng rng(seed + 2);
  u64 failures = 0;
  u64 wild = 0;
  u64 tame = 0;
  ojson bad = ojson::array();
  for (int i = 0; i < 50; ++i) {
    const auto [L, K] = gen::abelian_pair(rng);
    const auto prims = ramified_primes(L, K);
    bool ok = true;
    for (const auto& rp : prims) {
      const bool is_tame = rp.exponent.e % rp.exponent.prime != 0;
      (is_tame ? tame : wild) += 1;
      if (is_tame && rp.exponent.beta != 0) ok = false;
    }
    const auto res = disc_formula(relative_degree(L, K), prims, K.genus());
    BigInt expected = 1;
    for (const auto& [p, x] : relative_disc_exponents(L, K)) {
      expected *= boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(x));
    }
    if (res.value != expected) ok = false;
    if (!ok) {
      ++failures;
      bad.push_back({{"L", L.label()}, {"K", K.label()}});
    }
  }
  r.pass = failures == 0;
  r.details = {{"pairs", 50}, {"tamePrimes", tame}, {"wildPrimes", wild}, {"failures", failures}, {"failed", bad}};
  return r;
}

/// The tower corpus shared by the genus bridge.
inline std::vector<TowerHandle> bridge_corpus(u64 seed) {
  std::vector<TowerHandle> out;
  out.push_back(cyclotomic_tower(3, 4, 1, 0, kDefaultPrimeBound, kDefaultCyclotomicCap, false));
  out.push_back(cyclotomic_tower(5, 2, 1, 0, kDefaultPrimeBound, kDefaultCyclotomicCap, false));
  out.push_back(cyclotomic_tower(3, 4, 2, 1, kDefaultPrimeBound, kDefaultCyclotomicCap, false));
  out.push_back(abelian_tower("Q(i) in Q(zeta_4*3^k)", cyclotomic_field(4, "Q(i)"),
                              {cyclotomic_field(12), cyclotomic_field(36), cyclotomic_field(108)}, kDefaultPrimeBound,
                              false));
  gen::Rng rng(seed + 3);
  for (int i = 0; i < 5; ++i) out.push_back(synthetic_tower(gen::tame_tower(rng, 6, "tame-" + std::to_string(i))));
  return out;
}

inline CriterionResult genus_bridge(u64 seed) {
  CriterionResult r{3, "genus-bridge"};
  r.pass = true;
  ojson towers = ojson::array();
  for (const auto& t : bridge_corpus(seed)) {
    ojson checks = ojson::object();
    for (const auto& c : check_genus_bridge(t)) {
      r.pass = r.pass && c.pass;
      checks[c.name] = {{"pass", c.pass}, {"levels", c.rows.size()}};
    }
    towers.push_back({{"tower", t.label}, {"checks", checks}});
  }
  r.details = {{"tolerance", "2^-100"}, {"towers", towers}};
  return r;
}

/// The cyclotomic 3-tower at conductors 9, 27, 81, 243.
inline CriterionResult tvz_trend(u64 /*seed*/) {
  CriterionResult r{4, "tvz-trend"};
  const auto t = cyclotomic_tower(3, 5, 2, 0, kDefaultPrimeBound);
  const auto c = check_tvz(t, Real("0.5"));
  bool bs_ok = true;
  ojson levels = ojson::array();
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    const auto& row = c.rows[i];
    bs_ok = bs_ok && row.lhs > 0 && row.lhs < 2;
    levels.push_back({{"conductor", ipow(3, i + 2)}, {"degree", t.levels[i].degree}, {"bs", io::fmt(row.lhs)},
                      {"rhs", io::fmt(row.rhs)}, {"gap", io::fmt(row.gap)}});
  }
  r.pass = c.pass && c.decreasing && bs_ok;
  r.details = {{"primeBound", t.prime_bound}, {"threshold", "0.5"},     {"gapsDecreasing", c.decreasing},
               {"finalGap", io::fmt(c.final_gap)}, {"bsInRange", bs_ok}, {"levels", levels}};
  return r;
}

/// Relative identities on seeded tame synthetic towers.
inline CriterionResult synthetic_identities(u64 seed) {
  CriterionResult r{5, "synthetic-identities"};
  gen::Rng rng(seed + 5);
  const Real tol("1e-9");
  u64 failures = 0;
  Real worst_beta = 0;
  Real worst_psi = 0;
  ojson bad = ojson::array();
  for (int i = 0; i < 100; ++i) {
    const auto t = synthetic_tower(gen::tame_tower(rng, 6, "tame-" + std::to_string(i)));
    const auto rep = check_rel_identities(t, tol);
    for (const auto& c : rep.checks) {
      if (c.name == "lambda-beta") worst_beta = std::max(worst_beta, c.final_gap);
      if (c.name == "psi-beta") worst_psi = std::max(worst_psi, c.final_gap);
    }
    if (!rep.pass) {
      ++failures;
      bad.push_back(t.label);
    }
  }
  r.pass = failures == 0;
  r.details = {{"towers", 100},
               {"tolerance", "1e-9"},
               {"maxLambdaBetaGap", format_real(worst_beta, 6)},
               {"maxPsiBetaGap", format_real(worst_psi, 6)},
               {"failures", failures},
               {"failed", bad}};
  return r;
}

/// Limit exchange and beta continuity on seeded nested families.
inline CriterionResult nested_families(u64 seed) {
  CriterionResult r{6, "nested-families"};
  gen::Rng rng(seed + 6);
  const Real tol("1e-9");
  u64 exchange_fail = 0;
  u64 continuity_fail = 0;
  bool monotone = true;
  Real worst_exchange = 0;
  Real worst_continuity = 0;
  for (int i = 0; i < 20; ++i) {
    const auto rep = check_limit_exchange(gen::exchange_family(rng, 6, "exchange-" + std::to_string(i)), tol);
    monotone = monotone && rep.monotone;
    worst_exchange = std::max(worst_exchange, rep.check.final_gap);
    if (!rep.check.pass || !rep.monotone) ++exchange_fail;
  }
  for (int i = 0; i < 20; ++i) {
    const auto rep = check_beta_continuity(gen::continuity_family(rng, 6, "continuity-" + std::to_string(i)), tol);
    worst_continuity = std::max(worst_continuity, rep.final_gap);
    if (!rep.pass) ++continuity_fail;
  }
  r.pass = exchange_fail == 0 && continuity_fail == 0;
  r.details = {{"families", 40},
               {"tolerance", "1e-9"},
               {"betaMonotone", monotone},
               {"maxExchangeGap", format_real(worst_exchange, 6)},
               {"maxContinuityGap", format_real(worst_continuity, 6)},
               {"exchangeFailures", exchange_fail},
               {"continuityFailures", continuity_fail}};
  return r;
}

/// Recovering (t, f) from the constant C, and the empty c = 1 search.
inline CriterionResult norm_round_trip(u64 /*seed*/) {
  CriterionResult r{7, "norm-round-trip"};
  u64 cases = 0;
  u64 failures = 0;
  ojson bad = ojson::array();
  for (u64 t = 2; t <= 64; ++t) {
    if (!as_prime_power(t)) continue;
    for (u64 f = 1; f <= 6; ++f) {
      ++cases;
      bool ok = false;
      try {
        const auto b = classify_behavior(ztower_from_truth(t, f, 4), Real("1e-12"));
        if (b.has_behavior) {
          const auto m = norm_from_c(b.c);
          ok = m.t == t && m.f == f && m.norm.value() == BigInt(t);
        }
      } catch (const Error&) {
        ok = false;
      }
      if (!ok) {
        ++failures;
        bad.push_back({t, f});
      }
    }
  }
  const auto solutions = c_equals_one_search(64, 6, 6);
  r.pass = failures == 0 && solutions.empty();
  r.details = {{"cases", cases}, {"failures", failures}, {"failed", bad}, {"cEqualsOneSolutions", solutions.size()}};
  return r;
}

/// Direct z-count and witness verdicts on seeded lattices.
inline CriterionResult lattice_equivalence(u64 seed) {
  CriterionResult r{8, "lattice-equivalence"};
  gen::Rng rng(seed + 8);
  u64 subgroups = 0;
  u64 exceeding = 0;
  u64 disagreements = 0;
  for (int i = 0; i < 100; ++i) {
    const auto l = gen::lattice(rng);
    for (const auto& h : l.labels()) {
      ++subgroups;
      try {
        const auto c = criterion1(l, h);
        if (c.z_exceeds_one) ++exceeding;
      } catch (const Error& e) {
        if (e.code() != Errc::InconsistentLattice) throw;
        ++disagreements;
      }
    }
  }
  r.pass = disagreements == 0;
  r.details = {{"lattices", 100}, {"subgroups", subgroups}, {"zExceedsOne", exceeding}, {"disagreements", disagreements}};
  return r;
}

inline const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "class-number-formula", class_number_formula}, {2, "discriminant-exactness", disc_exactness},
      {3, "genus-bridge", genus_bridge},                 {4, "tvz-trend", tvz_trend},
      {5, "synthetic-identities", synthetic_identities}, {6, "nested-families", nested_families},
      {7, "norm-round-trip", norm_round_trip},           {8, "lattice-equivalence", lattice_equivalence},
  };
  return all;
}

inline ojson result_to_json(const CriterionResult& c) {
  return {{"id", c.id}, {"name", c.name}, {"verdict", c.pass ? "PASS" : "FAIL"}, {"details", c.details}};
}

struct SuiteReport {
  ojson json;
  bool pass = false;
};

/// Runs every criterion; an exception inside one criterion is its FAIL with the error recorded.
inline SuiteReport run_all(u64 seed) {
  SuiteReport out;
  out.pass = true;
  ojson results = ojson::array();
  for (const auto& c : criteria()) {
    CriterionResult res;
    try {
      res = c.run(seed);
    } catch (const Error& e) {
      res = {c.id, c.name, false, {{"error", std::string(to_string(e.code()))}, {"message", e.what()}}};
    }
    out.pass = out.pass && res.pass;
    results.push_back(result_to_json(res));
  }
  out.json = {{"schemaVersion", io::kSchemaVersion},
              {"type", "suiteReport"},
              {"seed", seed},
              {"precisionBits", current_precision_bits()},
              {"criteria", results},
              {"verdict", out.pass ? "PASS" : "FAIL"}};
  return out;
}

}  // namespace towerinv::suite
