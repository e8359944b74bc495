#pragma once

// Families of towers used for the limit-exchange and continuity properties
// of beta. Both are given as tables of local degrees (e, f) per base prime;
// a prime of infinite degree in a tower is marked `infinite`.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "towerinv/checks.hpp"
#include "towerinv/error.hpp"
#include "towerinv/real.hpp"
#include "towerinv/towers.hpp"

namespace towerinv {

struct LocalDegree {
  u64 e = 1;
  u64 f = 1;
  bool infinite = false;

  static LocalDegree finite(u64 e, u64 f) { return {e, f, false}; }
  static LocalDegree unbounded() { return {0, 0, true}; }

  /// other refines this: every finite degree divides, infinite stays infinite.
  bool refined_by(const LocalDegree& other) const {
    if (infinite) return other.infinite;
    if (other.infinite) return true;
    return other.e % e == 0 && other.f % f == 0;
  }
  friend bool operator==(const LocalDegree&, const LocalDegree&) = default;
};

/// (1/(ef)) log(N^f / (N^f - 1)); zero for infinite degree.
inline Real beta_summand(const PrimePower& norm, const LocalDegree& d) {
  if (d.infinite) return 0;
  return norm.raised(d.f).log_ratio() / Real(d.e * d.f);
}

// ---------------------------------------------------------------------------
// Limit exchange: towers L_n/L and L_n^H/L for n = 0..N-1.

struct ExchangePrime {
  std::string label;
  PrimePower norm;  // in L
  u64 multiplicity = 1;
  std::vector<LocalDegree> full;   // in L_n / L
  std::vector<LocalDegree> fixed;  // in L_n^H / L
  LocalDegree full_limit;          // in L_inf / L
  LocalDegree fixed_limit;         // in L_inf^H / L
};

struct LimitExchangeFamily {
  std::string label = "limit-exchange";
  BaseField base;  // L
  bool totally_real = false;
  std::vector<ExchangePrime> primes;
  u64 inner_depth = 6;
};

struct LimitExchangeReport {
  CheckReport check;             // LHS_n against the limit difference
  std::vector<Real> beta_full;   // beta(L_n / L)
  std::vector<Real> beta_fixed;  // beta(L_n^H / L)
  bool monotone = true;
};

namespace detail {

inline u64 lcm_checked(u64 a, u64 b) {
  const u64 g = std::gcd(a, b);
  const u64 x = a / g;
  require(b == 0 || x <= UINT64_MAX / b, Errc::InvalidSpec, "degree overflow");
  return x * b;
}

/// Inner synthetic tower in which the finite primes sit at their (e, f) from
/// the first level and infinite primes get f = 2^(m+1) at inner level m.
inline SyntheticTowerSpec inner_tower(const std::string& label, const BaseField& base, bool totally_real,
                                      const std::vector<std::pair<const ExchangePrime*, LocalDegree>>& data,
                                      u64 depth) {
  SyntheticTowerSpec spec;
  spec.label = label;
  spec.base = base;
  spec.totally_real = totally_real;
  u64 core = totally_real ? 1 : 2;
  for (const auto& [p, d] : data) {
    if (!d.infinite) core = lcm_checked(core, d.e * d.f);
  }
  for (u64 m = 0; m < depth; ++m) spec.degrees.push_back(core << (m + 1));
  for (const auto& [p, d] : data) {
    SyntheticPrime sp;
    sp.label = p->label;
    sp.norm = p->norm;
    sp.multiplicity = p->multiplicity;
    sp.finite_degree = !d.infinite;
    for (u64 m = 0; m < depth; ++m) {
      const u64 e = d.infinite ? 1 : d.e;
      const u64 f = d.infinite ? (u64{1} << (m + 1)) : d.f;
      sp.e.push_back(e);
      sp.f.push_back(f);
      sp.beta.push_back(e % p->norm.prime == 0 ? 1 : 0);
    }
    spec.primes.push_back(std::move(sp));
  }
  spec.log_hr.kind = LogHrRule::Kind::Rhs;
  return spec;
}

/// lambda_rel / mu_rel at the top level of a tower.
inline Real lambda_mu_ratio(const TowerHandle& t) {
  const LevelData& lv = t.levels.back();
  require(lv.rel_genus > 0, Errc::HypothesisViolated, "inner tower of '" + t.label + "' is unramified (mu_rel infinite)");
  const Real mu_rel = Real(lv.index_over_base) / lv.rel_genus;
  const Real lambda_rel = (*lv.log_hr + Real(lv.r1) * ln2() + Real(lv.r2) * ln_two_pi()) / lv.rel_genus - 1;
  return lambda_rel / mu_rel;
}

}  // namespace detail

inline LimitExchangeReport check_limit_exchange(const LimitExchangeFamily& fam, const Real& tolerance) {
  require(!fam.primes.empty(), Errc::InvalidSpec, "family has no primes");
  const std::size_t n_steps = fam.primes.front().full.size();
  require(n_steps >= 1, Errc::InsufficientLevels, "family has no members");
  require(fam.inner_depth >= 2, Errc::InsufficientLevels, "inner towers need at least two levels");
  for (const auto& p : fam.primes) {
    const std::string who = "prime '" + p.label + "'";
    require(p.full.size() == n_steps && p.fixed.size() == n_steps, Errc::InvalidSpec, who + ": table length mismatch");
    for (std::size_t n = 0; n < n_steps; ++n) {
      // L_n^H is inside L_n
      require(p.fixed[n].refined_by(p.full[n]), Errc::InvalidSpec,
              who + ": degree in L_n^H does not divide the degree in L_n at n=" + std::to_string(n));
      if (n > 0) {
        // the summands must decrease along n: degrees only grow
        require(p.full[n - 1].refined_by(p.full[n]) && p.fixed[n - 1].refined_by(p.fixed[n]),
                Errc::MonotonicityViolated,
                who + ": local degree shrinks from n=" + std::to_string(n - 1) + " to n=" + std::to_string(n));
      }
    }
    require(p.full.back().refined_by(p.full_limit) && p.fixed.back().refined_by(p.fixed_limit),
            Errc::MonotonicityViolated, who + ": limit degree is not a refinement of the last member");
  }

  LimitExchangeReport out;
  out.check.name = "limit-exchange";
  out.check.threshold = tolerance;
  Real rhs = 0;
  for (const auto& p : fam.primes) {
    rhs += Real(p.multiplicity) * (beta_summand(p.norm, p.fixed_limit) - beta_summand(p.norm, p.full_limit));
  }
  for (std::size_t n = 0; n < n_steps; ++n) {
    std::vector<std::pair<const ExchangePrime*, LocalDegree>> full, fixed;
    Real bf = 0;
    Real bh = 0;
    for (const auto& p : fam.primes) {
      full.push_back({&p, p.full[n]});
      fixed.push_back({&p, p.fixed[n]});
      bf += Real(p.multiplicity) * beta_summand(p.norm, p.full[n]);
      bh += Real(p.multiplicity) * beta_summand(p.norm, p.fixed[n]);
    }
    const auto t_full = synthetic_tower(detail::inner_tower(fam.label + "/L_" + std::to_string(n), fam.base,
                                                            fam.totally_real, full, fam.inner_depth));
    const auto t_fixed = synthetic_tower(detail::inner_tower(fam.label + "/L_" + std::to_string(n) + "^H", fam.base,
                                                             fam.totally_real, fixed, fam.inner_depth));
    const Real lhs = detail::lambda_mu_ratio(t_fixed) - detail::lambda_mu_ratio(t_full);
    out.check.rows.push_back(detail::row(n, lhs, rhs));
    out.beta_full.push_back(bf);
    out.beta_fixed.push_back(bh);
    if (n > 0 && (bf > out.beta_full[n - 1] || bh > out.beta_fixed[n - 1])) out.monotone = false;
  }
  detail::close_final(out.check);
  require(out.monotone, Errc::MonotonicityViolated, "beta increases along the family");
  return out;
}

// ---------------------------------------------------------------------------
// Continuity: L_j / K increasing, towers L_{L_j} / L_j, union Lbar / K.

struct ContinuityPrime {
  std::string label;
  PrimePower norm;  // in K
  u64 multiplicity = 1;
  std::vector<u64> e_low;              // e_p(L_j / K)
  std::vector<u64> f_low;              // f_p(L_j / K)
  std::vector<u64> g_low;              // #S_p(L_j); optional (empty = derive)
  std::vector<LocalDegree> upper;      // a prime of L_j above p, in L_{L_j} / L_j
  LocalDegree limit;                   // p in Lbar / K
};

struct ContinuityFamily {
  std::string label = "continuity";
  std::vector<u64> degrees;  // [L_j : K]
  std::vector<ContinuityPrime> primes;
};

inline CheckReport check_beta_continuity(const ContinuityFamily& fam, const Real& tolerance) {
  const std::size_t n_steps = fam.degrees.size();
  require(n_steps >= 1, Errc::InsufficientLevels, "family has no members");
  for (std::size_t j = 1; j < n_steps; ++j) {
    require(fam.degrees[j] % fam.degrees[j - 1] == 0, Errc::InvalidSpec, "the fields L_j must increase");
  }
  for (const auto& p : fam.primes) {
    const std::string who = "prime '" + p.label + "'";
    require(p.e_low.size() == n_steps && p.f_low.size() == n_steps && p.upper.size() == n_steps &&
                (p.g_low.empty() || p.g_low.size() == n_steps),
            Errc::InvalidSpec, who + ": table length mismatch");
    for (std::size_t j = 0; j < n_steps; ++j) {
      const u64 ef = p.e_low[j] * p.f_low[j];
      require(ef >= 1 && fam.degrees[j] % ef == 0, Errc::TransitivityViolated,
              who + ": e*f does not divide [L:K] at j=" + std::to_string(j));
      if (!p.g_low.empty()) {
        require(p.g_low[j] * ef == fam.degrees[j], Errc::TransitivityViolated,
                who + ": #S_p(L) != [L:K]/(e f) at j=" + std::to_string(j));
      }
      // e_p(L_L / K) = e_p(L / K) e_p(L_L / L), likewise f; must divide the union's degree
      const LocalDegree total = p.upper[j].infinite
                                    ? LocalDegree::unbounded()
                                    : LocalDegree::finite(p.e_low[j] * p.upper[j].e, p.f_low[j] * p.upper[j].f);
      require(total.refined_by(p.limit), Errc::TransitivityViolated,
              who + ": degree in L_L/K does not divide the degree in the union at j=" + std::to_string(j));
      if (j > 0) {
        require(p.e_low[j] % p.e_low[j - 1] == 0 && p.f_low[j] % p.f_low[j - 1] == 0, Errc::TransitivityViolated,
                who + ": degrees in L_j/K must grow with j");
      }
    }
  }

  CheckReport out;
  out.name = "beta-continuity";
  out.threshold = tolerance;
  Real rhs = 0;
  for (const auto& p : fam.primes) rhs += Real(p.multiplicity) * beta_summand(p.norm, p.limit);
  for (std::size_t j = 0; j < n_steps; ++j) {
    // brute force over the primes of L_j: #S_p(L_j) copies of a prime of norm Np^{f(L/K)}
    Real sum = 0;
    for (const auto& p : fam.primes) {
      const u64 count = p.multiplicity * fam.degrees[j] / (p.e_low[j] * p.f_low[j]);
      const PrimePower norm_l = p.norm.raised(p.f_low[j]);
      const Real term = beta_summand(norm_l, p.upper[j]);
      for (u64 k = 0; k < count; ++k) sum += term;
    }
    out.rows.push_back(detail::row(j, sum / Real(fam.degrees[j]), rhs));
  }
  detail::close_final(out);
  return out;
}

}  // namespace towerinv
