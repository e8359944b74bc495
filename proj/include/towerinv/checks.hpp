#pragma once

// Identity checks on towers. Each report lists both sides per usable level
// and the verdict; the thresholds are caller supplied.

#include <optional>
#include <string>
#include <vector>

#include "towerinv/error.hpp"
#include "towerinv/estimate.hpp"
#include "towerinv/real.hpp"
#include "towerinv/towers.hpp"

namespace towerinv {

struct IdentityRow {
  u64 level = 0;
  Real lhs = 0;
  Real rhs = 0;
  Real gap = 0;
};

struct CheckReport {
  std::string name;
  std::vector<IdentityRow> rows;
  Real threshold = 0;
  Real final_gap = 0;
  bool decreasing = true;
  bool pass = false;
  std::vector<std::string> notes;
};

namespace detail {

inline IdentityRow row(u64 level, const Real& lhs, const Real& rhs) {
  return {level, lhs, rhs, boost::multiprecision::abs(lhs - rhs)};
}

/// Slack for "decreasing" comparisons of gaps that are exact up to rounding.
inline CheckReport named(std::string name) {
  CheckReport r;
  r.name = std::move(name);
  return r;
}

inline Real noise_floor() { return exact_tolerance() * 1024; }

/// pass = every gap below the threshold (relative to the right side when `relative`).
inline void close_all(CheckReport& r, bool relative) {
  r.pass = !r.rows.empty();
  for (const auto& row : r.rows) {
    const Real scale = relative ? std::max(Real(1), Real(boost::multiprecision::abs(row.rhs))) : Real(1);
    if (row.gap > r.threshold * scale) r.pass = false;
  }
  r.final_gap = r.rows.empty() ? Real(0) : r.rows.back().gap;
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    if (r.rows[i].gap > r.rows[i - 1].gap + noise_floor()) r.decreasing = false;
  }
}

/// pass = final gap below the threshold (limit identities).
inline void close_final(CheckReport& r) {
  r.final_gap = r.rows.empty() ? Real(0) : r.rows.back().gap;
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    if (r.rows[i].gap > r.rows[i - 1].gap + noise_floor()) r.decreasing = false;
  }
  r.pass = !r.rows.empty() && r.final_gap < r.threshold;
}

}  // namespace detail

/// BS_n against 1 + sum_q phi_q log(q/(q-1)) - phi_R log 2 - phi_C log 2pi.
/// Passes when the gap sequence is decreasing and its last term is below `threshold`.
inline CheckReport check_tvz(const TowerHandle& t, const Real& threshold, std::optional<u64> depth = std::nullopt) {
  CheckReport r;
  r.name = "tvz";
  r.threshold = threshold;
  const std::size_t d = detail::usable_depth(t, depth);
  for (std::size_t i = 0; i < d; ++i) {
    const auto& lv = t.levels[i];
    if (lv.genus == 0) continue;
    require(lv.log_hr.has_value(), Errc::InvalidArgument, "tower has no log(hR) values");
    r.rows.push_back(detail::row(lv.index, *lv.log_hr / lv.genus, tvz_rhs(lv)));
  }
  require(!r.rows.empty(), Errc::InsufficientLevels, "no level with positive genus");
  detail::close_final(r);
  r.pass = r.pass && r.decreasing;
  if (t.kind != TowerKind::Synthetic) {
    r.notes.push_back("Euler sum truncated at primes <= " + std::to_string(t.prime_bound));
  }
  if (!t.almost_normal) r.notes.push_back("tower not flagged almost normal; relation is conditional");
  return r;
}

/// g_n = [K_n:K] g_K + g_{n/K} and 1/mu_n = 1/mu_rel,n + g_K at every level,
/// relative tolerance exact_tolerance().
inline std::vector<CheckReport> check_genus_bridge(const TowerHandle& t) {
  CheckReport genus;
  genus.name = "genus-bridge";
  genus.threshold = exact_tolerance();
  CheckReport mu;
  mu.name = "mu-bridge";
  mu.threshold = exact_tolerance();
  const Real gk = t.base.genus();
  for (const auto& lv : t.levels) {
    const Real n(lv.index_over_base);
    genus.rows.push_back(detail::row(lv.index, lv.genus, n * gk + lv.rel_genus));
    if (lv.rel_genus == 0) continue;
    const Real mu_n = n / lv.genus;
    const Real mu_rel = n / lv.rel_genus;
    mu.rows.push_back(detail::row(lv.index, 1 / mu_n, 1 / mu_rel + gk));
  }
  detail::close_all(genus, true);
  detail::close_all(mu, true);
  if (mu.rows.empty()) {
    mu.pass = true;
    mu.notes.push_back("no ramified level");
  }
  return {genus, mu};
}

struct RelIdentitiesReport {
  std::vector<CheckReport> checks;
  bool pass = false;
};

/// Relative/absolute bridges for mu, phi and BS, and the two expressions for
/// lambda_rel / mu_rel: g_K + sum_q psi_q log(q/(q-1)) and g_K + beta.
inline RelIdentitiesReport check_rel_identities(const TowerHandle& t, const Real& tolerance,
                                                std::optional<u64> depth = std::nullopt) {
  if (t.kind == TowerKind::Cyclotomic) {
    throw Error(Errc::HypothesisViolated, "mu_rel tends to 0 in the cyclotomic l-tower (unbounded root discriminant)");
  }
  const std::size_t d = detail::usable_depth(t, depth);
  std::vector<const LevelData*> usable;
  for (std::size_t i = 0; i < d; ++i) {
    if (t.levels[i].rel_genus > 0) usable.push_back(&t.levels[i]);
  }
  if (usable.empty()) throw Error(Errc::HypothesisViolated, "mu_rel is infinite: no level is ramified over the base");
  const Real mu_rel_last = Real(usable.back()->index_over_base) / usable.back()->rel_genus;
  require(mu_rel_last > tolerance && boost::multiprecision::isfinite(mu_rel_last), Errc::HypothesisViolated,
          "mu_rel estimate is 0 or diverging");

  const Real gk = t.base.genus();
  RelIdentitiesReport out;
  CheckReport bridge_mu = detail::named("rel-bridge(mu)"), bridge_bs = detail::named("rel-bridge(bs)"), bridge_phi = detail::named("rel-bridge(phi)");
  for (auto* c : {&bridge_mu, &bridge_bs, &bridge_phi}) c->threshold = exact_tolerance();
  CheckReport psi_path = detail::named("lambda-psi"), beta_path = detail::named("lambda-beta"), psi_beta = detail::named("psi-beta");
  for (auto* c : {&psi_path, &beta_path, &psi_beta}) c->threshold = tolerance;

  const Real beta_limit = beta(t, d, tolerance).limit;
  for (const LevelData* lv : usable) {
    const Real n(lv->index_over_base);
    const Real mu = n / lv->genus;
    const Real mu_rel = n / lv->rel_genus;
    const Real factor = 1 + gk * mu_rel;
    bridge_mu.rows.push_back(detail::row(lv->index, mu_rel, mu * factor));
    require(lv->log_hr.has_value(), Errc::InvalidArgument, "tower has no log(hR) values");
    bridge_bs.rows.push_back(detail::row(lv->index, *lv->log_hr / lv->rel_genus, *lv->log_hr / lv->genus * factor));
    Real worst = 0;
    Real lhs_worst = 0;
    Real rhs_worst = 0;
    Real psi_sum = 0;
    for (const auto& [q, count] : lv->phi_counts) {
      const Real rel = Real(count) / lv->rel_genus;
      const Real abs = Real(count) / lv->genus * factor;
      if (boost::multiprecision::abs(rel - abs) >= worst) {
        worst = boost::multiprecision::abs(rel - abs);
        lhs_worst = rel;
        rhs_worst = abs;
      }
      psi_sum += Real(count) / n * q.log_ratio();
    }
    bridge_phi.rows.push_back(detail::row(lv->index, lhs_worst, rhs_worst));
    const Real lambda_rel = (*lv->log_hr + Real(lv->r1) * ln2() + Real(lv->r2) * ln_two_pi()) / lv->rel_genus - 1;
    const Real ratio = lambda_rel / mu_rel;
    psi_path.rows.push_back(detail::row(lv->index, ratio, gk + psi_sum));
    beta_path.rows.push_back(detail::row(lv->index, ratio, gk + beta_limit));
    psi_beta.rows.push_back(detail::row(lv->index, gk + psi_sum, gk + beta_limit));
  }
  detail::close_all(bridge_mu, true);
  detail::close_all(bridge_bs, true);
  detail::close_all(bridge_phi, true);
  detail::close_final(psi_path);
  detail::close_final(beta_path);
  detail::close_final(psi_beta);
  out.checks = {bridge_mu, bridge_bs, bridge_phi, psi_path, beta_path, psi_beta};
  out.pass = std::all_of(out.checks.begin(), out.checks.end(), [](const CheckReport& c) { return c.pass; });
  return out;
}

}  // namespace towerinv
