#pragma once

// Per-level ratios of the asymptotic invariants and their convergence
// diagnostics. No extrapolation: the limit estimate is the last usable level.

#include <optional>
#include <string>
#include <vector>

#include "towerinv/error.hpp"
#include "towerinv/real.hpp"
#include "towerinv/splitting.hpp"
#include "towerinv/towers.hpp"

namespace towerinv {

struct InvariantName {
  enum class Kind { Phi, PhiRel, Psi, Mu, MuRel, Bs, BsRel, Lambda, LambdaRel, Beta };
  Kind kind = Kind::Mu;
  std::optional<Alpha> alpha;  // Phi, PhiRel, Psi

  bool relative() const {
    return kind == Kind::PhiRel || kind == Kind::MuRel || kind == Kind::BsRel || kind == Kind::LambdaRel;
  }

  static InvariantName parse(const std::string& text) {
    static const std::pair<const char*, Kind> plain[] = {
        {"mu", Kind::Mu},         {"muRel", Kind::MuRel},        {"bs", Kind::Bs}, {"bsRel", Kind::BsRel},
        {"lambda", Kind::Lambda}, {"lambdaRel", Kind::LambdaRel}, {"beta", Kind::Beta}};
    for (const auto& [name, kind] : plain) {
      if (text == name) return {kind, std::nullopt};
    }
    static const std::pair<const char*, Kind> indexed[] = {
        {"phiRel(", Kind::PhiRel}, {"phi(", Kind::Phi}, {"psi(", Kind::Psi}};
    for (const auto& [prefix, kind] : indexed) {
      const std::string p(prefix);
      if (text.size() > p.size() + 1 && text.compare(0, p.size(), p) == 0 && text.back() == ')') {
        return {kind, Alpha::parse(text.substr(p.size(), text.size() - p.size() - 1))};
      }
    }
    throw Error(Errc::InvalidArgument, "unknown invariant '" + text + "'");
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::Phi: return "phi(" + alpha->to_string() + ")";
      case Kind::PhiRel: return "phiRel(" + alpha->to_string() + ")";
      case Kind::Psi: return "psi(" + alpha->to_string() + ")";
      case Kind::Mu: return "mu";
      case Kind::MuRel: return "muRel";
      case Kind::Bs: return "bs";
      case Kind::BsRel: return "bsRel";
      case Kind::Lambda: return "lambda";
      case Kind::LambdaRel: return "lambdaRel";
      case Kind::Beta: return "beta";
    }
    return "?";
  }
};

struct InvariantEstimate {
  std::string name;
  std::vector<u64> levels;  // level indices actually used
  std::vector<Real> per_level;
  Real limit = 0;
  Real cauchy_gap = 0;
  bool converged = false;
  bool non_increasing = true;
  bool non_decreasing = true;
  bool certified = false;  // limit known in closed form
};

/// #Phi_alpha(K_n) from the level data.
inline u64 level_count(const TowerHandle& t, const LevelData& lv, const Alpha& alpha) {
  switch (alpha.kind) {
    case Alpha::Kind::Real: return lv.r1;
    case Alpha::Kind::Complex: return lv.r2;
    case Alpha::Kind::PrimePower: break;
  }
  if (t.kind != TowerKind::Synthetic) {
    require(alpha.q.prime <= t.prime_bound, Errc::PrimeBoundExceeded,
            "prime " + std::to_string(alpha.q.prime) + " exceeds the tower's prime bound " +
                std::to_string(t.prime_bound));
  }
  const auto it = lv.phi_counts.find(alpha.q);
  return it == lv.phi_counts.end() ? 0 : it->second;
}

/// Right side of the Tsfasman-Vladut-Zykin relation at one level:
/// 1 + sum_q phi_q log(q/(q-1)) - phi_R log 2 - phi_C log 2pi with phi = count/g_n.
inline Real tvz_rhs(const LevelData& lv) {
  Real s = 0;
  for (const auto& [q, count] : lv.phi_counts) s += Real(count) * q.log_ratio();
  s -= Real(lv.r1) * ln2() + Real(lv.r2) * ln_two_pi();
  return 1 + s / lv.genus;
}

/// Finite-level value of a (non-beta) invariant, or nullopt when its denominator vanishes.
inline std::optional<Real> level_value(const TowerHandle& t, const LevelData& lv, const InvariantName& name) {
  using K = InvariantName::Kind;
  const Real& denom = name.relative() ? lv.rel_genus : lv.genus;
  if (name.kind == K::Psi) {
    return Real(level_count(t, lv, *name.alpha)) / Real(lv.index_over_base);
  }
  if (denom == 0) return std::nullopt;
  auto need_hr = [&]() -> const Real& {
    require(lv.log_hr.has_value(), Errc::InvalidArgument, "tower has no log(hR) values");
    return *lv.log_hr;
  };
  switch (name.kind) {
    case K::Phi:
    case K::PhiRel: return Real(level_count(t, lv, *name.alpha)) / denom;
    case K::Mu:
    case K::MuRel: return Real(lv.index_over_base) / denom;
    case K::Bs:
    case K::BsRel: return need_hr() / denom;
    case K::Lambda:
    case K::LambdaRel:
      return (need_hr() + Real(lv.r1) * ln2() + Real(lv.r2) * ln_two_pi()) / denom - 1;
    default: break;
  }
  throw Error(Errc::Internal, "unhandled invariant");
}

namespace detail {

inline void finish(InvariantEstimate& out, const Real& tolerance) {
  out.limit = out.per_level.back();
  out.cauchy_gap = out.per_level.size() >= 2
                       ? Real(boost::multiprecision::abs(out.per_level.back() - out.per_level[out.per_level.size() - 2]))
                       : Real(0);
  out.converged = out.cauchy_gap < tolerance;
  for (std::size_t i = 1; i < out.per_level.size(); ++i) {
    if (out.per_level[i] > out.per_level[i - 1]) out.non_increasing = false;
    if (out.per_level[i] < out.per_level[i - 1]) out.non_decreasing = false;
  }
}

inline std::size_t usable_depth(const TowerHandle& t, std::optional<u64> depth) {
  const std::size_t d = depth.value_or(t.levels.size());
  require(d <= t.levels.size(), Errc::InsufficientLevels,
          "depth " + std::to_string(d) + " exceeds the " + std::to_string(t.levels.size()) + " available levels");
  require(d >= 1, Errc::InsufficientLevels, "depth must be positive");
  return d;
}

}  // namespace detail

/// beta(K/K): sum over base primes of finite degree of (1/(ef)) log(Np^f / (Np^f - 1)).
/// Per-level values are the same sum over the tracked primes of K_n/K.
inline InvariantEstimate beta(const TowerHandle& t, std::optional<u64> depth = std::nullopt,
                              const Real& tolerance = Real("1e-9")) {
  require(t.galois, Errc::UndecidableTail, "beta needs a Galois tower");
  InvariantEstimate out;
  out.name = "beta";
  const std::size_t d = detail::usable_depth(t, depth);
  for (std::size_t i = 0; i < d; ++i) {
    Real s = 0;
    for (const auto& p : t.levels[i].primes) {
      s += Real(p.multiplicity) * p.norm.raised(p.split.f).log_ratio() / Real(p.split.e * p.split.f);
    }
    out.levels.push_back(t.levels[i].index);
    out.per_level.push_back(s);
  }
  detail::finish(out, tolerance);
  switch (t.kind) {
    case TowerKind::Cyclotomic:
      // only l ramifies (e -> infinity); every other q has f = ord(q mod l^n) -> infinity
      out.limit = 0;
      out.certified = true;
      out.converged = true;
      break;
    case TowerKind::Synthetic: {
      require(t.finite_degree_primes.has_value(), Errc::UndecidableTail, "finite-degree primes were not declared");
      Real s = 0;
      for (const auto& p : *t.finite_degree_primes) {
        s += Real(p.multiplicity) * p.norm.raised(p.f).log_ratio() / Real(p.e * p.f);
      }
      out.limit = s;
      out.certified = true;
      out.converged = boost::multiprecision::abs(out.per_level.back() - s) < tolerance;
      break;
    }
    case TowerKind::Abelian:
      throw Error(Errc::UndecidableTail, "cannot certify which primes have finite degree in an explicit field list");
  }
  return out;
}

inline InvariantEstimate estimate(const TowerHandle& t, const InvariantName& name, std::optional<u64> depth = std::nullopt,
                                  const Real& tolerance = Real("1e-9")) {
  if (name.kind == InvariantName::Kind::Beta) return beta(t, depth, tolerance);
  const std::size_t d = detail::usable_depth(t, depth);
  InvariantEstimate out;
  out.name = name.to_string();
  bool ramified = false;
  for (std::size_t i = 0; i < d; ++i) {
    if (t.levels[i].rel_genus > 0) ramified = true;
    const auto v = level_value(t, t.levels[i], name);
    if (!v) continue;
    out.levels.push_back(t.levels[i].index);
    out.per_level.push_back(*v);
  }
  if (name.relative() && !ramified) {
    throw Error(Errc::UnramifiedTower, "relative invariants need a ramified tower");
  }
  require(!out.per_level.empty(), Errc::InsufficientLevels, "no usable level for " + out.name);
  detail::finish(out, tolerance);
  return out;
}

}  // namespace towerinv
