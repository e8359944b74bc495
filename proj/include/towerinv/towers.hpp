#pragma once

// Ascending towers K = K_0 ... K_1 ... over a base field, and the per-level
// data every asymptotic invariant is read from.
//
// Three kinds:
//  - cyclotomic: K_n = Q(zeta_{l^k}), k = first..top, everything computed
//  - abelian:    an explicit nested list of abelian fields
//  - synthetic:  prescribed degrees, splitting trajectories of finitely many
//                base primes, and log(hR) values or a rule producing them

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "towerinv/arith.hpp"
#include "towerinv/error.hpp"
#include "towerinv/fields.hpp"
#include "towerinv/lfunc.hpp"
#include "towerinv/real.hpp"
#include "towerinv/splitting.hpp"

namespace towerinv {

inline constexpr u64 kDefaultPrimeBound = 1000;
inline constexpr u64 kDefaultCyclotomicCap = 3000;

/// The base K of a tower, kept independent of any character model so that
/// synthetic towers can sit over an arbitrary number field.
struct BaseField {
  std::string label = "Q";
  u64 degree = 1;
  u64 r1 = 1;
  u64 r2 = 0;
  BigInt abs_disc = 1;

  Real genus() const { return boost::multiprecision::log(Real(abs_disc.str())) / 2; }

  static BaseField from_field(const AbelianField& K) {
    return {K.label(), K.degree(), K.r1(), K.r2(), K.abs_disc()};
  }
};

/// A prime of the base (or `multiplicity` primes with identical behaviour)
/// and its splitting in K_n/K.
struct TrackedPrime {
  std::string label;
  PrimePower norm;  // N(p) in K
  u64 multiplicity = 1;
  SplitData split;  // e, f, g in K_n/K
  u64 beta = 0;     // wild exponent of p in K_n/K
};

struct LevelData {
  u64 index = 0;
  u64 degree = 1;           // [K_n : Q]
  u64 index_over_base = 1;  // [K_n : K]
  Real genus = 0;           // g_{K_n}
  Real rel_genus = 0;       // g_{K_n/K}
  std::optional<Real> log_hr;
  u64 r1 = 0;
  u64 r2 = 0;
  std::map<PrimePower, u64> phi_counts;  // q -> #Phi_q(K_n)
  std::vector<TrackedPrime> primes;
};

enum class TowerKind { Cyclotomic, Abelian, Synthetic };

inline std::string to_string(TowerKind k) {
  switch (k) {
    case TowerKind::Cyclotomic: return "cyclotomic";
    case TowerKind::Abelian: return "abelian";
    default: return "synthetic";
  }
}

/// A base prime of finite degree e*f in the whole tower.
struct FiniteDegreePrime {
  std::string label;
  PrimePower norm;
  u64 e = 1;
  u64 f = 1;
  u64 multiplicity = 1;
};

struct TowerHandle {
  std::string label;
  TowerKind kind = TowerKind::Synthetic;
  BaseField base;
  std::vector<LevelData> levels;
  bool galois = true;
  bool almost_normal = true;  // carried, never verified
  u64 prime_bound = kDefaultPrimeBound;
  u64 ell = 0;
  /// Declared for synthetic towers; empty optional means "not decidable".
  std::optional<std::vector<FiniteDegreePrime>> finite_degree_primes;
};

namespace detail {

inline LevelData level_from_field(u64 index, const AbelianField& Kn, const AbelianField& K, u64 prime_bound,
                                  bool with_log_hr) {
  LevelData lv;
  lv.index = index;
  lv.degree = Kn.degree();
  lv.index_over_base = relative_degree(Kn, K);
  lv.genus = Kn.genus();
  lv.rel_genus = relative_genus(Kn, K);
  if (with_log_hr) lv.log_hr = log_hr(Kn).log_hr;
  lv.r1 = Kn.r1();
  lv.r2 = Kn.r2();
  for (u64 p : primes_up_to(prime_bound)) {
    const SplitData abs = split_prime(Kn, p);
    lv.phi_counts[PrimePower{p, abs.f}] += abs.g;
    const SplitData sk = split_prime(K, p);
    const SplitData rel = split_prime_relative(Kn, K, p);
    const u64 beta = rel.e > 1 ? solve_beta(Kn, K, p).beta : 0;
    lv.primes.push_back({std::to_string(p), PrimePower{p, sk.f}, sk.g, rel, beta});
  }
  return lv;
}

}  // namespace detail

/// Levels Q(zeta_{l^k}) for k = first_exponent..max_level over
/// K = Q(zeta_{l^base_exponent}) (Q when base_exponent = 0).
inline TowerHandle cyclotomic_tower(u64 ell, u64 max_level, u64 first_exponent = 1, u64 base_exponent = 0,
                                    u64 prime_bound = kDefaultPrimeBound, u64 cap = kDefaultCyclotomicCap,
                                    bool with_log_hr = true) {
  require(ell % 2 == 1 && is_prime(ell), Errc::InvalidArgument, "l must be an odd prime, got " + std::to_string(ell));
  require(first_exponent >= 1 && max_level >= first_exponent + 1, Errc::InvalidArgument,
          "need at least two levels (first exponent " + std::to_string(first_exponent) + ", top " +
              std::to_string(max_level) + ")");
  require(base_exponent < first_exponent, Errc::InvalidArgument, "base must lie strictly below the first level");
  u64 top = 1;
  for (u64 k = 0; k < max_level; ++k) {
    require(top <= cap / ell, Errc::CapExceeded,
            std::to_string(ell) + "^" + std::to_string(max_level) + " exceeds the cap " + std::to_string(cap));
    top *= ell;
  }
  const AbelianField K = base_exponent == 0 ? rationals() : cyclotomic_field(ipow(ell, base_exponent));
  TowerHandle t;
  t.label = "Q(zeta_" + std::to_string(ell) + "^k), k=" + std::to_string(first_exponent) + ".." +
            std::to_string(max_level);
  t.kind = TowerKind::Cyclotomic;
  t.base = BaseField::from_field(K);
  t.prime_bound = prime_bound;
  t.ell = ell;
  for (u64 k = first_exponent; k <= max_level; ++k) {
    t.levels.push_back(
        detail::level_from_field(k - first_exponent, cyclotomic_field(ipow(ell, k)), K, prime_bound, with_log_hr));
  }
  return t;
}

/// A nested list of abelian fields over K.
inline TowerHandle abelian_tower(std::string label, const AbelianField& K, const std::vector<AbelianField>& fields,
                                 u64 prime_bound = kDefaultPrimeBound, bool with_log_hr = true) {
  require(fields.size() >= 2, Errc::InsufficientLevels, "a tower needs at least two levels");
  TowerHandle t;
  t.label = std::move(label);
  t.kind = TowerKind::Abelian;
  t.base = BaseField::from_field(K);
  t.prime_bound = prime_bound;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) {
      require(fields[i - 1].is_subfield_of(fields[i]), Errc::NotASubfield,
              "level " + std::to_string(i - 1) + " is not contained in level " + std::to_string(i));
      require(fields[i].degree() > fields[i - 1].degree(), Errc::InvalidSpec, "degrees must strictly increase");
    }
    t.levels.push_back(detail::level_from_field(i, fields[i], K, prime_bound, with_log_hr));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Synthetic towers

struct SyntheticPrime {
  std::string label;
  PrimePower norm;
  std::vector<u64> e;     // per level, in K_n/K
  std::vector<u64> f;     // per level
  std::vector<u64> beta;  // per level; empty = tame throughout
  bool finite_degree = true;
  std::optional<u64> limit_e;  // defaults to the last level
  std::optional<u64> limit_f;
  u64 multiplicity = 1;
};

struct LogHrRule {
  enum class Kind { Values, Rhs, Scaled };
  Kind kind = Kind::Rhs;
  std::vector<Real> values;  // Values
  Real noise = 0;            // Rhs: adds noise * u_n * g_n / [K_n:K], u_n in [-1, 1]
  Real scale = 1;            // Scaled: log(hR) = scale * g_n
  u64 seed = 0;
};

struct SyntheticTowerSpec {
  std::string label = "synthetic";
  BaseField base;
  bool totally_real = false;
  std::vector<u64> degrees;  // [K_n : K]
  std::vector<SyntheticPrime> primes;
  LogHrRule log_hr;
  bool almost_normal = true;
};

namespace detail {

/// Deterministic uniform in [-1, 1] independent of the standard library's distributions.
inline Real unit_noise(std::mt19937_64& rng) {
  const u64 bits = rng() >> 11;
  return Real(bits) / Real(u64{1} << 53) * 2 - 1;
}

}  // namespace detail

/// log(hR) that satisfies the Tsfasman-Vladut-Zykin relation exactly at this level:
/// g_n + sum_q #Phi_q log(q/(q-1)) - r1 log 2 - r2 log 2pi.
inline Real tvz_consistent_log_hr(const LevelData& lv) {
  Real x = lv.genus;
  for (const auto& [q, count] : lv.phi_counts) x += Real(count) * q.log_ratio();
  return x - Real(lv.r1) * ln2() - Real(lv.r2) * ln_two_pi();
}

inline TowerHandle synthetic_tower(const SyntheticTowerSpec& spec) {
  const std::size_t n_levels = spec.degrees.size();
  require(n_levels >= 2, Errc::InsufficientLevels, "a tower needs at least two levels");
  require(spec.base.degree >= 1 && spec.base.r1 + 2 * spec.base.r2 == spec.base.degree, Errc::InvalidSpec,
          "base signature does not match its degree");
  require(spec.base.abs_disc >= 1, Errc::InvalidSpec, "base discriminant must be positive");
  require(!spec.totally_real || spec.base.r2 == 0, Errc::InvalidSpec, "a totally real tower needs a totally real base");
  for (std::size_t i = 0; i < n_levels; ++i) {
    require(spec.degrees[i] >= 1, Errc::InvalidSpec, "degrees must be positive");
    if (i > 0) {
      require(spec.degrees[i] > spec.degrees[i - 1], Errc::InvalidSpec, "degrees must strictly increase");
      require(spec.degrees[i] % spec.degrees[i - 1] == 0, Errc::InvalidSpec, "each degree must divide the next");
    }
  }
  for (const auto& p : spec.primes) {
    const std::string who = "prime '" + p.label + "'";
    require(is_prime(p.norm.prime) && p.norm.exponent >= 1, Errc::InvalidSpec, who + ": norm is not a prime power");
    require(p.e.size() == n_levels && p.f.size() == n_levels, Errc::InvalidSpec,
            who + ": trajectory length differs from the number of levels");
    require(p.beta.empty() || p.beta.size() == n_levels, Errc::InvalidSpec, who + ": wild trajectory has wrong length");
    require(p.multiplicity >= 1, Errc::InvalidSpec, who + ": multiplicity must be positive");
    for (std::size_t i = 0; i < n_levels; ++i) {
      const u64 e = p.e[i];
      const u64 f = p.f[i];
      const u64 beta = p.beta.empty() ? 0 : p.beta[i];
      require(e >= 1 && f >= 1, Errc::InvalidSpec, who + ": e and f must be positive");
      require(spec.degrees[i] % (e * f) == 0, Errc::InvalidSpec,
              who + ": e*f does not divide the degree at level " + std::to_string(i));
      require((beta == 0) == (e % p.norm.prime != 0), Errc::InconsistentRamification,
              who + ": wild exponent must vanish exactly when p does not divide e (level " + std::to_string(i) + ")");
      if (i > 0) {
        require(e % p.e[i - 1] == 0 && f % p.f[i - 1] == 0, Errc::InvalidSpec,
                who + ": e and f must divide their successors along the tower");
      }
    }
    if (p.finite_degree) {
      const u64 le = p.limit_e.value_or(p.e.back());
      const u64 lf = p.limit_f.value_or(p.f.back());
      require(le % p.e.back() == 0 && lf % p.f.back() == 0, Errc::InvalidSpec,
              who + ": declared limit degrees must be multiples of the last level");
    }
  }

  TowerHandle t;
  t.label = spec.label;
  t.kind = TowerKind::Synthetic;
  t.base = spec.base;
  t.almost_normal = spec.almost_normal;
  t.prime_bound = 0;
  std::vector<FiniteDegreePrime> finite;
  for (const auto& p : spec.primes) {
    if (!p.finite_degree) continue;
    finite.push_back({p.label, p.norm, p.limit_e.value_or(p.e.back()), p.limit_f.value_or(p.f.back()), p.multiplicity});
  }
  t.finite_degree_primes = std::move(finite);

  const Real gk = spec.base.genus();
  std::mt19937_64 rng(spec.log_hr.seed);
  if (spec.log_hr.kind == LogHrRule::Kind::Values) {
    require(spec.log_hr.values.size() == n_levels, Errc::InvalidSpec, "one log(hR) value per level expected");
  }
  for (std::size_t i = 0; i < n_levels; ++i) {
    LevelData lv;
    lv.index = i;
    lv.index_over_base = spec.degrees[i];
    lv.degree = spec.degrees[i] * spec.base.degree;
    if (spec.totally_real) {
      lv.r1 = lv.degree;
    } else {
      require(lv.degree % 2 == 0, Errc::InvalidSpec, "a totally imaginary level needs even degree");
      lv.r2 = lv.degree / 2;
    }
    std::vector<RamifiedPrime> ramified;
    for (const auto& p : spec.primes) {
      const u64 e = p.e[i];
      const u64 f = p.f[i];
      const u64 beta = p.beta.empty() ? 0 : p.beta[i];
      const u64 g = spec.degrees[i] / (e * f);
      lv.primes.push_back({p.label, p.norm, p.multiplicity, SplitData{p.norm.prime, e, f, g}, beta});
      lv.phi_counts[p.norm.raised(f)] += p.multiplicity * g;
      if (e > 1) {
        for (u64 k = 0; k < p.multiplicity; ++k) {
          ramified.push_back({make_ram_exponent(p.norm.prime, e, beta, spec.degrees[i]), p.norm});
        }
      }
    }
    const DiscFormulaResult disc = disc_formula(spec.degrees[i], ramified, gk, false);
    lv.rel_genus = disc.relative_genus;
    lv.genus = Real(spec.degrees[i]) * gk + lv.rel_genus;
    switch (spec.log_hr.kind) {
      case LogHrRule::Kind::Values: lv.log_hr = spec.log_hr.values[i]; break;
      case LogHrRule::Kind::Scaled: lv.log_hr = spec.log_hr.scale * lv.genus; break;
      case LogHrRule::Kind::Rhs: {
        Real x = tvz_consistent_log_hr(lv);
        if (spec.log_hr.noise != 0) x += spec.log_hr.noise * detail::unit_noise(rng) * lv.genus / Real(lv.index_over_base);
        lv.log_hr = x;
        break;
      }
    }
    t.levels.push_back(std::move(lv));
  }
  return t;
}

}  // namespace towerinv
