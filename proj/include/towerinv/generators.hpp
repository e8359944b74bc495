#pragma once

// Seeded generators for the randomized suites. Everything is driven by one
// mt19937_64 and uses only its raw output, so a seed fixes the data on every
// platform.

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "towerinv/families.hpp"
#include "towerinv/fields.hpp"
#include "towerinv/reconstruct.hpp"
#include "towerinv/towers.hpp"

namespace towerinv::gen {

using Rng = std::mt19937_64;

inline u64 pick(Rng& rng, u64 lo, u64 hi) { return lo + rng() % (hi - lo + 1); }

template <typename T>
const T& pick_from(Rng& rng, const std::vector<T>& xs) {
  return xs[rng() % xs.size()];
}

// ---------------------------------------------------------------------------

struct AbelianPair {
  AbelianField L;
  AbelianField K;
};

/// L inside Q(zeta_m), m <= max_conductor, cut out by an exponent bound on its
/// characters; K is Q, a smaller exponent subfield, or the real part of L.
inline AbelianPair abelian_pair(Rng& rng, u64 max_conductor = 200) {
  for (;;) {
    const u64 m = pick(rng, 3, max_conductor);
    if (m % 4 == 2) continue;
    const auto Z = cyclotomic_field(m);
    const auto ds = divisors(Z.degree());
    const u64 a = pick_from(rng, ds);
    if (a == 1) continue;
    auto L = subfield_where(Z, [a](const DirichletCharacter& chi) { return a % chi.order() == 0; },
                            "L(m=" + std::to_string(m) + ",a=" + std::to_string(a) + ")");
    AbelianField K = rationals();
    switch (rng() % 3) {
      case 0: break;
      case 1: {
        const auto bs = divisors(a);
        const u64 b = pick_from(rng, bs);
        K = subfield_where(L, [b](const DirichletCharacter& chi) { return b % chi.order() == 0; },
                           "K(b=" + std::to_string(b) + ")");
        break;
      }
      default: K = real_subfield(L, "K(real)"); break;
    }
    if (relative_degree(L, K) < 2) continue;
    return {std::move(L), std::move(K)};
  }
}

// ---------------------------------------------------------------------------

/// A few bases with known signature and discriminant.
inline std::vector<BaseField> base_catalogue() {
  return {
      {"Q", 1, 1, 0, 1},
      {"Q(i)", 2, 0, 1, 4},
      {"Q(sqrt-3)", 2, 0, 1, 3},
      {"Q(sqrt5)", 2, 2, 0, 5},
      {"Q(zeta7)^+", 3, 3, 0, 49},
      {"Q(zeta5)", 4, 0, 2, 125},
  };
}

/// Tame Galois tower with degrees built from 2 and 3, tracked primes of
/// residue characteristic >= 5 (so every e is prime to p). Finite-degree
/// primes move along (gcd(e, D_n), gcd(f, D_n / e_n)) and stabilize at (e, f);
/// infinite-degree primes are inert-like with f_n = D_n / D_0.
inline SyntheticTowerSpec tame_tower(Rng& rng, u64 depth = 6, const std::string& label = "tame") {
  SyntheticTowerSpec spec;
  spec.label = label;
  const auto bases = base_catalogue();
  spec.base = pick_from(rng, bases);
  spec.totally_real = spec.base.r2 == 0 && rng() % 2 == 0;
  u64 d = (spec.totally_real ? 1 : 2) * (rng() % 2 == 0 ? 2 : 3);
  for (u64 n = 0; n < depth; ++n) {
    spec.degrees.push_back(d);
    d *= rng() % 3 == 0 ? 3 : 2;
  }
  static const std::vector<u64> odd_primes{5, 7, 11, 13, 17, 19, 23, 29, 31};
  const u64 n_primes = pick(rng, 1, 4);
  for (u64 i = 0; i < n_primes; ++i) {
    SyntheticPrime p;
    p.label = "p" + std::to_string(i);
    p.norm = {pick_from(rng, odd_primes), pick(rng, 1, 2)};
    p.multiplicity = pick(rng, 1, 2);
    const bool finite = i == 0 || rng() % 4 != 0;
    p.finite_degree = finite;
    if (finite) {
      const u64 s = pick(rng, 0, depth - 2);
      const u64 ds = spec.degrees[s];
      auto es = divisors(ds);
      es.erase(std::remove_if(es.begin(), es.end(), [&](u64 e) { return std::gcd(e, p.norm.prime) != 1; }), es.end());
      u64 e = pick_from(rng, es);
      if (i == 0 && e == 1) e = es.size() > 1 ? es[1] : 1;
      const u64 f = pick_from(rng, divisors(ds / e));
      for (u64 n = 0; n < depth; ++n) {
        const u64 en = std::gcd(e, spec.degrees[n]);
        p.e.push_back(en);
        p.f.push_back(std::gcd(f, spec.degrees[n] / en));
      }
    } else {
      for (u64 n = 0; n < depth; ++n) {
        p.e.push_back(1);
        p.f.push_back(spec.degrees[n] / spec.degrees[0]);
      }
    }
    spec.primes.push_back(std::move(p));
  }
  spec.log_hr.kind = LogHrRule::Kind::Rhs;
  return spec;
}

// ---------------------------------------------------------------------------

/// (gcd(E, 2^n), gcd(F, 2^n)) before step s, then (E, F): divides its
/// successor and the limit at every step.
inline std::vector<LocalDegree> approach(u64 E, u64 F, u64 steps, u64 s) {
  std::vector<LocalDegree> out;
  for (u64 n = 0; n < steps; ++n) {
    out.push_back(n >= s ? LocalDegree::finite(E, F)
                         : LocalDegree::finite(std::gcd(E, u64{1} << n), std::gcd(F, u64{1} << n)));
  }
  return out;
}

/// Nested family for the limit exchange. The L_n^H data always divides the
/// L_n data; some primes have infinite degree in L_inf (f doubling with n) but
/// finite degree in L_inf^H.
inline LimitExchangeFamily exchange_family(Rng& rng, u64 steps = 6, const std::string& label = "exchange") {
  LimitExchangeFamily fam;
  fam.label = label;
  const auto bases = base_catalogue();
  fam.base = pick_from(rng, bases);
  fam.totally_real = fam.base.r2 == 0 && rng() % 2 == 0;
  static const std::vector<u64> primes{2, 3, 5, 7, 11, 13};
  const u64 n_primes = pick(rng, 2, 4);
  for (u64 i = 0; i < n_primes; ++i) {
    ExchangePrime p;
    p.label = "p" + std::to_string(i);
    p.norm = {pick_from(rng, primes), pick(rng, 1, 2)};
    p.multiplicity = pick(rng, 1, 2);
    // the first prime is ramified from the start in both towers, so mu_rel stays finite
    const u64 E = i == 0 ? 2 * pick(rng, 1, 2) : pick(rng, 1, 3);
    const u64 F = pick(rng, 1, 2);
    const u64 s = pick(rng, 1, steps - 1);
    p.fixed_limit = LocalDegree::finite(E, F);
    p.fixed = i == 0 ? std::vector<LocalDegree>(steps, p.fixed_limit) : approach(E, F, steps, s);
    if (i > 0 && rng() % 3 == 0) {
      p.full_limit = LocalDegree::unbounded();
      for (u64 n = 0; n < steps; ++n) p.full.push_back(LocalDegree::finite(E, F << (n + 1)));
    } else {
      const u64 a = pick(rng, 1, 2);
      const u64 b = pick(rng, 1, 3);
      p.full_limit = LocalDegree::finite(E * a, F * b);
      p.full = approach(E * a, F * b, steps, s);
      if (i == 0) {
        for (auto& d : p.full) d = LocalDegree::finite(std::lcm(d.e, E), std::lcm(d.f, F));
      }
    }
    fam.primes.push_back(std::move(p));
  }
  return fam;
}

/// Increasing L_j with [L_j:K] = 2^j and, per prime, degrees in L_{L_j}/L_j that
/// make the total degree over K reach the union's degree from step s on.
inline ContinuityFamily continuity_family(Rng& rng, u64 steps = 6, const std::string& label = "continuity") {
  ContinuityFamily fam;
  fam.label = label;
  for (u64 j = 0; j < steps; ++j) fam.degrees.push_back(u64{1} << j);
  static const std::vector<u64> primes{2, 3, 5, 7, 11};
  const u64 n_primes = pick(rng, 1, 3);
  for (u64 i = 0; i < n_primes; ++i) {
    ContinuityPrime p;
    p.label = "p" + std::to_string(i);
    p.norm = {pick_from(rng, primes), pick(rng, 1, 2)};
    p.multiplicity = pick(rng, 1, 3);
    const bool infinite = i > 0 && rng() % 3 == 0;
    const u64 E = u64{1} << pick(rng, 0, 3);
    const u64 F = (u64{1} << pick(rng, 0, 2)) * pick(rng, 1, 3);
    p.limit = infinite ? LocalDegree::unbounded() : LocalDegree::finite(E, F);
    const u64 s = pick(rng, 0, steps - 1);
    for (u64 j = 0; j < steps; ++j) {
      const u64 deg = fam.degrees[j];
      const u64 el = infinite ? std::gcd(deg, u64{2}) : std::gcd(E, deg);
      const u64 fl = infinite ? 1 : std::gcd(F, deg / el);
      p.e_low.push_back(el);
      p.f_low.push_back(fl);
      p.g_low.push_back(deg / (el * fl));
      if (j < s) {
        p.upper.push_back(LocalDegree::finite(1, 1));
      } else {
        p.upper.push_back(infinite ? LocalDegree::unbounded() : LocalDegree::finite(E / el, F / fl));
      }
    }
    fam.primes.push_back(std::move(p));
  }
  return fam;
}

// ---------------------------------------------------------------------------

/// Subgroups are modeled by the set of primes lying under them. The lattice
/// holds U, the trivial subgroup, one separating subgroup per prime and a few
/// random sets, closed under intersection.
inline SubgroupLattice lattice(Rng& rng, bool with_separators = true) {
  const u64 n_primes = pick(rng, 1, 6);
  const u64 all = (u64{1} << n_primes) - 1;
  std::vector<u64> sets{all, 0};
  if (with_separators) {
    for (u64 i = 0; i < n_primes; ++i) sets.push_back(u64{1} << i);
  }
  const u64 extra = pick(rng, 0, 4);
  for (u64 k = 0; k < extra; ++k) sets.push_back(rng() & all);
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  for (bool grew = true; grew;) {
    grew = false;
    const auto snapshot = sets;
    for (u64 a : snapshot) {
      for (u64 b : snapshot) {
        if (!std::binary_search(sets.begin(), sets.end(), a & b)) {
          sets.insert(std::lower_bound(sets.begin(), sets.end(), a & b), a & b);
          grew = true;
        }
      }
    }
  }
  auto name = [all](u64 s) {
    if (s == all) return std::string("U");
    if (s == 0) return std::string("1");
    std::string out = "H";
    for (u64 i = 0; (s >> i) != 0; ++i) {
      if ((s >> i) & 1) out += "_" + std::to_string(i);
    }
    return out;
  };
  std::vector<std::string> labels;
  for (u64 s : sets) labels.push_back(name(s));
  SubgroupLattice::Meet meet;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) meet[{labels[i], labels[j]}] = name(sets[i] & sets[j]);
  }
  std::vector<LatticePrime> primes;
  for (u64 i = 0; i < n_primes; ++i) {
    LatticePrime p;
    p.label = "q" + std::to_string(i);
    p.in_s = rng() % 4 == 0;
    for (u64 s : sets) {
      if ((s >> i) & 1) p.lies_under.insert(name(s));
    }
    primes.push_back(std::move(p));
  }
  return SubgroupLattice::make(labels, "U", meet, primes);
}

}  // namespace towerinv::gen
