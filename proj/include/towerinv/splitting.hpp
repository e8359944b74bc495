#pragma once

// Decomposition of rational primes in abelian fields, prime counts by norm,
// and the tame/wild discriminant exponents of relative extensions.

#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "towerinv/arith.hpp"
#include "towerinv/error.hpp"
#include "towerinv/fields.hpp"
#include "towerinv/real.hpp"

namespace towerinv {

/// e*f*g = degree of the (Galois) extension.
struct SplitData {
  u64 prime = 0;
  u64 e = 1;
  u64 f = 1;
  u64 g = 1;
  friend bool operator==(const SplitData&, const SplitData&) = default;
};

/// Splitting of p in K/Q.
///
/// e is the index of the characters unramified at p (p does not divide the
/// conductor) in the whole group; f is the order of Frobenius, i.e. the lcm of
/// the orders of chi(p) over the unramified characters.
inline SplitData split_prime(const AbelianField& K, u64 p) {
  require(is_prime(p), Errc::InvalidArgument, std::to_string(p) + " is not prime");
  u64 unramified = 0;
  u64 f = 1;
  for (const auto& chi : K.characters()) {
    if (chi.conductor() % p == 0) continue;
    ++unramified;
    f = std::lcm(f, chi.value(p)->order);
  }
  const u64 d = K.degree();
  const u64 e = d / unramified;
  return {p, e, f, d / (e * f)};
}

/// Splitting of a prime of K above p in L/K (same for every such prime).
inline SplitData split_prime_relative(const AbelianField& L, const AbelianField& K, u64 p) {
  const u64 n = relative_degree(L, K);
  const SplitData sl = split_prime(L, p);
  const SplitData sk = split_prime(K, p);
  const SplitData rel{p, sl.e / sk.e, sl.f / sk.f, sl.g / sk.g};
  require(rel.e * rel.f * rel.g == n, Errc::Internal, "relative splitting does not multiply to the degree");
  return rel;
}

/// Index of a prime count: a rational prime power, or the real / complex places.
struct Alpha {
  enum class Kind { PrimePower, Real, Complex };
  Kind kind = Kind::PrimePower;
  PrimePower q{};

  static Alpha prime_power(PrimePower q) { return {Kind::PrimePower, q}; }
  static Alpha real() { return {Kind::Real, {}}; }
  static Alpha complex() { return {Kind::Complex, {}}; }

  static Alpha parse(const std::string& text) {
    if (text == "R") return real();
    if (text == "C") return complex();
    try {
      std::size_t used = 0;
      const u64 q = std::stoull(text, &used);
      require(used == text.size(), Errc::InvalidArgument, "bad alpha '" + text + "'");
      const auto pp = as_prime_power(q);
      require(pp.has_value(), Errc::InvalidArgument, text + " is not a prime power");
      return prime_power(*pp);
    } catch (const std::logic_error&) {
      throw Error(Errc::InvalidArgument, "bad alpha '" + text + "' (expected R, C or a prime power)");
    }
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::Real: return "R";
      case Kind::Complex: return "C";
      default: {
        const BigInt v = q.value();
        return v.str();
      }
    }
  }
  friend auto operator<=>(const Alpha&, const Alpha&) = default;
};

/// #Phi_alpha(K): number of places of K with norm alpha (or real / complex places).
/// The prime under alpha must not exceed `prime_bound`.
inline u64 count_phi(const AbelianField& K, const Alpha& alpha, u64 prime_bound) {
  switch (alpha.kind) {
    case Alpha::Kind::Real: return K.r1();
    case Alpha::Kind::Complex: return K.r2();
    case Alpha::Kind::PrimePower: break;
  }
  require(alpha.q.prime <= prime_bound, Errc::PrimeBoundExceeded,
          "prime " + std::to_string(alpha.q.prime) + " exceeds bound " + std::to_string(prime_bound));
  const SplitData s = split_prime(K, alpha.q.prime);
  return s.f == alpha.q.exponent ? s.g : 0;
}

/// Exact rational with positive denominator.
struct Rational {
  i64 num = 0;
  i64 den = 1;
  static Rational make(i64 n, i64 d) {
    require(d != 0, Errc::InvalidArgument, "zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const i64 g = std::gcd(n < 0 ? -n : n, d);
    return {n / (g == 0 ? 1 : g), d / (g == 0 ? 1 : g)};
  }
  bool is_integer() const { return den == 1; }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Ramification data of one prime of K in L/K: the exponent of its norm in
/// N_{K/Q} D_{L/K} is [L:K](1 - 1/e + beta/e), with beta = 0 exactly when tame.
struct RamExponent {
  u64 prime = 0;
  u64 e = 1;
  u64 beta = 0;
  Rational disc_exponent{};
  friend bool operator==(const RamExponent&, const RamExponent&) = default;
};

inline RamExponent make_ram_exponent(u64 prime, u64 e, u64 beta, u64 relative_degree) {
  require(e >= 1, Errc::InvalidArgument, "ramification index must be positive");
  return {prime, e, beta,
          Rational::make(static_cast<i64>(relative_degree * (e - 1 + beta)), static_cast<i64>(e))};
}

/// One prime of K entering the discriminant product, with its absolute norm.
struct RamifiedPrime {
  RamExponent exponent;
  PrimePower norm;
};

struct DiscFormulaResult {
  BigInt value = 1;           // N_{K/Q} D_{L/K}
  Real relative_genus = 0;    // (1/2) log of value
  Real per_degree_genus = 0;  // g_L / [L:K] = g_K + (1/2) sum (1 - 1/e + beta/e) log Np
};

/// Evaluates prod Np^{[L:K](1 - 1/e + beta/e)} exactly. An empty list is an
/// unramified extension (value 1). Without `exact_value` only the genus parts
/// are filled (the integer can have billions of digits in deep towers).
inline DiscFormulaResult disc_formula(u64 relative_degree, const std::vector<RamifiedPrime>& primes,
                                      const Real& base_genus = Real(0), bool exact_value = true) {
  require(relative_degree >= 1, Errc::InvalidArgument, "relative degree must be positive");
  DiscFormulaResult out;
  Real per_degree = 0;
  for (const auto& [ram, norm] : primes) {
    const Rational x = make_ram_exponent(ram.prime, ram.e, ram.beta, relative_degree).disc_exponent;
    require(x.is_integer(), Errc::NonIntegralExponent,
            "exponent " + std::to_string(x.num) + "/" + std::to_string(x.den) + " at p=" + std::to_string(ram.prime));
    if (exact_value) out.value *= boost::multiprecision::pow(norm.value(), static_cast<unsigned>(x.num));
    out.relative_genus += Real(x.num) * norm.log_value();
    per_degree += Real(ram.e - 1 + ram.beta) / Real(ram.e) * norm.log_value();
  }
  out.relative_genus /= 2;
  out.per_degree_genus = base_genus + per_degree / 2;
  return out;
}

/// Recovers the wild exponent beta of p in L/K from the conductor-discriminant
/// exponent of N_{K/Q} D_{L/K}.
inline RamExponent solve_beta(const AbelianField& L, const AbelianField& K, u64 p) {
  const u64 n = relative_degree(L, K);
  const auto rel = relative_disc_exponents(L, K);
  const auto it = rel.find(p);
  const u64 total = it == rel.end() ? 0 : it->second;
  const SplitData sk = split_prime(K, p);
  const SplitData s = split_prime_relative(L, K, p);
  if (s.e == 1) {
    require(total == 0, Errc::InconsistentRamification,
            "unramified prime " + std::to_string(p) + " divides the relative discriminant");
    return make_ram_exponent(p, 1, 0, n);
  }
  // total = g_K f_K [L:K] (e - 1 + beta) / e
  const u64 denom = sk.g * sk.f * n;
  require((total * s.e) % denom == 0, Errc::InconsistentRamification,
          "non-integral wild exponent at p=" + std::to_string(p));
  const i64 beta = static_cast<i64>(total * s.e / denom) - static_cast<i64>(s.e - 1);
  require(beta >= 0, Errc::InconsistentRamification, "negative wild exponent at p=" + std::to_string(p));
  const bool tame = s.e % p != 0;
  require(tame == (beta == 0), Errc::InconsistentRamification,
          "tameness criterion fails at p=" + std::to_string(p));
  return make_ram_exponent(p, s.e, static_cast<u64>(beta), n);
}

/// Every prime of K ramified in L/K, each with its norm, ready for disc_formula.
inline std::vector<RamifiedPrime> ramified_primes(const AbelianField& L, const AbelianField& K) {
  std::vector<RamifiedPrime> out;
  for (const auto& [p, k] : L.disc_factorization()) {
    const RamExponent r = solve_beta(L, K, p);
    if (r.e == 1) continue;
    const SplitData sk = split_prime(K, p);
    for (u64 i = 0; i < sk.g; ++i) out.push_back({r, PrimePower{p, sk.f}});
  }
  return out;
}

}  // namespace towerinv
