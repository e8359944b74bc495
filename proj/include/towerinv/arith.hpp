#pragma once

// Small exact integer helpers (word-size). Everything here is used on
// desk-scale inputs: moduli in the thousands, prime bounds around 10^6.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "towerinv/error.hpp"
#include "towerinv/real.hpp"

namespace towerinv {

using u64 = std::uint64_t;
using i64 = std::int64_t;

struct PrimeFactor {
  u64 prime;
  u64 exponent;
  friend bool operator==(const PrimeFactor&, const PrimeFactor&) = default;
};

/// q = prime^exponent with exponent >= 1. Ordered by (prime, exponent),
/// which is a total order on distinct prime powers.
struct PrimePower {
  u64 prime = 2;
  u64 exponent = 1;

  friend auto operator<=>(const PrimePower&, const PrimePower&) = default;

  Real log_ratio() const { return log_q_ratio(prime, exponent); }
  Real log_value() const { return Real(exponent) * ln(prime); }
  BigInt value() const { return boost::multiprecision::pow(BigInt(prime), static_cast<unsigned>(exponent)); }
  PrimePower raised(u64 k) const { return {prime, exponent * k}; }
  std::string to_string() const {
    return exponent == 1 ? std::to_string(prime)
                         : std::to_string(prime) + "^" + std::to_string(exponent);
  }
};

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    if (n % p == 0) return n == p;
  }
  for (u64 d = 17; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<PrimeFactor> factorize(u64 n) {
  require(n >= 1, Errc::InvalidArgument, "cannot factor 0");
  std::vector<PrimeFactor> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    u64 k = 0;
    while (n % d == 0) {
      n /= d;
      ++k;
    }
    out.push_back({d, k});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

inline std::optional<PrimePower> as_prime_power(u64 q) {
  if (q < 2) return std::nullopt;
  const auto f = factorize(q);
  if (f.size() != 1) return std::nullopt;
  return PrimePower{f.front().prime, f.front().exponent};
}

inline u64 valuation(u64 n, u64 p) {
  u64 k = 0;
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  return k;
}

inline std::vector<u64> primes_up_to(u64 bound) {
  std::vector<u64> primes;
  if (bound < 2) return primes;
  std::vector<bool> composite(bound + 1, false);
  for (u64 i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return primes;
}

inline u64 totient(u64 n) {
  u64 result = n;
  for (const auto& [p, k] : factorize(n)) result = result / p * (p - 1);
  return result;
}

inline std::vector<u64> divisors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    if (d * d != n) out.push_back(n / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Exact u64 power; throws on overflow.
inline u64 ipow(u64 base, u64 exp) {
  u64 result = 1;
  for (u64 i = 0; i < exp; ++i) {
    require(base == 0 || result <= UINT64_MAX / base, Errc::InvalidArgument, "integer overflow in power");
    result *= base;
  }
  return result;
}

/// Order of a in (Z/m)^x; requires gcd(a, m) = 1.
inline u64 multiplicative_order(u64 a, u64 m) {
  require(std::gcd(a, m) == 1, Errc::InvalidArgument, "element not a unit");
  if (m == 1) return 1;
  const u64 group = totient(m);
  u64 order = group;
  for (const auto& [p, k] : factorize(group)) {
    for (u64 i = 0; i < k && order % p == 0 && pow_mod(a, order / p, m) == 1; ++i) order /= p;
  }
  return order;
}

/// Smallest primitive root modulo an odd prime power.
inline u64 primitive_root_odd_prime_power(u64 p, u64 k) {
  require(p > 2 && is_prime(p), Errc::InvalidArgument, "primitive root needs an odd prime");
  const u64 pk = ipow(p, k);
  const u64 group = totient(pk);
  for (u64 g = 2; g < pk; ++g) {
    if (g % p == 0) continue;
    if (multiplicative_order(g, pk) == group) return g;
  }
  return 1;  // only reached for p^k = ... never for odd p
}

/// x with x = a_i (mod m_i) for pairwise coprime moduli.
inline u64 crt(const std::vector<std::pair<u64, u64>>& residues) {
  u64 x = 0;
  u64 modulus = 1;
  for (const auto& [a, m] : residues) {
    // find t with x + modulus*t = a (mod m)
    u64 t = 0;
    while ((x + mul_mod(modulus % m, t, m)) % m != a % m) ++t;
    x += modulus * t;
    modulus *= m;
    x %= modulus;
  }
  return x;
}

}  // namespace towerinv
