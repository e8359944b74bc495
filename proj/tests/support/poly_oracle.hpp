#pragma once

// Polynomial-side oracles that never look at characters: discriminants by
// the Sylvester resultant, and inertia degrees by Frobenius on Z/p[x]/(f).

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <vector>

namespace oracle_poly {

using BigInt = boost::multiprecision::cpp_int;
using Poly = std::vector<std::int64_t>;  // low degree first, monic

/// Fraction-free (Bareiss) determinant.
inline BigInt bareiss_det(std::vector<std::vector<BigInt>> a) {
  const std::size_t n = a.size();
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

inline BigInt resultant(const Poly& f, const Poly& g) {
  const std::size_t m = f.size() - 1;
  const std::size_t n = g.size() - 1;
  std::vector<std::vector<BigInt>> s(m + n, std::vector<BigInt>(m + n, 0));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i <= m; ++i) s[r][r + i] = f[m - i];
  }
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i <= n; ++i) s[n + r][r + i] = g[n - i];
  }
  return bareiss_det(std::move(s));
}

/// disc(f) = (-1)^{n(n-1)/2} Res(f, f') for monic f.
inline BigInt discriminant(const Poly& f) {
  const std::size_t n = f.size() - 1;
  Poly df(n);
  for (std::size_t i = 1; i <= n; ++i) df[i - 1] = static_cast<std::int64_t>(i) * f[i];
  BigInt r = resultant(f, df);
  return (n * (n - 1) / 2) % 2 == 0 ? r : BigInt(-r);
}

namespace detail {

using ModPoly = std::vector<std::uint64_t>;

inline ModPoly mulmod(const ModPoly& a, const ModPoly& b, const Poly& f, std::uint64_t p) {
  const std::size_t n = f.size() - 1;
  std::vector<std::uint64_t> out(2 * n, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
  }
  for (std::size_t i = out.size(); i-- > n;) {
    const std::uint64_t c = out[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= n; ++j) {
      const std::uint64_t fj = static_cast<std::uint64_t>(((f[j] % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) % static_cast<std::int64_t>(p));
      out[i - n + j] = (out[i - n + j] + (p - c) * fj) % p;
    }
  }
  out.resize(n);
  return out;
}

inline ModPoly powmod(ModPoly base, std::uint64_t e, const Poly& f, std::uint64_t p) {
  ModPoly r(f.size() - 1, 0);
  r[0] = 1;
  while (e) {
    if (e & 1) r = mulmod(r, base, f, p);
    base = mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

/// For a normal extension Q[x]/(f) and p not dividing disc(f): the smallest k
/// with x^{p^k} = x mod (f, p), i.e. the common degree of the factors of f mod p.
inline std::uint64_t frobenius_degree(const Poly& f, std::uint64_t p) {
  const std::size_t n = f.size() - 1;
  detail::ModPoly x(n, 0);
  if (n == 1) return 1;
  x[1] = 1;
  detail::ModPoly y = x;
  for (std::uint64_t k = 1; k <= n; ++k) {
    y = detail::powmod(y, p, f, p);
    if (y == x) return k;
  }
  return 0;
}

}  // namespace oracle_poly
