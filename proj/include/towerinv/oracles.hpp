#pragma once

// Brute-force oracles for class numbers and regulators. Nothing in the
// computational path includes this header: it exists so that the analytic
// class number formula can be checked against arithmetic that never touches
// an L-value.
//
//  - h(D), D < 0: count of reduced positive definite binary quadratic forms.
//  - h(D), D > 0: cycles of reduced indefinite forms (narrow), halved when
//    the fundamental unit has norm +1.
//  - fundamental unit of Q(sqrt d): first unit among the continued fraction
//    convergents of the ring generator.
//  - h^-(K) of an imaginary abelian field: Q w prod_{chi odd} (-B_{1,chi}/2),
//    evaluated exactly in Z[zeta_N].

#include <cstdint>
#include <numeric>
#include <set>
#include <tuple>
#include <vector>

#include "towerinv/arith.hpp"
#include "towerinv/error.hpp"
#include "towerinv/fields.hpp"
#include "towerinv/real.hpp"

namespace towerinv::oracle {

inline i64 isqrt(i64 n) {
  if (n < 0) return -1;
  i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline u64 imaginary_quadratic_class_number(i64 disc) {
  require(disc < 0 && (((-disc) % 4 == 3) || ((-disc) % 4 == 0)), Errc::InvalidArgument, "not a negative discriminant");
  u64 count = 0;
  for (i64 a = 1; 3 * a * a <= -disc; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      const i64 num = b * b - disc;
      if (num % (4 * a) != 0) continue;
      const i64 c = num / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1) continue;
      ++count;
    }
  }
  return count;
}

struct QuadraticUnit {
  i64 d = 0;     // squarefree radicand
  BigInt x = 0;  // unit = (x + y sqrt d) / 2
  BigInt y = 0;
  int norm = 1;

  Real log() const {
    const Real root = boost::multiprecision::sqrt(Real(d));
    return boost::multiprecision::log((Real(x) + Real(y) * root) / 2);
  }
};

/// Fundamental unit of Q(sqrt d), d > 1 squarefree, from the continued fraction
/// of omega = (1 + sqrt d)/2 (d = 1 mod 4) or sqrt d.
inline QuadraticUnit fundamental_unit(i64 d) {
  require(d > 1 && isqrt(d) * isqrt(d) != d, Errc::InvalidArgument, "radicand must be a non-square > 1");
  const bool half = d % 4 == 1;
  const i64 s = isqrt(d);
  i64 P = half ? 1 : 0;
  i64 Q = half ? 2 : 1;
  BigInt p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
  for (int step = 0; step < 10000; ++step) {
    const i64 a = (P + s) / Q;
    const BigInt p = a * p_prev + p_prev2;
    const BigInt q = a * q_prev + q_prev2;
    // norm of p - q*omega
    BigInt x, y, norm4;
    if (half) {
      x = 2 * p - q;
      y = q;
    } else {
      x = 2 * p;
      y = 2 * q;
    }
    norm4 = x * x - BigInt(d) * y * y;  // 4 * N(unit)
    if (norm4 == 4 || norm4 == -4) {
      return {d, x, y, norm4 > 0 ? 1 : -1};
    }
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
    P = a * Q - P;
    Q = (d - P * P) / Q;
  }
  throw Error(Errc::Internal, "continued fraction did not produce a unit");
}

/// Wide class number of the real quadratic field of fundamental discriminant disc > 0.
inline u64 real_quadratic_class_number(i64 disc) {
  require(disc > 0, Errc::InvalidArgument, "discriminant must be positive");
  const double root = std::sqrt(static_cast<double>(disc));
  using Form = std::tuple<i64, i64, i64>;
  std::set<Form> reduced;
  for (i64 b = 1; static_cast<double>(b) < root; ++b) {
    if ((b - disc) % 2 != 0) continue;
    const i64 ac = (b * b - disc) / 4;  // negative
    for (i64 a = 1; a <= -ac; ++a) {
      if ((-ac) % a != 0) continue;
      const double two_a = 2.0 * static_cast<double>(a);
      if (!(root - b < two_a && two_a < root + b)) continue;
      reduced.insert({a, b, ac / a});
      reduced.insert({-a, b, -ac / a});
    }
  }
  auto rho = [&](const Form& f) {
    const auto [a, b, c] = f;
    const i64 m = 2 * (c < 0 ? -c : c);
    i64 bb = (((-b) % m) + m) % m;
    while (static_cast<double>(bb) < root - static_cast<double>(m)) bb += m;
    while (static_cast<double>(bb + m) < root) bb += m;
    if (static_cast<double>(bb) > root) bb -= m;
    return Form{c, bb, (bb * bb - disc) / (4 * c)};
  };
  std::set<Form> seen;
  u64 cycles = 0;
  for (const auto& f : reduced) {
    if (seen.count(f)) continue;
    ++cycles;
    Form g = f;
    for (int guard = 0; guard < 100000 && !seen.count(g); ++guard) {
      seen.insert(g);
      g = rho(g);
    }
  }
  const i64 d = disc % 4 == 0 ? disc / 4 : disc;
  const QuadraticUnit eps = fundamental_unit(d);
  return eps.norm == -1 ? cycles : cycles / 2;
}

namespace detail {

using Poly = std::vector<BigInt>;  // coefficients, low degree first

inline void trim(Poly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

inline Poly cyclotomic_polynomial(u64 n) {
  // x^n - 1 divided by Phi_d for every proper divisor d
  Poly num(n + 1, 0);
  num[0] = -1;
  num[n] = 1;
  for (u64 d : divisors(n)) {
    if (d == n) continue;
    const Poly den = cyclotomic_polynomial(d);
    Poly q(num.size() - den.size() + 1, 0);
    Poly r = num;
    for (std::size_t i = q.size(); i-- > 0;) {
      q[i] = r[i + den.size() - 1];  // den is monic
      for (std::size_t j = 0; j < den.size(); ++j) r[i + j] -= q[i] * den[j];
    }
    num = q;
  }
  trim(num);
  return num;
}

inline Poly mul_mod(const Poly& a, const Poly& b, const Poly& modulus) {
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  const std::size_t deg = modulus.size() - 1;
  for (std::size_t i = out.size(); i-- > deg;) {
    const BigInt c = out[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= deg; ++j) out[i - deg + j] -= c * modulus[j];
  }
  out.resize(deg);
  trim(out);
  return out;
}

}  // namespace detail

/// h^-(K) = Q w prod_{chi odd} (-B_{1,chi}/2) for an imaginary abelian field K,
/// with B_{1,chi} = (1/f) sum_{a=1}^{f} chi(a) a. `unit_index` is Q in {1, 2}.
inline BigInt minus_class_number(const AbelianField& K, u64 w, u64 unit_index) {
  require(!K.is_totally_real(), Errc::InvalidArgument, "field is totally real");
  u64 n = 1;
  for (const auto& chi : K.characters()) n = std::lcm(n, chi.order());
  const detail::Poly phi = detail::cyclotomic_polynomial(n);
  detail::Poly product{BigInt(1)};
  BigInt denominator = 1;
  u64 odd = 0;
  for (const auto& chi : K.characters()) {
    if (!chi.is_odd()) continue;
    ++odd;
    detail::Poly s(n, 0);  // sum chi(a) a as a polynomial in zeta_n
    for (u64 a = 1; a < chi.modulus(); ++a) {
      const i64 e = chi.exponent(a);
      if (e == DirichletCharacter::kZero) continue;
      s[static_cast<u64>(e) * (n / chi.order()) % n] += a;
    }
    product = detail::mul_mod(product, s, phi);
    denominator *= 2 * chi.modulus();  // -B/2 = -(sum)/(2f)
  }
  require(product.size() == 1, Errc::Internal, "Bernoulli product is not rational");
  BigInt numer = product[0] * unit_index * w;
  if (odd % 2 == 1) numer = -numer;
  require(numer % denominator == 0, Errc::Internal, "relative class number is not an integer");
  return numer / denominator;
}

}  // namespace towerinv::oracle
