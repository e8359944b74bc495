#pragma once

// High-precision real and exact integer types shared by every module.
//
// Real is a variable-precision MPFR float. Values are created at the
// thread's current default precision, which callers set with
// PrecisionScope; all "exact identity" checks use a relative tolerance
// derived from the working mantissa (2^-100 at the default 128 bits).

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdint>
#include <ios>
#include <string>

#include "towerinv/error.hpp"

namespace towerinv {

using Real = boost::multiprecision::mpfr_float;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr unsigned kDefaultPrecisionBits = 128;
inline constexpr unsigned kMinPrecisionBits = 64;

/// Decimal digits that give at least `bits` of binary mantissa.
inline unsigned bits_to_digits10(unsigned bits) {
  return static_cast<unsigned>(std::ceil(static_cast<double>(bits) * 0.30102999566398120)) + 1;
}

inline unsigned current_precision_bits() {
  return static_cast<unsigned>(
      std::floor(static_cast<double>(Real::default_precision()) / 0.30102999566398120));
}

namespace detail {
// Programs start at the default mantissa rather than Boost's 50 digits.
inline const bool precision_initialized = [] {
  Real::default_precision(bits_to_digits10(kDefaultPrecisionBits));
  return true;
}();
}  // namespace detail

/// Sets the default Real precision for the lifetime of the object.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits) : saved_(Real::default_precision()) {
    require(bits >= kMinPrecisionBits, Errc::InvalidArgument,
            "precision must be at least 64 bits, got " + std::to_string(bits));
    Real::default_precision(bits_to_digits10(bits));
  }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;
  ~PrecisionScope() { Real::default_precision(saved_); }

 private:
  unsigned saved_;
};

inline Real pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

inline Real ln(std::uint64_t n) { return boost::multiprecision::log(Real(n)); }

inline Real ln2() { return ln(2); }

inline Real ln_two_pi() { return boost::multiprecision::log(2 * pi()); }

inline Real log1p(const Real& x) {
  Real r;
  mpfr_log1p(r.backend().data(), x.backend().data(), MPFR_RNDN);
  return r;
}

/// log(q / (q - 1)) for q = p^k, evaluated without forming q.
inline Real log_q_ratio(std::uint64_t p, std::uint64_t k) {
  const Real inv_q = boost::multiprecision::exp(-Real(k) * ln(p));
  return -log1p(-inv_q);
}

/// 2^-100 scaled to the working precision: the contract for "exact" real identities.
inline Real exact_tolerance() {
  const int bits = static_cast<int>(current_precision_bits());
  const int exponent = bits >= 128 ? 100 : bits - 28;
  return boost::multiprecision::ldexp(Real(1), -exponent);
}

inline bool relatively_close(const Real& a, const Real& b, const Real& rel_tol) {
  using boost::multiprecision::abs;
  Real scale = abs(b);
  if (scale < 1) scale = 1;
  return abs(a - b) <= rel_tol * scale;
}

/// Fixed-digit decimal rendering used in every report (locale independent).
inline std::string format_real(const Real& x, int significant_digits = 30) {
  if (x == 0) return "0";
  return x.str(significant_digits, std::ios_base::fmtflags{});
}

inline Real parse_real(const std::string& text) {
  try {
    return Real(text);
  } catch (const std::exception&) {
    throw Error(Errc::ParseError, "not a real number: '" + text + "'");
  }
}

inline std::string to_decimal(const BigInt& n) { return n.str(); }

}  // namespace towerinv
