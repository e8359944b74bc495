#pragma once

// |L(1, chi)| from the finite closed forms, and log(h_K R_K) from the
// analytic class number formula
//
//   h R = w sqrt|D| / (2^r1 (2 pi)^r2) * prod_{chi != 1} L(1, chi).
//
// The closed forms (chi primitive of conductor m):
//   odd:  |L(1,chi)| = pi / m^{3/2} * |sum_{a<m} conj(chi)(a) a|
//   even: |L(1,chi)| = 1 / sqrt(m)  * |sum_{a<m} conj(chi)(a) log sin(pi a / m)|
// are authoritative. A double-precision partial series with an Abel-summation
// tail bound cross-checks each value; a mismatch triggers one recomputation at
// twice the mantissa before failing.

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "towerinv/characters.hpp"
#include "towerinv/error.hpp"
#include "towerinv/fields.hpp"
#include "towerinv/real.hpp"

namespace towerinv {

struct LValue {
  DirichletCharacter character;  // primitive
  Real value;                    // |L(1, chi)| > 0
  Real log_value;
  double series_partial = 0;  // |sum_{n<=N} chi(n)/n| in double precision
  double series_tail_bound = 0;
  bool escalated = false;  // recomputed at doubled precision
};

struct ClassRegData {
  std::string field_label;
  u64 w = 2;
  Real log_residue = 0;  // sum_{chi != 1} log |L(1, chi)|
  Real log_hr = 0;       // log(h_K R_K)
  std::vector<LValue> l_values;
};

namespace detail {

/// Per-precision tables shared across the characters of one field.
class LTables {
 public:
  const std::vector<std::pair<Real, Real>>& roots(u64 order) {
    sync();
    auto it = roots_.find(order);
    if (it != roots_.end()) return it->second;
    std::vector<std::pair<Real, Real>> t;
    t.reserve(order);
    const Real step = 2 * pi() / Real(order);
    for (u64 k = 0; k < order; ++k) {
      const Real theta = step * Real(k);
      t.emplace_back(boost::multiprecision::cos(theta), boost::multiprecision::sin(theta));
    }
    return roots_.emplace(order, std::move(t)).first->second;
  }

  const std::vector<Real>& log_sin(u64 m) {
    sync();
    auto it = log_sin_.find(m);
    if (it != log_sin_.end()) return it->second;
    std::vector<Real> t(m, Real(0));
    const Real step = pi() / Real(m);
    for (u64 a = 1; a < m; ++a) t[a] = boost::multiprecision::log(boost::multiprecision::sin(step * Real(a)));
    return log_sin_.emplace(m, std::move(t)).first->second;
  }

 private:
  void sync() {
    if (digits_ == Real::default_precision()) return;
    digits_ = Real::default_precision();
    roots_.clear();
    log_sin_.clear();
  }

  unsigned digits_ = 0;
  std::map<u64, std::vector<std::pair<Real, Real>>> roots_;
  std::map<u64, std::vector<Real>> log_sin_;
};

inline Real closed_form_l_one(const DirichletCharacter& chi, LTables& tables) {
  const u64 m = chi.modulus();
  const u64 n = chi.order();
  const auto& roots = tables.roots(n);
  Real re = 0;
  Real im = 0;
  if (chi.is_odd()) {
    for (u64 a = 1; a < m; ++a) {
      const i64 e = chi.exponent(a);
      if (e == DirichletCharacter::kZero) continue;
      const auto& [c, s] = roots[static_cast<u64>(e)];
      re += c * Real(a);
      im -= s * Real(a);
    }
    const Real modulus = boost::multiprecision::sqrt(re * re + im * im);
    return pi() * modulus / (Real(m) * boost::multiprecision::sqrt(Real(m)));
  }
  const auto& ls = tables.log_sin(m);
  for (u64 a = 1; a < m; ++a) {
    const i64 e = chi.exponent(a);
    if (e == DirichletCharacter::kZero) continue;
    const auto& [c, s] = roots[static_cast<u64>(e)];
    re += c * ls[a];
    im -= s * ls[a];
  }
  return boost::multiprecision::sqrt(re * re + im * im) / boost::multiprecision::sqrt(Real(m));
}

/// |sum_{n<=N} chi(n)/n| with N = 64 m, and the bound 2m/(N+1) on the tail.
inline std::pair<double, double> partial_series(const DirichletCharacter& chi) {
  const u64 m = chi.modulus();
  const u64 terms = 64 * m;
  const double two_pi = 6.283185307179586476925286766559;
  std::vector<std::complex<double>> values(m);
  for (u64 a = 0; a < m; ++a) {
    const i64 e = chi.exponent(a);
    if (e == DirichletCharacter::kZero) continue;
    const double theta = two_pi * static_cast<double>(e) / static_cast<double>(chi.order());
    values[a] = {std::cos(theta), std::sin(theta)};
  }
  std::complex<double> sum = 0;
  for (u64 k = 1; k <= terms; ++k) sum += values[k % m] / static_cast<double>(k);
  return {std::abs(sum), 2.0 * static_cast<double>(m) / static_cast<double>(terms + 1)};
}

inline LTables& thread_tables() {
  thread_local LTables tables;
  return tables;
}

}  // namespace detail

inline LValue l_one(const DirichletCharacter& character) {
  require(!character.is_principal(), Errc::PrincipalCharacter, "L(1, chi) has a pole for principal chi");
  const DirichletCharacter chi = character.primitive();
  LValue out{chi, detail::closed_form_l_one(chi, detail::thread_tables()), Real(0)};
  const auto [partial, tail] = detail::partial_series(chi);
  out.series_partial = partial;
  out.series_tail_bound = tail;
  auto agrees = [&](const Real& v) {
    return std::abs(static_cast<double>(v) - partial) <= tail + 1e-9 && v > 0;
  };
  if (!agrees(out.value)) {
    Real escalated;
    {
      PrecisionScope wider(2 * current_precision_bits());
      escalated = detail::closed_form_l_one(chi, detail::thread_tables());
    }
    require(agrees(escalated), Errc::NumericalMismatch,
            "closed form and series disagree for a character of conductor " + std::to_string(chi.modulus()));
    out.value = Real(escalated);
    out.escalated = true;
  }
  out.log_value = boost::multiprecision::log(out.value);
  return out;
}

inline ClassRegData log_hr(const AbelianField& K) {
  ClassRegData out;
  out.field_label = K.label();
  out.w = roots_of_unity_count(K);
  if (K.degree() == 1) return out;
  for (const auto& chi : K.characters()) {
    if (chi.is_principal()) continue;
    out.l_values.push_back(l_one(chi));
    out.log_residue += out.l_values.back().log_value;
  }
  out.log_hr = ln(out.w) + K.genus() - Real(K.r1()) * ln2() - Real(K.r2()) * ln_two_pi() + out.log_residue;
  require(boost::multiprecision::isfinite(out.log_hr), Errc::NumericalMismatch, "log(hR) is not finite");
  // h >= 1 and R = 1 for imaginary quadratic fields
  if (K.degree() == 2 && K.r2() == 1) {
    require(out.log_hr > -exact_tolerance(), Errc::NumericalMismatch, "negative log(hR) for an imaginary quadratic field");
  }
  return out;
}

/// log(h_K R_K) / g_K.
inline Real bs_numerator(const AbelianField& K) {
  require(K.degree() > 1, Errc::ZeroGenus, "Q has genus 0");
  return log_hr(K).log_hr / K.genus();
}

}  // namespace towerinv
