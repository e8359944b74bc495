#pragma once

#include <string>

#include "towerinv/fields.hpp"
#include "towerinv/real.hpp"

namespace th {

using namespace towerinv;

inline AbelianField gaussian() { return cyclotomic_field(4, "Q(i)"); }
inline AbelianField eisenstein() { return cyclotomic_field(3, "Q(sqrt-3)"); }
inline AbelianField zeta5() { return cyclotomic_field(5, "Q(zeta5)"); }
inline AbelianField sqrt5() { return real_subfield(zeta5(), "Q(sqrt5)"); }
inline AbelianField sqrt2() { return real_subfield(cyclotomic_field(8), "Q(sqrt2)"); }

/// The quadratic subfield of Q(zeta_p), p an odd prime.
inline AbelianField quadratic_in_zeta(u64 p) {
  return subfield_where(
      cyclotomic_field(p), [](const DirichletCharacter& chi) { return chi.order() <= 2; }, "quad");
}

inline bool close(const Real& a, const Real& b, const Real& rel) { return relatively_close(a, b, rel); }

inline Real rel(const char* text) { return Real(text); }

}  // namespace th
