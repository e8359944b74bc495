#pragma once

// Abelian number fields represented by their groups of primitive Dirichlet
// characters. Degree, signature and discriminant follow from the group
// alone (conductor-discriminant formula); no polynomial model is kept.

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "towerinv/arith.hpp"
#include "towerinv/characters.hpp"
#include "towerinv/error.hpp"
#include "towerinv/real.hpp"

namespace towerinv {

class AbelianField {
 public:
  /// Field of the character group generated by `generators`, all given modulo `modulus`.
  static AbelianField from_generators(std::string label, u64 modulus, std::vector<DirichletCharacter> generators) {
    require(modulus >= 1, Errc::InvalidCharacter, "modulus must be positive");
    for (const auto& g : generators) {
      require(g.modulus() == modulus, Errc::InvalidCharacter,
              "generator has modulus " + std::to_string(g.modulus()) + ", field modulus is " +
                  std::to_string(modulus));
    }
    // closure inside the character group mod `modulus`
    std::set<DirichletCharacter> group{DirichletCharacter().induced(modulus)};
    std::vector<DirichletCharacter> frontier(group.begin(), group.end());
    while (!frontier.empty()) {
      std::vector<DirichletCharacter> next;
      for (const auto& x : frontier) {
        for (const auto& g : generators) {
          auto y = x * g;
          if (group.insert(y).second) next.push_back(std::move(y));
        }
      }
      frontier = std::move(next);
    }
    std::vector<DirichletCharacter> primitive;
    primitive.reserve(group.size());
    for (const auto& chi : group) primitive.push_back(chi.primitive());
    return AbelianField(std::move(label), modulus, std::move(generators), std::move(primitive));
  }

  const std::string& label() const { return label_; }
  u64 modulus() const { return modulus_; }
  const std::vector<DirichletCharacter>& generators() const { return generators_; }
  /// Primitive characters, sorted; the trivial character comes first.
  const std::vector<DirichletCharacter>& characters() const { return characters_; }

  u64 degree() const { return characters_.size(); }
  u64 r1() const { return totally_real_ ? degree() : 0; }
  u64 r2() const { return totally_real_ ? 0 : degree() / 2; }
  bool is_totally_real() const { return totally_real_; }
  /// lcm of the character conductors: the smallest n with this field inside Q(zeta_n).
  u64 conductor() const { return conductor_; }

  /// p -> v_p(|D_K|), from the product of conductors.
  const std::map<u64, u64>& disc_factorization() const { return disc_; }

  BigInt abs_disc() const {
    BigInt d = 1;
    for (const auto& [p, k] : disc_) d *= boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(k));
    return d;
  }

  /// g_K = (1/2) log|D_K| at the current precision.
  Real genus() const {
    Real g = 0;
    for (const auto& [p, k] : disc_) g += Real(k) * ln(p);
    return g / 2;
  }

  bool contains(const DirichletCharacter& chi) const {
    return std::binary_search(characters_.begin(), characters_.end(), chi.primitive());
  }

  bool is_subfield_of(const AbelianField& other) const {
    return std::all_of(characters_.begin(), characters_.end(),
                       [&](const DirichletCharacter& chi) { return other.contains(chi); });
  }

  friend bool operator==(const AbelianField& a, const AbelianField& b) { return a.characters_ == b.characters_; }

 private:
  AbelianField(std::string label, u64 modulus, std::vector<DirichletCharacter> generators,
               std::vector<DirichletCharacter> characters)
      : label_(std::move(label)),
        modulus_(modulus),
        generators_(std::move(generators)),
        characters_(std::move(characters)) {
    std::sort(characters_.begin(), characters_.end());
    characters_.erase(std::unique(characters_.begin(), characters_.end()), characters_.end());
    totally_real_ = std::all_of(characters_.begin(), characters_.end(),
                                [](const DirichletCharacter& chi) { return chi.is_even(); });
    conductor_ = 1;
    for (const auto& chi : characters_) {
      conductor_ = std::lcm(conductor_, chi.conductor());
      if (chi.conductor() == 1) continue;
      for (const auto& [p, k] : factorize(chi.conductor())) disc_[p] += k;
    }
  }

  std::string label_;
  u64 modulus_ = 1;
  std::vector<DirichletCharacter> generators_;
  std::vector<DirichletCharacter> characters_;
  std::map<u64, u64> disc_;
  u64 conductor_ = 1;
  bool totally_real_ = true;
};

inline AbelianField build_abelian_field(u64 modulus, std::vector<DirichletCharacter> generators,
                                        std::string label = {}) {
  return AbelianField::from_generators(std::move(label), modulus, std::move(generators));
}

inline AbelianField rationals() { return build_abelian_field(1, {}, "Q"); }

/// Q(zeta_n), generated by the unit-group basis characters mod n.
inline AbelianField cyclotomic_field(u64 n, std::string label = {}) {
  require(n >= 1, Errc::InvalidArgument, "cyclotomic index must be positive");
  const UnitGroup units(n);
  std::vector<DirichletCharacter> gens;
  for (std::size_t i = 0; i < units.generators().size(); ++i) {
    std::vector<u64> c(units.generators().size(), 0);
    c[i] = 1;
    gens.push_back(DirichletCharacter::from_generator_exponents(units, c));
  }
  if (label.empty()) label = "Q(zeta_" + std::to_string(n) + ")";
  return build_abelian_field(n, std::move(gens), std::move(label));
}

/// Fixed field of the characters of `field` that satisfy `keep` (which must select a subgroup).
template <class Predicate>
AbelianField subfield_where(const AbelianField& field, Predicate keep, std::string label = {}) {
  std::vector<DirichletCharacter> gens;
  const u64 m = field.conductor();
  for (const auto& chi : field.characters()) {
    if (keep(chi)) gens.push_back(chi.induced(m));
  }
  return build_abelian_field(m, std::move(gens), std::move(label));
}

/// Maximal totally real subfield (even characters).
inline AbelianField real_subfield(const AbelianField& field, std::string label = {}) {
  return subfield_where(field, [](const DirichletCharacter& chi) { return chi.is_even(); }, std::move(label));
}

inline u64 relative_degree(const AbelianField& L, const AbelianField& K) {
  require(K.is_subfield_of(L), Errc::NotASubfield, "'" + K.label() + "' is not contained in '" + L.label() + "'");
  return L.degree() / K.degree();
}

/// p -> v_p(N_{K/Q} D_{L/K}) = v_p(D_L) - [L:K] v_p(D_K), exact.
inline std::map<u64, u64> relative_disc_exponents(const AbelianField& L, const AbelianField& K) {
  const u64 n = relative_degree(L, K);
  std::map<u64, u64> out;
  for (const auto& [p, k] : L.disc_factorization()) {
    const auto it = K.disc_factorization().find(p);
    const u64 base = it == K.disc_factorization().end() ? 0 : it->second * n;
    require(k >= base, Errc::Internal, "negative relative discriminant exponent");
    if (k > base) out[p] = k - base;
  }
  return out;
}

/// g_{L/K} = (1/2) log N_{K/Q} D_{L/K}, from the exact relative discriminant.
inline Real relative_genus(const AbelianField& L, const AbelianField& K) {
  Real g = 0;
  for (const auto& [p, k] : relative_disc_exponents(L, K)) g += Real(k) * ln(p);
  return g / 2;
}

/// w_K: the largest n with Q(zeta_n) inside K. Candidates are the divisors of
/// 2 * conductor(K), which contain every such n.
inline u64 roots_of_unity_count(const AbelianField& K) {
  u64 best = 2;
  for (u64 n : divisors(2 * K.conductor())) {
    if (n <= best || totient(n) > K.degree() || K.degree() % totient(n) != 0) continue;
    const UnitGroup units(n);
    const auto chars = DirichletCharacter::all(units);
    if (std::all_of(chars.begin(), chars.end(), [&](const DirichletCharacter& chi) { return K.contains(chi); })) {
      best = n;
    }
  }
  return best;
}

}  // namespace towerinv
