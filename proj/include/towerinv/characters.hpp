#pragma once

// Dirichlet characters with exact root-of-unity values.
//
// A character mod m is stored as its order N and a table of exponents:
// chi(a) = exp(2*pi*i * table[a] / N) for gcd(a, m) = 1, and table[a] = -1
// (value zero) otherwise. Tables are always reduced so that N is the exact
// order of the character. Complex numbers never appear in this module.

#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "towerinv/arith.hpp"
#include "towerinv/error.hpp"

namespace towerinv {

/// exp(2*pi*i * exponent / order), reduced so gcd(exponent, order) = 1.
struct RootOfUnity {
  u64 order = 1;
  u64 exponent = 0;

  static RootOfUnity make(u64 order, u64 exponent) {
    require(order >= 1, Errc::InvalidArgument, "root of unity of order 0");
    exponent %= order;
    const u64 g = std::gcd(exponent, order);
    if (exponent == 0) return {1, 0};
    return {order / g, exponent / g};
  }
  friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;
};

/// Structure of (Z/m)^x as a direct product of cyclic groups, with a
/// discrete-log table over those generators.
class UnitGroup {
 public:
  explicit UnitGroup(u64 modulus) : modulus_(modulus) {
    require(modulus >= 1, Errc::InvalidArgument, "modulus must be positive");
    for (const auto& [p, k] : factorize(modulus == 1 ? 1 : modulus)) {
      if (modulus == 1) break;
      const u64 pk = ipow(p, k);
      const u64 rest = modulus / pk;
      auto lift = [&](u64 g) { return rest == 1 ? g % pk : crt({{g % pk, pk}, {1, rest}}); };
      if (p == 2) {
        if (k >= 2) add_generator(lift(pk - 1), 2);
        if (k >= 3) add_generator(lift(5), pk / 4);
      } else {
        add_generator(lift(primitive_root_odd_prime_power(p, k)), totient(pk));
      }
    }
    exponent_ = 1;
    for (u64 o : orders_) exponent_ = std::lcm(exponent_, o);
    build_logs();
  }

  u64 modulus() const { return modulus_; }
  const std::vector<u64>& generators() const { return generators_; }
  const std::vector<u64>& orders() const { return orders_; }
  /// Least common multiple of the generator orders.
  u64 exponent() const { return exponent_; }
  u64 size() const {
    u64 n = 1;
    for (u64 o : orders_) n *= o;
    return n;
  }
  bool is_unit(u64 a) const { return std::gcd(a % modulus_, modulus_) == 1; }
  /// Exponent vector of a over generators(); a must be a unit.
  const std::vector<u64>& log(u64 a) const { return logs_[a % modulus_]; }

 private:
  void add_generator(u64 g, u64 order) {
    generators_.push_back(g);
    orders_.push_back(order);
  }

  void build_logs() {
    logs_.assign(modulus_, {});
    const std::size_t n = generators_.size();
    std::vector<u64> digits(n, 0);
    while (true) {
      u64 x = 1 % modulus_;
      for (std::size_t i = 0; i < n; ++i) x = mul_mod(x, pow_mod(generators_[i], digits[i], modulus_), modulus_);
      logs_[x] = digits;
      std::size_t i = 0;
      while (i < n && ++digits[i] == orders_[i]) digits[i++] = 0;
      if (i == n) break;
    }
    if (modulus_ == 1) logs_[0] = {};
  }

  u64 modulus_;
  u64 exponent_ = 1;
  std::vector<u64> generators_;
  std::vector<u64> orders_;
  std::vector<std::vector<u64>> logs_;
};

class DirichletCharacter {
 public:
  static constexpr i64 kZero = -1;

  /// The trivial character modulo 1.
  DirichletCharacter() : modulus_(1), order_(1), table_{0}, conductor_(1) {}

  /// Validating constructor: exact multiplicativity, zero exactly off the units,
  /// and chi(1) = 1 are all checked.
  static DirichletCharacter from_table(u64 modulus, u64 order, std::vector<i64> table) {
    require(modulus >= 1, Errc::InvalidCharacter, "modulus must be positive");
    require(order >= 1, Errc::InvalidCharacter, "order must be positive");
    require(table.size() == modulus, Errc::InvalidCharacter,
            "exponent table has " + std::to_string(table.size()) + " entries, modulus is " +
                std::to_string(modulus));
    for (u64 a = 0; a < modulus; ++a) {
      const bool unit = std::gcd(a, modulus) == 1;
      if (unit) {
        require(table[a] >= 0 && static_cast<u64>(table[a]) < order, Errc::InvalidCharacter,
                "exponent out of range at residue " + std::to_string(a));
      } else {
        require(table[a] == kZero, Errc::InvalidCharacter,
                "non-zero value at non-unit residue " + std::to_string(a));
      }
    }
    require(table[1 % modulus] == 0, Errc::InvalidCharacter, "chi(1) must equal 1");
    const UnitGroup units(modulus);
    for (u64 a = 0; a < modulus; ++a) {
      if (table[a] == kZero) continue;
      for (u64 g : units.generators()) {
        const u64 ag = mul_mod(a, g, modulus);
        const u64 expected = (static_cast<u64>(table[a]) + static_cast<u64>(table[g])) % order;
        require(static_cast<u64>(table[ag]) == expected, Errc::InvalidCharacter,
                "not multiplicative at (" + std::to_string(a) + ", " + std::to_string(g) + ")");
      }
    }
    return DirichletCharacter(modulus, order, std::move(table));
  }

  /// Character with chi(g_i) = exp(2*pi*i * c_i / ord_i) on the generators of `units`.
  static DirichletCharacter from_generator_exponents(const UnitGroup& units, const std::vector<u64>& c) {
    require(c.size() == units.generators().size(), Errc::InvalidCharacter,
            "expected one exponent per unit-group generator");
    const u64 m = units.modulus();
    const u64 n0 = units.exponent();
    std::vector<i64> table(m, kZero);
    for (u64 a = 0; a < m; ++a) {
      if (!units.is_unit(a)) continue;
      const auto& lg = units.log(a);
      u64 e = 0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        e = (e + mul_mod(c[i] % units.orders()[i], lg[i] * (n0 / units.orders()[i]) % n0, n0)) % n0;
      }
      table[a] = static_cast<i64>(e);
    }
    return DirichletCharacter(m, n0, std::move(table));
  }

  /// Every character modulo m, ordered by generator-exponent vector.
  static std::vector<DirichletCharacter> all(const UnitGroup& units) {
    std::vector<DirichletCharacter> out;
    const std::size_t n = units.orders().size();
    std::vector<u64> digits(n, 0);
    while (true) {
      out.push_back(from_generator_exponents(units, digits));
      std::size_t i = 0;
      while (i < n && ++digits[i] == units.orders()[i]) digits[i++] = 0;
      if (i == n) break;
    }
    return out;
  }

  u64 modulus() const { return modulus_; }
  u64 order() const { return order_; }
  u64 conductor() const { return conductor_; }
  const std::vector<i64>& table() const { return table_; }

  i64 exponent(u64 a) const { return table_[a % modulus_]; }
  std::optional<RootOfUnity> value(u64 a) const {
    const i64 e = exponent(a);
    if (e == kZero) return std::nullopt;
    return RootOfUnity::make(order_, static_cast<u64>(e));
  }

  bool is_principal() const { return order_ == 1; }
  bool is_primitive() const { return conductor_ == modulus_; }
  /// chi(-1) = 1.
  bool is_even() const { return exponent(modulus_ - 1 + (modulus_ == 1 ? 1 : 0)) == 0; }
  bool is_odd() const { return !is_even(); }

  DirichletCharacter primitive() const {
    if (is_primitive()) return *this;
    const u64 c = conductor_;
    std::vector<i64> t(c, kZero);
    for (u64 r = 0; r < c; ++r) {
      if (std::gcd(r, c) != 1) continue;
      u64 a = r;
      while (std::gcd(a, modulus_) != 1) a += c;
      t[r] = table_[a];
    }
    return DirichletCharacter(c, order_, std::move(t));
  }

  /// The character mod `m` induced from this one; m must be a multiple of modulus().
  DirichletCharacter induced(u64 m) const {
    require(m % modulus_ == 0, Errc::InvalidArgument, "can only induce to a multiple of the modulus");
    std::vector<i64> t(m, kZero);
    for (u64 a = 0; a < m; ++a) {
      if (std::gcd(a, m) == 1) t[a] = table_[a % modulus_];
    }
    return DirichletCharacter(m, order_, std::move(t));
  }

  DirichletCharacter conj() const {
    std::vector<i64> t(table_);
    for (auto& e : t) {
      if (e != kZero) e = static_cast<i64>((order_ - static_cast<u64>(e)) % order_);
    }
    return DirichletCharacter(modulus_, order_, std::move(t));
  }

  /// Product as a character modulo lcm of the moduli (not primitivized).
  friend DirichletCharacter operator*(const DirichletCharacter& a, const DirichletCharacter& b) {
    const u64 m = std::lcm(a.modulus_, b.modulus_);
    const u64 n = std::lcm(a.order_, b.order_);
    const u64 sa = n / a.order_;
    const u64 sb = n / b.order_;
    std::vector<i64> t(m, kZero);
    for (u64 x = 0; x < m; ++x) {
      const i64 ea = a.table_[x % a.modulus_];
      const i64 eb = b.table_[x % b.modulus_];
      if (ea == kZero || eb == kZero) continue;
      t[x] = static_cast<i64>((static_cast<u64>(ea) * sa + static_cast<u64>(eb) * sb) % n);
    }
    return DirichletCharacter(m, n, std::move(t));
  }

  DirichletCharacter pow(u64 k) const {
    std::vector<i64> t(table_);
    for (auto& e : t) {
      if (e != kZero) e = static_cast<i64>(mul_mod(static_cast<u64>(e), k % order_, order_));
    }
    return DirichletCharacter(modulus_, order_, std::move(t));
  }

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.modulus_ == b.modulus_ && a.order_ == b.order_ && a.table_ == b.table_;
  }
  friend std::strong_ordering operator<=>(const DirichletCharacter& a, const DirichletCharacter& b) {
    if (auto c = a.modulus_ <=> b.modulus_; c != 0) return c;
    if (auto c = a.order_ <=> b.order_; c != 0) return c;
    return a.table_ <=> b.table_;
  }

 private:
  DirichletCharacter(u64 modulus, u64 order, std::vector<i64> table)
      : modulus_(modulus), order_(order), table_(std::move(table)) {
    reduce_order();
    conductor_ = compute_conductor();
  }

  void reduce_order() {
    u64 g = order_;
    for (i64 e : table_) {
      if (e != kZero) g = std::gcd(g, static_cast<u64>(e));
    }
    if (g == 0 || g == 1) return;
    order_ /= g;
    for (auto& e : table_) {
      if (e != kZero) e = static_cast<i64>(static_cast<u64>(e) / g);
    }
  }

  u64 compute_conductor() const {
    if (order_ == 1) return 1;
    for (u64 d : divisors(modulus_)) {
      bool factors = true;
      for (u64 a = 1 % d; a < modulus_ && factors; a += d) {
        if (table_[a] != kZero && table_[a] != 0) factors = false;
      }
      if (factors) return d;
    }
    return modulus_;
  }

  u64 modulus_;
  u64 order_;
  std::vector<i64> table_;
  u64 conductor_ = 1;
};

}  // namespace towerinv
