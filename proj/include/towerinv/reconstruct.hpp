#pragma once

// Decomposition data on finite synthetic lattices: primes lying under
// subgroups, z-counts, the two-subgroup criterion for "more than one prime",
// constancy of beta along a chain, and recovering a prime norm from the
// constant C.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "towerinv/arith.hpp"
#include "towerinv/error.hpp"
#include "towerinv/real.hpp"

namespace towerinv {

struct LatticePrime {
  std::string label;
  bool in_s = false;
  std::set<std::string> lies_under;  // subgroup labels
};

/// A finite meet-semilattice of (closed normal) subgroups of U with a top U,
/// and primes recording which subgroups they lie under.
class SubgroupLattice {
 public:
  using Meet = std::map<std::pair<std::string, std::string>, std::string>;

  /// `meet` may list each unordered pair once; H ^ H = H and U ^ H = H are implied.
  static SubgroupLattice make(std::vector<std::string> labels, std::string top, const Meet& meet,
                              std::vector<LatticePrime> primes) {
    SubgroupLattice l;
    l.labels_ = std::move(labels);
    for (std::size_t i = 0; i < l.labels_.size(); ++i) {
      require(l.index_.emplace(l.labels_[i], i).second, Errc::InvalidSpec, "duplicate subgroup '" + l.labels_[i] + "'");
    }
    require(l.index_.count(top) == 1, Errc::InvalidSpec, "top subgroup '" + top + "' is not in the lattice");
    l.top_ = l.index_.at(top);
    const std::size_t n = l.labels_.size();
    const std::size_t unset = n;
    l.meet_.assign(n, std::vector<std::size_t>(n, unset));
    for (std::size_t i = 0; i < n; ++i) {
      l.meet_[i][i] = i;
      l.meet_[i][l.top_] = i;
      l.meet_[l.top_][i] = i;
    }
    for (const auto& [pair, h] : meet) {
      const std::size_t a = l.at(pair.first);
      const std::size_t b = l.at(pair.second);
      const std::size_t c = l.at(h);
      for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
        require(l.meet_[x][y] == unset || l.meet_[x][y] == c, Errc::InvalidSpec,
                "conflicting intersections for (" + pair.first + ", " + pair.second + ")");
        l.meet_[x][y] = c;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        require(l.meet_[i][j] != unset, Errc::InvalidSpec,
                "intersection of '" + l.labels_[i] + "' and '" + l.labels_[j] + "' is missing");
      }
    }
    // meet must be a semilattice operation: the result lies in both arguments
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t m = l.meet_[i][j];
        require(l.meet_[m][i] == m && l.meet_[m][j] == m, Errc::InvalidSpec,
                "intersection table is not consistent at (" + l.labels_[i] + ", " + l.labels_[j] + ")");
      }
    }
    for (auto& p : primes) {
      std::vector<bool> under(n, false);
      for (const auto& h : p.lies_under) under[l.at(h)] = true;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          // monotone along inclusion, and lying under two subgroups means lying under their intersection
          if (under[i] && l.leq(i, j)) {
            require(under[j], Errc::InvalidSpec,
                    "prime '" + p.label + "' lies under '" + l.labels_[i] + "' but not under the larger '" +
                        l.labels_[j] + "'");
          }
          if (under[i] && under[j]) {
            require(under[l.meet_[i][j]], Errc::InvalidSpec,
                    "prime '" + p.label + "' lies under '" + l.labels_[i] + "' and '" + l.labels_[j] +
                        "' but not under their intersection");
          }
        }
      }
      l.under_.push_back(std::move(under));
    }
    l.primes_ = std::move(primes);
    return l;
  }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& top() const { return labels_[top_]; }
  const std::vector<LatticePrime>& primes() const { return primes_; }
  bool contains(const std::string& h) const { return index_.count(h) == 1; }
  std::size_t at(const std::string& h) const {
    const auto it = index_.find(h);
    require(it != index_.end(), Errc::UnknownSubgroup, "unknown subgroup '" + h + "'");
    return it->second;
  }
  std::size_t meet(std::size_t a, std::size_t b) const { return meet_[a][b]; }
  /// a is contained in b.
  bool leq(std::size_t a, std::size_t b) const { return meet_[a][b] == a; }
  bool lies_under(std::size_t prime, std::size_t h) const { return under_[prime][h]; }

  /// z_S(U; H): primes outside S lying under H.
  u64 z(std::size_t h) const {
    u64 count = 0;
    for (std::size_t i = 0; i < primes_.size(); ++i) {
      if (!primes_[i].in_s && under_[i][h]) ++count;
    }
    return count;
  }

 private:
  std::vector<std::string> labels_;
  std::map<std::string, std::size_t> index_;
  std::size_t top_ = 0;
  std::vector<std::vector<std::size_t>> meet_;
  std::vector<LatticePrime> primes_;
  std::vector<std::vector<bool>> under_;
};

inline u64 z_count(const SubgroupLattice& lattice, const std::string& h) { return lattice.z(lattice.at(h)); }

struct Criterion1Result {
  u64 z = 0;
  bool z_is_zero = true;
  bool z_exceeds_one = false;  // direct count
  bool witness_verdict = false;
  std::optional<std::pair<std::string, std::string>> witness;
};

/// z(H) > 1 directly, and via a pair H1, H2 inside H with z(H1), z(H2) > 0 and
/// z(H1 ^ H2) = 0. The two verdicts must agree.
inline Criterion1Result criterion1(const SubgroupLattice& lattice, const std::string& h_label) {
  const std::size_t h = lattice.at(h_label);
  Criterion1Result r;
  r.z = lattice.z(h);
  r.z_is_zero = r.z == 0;
  r.z_exceeds_one = r.z > 1;
  const std::size_t n = lattice.labels().size();
  for (std::size_t a = 0; a < n && !r.witness; ++a) {
    if (!lattice.leq(a, h) || lattice.z(a) == 0) continue;
    for (std::size_t b = a; b < n; ++b) {
      if (!lattice.leq(b, h) || lattice.z(b) == 0) continue;
      if (lattice.z(lattice.meet(a, b)) == 0) {
        r.witness = std::pair{lattice.labels()[a], lattice.labels()[b]};
        break;
      }
    }
  }
  r.witness_verdict = r.witness.has_value();
  require(r.witness_verdict == r.z_exceeds_one, Errc::InconsistentLattice,
          "direct count and witness search disagree at '" + h_label + "' (z = " + std::to_string(r.z) + ")");
  return r;
}

// ---------------------------------------------------------------------------

struct ZLevel {
  std::string label;
  u64 f_u = 1;
  Real beta = 0;
};

struct ZTowerDatum {
  std::string label;
  std::vector<ZLevel> levels;
  std::optional<std::pair<u64, u64>> truth;  // (t, f)
};

/// (1/f) log(t^f / (t^f - 1)).
inline Real norm_beta(u64 t, u64 f) {
  const auto pp = as_prime_power(t);
  require(pp.has_value(), Errc::InvalidArgument, std::to_string(t) + " is not a prime power");
  return pp->raised(f).log_ratio() / Real(f);
}

/// A chain with constant inertia degree f and beta from the single-prime formula.
inline ZTowerDatum ztower_from_truth(u64 t, u64 f, u64 n_levels, std::string label = {}) {
  ZTowerDatum d;
  d.label = label.empty() ? "t=" + std::to_string(t) + ",f=" + std::to_string(f) : std::move(label);
  const Real b = norm_beta(t, f);
  for (u64 i = 0; i < n_levels; ++i) d.levels.push_back({"U" + std::to_string(i), f, b});
  d.truth = std::pair{t, f};
  return d;
}

/// Checks the per-level beta against the declared truth.
inline void validate_ztower(const ZTowerDatum& d, const Real& rel_tol = Real("1e-20")) {
  for (const auto& lv : d.levels) require(lv.f_u >= 1, Errc::InvalidSpec, "f_U must be positive");
  if (!d.truth) return;
  const u64 t = d.truth->first;
  for (const auto& lv : d.levels) {
    const Real expected = norm_beta(t, lv.f_u);
    require(boost::multiprecision::abs(lv.beta - expected) <= rel_tol * expected, Errc::InvalidSpec,
            "beta at level '" + lv.label + "' contradicts the declared truth");
  }
}

struct Behavior {
  bool has_behavior = false;
  Real c = 0;
};

/// Constant beta from level index 1 on (relative tolerance), with C > 0.
inline Behavior classify_behavior(const ZTowerDatum& d, const Real& tolerance) {
  require(d.levels.size() >= 2, Errc::InsufficientLevels, "classification needs at least two levels");
  const Real& anchor = d.levels[1].beta;
  Behavior b;
  if (anchor <= 0) return b;
  for (std::size_t i = 1; i < d.levels.size(); ++i) {
    if (boost::multiprecision::abs(d.levels[i].beta - anchor) > tolerance * anchor) return b;
  }
  b.has_behavior = true;
  b.c = d.levels.back().beta;
  return b;
}

struct NormMatch {
  u64 t = 0;
  u64 f = 0;
  PrimePower norm;
};

/// Finds (t, f) with (1/f) log(t^f/(t^f - 1)) = C within `tolerance` relative to C.
/// For each f the value is strictly decreasing in t, so the t within tolerance
/// form the integer interval between the f-th roots of
/// 1 / (1 - e^{-fC(1 +- tol)}); only that interval is scanned.
inline NormMatch norm_from_c(const Real& c, const Real& tolerance = Real("1e-12"), u64 t_bound = 1000000,
                             u64 f_bound = 20) {
  require(c > 0, Errc::InvalidArgument, "C must be positive");
  require(tolerance > 0 && tolerance < 1, Errc::InvalidArgument, "tolerance must lie in (0, 1)");
  // t with (1/f) log(t^f / (t^f - 1)) = y
  auto root = [](const Real& y, u64 f) {
    Real em;
    const Real arg = -Real(f) * y;
    mpfr_expm1(em.backend().data(), arg.backend().data(), MPFR_RNDN);
    return boost::multiprecision::pow(-1 / em, Real(1) / Real(f));
  };
  std::vector<NormMatch> found;
  for (u64 f = 1; f <= f_bound; ++f) {
    const Real lo_root = root(c * (1 + tolerance), f);
    if (lo_root > Real(t_bound) + 1) continue;
    const Real hi_root = root(c * (1 - tolerance), f);
    const u64 lo = std::max<u64>(2, static_cast<u64>(boost::multiprecision::floor(lo_root)));
    const u64 hi = hi_root > Real(t_bound) ? t_bound : static_cast<u64>(boost::multiprecision::ceil(hi_root));
    for (u64 t = lo; t <= hi; ++t) {
      const auto pp = as_prime_power(t);
      if (!pp) continue;
      const Real value = pp->raised(f).log_ratio() / Real(f);
      if (boost::multiprecision::abs(value - c) <= tolerance * c) found.push_back({t, f, *pp});
    }
  }
  if (found.empty()) throw Error(Errc::NoPrimePowerMatch, "no prime power matches C = " + format_real(c, 20));
  if (found.size() > 1) {
    throw Error(Errc::AmbiguousMatch, "C = " + format_real(c, 20) + " matches both (" + std::to_string(found[0].t) +
                                          ", " + std::to_string(found[0].f) + ") and (" +
                                          std::to_string(found[1].t) + ", " + std::to_string(found[1].f) + ")");
  }
  return found.front();
}

struct CSolution {
  u64 t = 0;
  u64 f_u = 0;
  u64 f_u2 = 0;
  u64 c = 0;
  friend bool operator==(const CSolution&, const CSolution&) = default;
};

/// t^{(c-1) f f'} (t^f - 1)^{f'} = (t^{c f'} - 1)^f over prime powers t, 1 <= f, f' and 2 <= c.
inline std::vector<CSolution> c_equals_one_search(u64 t_bound, u64 f_bound, u64 c_bound) {
  require(t_bound >= 2 && f_bound >= 2 && c_bound >= 2, Errc::InvalidArgument, "search bounds must be at least 2");
  std::vector<CSolution> out;
  for (u64 t = 2; t <= t_bound; ++t) {
    if (!as_prime_power(t)) continue;
    const BigInt bt(t);
    for (u64 f = 1; f <= f_bound; ++f) {
      const BigInt tf = boost::multiprecision::pow(bt, static_cast<unsigned>(f));
      for (u64 f2 = 1; f2 <= f_bound; ++f2) {
        const BigInt base = boost::multiprecision::pow(tf - 1, static_cast<unsigned>(f2));
        for (u64 c = 2; c <= c_bound; ++c) {
          const BigInt lhs = boost::multiprecision::pow(bt, static_cast<unsigned>((c - 1) * f * f2)) * base;
          const BigInt rhs =
              boost::multiprecision::pow(boost::multiprecision::pow(bt, static_cast<unsigned>(c * f2)) - 1,
                                         static_cast<unsigned>(f));
          if (lhs == rhs) out.push_back({t, f, f2, c});
        }
      }
    }
  }
  return out;
}

}  // namespace towerinv
