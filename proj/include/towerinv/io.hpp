#pragma once

// JSON documents (schema version 1) for fields, towers, families, lattices,
// reconstruction data and run configuration, plus report rendering.
//
// Integers may be JSON numbers or decimal strings; reals should be decimal
// strings (JSON numbers are accepted and read through their shortest
// round-trip text). Reports print reals with 30 significant digits.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "towerinv/checks.hpp"
#include "towerinv/estimate.hpp"
#include "towerinv/families.hpp"
#include "towerinv/fields.hpp"
#include "towerinv/reconstruct.hpp"
#include "towerinv/towers.hpp"

namespace towerinv::io {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// reading

inline json parse_document(const std::string& text, const std::string& source = "<input>") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports "line L, column C" inside what()
    throw Error(Errc::ParseError, source + ": " + e.what());
  }
}

inline json read_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::InvalidArgument, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str(), path);
}

inline std::string type_of(const json& doc) {
  require(doc.is_object(), Errc::InvalidSpec, "document must be a JSON object");
  require(doc.contains("schemaVersion"), Errc::UnsupportedSchema, "missing schemaVersion");
  const json& v = doc.at("schemaVersion");
  require(v.is_number_integer() && v.get<int>() == kSchemaVersion, Errc::UnsupportedSchema,
          "unsupported schemaVersion " + v.dump() + " (expected " + std::to_string(kSchemaVersion) + ")");
  require(doc.contains("type") && doc.at("type").is_string(), Errc::InvalidSpec, "missing document type");
  return doc.at("type").get<std::string>();
}

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
  require(j.is_object(), Errc::InvalidSpec, where + " must be an object");
  const auto it = j.find(key);
  require(it != j.end(), Errc::InvalidSpec, where + ": missing '" + key + "'");
  return *it;
}

inline BigInt to_bigint(const json& v, const std::string& where) {
  std::string text;
  if (v.is_number_unsigned() || v.is_number_integer()) {
    text = v.dump();
  } else if (v.is_string()) {
    text = v.get<std::string>();
  } else {
    throw Error(Errc::InvalidSpec, where + ": expected an integer");
  }
  require(!text.empty() && text.find_first_not_of("0123456789") == std::string::npos, Errc::InvalidSpec,
          where + ": '" + text + "' is not a non-negative decimal integer");
  return BigInt(text);
}

inline u64 to_u64(const json& v, const std::string& where) {
  const BigInt b = to_bigint(v, where);
  require(b <= BigInt(UINT64_MAX), Errc::InvalidSpec, where + ": integer too large");
  return static_cast<u64>(b);
}

inline Real to_real(const json& v, const std::string& where) {
  if (v.is_number()) return parse_real(v.dump());
  require(v.is_string(), Errc::InvalidSpec, where + ": expected a decimal string");
  try {
    return parse_real(v.get<std::string>());
  } catch (const Error&) {
    throw Error(Errc::InvalidSpec, where + ": '" + v.get<std::string>() + "' is not a real number");
  }
}

inline bool to_bool(const json& v, const std::string& where) {
  require(v.is_boolean(), Errc::InvalidSpec, where + ": expected true or false");
  return v.get<bool>();
}

inline std::string to_string(const json& v, const std::string& where) {
  require(v.is_string(), Errc::InvalidSpec, where + ": expected a string");
  return v.get<std::string>();
}

inline const json& array(const json& v, const std::string& where) {
  require(v.is_array(), Errc::InvalidSpec, where + ": expected an array");
  return v;
}

inline std::vector<u64> u64_list(const json& v, const std::string& where) {
  std::vector<u64> out;
  for (std::size_t i = 0; i < array(v, where).size(); ++i) out.push_back(to_u64(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

template <class T, class F>
T get_or(const json& j, const char* key, T fallback, F convert, const std::string& where) {
  const auto it = j.find(key);
  return it == j.end() ? fallback : convert(*it, where + "." + key);
}

inline PrimePower to_prime_power(const json& v, const std::string& where) {
  if (v.is_object()) {
    const u64 p = to_u64(field(v, "prime", where), where + ".prime");
    const u64 k = get_or<u64>(v, "exponent", 1, to_u64, where);
    require(is_prime(p) && k >= 1, Errc::InvalidSpec, where + ": not a prime power");
    return {p, k};
  }
  const u64 q = to_u64(v, where);
  const auto pp = as_prime_power(q);
  require(pp.has_value(), Errc::InvalidSpec, where + ": " + std::to_string(q) + " is not a prime power");
  return *pp;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// fields

/// Q(sqrt d) for a fundamental discriminant d: the primitive quadratic
/// character of conductor |d| with sign(d) as parity.
inline AbelianField quadratic_field(i64 d, std::string label = {}) {
  require(d != 0 && d != 1, Errc::InvalidSpec, "quadratic discriminant must be neither 0 nor 1");
  const u64 m = static_cast<u64>(d < 0 ? -d : d);
  if (label.empty()) label = "Q(sqrt" + std::to_string(d) + ")";
  const UnitGroup units(m);
  for (const auto& chi : DirichletCharacter::all(units)) {
    if (chi.order() == 2 && chi.is_primitive() && chi.is_even() == (d > 0)) {
      return AbelianField::from_generators(std::move(label), m, {chi});
    }
  }
  throw Error(Errc::InvalidSpec, std::to_string(d) + " is not a fundamental discriminant");
}

/// One of
///   {"cyclotomic": n}
///   {"quadratic": d}
///   {"modulus": m, "generators": [{"order": o, "table": [exponent or -1 per residue]}]}
///   {"realSubfield": F}
///   {"exponentSubfield": {"of": F, "exponent": k}}   characters of order dividing k
/// with an optional "label".
inline AbelianField field_from_json(const json& j, const std::string& where = "field") {
  require(j.is_object(), Errc::InvalidSpec, where + " must be an object");
  const std::string label = j.contains("label") ? detail::to_string(j.at("label"), where + ".label") : "";
  if (j.contains("cyclotomic")) {
    const u64 n = detail::to_u64(j.at("cyclotomic"), where + ".cyclotomic");
    require(n >= 1, Errc::InvalidSpec, where + ": cyclotomic index must be positive");
    return n == 1 ? rationals() : cyclotomic_field(n, label);
  }
  if (j.contains("quadratic")) {
    const json& v = j.at("quadratic");
    require(v.is_number_integer(), Errc::InvalidSpec, where + ".quadratic: expected an integer");
    return quadratic_field(v.get<i64>(), label);
  }
  if (j.contains("realSubfield")) return real_subfield(field_from_json(j.at("realSubfield"), where + ".realSubfield"), label);
  if (j.contains("exponentSubfield")) {
    const json& s = j.at("exponentSubfield");
    const auto F = field_from_json(detail::field(s, "of", where + ".exponentSubfield"), where + ".exponentSubfield.of");
    const u64 k = detail::to_u64(detail::field(s, "exponent", where + ".exponentSubfield"), where + ".exponent");
    require(k >= 1, Errc::InvalidSpec, where + ": exponent must be positive");
    return subfield_where(F, [k](const DirichletCharacter& chi) { return k % chi.order() == 0; }, label);
  }
  if (j.contains("modulus")) {
    const u64 m = detail::to_u64(j.at("modulus"), where + ".modulus");
    std::vector<DirichletCharacter> gens;
    const json& gs = detail::array(detail::field(j, "generators", where), where + ".generators");
    for (std::size_t i = 0; i < gs.size(); ++i) {
      const std::string w = where + ".generators[" + std::to_string(i) + "]";
      const u64 order = detail::to_u64(detail::field(gs[i], "order", w), w + ".order");
      std::vector<i64> table;
      for (const auto& x : detail::array(detail::field(gs[i], "table", w), w + ".table")) {
        require(x.is_number_integer(), Errc::InvalidSpec, w + ".table: expected integers");
        table.push_back(x.get<i64>());
      }
      try {
        gens.push_back(DirichletCharacter::from_table(m, order, std::move(table)));
      } catch (const Error& e) {
        throw Error(e.code(), w + ": " + e.what());
      }
    }
    return AbelianField::from_generators(label.empty() ? "K" : label, m, std::move(gens));
  }
  throw Error(Errc::InvalidSpec, where + ": expected one of cyclotomic, quadratic, modulus, realSubfield, exponentSubfield");
}

// ---------------------------------------------------------------------------
// towers and families

inline BaseField base_from_json(const json& j, const std::string& where) {
  if (j.contains("field")) return BaseField::from_field(field_from_json(j.at("field"), where + ".field"));
  BaseField b;
  b.label = detail::get_or<std::string>(j, "label", "K", detail::to_string, where);
  b.degree = detail::to_u64(detail::field(j, "degree", where), where + ".degree");
  b.r1 = detail::to_u64(detail::field(j, "r1", where), where + ".r1");
  b.r2 = detail::to_u64(detail::field(j, "r2", where), where + ".r2");
  b.abs_disc = detail::to_bigint(detail::field(j, "absDisc", where), where + ".absDisc");
  return b;
}

inline ojson base_to_json(const BaseField& b) {
  return {{"label", b.label}, {"degree", b.degree}, {"r1", b.r1}, {"r2", b.r2}, {"absDisc", to_decimal(b.abs_disc)}};
}

inline ojson prime_power_json(const PrimePower& q) { return {{"prime", q.prime}, {"exponent", q.exponent}}; }

inline SyntheticTowerSpec synthetic_from_json(const json& j, const std::string& where = "tower") {
  SyntheticTowerSpec spec;
  spec.label = detail::get_or<std::string>(j, "label", "synthetic", detail::to_string, where);
  spec.base = j.contains("base") ? base_from_json(j.at("base"), where + ".base") : BaseField{};
  spec.totally_real = detail::get_or<bool>(j, "totallyReal", false, detail::to_bool, where);
  spec.almost_normal = detail::get_or<bool>(j, "almostNormal", true, detail::to_bool, where);
  spec.degrees = detail::u64_list(detail::field(j, "degrees", where), where + ".degrees");
  const json& ps = detail::array(detail::field(j, "primes", where), where + ".primes");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::string w = where + ".primes[" + std::to_string(i) + "]";
    SyntheticPrime p;
    p.label = detail::get_or<std::string>(ps[i], "label", "p" + std::to_string(i), detail::to_string, w);
    p.norm = detail::to_prime_power(detail::field(ps[i], "norm", w), w + ".norm");
    p.e = detail::u64_list(detail::field(ps[i], "e", w), w + ".e");
    p.f = detail::u64_list(detail::field(ps[i], "f", w), w + ".f");
    if (ps[i].contains("beta")) p.beta = detail::u64_list(ps[i].at("beta"), w + ".beta");
    p.finite_degree = detail::get_or<bool>(ps[i], "finiteDegree", true, detail::to_bool, w);
    if (ps[i].contains("limitE")) p.limit_e = detail::to_u64(ps[i].at("limitE"), w + ".limitE");
    if (ps[i].contains("limitF")) p.limit_f = detail::to_u64(ps[i].at("limitF"), w + ".limitF");
    p.multiplicity = detail::get_or<u64>(ps[i], "multiplicity", 1, detail::to_u64, w);
    spec.primes.push_back(std::move(p));
  }
  if (j.contains("logHR")) {
    const json& r = j.at("logHR");
    const std::string w = where + ".logHR";
    const std::string rule = detail::to_string(detail::field(r, "rule", w), w + ".rule");
    if (rule == "values") {
      spec.log_hr.kind = LogHrRule::Kind::Values;
      for (const auto& v : detail::array(detail::field(r, "values", w), w + ".values")) {
        spec.log_hr.values.push_back(detail::to_real(v, w + ".values"));
      }
    } else if (rule == "rhs") {
      spec.log_hr.kind = LogHrRule::Kind::Rhs;
      spec.log_hr.noise = detail::get_or<Real>(r, "noise", Real(0), detail::to_real, w);
      spec.log_hr.seed = detail::get_or<u64>(r, "seed", 0, detail::to_u64, w);
    } else if (rule == "scaled") {
      spec.log_hr.kind = LogHrRule::Kind::Scaled;
      spec.log_hr.scale = detail::to_real(detail::field(r, "scale", w), w + ".scale");
    } else {
      throw Error(Errc::InvalidSpec, w + ": unknown rule '" + rule + "' (values, rhs, scaled)");
    }
  }
  return spec;
}

inline ojson synthetic_to_json(const SyntheticTowerSpec& s) {
  ojson primes = ojson::array();
  for (const auto& p : s.primes) {
    ojson o{{"label", p.label}, {"norm", prime_power_json(p.norm)}, {"e", p.e}, {"f", p.f}};
    if (!p.beta.empty()) o["beta"] = p.beta;
    o["finiteDegree"] = p.finite_degree;
    if (p.limit_e) o["limitE"] = *p.limit_e;
    if (p.limit_f) o["limitF"] = *p.limit_f;
    o["multiplicity"] = p.multiplicity;
    primes.push_back(std::move(o));
  }
  ojson rule;
  switch (s.log_hr.kind) {
    case LogHrRule::Kind::Values: {
      ojson vs = ojson::array();
      for (const auto& v : s.log_hr.values) vs.push_back(format_real(v));
      rule = {{"rule", "values"}, {"values", vs}};
      break;
    }
    case LogHrRule::Kind::Rhs:
      rule = {{"rule", "rhs"}, {"noise", format_real(s.log_hr.noise)}, {"seed", s.log_hr.seed}};
      break;
    case LogHrRule::Kind::Scaled: rule = {{"rule", "scaled"}, {"scale", format_real(s.log_hr.scale)}}; break;
  }
  return {{"schemaVersion", kSchemaVersion}, {"type", "tower"}, {"kind", "synthetic"}, {"label", s.label},
          {"base", base_to_json(s.base)}, {"totallyReal", s.totally_real}, {"almostNormal", s.almost_normal},
          {"degrees", s.degrees}, {"primes", primes}, {"logHR", rule}};
}

inline LocalDegree degree_from_json(const json& v, const std::string& where) {
  if (v.is_string() && v.get<std::string>() == "infinite") return LocalDegree::unbounded();
  require(v.is_array() && v.size() == 2, Errc::InvalidSpec, where + ": expected [e, f] or \"infinite\"");
  return LocalDegree::finite(detail::to_u64(v[0], where + "[0]"), detail::to_u64(v[1], where + "[1]"));
}

inline ojson degree_to_json(const LocalDegree& d) {
  if (d.infinite) return "infinite";
  return ojson::array({d.e, d.f});
}

inline std::vector<LocalDegree> degree_list(const json& v, const std::string& where) {
  std::vector<LocalDegree> out;
  for (std::size_t i = 0; i < detail::array(v, where).size(); ++i) {
    out.push_back(degree_from_json(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline LimitExchangeFamily exchange_from_json(const json& j, const std::string& where = "family") {
  LimitExchangeFamily fam;
  fam.label = detail::get_or<std::string>(j, "label", "limit-exchange", detail::to_string, where);
  fam.base = j.contains("base") ? base_from_json(j.at("base"), where + ".base") : BaseField{};
  fam.totally_real = detail::get_or<bool>(j, "totallyReal", false, detail::to_bool, where);
  fam.inner_depth = detail::get_or<u64>(j, "innerDepth", 6, detail::to_u64, where);
  const json& ps = detail::array(detail::field(j, "primes", where), where + ".primes");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::string w = where + ".primes[" + std::to_string(i) + "]";
    ExchangePrime p;
    p.label = detail::get_or<std::string>(ps[i], "label", "p" + std::to_string(i), detail::to_string, w);
    p.norm = detail::to_prime_power(detail::field(ps[i], "norm", w), w + ".norm");
    p.multiplicity = detail::get_or<u64>(ps[i], "multiplicity", 1, detail::to_u64, w);
    p.full = degree_list(detail::field(ps[i], "full", w), w + ".full");
    p.fixed = degree_list(detail::field(ps[i], "fixed", w), w + ".fixed");
    p.full_limit = degree_from_json(detail::field(ps[i], "fullLimit", w), w + ".fullLimit");
    p.fixed_limit = degree_from_json(detail::field(ps[i], "fixedLimit", w), w + ".fixedLimit");
    fam.primes.push_back(std::move(p));
  }
  return fam;
}

inline ojson exchange_to_json(const LimitExchangeFamily& fam) {
  ojson primes = ojson::array();
  for (const auto& p : fam.primes) {
    ojson full = ojson::array(), fixed = ojson::array();
    for (const auto& d : p.full) full.push_back(degree_to_json(d));
    for (const auto& d : p.fixed) fixed.push_back(degree_to_json(d));
    primes.push_back({{"label", p.label}, {"norm", prime_power_json(p.norm)}, {"multiplicity", p.multiplicity},
                      {"full", full}, {"fixed", fixed}, {"fullLimit", degree_to_json(p.full_limit)},
                      {"fixedLimit", degree_to_json(p.fixed_limit)}});
  }
  return {{"schemaVersion", kSchemaVersion}, {"type", "tower"}, {"kind", "limitExchange"}, {"label", fam.label},
          {"base", base_to_json(fam.base)}, {"totallyReal", fam.totally_real}, {"innerDepth", fam.inner_depth},
          {"primes", primes}};
}

inline ContinuityFamily continuity_from_json(const json& j, const std::string& where = "family") {
  ContinuityFamily fam;
  fam.label = detail::get_or<std::string>(j, "label", "continuity", detail::to_string, where);
  fam.degrees = detail::u64_list(detail::field(j, "degrees", where), where + ".degrees");
  const json& ps = detail::array(detail::field(j, "primes", where), where + ".primes");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::string w = where + ".primes[" + std::to_string(i) + "]";
    ContinuityPrime p;
    p.label = detail::get_or<std::string>(ps[i], "label", "p" + std::to_string(i), detail::to_string, w);
    p.norm = detail::to_prime_power(detail::field(ps[i], "norm", w), w + ".norm");
    p.multiplicity = detail::get_or<u64>(ps[i], "multiplicity", 1, detail::to_u64, w);
    p.e_low = detail::u64_list(detail::field(ps[i], "eLow", w), w + ".eLow");
    p.f_low = detail::u64_list(detail::field(ps[i], "fLow", w), w + ".fLow");
    if (ps[i].contains("gLow")) p.g_low = detail::u64_list(ps[i].at("gLow"), w + ".gLow");
    p.upper = degree_list(detail::field(ps[i], "upper", w), w + ".upper");
    p.limit = degree_from_json(detail::field(ps[i], "limit", w), w + ".limit");
    fam.primes.push_back(std::move(p));
  }
  return fam;
}

inline ojson continuity_to_json(const ContinuityFamily& fam) {
  ojson primes = ojson::array();
  for (const auto& p : fam.primes) {
    ojson upper = ojson::array();
    for (const auto& d : p.upper) upper.push_back(degree_to_json(d));
    ojson o{{"label", p.label}, {"norm", prime_power_json(p.norm)}, {"multiplicity", p.multiplicity},
            {"eLow", p.e_low},  {"fLow", p.f_low}};
    if (!p.g_low.empty()) o["gLow"] = p.g_low;
    o["upper"] = upper;
    o["limit"] = degree_to_json(p.limit);
    primes.push_back(std::move(o));
  }
  return {{"schemaVersion", kSchemaVersion}, {"type", "tower"}, {"kind", "continuity"}, {"label", fam.label},
          {"degrees", fam.degrees}, {"primes", primes}};
}

/// A parsed "tower" document: a tower, or one of the two family kinds.
struct TowerDocument {
  std::string kind;
  std::optional<TowerHandle> tower;
  std::optional<LimitExchangeFamily> exchange;
  std::optional<ContinuityFamily> continuity;
  std::vector<std::string> invariants;
  std::vector<std::string> checks;
};

inline TowerDocument tower_from_json(const json& j, std::optional<u64> prime_bound = std::nullopt) {
  const std::string where = "tower";
  TowerDocument doc;
  doc.kind = detail::to_string(detail::field(j, "kind", where), where + ".kind");
  if (j.contains("invariants")) {
    for (const auto& v : detail::array(j.at("invariants"), where + ".invariants")) {
      doc.invariants.push_back(detail::to_string(v, where + ".invariants"));
    }
  }
  if (j.contains("checks")) {
    for (const auto& v : detail::array(j.at("checks"), where + ".checks")) {
      doc.checks.push_back(detail::to_string(v, where + ".checks"));
    }
  }
  const u64 bound = prime_bound.value_or(detail::get_or<u64>(j, "primeBound", kDefaultPrimeBound, detail::to_u64, where));
  if (doc.kind == "cyclotomic") {
    const u64 ell = detail::to_u64(detail::field(j, "ell", where), where + ".ell");
    const u64 top = detail::to_u64(detail::field(j, "maxLevel", where), where + ".maxLevel");
    const u64 first = detail::get_or<u64>(j, "firstExponent", 1, detail::to_u64, where);
    const u64 base = detail::get_or<u64>(j, "baseExponent", 0, detail::to_u64, where);
    const u64 cap = detail::get_or<u64>(j, "cap", kDefaultCyclotomicCap, detail::to_u64, where);
    doc.tower = cyclotomic_tower(ell, top, first, base, bound, cap);
  } else if (doc.kind == "abelian") {
    const auto K = field_from_json(detail::field(j, "base", where), where + ".base");
    std::vector<AbelianField> levels;
    const json& ls = detail::array(detail::field(j, "levels", where), where + ".levels");
    for (std::size_t i = 0; i < ls.size(); ++i) {
      levels.push_back(field_from_json(ls[i], where + ".levels[" + std::to_string(i) + "]"));
    }
    doc.tower = abelian_tower(detail::get_or<std::string>(j, "label", "abelian", detail::to_string, where), K, levels,
                              bound);
  } else if (doc.kind == "synthetic") {
    doc.tower = synthetic_tower(synthetic_from_json(j, where));
  } else if (doc.kind == "limitExchange") {
    doc.exchange = exchange_from_json(j, where);
  } else if (doc.kind == "continuity") {
    doc.continuity = continuity_from_json(j, where);
  } else {
    throw Error(Errc::InvalidSpec, "unknown tower kind '" + doc.kind + "'");
  }
  return doc;
}

// ---------------------------------------------------------------------------
// reconstruction data

inline SubgroupLattice lattice_from_json(const json& j, const std::string& where = "lattice") {
  std::vector<std::string> labels;
  for (const auto& v : detail::array(detail::field(j, "subgroups", where), where + ".subgroups")) {
    labels.push_back(detail::to_string(v, where + ".subgroups"));
  }
  const std::string top = detail::get_or<std::string>(j, "top", "U", detail::to_string, where);
  SubgroupLattice::Meet meet;
  for (const auto& m : detail::array(detail::field(j, "meets", where), where + ".meets")) {
    require(m.is_array() && m.size() == 3, Errc::InvalidSpec, where + ".meets: expected [H1, H2, H1 ^ H2]");
    meet[{detail::to_string(m[0], where + ".meets"), detail::to_string(m[1], where + ".meets")}] =
        detail::to_string(m[2], where + ".meets");
  }
  std::vector<LatticePrime> primes;
  const json& ps = detail::array(detail::field(j, "primes", where), where + ".primes");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::string w = where + ".primes[" + std::to_string(i) + "]";
    LatticePrime p;
    p.label = detail::get_or<std::string>(ps[i], "label", "q" + std::to_string(i), detail::to_string, w);
    p.in_s = detail::get_or<bool>(ps[i], "inS", false, detail::to_bool, w);
    for (const auto& h : detail::array(detail::field(ps[i], "liesUnder", w), w + ".liesUnder")) {
      p.lies_under.insert(detail::to_string(h, w + ".liesUnder"));
    }
    primes.push_back(std::move(p));
  }
  return SubgroupLattice::make(std::move(labels), top, meet, std::move(primes));
}

inline ojson lattice_to_json(const SubgroupLattice& l) {
  ojson meets = ojson::array();
  const auto& labels = l.labels();
  for (std::size_t a = 0; a < labels.size(); ++a) {
    for (std::size_t b = a + 1; b < labels.size(); ++b) meets.push_back({labels[a], labels[b], labels[l.meet(a, b)]});
  }
  ojson primes = ojson::array();
  for (const auto& p : l.primes()) {
    ojson under = ojson::array();
    for (const auto& h : labels) {
      if (p.lies_under.count(h)) under.push_back(h);
    }
    primes.push_back({{"label", p.label}, {"inS", p.in_s}, {"liesUnder", under}});
  }
  return {{"schemaVersion", kSchemaVersion}, {"type", "lattice"}, {"subgroups", labels}, {"top", l.top()},
          {"meets", meets}, {"primes", primes}};
}

/// {"levels": [{"label", "fU", "beta"}], "truth": {"t", "f"}} or
/// {"fromTruth": {"t", "f", "levels"}}.
inline ZTowerDatum ztower_from_json(const json& j, const std::string& where = "ztower") {
  if (j.contains("fromTruth")) {
    const json& t = j.at("fromTruth");
    const std::string w = where + ".fromTruth";
    return ztower_from_truth(detail::to_u64(detail::field(t, "t", w), w + ".t"),
                             detail::to_u64(detail::field(t, "f", w), w + ".f"),
                             detail::get_or<u64>(t, "levels", 4, detail::to_u64, w),
                             detail::get_or<std::string>(j, "label", "", detail::to_string, where));
  }
  ZTowerDatum d;
  d.label = detail::get_or<std::string>(j, "label", "ztower", detail::to_string, where);
  const json& ls = detail::array(detail::field(j, "levels", where), where + ".levels");
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const std::string w = where + ".levels[" + std::to_string(i) + "]";
    ZLevel lv;
    lv.label = detail::get_or<std::string>(ls[i], "label", "U" + std::to_string(i), detail::to_string, w);
    lv.f_u = detail::get_or<u64>(ls[i], "fU", 1, detail::to_u64, w);
    lv.beta = detail::to_real(detail::field(ls[i], "beta", w), w + ".beta");
    d.levels.push_back(std::move(lv));
  }
  if (j.contains("truth")) {
    const json& t = j.at("truth");
    d.truth = std::pair{detail::to_u64(detail::field(t, "t", where + ".truth"), where + ".truth.t"),
                        detail::to_u64(detail::field(t, "f", where + ".truth"), where + ".truth.f")};
  }
  validate_ztower(d);
  return d;
}

inline ojson ztower_to_json(const ZTowerDatum& d) {
  ojson levels = ojson::array();
  for (const auto& lv : d.levels) levels.push_back({{"label", lv.label}, {"fU", lv.f_u}, {"beta", format_real(lv.beta)}});
  ojson out{{"schemaVersion", kSchemaVersion}, {"type", "ztower"}, {"label", d.label}, {"levels", levels}};
  if (d.truth) out["truth"] = {{"t", d.truth->first}, {"f", d.truth->second}};
  return out;
}

// ---------------------------------------------------------------------------
// run configuration

struct RunConfig {
  unsigned precision_bits = kDefaultPrecisionBits;
  std::optional<Real> tolerance;  // per-command default when empty
  std::optional<u64> prime_bound;
  std::optional<u64> depth;
  u64 seed = 42;
  std::string format = "json";
};

inline void validate(const RunConfig& c) {
  require(c.precision_bits >= kMinPrecisionBits, Errc::InvalidArgument, "precisionBits must be at least 64");
  require(!c.tolerance || *c.tolerance > 0, Errc::InvalidArgument, "tolerance must be positive");
  require(c.format == "json" || c.format == "csv", Errc::InvalidArgument, "format must be json or csv");
  require(!c.prime_bound || *c.prime_bound >= 2, Errc::InvalidArgument, "prime bound must be at least 2");
}

inline RunConfig config_from_json(const json& j, RunConfig c = {}) {
  const std::string where = "config";
  c.precision_bits = static_cast<unsigned>(detail::get_or<u64>(j, "precisionBits", c.precision_bits, detail::to_u64, where));
  if (j.contains("tolerance")) c.tolerance = detail::to_real(j.at("tolerance"), where + ".tolerance");
  if (j.contains("primeBound")) c.prime_bound = detail::to_u64(j.at("primeBound"), where + ".primeBound");
  if (j.contains("depth")) c.depth = detail::to_u64(j.at("depth"), where + ".depth");
  c.seed = detail::get_or<u64>(j, "seed", c.seed, detail::to_u64, where);
  c.format = detail::get_or<std::string>(j, "outputFormat", c.format, detail::to_string, where);
  validate(c);
  return c;
}

// ---------------------------------------------------------------------------
// reports

/// Report formatting: 30 significant digits, with values below the exact
/// tolerance printed as 0 (they are rounding residue of quantities that vanish).
inline std::string fmt(const Real& x) {
  return boost::multiprecision::abs(x) < exact_tolerance() ? std::string("0") : format_real(x);
}

inline ojson estimate_to_json(const InvariantEstimate& e) {
  ojson levels = ojson::array();
  for (std::size_t i = 0; i < e.per_level.size(); ++i) {
    levels.push_back({{"level", e.levels[i]}, {"value", fmt(e.per_level[i])}});
  }
  return {{"name", e.name},
          {"perLevel", levels},
          {"limitEstimate", fmt(e.limit)},
          {"cauchyGap", fmt(e.cauchy_gap)},
          {"converged", e.converged},
          {"certified", e.certified},
          {"nonIncreasing", e.non_increasing},
          {"nonDecreasing", e.non_decreasing}};
}

inline ojson check_to_json(const CheckReport& r) {
  ojson rows = ojson::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"level", row.level}, {"lhs", fmt(row.lhs)}, {"rhs", fmt(row.rhs)},
                    {"gap", fmt(row.gap)}});
  }
  return {{"name", r.name},
          {"verdict", r.pass ? "PASS" : "FAIL"},
          {"threshold", fmt(r.threshold)},
          {"finalGap", fmt(r.final_gap)},
          {"gapsDecreasing", r.decreasing},
          {"rows", rows},
          {"notes", r.notes}};
}

inline ojson level_to_json(const LevelData& lv) {
  return {{"n", lv.index},
          {"degree", lv.degree},
          {"indexOverBase", lv.index_over_base},
          {"genus", fmt(lv.genus)},
          {"relGenus", fmt(lv.rel_genus)},
          {"logHR", lv.log_hr ? ojson(fmt(*lv.log_hr)) : ojson(nullptr)},
          {"r1", lv.r1},
          {"r2", lv.r2}};
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Columns n, degree, g_n, g_rel, logHR, then one per invariant (empty where undefined).
inline std::string levels_csv(const TowerHandle& t, const std::vector<InvariantName>& names, std::size_t depth) {
  std::ostringstream out;
  out << "n,degree,g_n,g_rel,logHR";
  for (const auto& n : names) out << ',' << csv_escape(n.to_string());
  out << '\n';
  for (std::size_t i = 0; i < depth; ++i) {
    const auto& lv = t.levels[i];
    out << lv.index << ',' << lv.degree << ',' << fmt(lv.genus) << ',' << fmt(lv.rel_genus) << ','
        << (lv.log_hr ? fmt(*lv.log_hr) : "");
    for (const auto& n : names) {
      out << ',';
      if (n.kind == InvariantName::Kind::Beta) continue;
      const auto v = level_value(t, lv, n);
      if (v) out << fmt(*v);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace towerinv::io
