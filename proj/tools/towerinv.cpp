// towerinv: field reports, tower invariants and checks, reconstruction, and the acceptance suite.
//
// Exit codes: 0 all requested checks pass, 1 some check fails, 2 input error, 3 internal error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "towerinv/towerinv.hpp"

using namespace towerinv;
using io::ojson;

namespace {

struct Options {
  std::optional<unsigned> precision_bits;
  std::optional<std::string> tolerance;
  std::optional<u64> prime_bound;
  std::optional<u64> depth;
  std::optional<u64> seed;
  std::optional<std::string> format;
  std::string out;
  std::string invariants;
  std::string checks;
  std::string input;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int paren = 0;
  for (char c : s) {
    if (c == '(') ++paren;
    if (c == ')') --paren;
    if (c == ',' && paren == 0) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

io::RunConfig resolve_config(const Options& o) {
  io::RunConfig c;
  if (const char* path = std::getenv("TOWERINV_CONFIG"); path != nullptr && *path != '\0') {
    const auto doc = io::read_document(path);
    if (doc.contains("schemaVersion")) {
      const auto type = io::type_of(doc);
      require(type == "config", Errc::InvalidSpec, std::string(path) + ": expected a config document");
    }
    c = io::config_from_json(doc, c);
  }
  if (o.precision_bits) c.precision_bits = *o.precision_bits;
  if (o.tolerance) {
    try {
      c.tolerance = parse_real(*o.tolerance);
    } catch (const Error&) {
      throw Error(Errc::InvalidArgument, "--tolerance: '" + *o.tolerance + "' is not a real number");
    }
  }
  if (o.prime_bound) c.prime_bound = *o.prime_bound;
  if (o.depth) c.depth = *o.depth;
  if (o.seed) c.seed = *o.seed;
  if (o.format) c.format = *o.format;
  io::validate(c);
  return c;
}

struct Output {
  std::string text;
  bool pass = true;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  require(f.good(), Errc::InvalidArgument, "cannot write '" + o.out + "'");
  f << text;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// field

Output cmd_field(const Options& o, const io::RunConfig& c) {
  const auto doc = io::read_document(o.input);
  const auto type = io::type_of(doc);
  require(type == "field", Errc::InvalidSpec, "expected a field document, got '" + type + "'");
  const auto K = io::field_from_json(doc.contains("field") ? doc.at("field") : doc);
  const u64 bound = c.prime_bound.value_or(kDefaultPrimeBound);
  const auto crd = log_hr(K);

  ojson ramified = ojson::array();
  ojson splitting = ojson::array();
  for (u64 p : primes_up_to(bound)) {
    const auto s = split_prime(K, p);
    const ojson row{{"p", p}, {"e", s.e}, {"f", s.f}, {"g", s.g}};
    if (s.e > 1) ramified.push_back(row);
    splitting.push_back(row);
  }
  ojson disc = ojson::array();
  for (const auto& [p, k] : K.disc_factorization()) disc.push_back({{"p", p}, {"exponent", k}});

  if (c.format == "csv") {
    std::ostringstream out;
    out << "label,degree,r1,r2,absDisc,genus,w,logHR\n"
        << io::csv_escape(K.label()) << ',' << K.degree() << ',' << K.r1() << ',' << K.r2() << ','
        << to_decimal(K.abs_disc()) << ',' << io::fmt(K.genus()) << ',' << crd.w << ','
        << io::fmt(crd.log_hr) << "\n\np,e,f,g\n";
    for (const auto& row : splitting) {
      out << row["p"].get<u64>() << ',' << row["e"].get<u64>() << ',' << row["f"].get<u64>() << ','
          << row["g"].get<u64>() << '\n';
    }
    return {out.str(), true};
  }
  const ojson report{{"schemaVersion", io::kSchemaVersion},
                     {"type", "fieldReport"},
                     {"label", K.label()},
                     {"degree", K.degree()},
                     {"r1", K.r1()},
                     {"r2", K.r2()},
                     {"absDisc", to_decimal(K.abs_disc())},
                     {"discFactorization", disc},
                     {"genus", io::fmt(K.genus())},
                     {"w", crd.w},
                     {"logResidue", io::fmt(crd.log_residue)},
                     {"logHR", io::fmt(crd.log_hr)},
                     {"primeBound", bound},
                     {"ramified", ramified},
                     {"splitting", splitting}};
  return {dump(report), true};
}

// ---------------------------------------------------------------------------
// tower

std::vector<std::string> default_checks(const io::TowerDocument& d) {
  if (d.kind == "limitExchange") return {"limit-exchange"};
  if (d.kind == "continuity") return {"beta-continuity"};
  if (d.kind == "synthetic") return {"tvz", "genus-bridge", "rel-identities"};
  return {"tvz", "genus-bridge"};
}

std::string checks_csv(const std::vector<CheckReport>& reports) {
  std::ostringstream out;
  out << "\ncheck,verdict,finalGap,threshold,gapsDecreasing\n";
  for (const auto& r : reports) {
    out << io::csv_escape(r.name) << ',' << (r.pass ? "PASS" : "FAIL") << ',' << io::fmt(r.final_gap) << ','
        << io::fmt(r.threshold) << ',' << (r.decreasing ? "true" : "false") << '\n';
  }
  return out.str();
}

Output cmd_tower(const Options& o, const io::RunConfig& c) {
  const auto doc = io::read_document(o.input);
  const auto type = io::type_of(doc);
  require(type == "tower", Errc::InvalidSpec, "expected a tower document, got '" + type + "'");
  const auto td = io::tower_from_json(doc, c.prime_bound);
  auto check_names = o.checks.empty() ? (td.checks.empty() ? default_checks(td) : td.checks) : split_list(o.checks);
  auto invariant_names = o.invariants.empty() ? td.invariants : split_list(o.invariants);

  std::vector<CheckReport> reports;
  ojson extra = ojson::object();
  const Real limit_tol = c.tolerance.value_or(Real("1e-9"));

  if (!td.tower) {
    require(invariant_names.empty(), Errc::InvalidArgument, "families take no invariant list");
    for (const auto& name : check_names) {
      if (name == "limit-exchange" && td.exchange) {
        const auto r = check_limit_exchange(*td.exchange, limit_tol);
        auto report = r.check;
        if (!r.monotone) {
          report.pass = false;
          report.notes.push_back("beta not monotone along refinement");
        }
        ojson full = ojson::array(), fixed = ojson::array();
        for (const auto& x : r.beta_full) full.push_back(io::fmt(x));
        for (const auto& x : r.beta_fixed) fixed.push_back(io::fmt(x));
        extra = {{"betaFull", full}, {"betaFixed", fixed}, {"betaMonotone", r.monotone}};
        reports.push_back(std::move(report));
      } else if (name == "beta-continuity" && td.continuity) {
        reports.push_back(check_beta_continuity(*td.continuity, limit_tol));
      } else {
        throw Error(Errc::InvalidArgument, "check '" + name + "' does not apply to a " + td.kind + " family");
      }
    }
  } else {
    const auto& t = *td.tower;
    const std::size_t depth = detail::usable_depth(t, c.depth);
    const bool real_tower = t.kind != TowerKind::Synthetic;
    for (const auto& name : check_names) {
      if (name == "tvz") {
        reports.push_back(check_tvz(t, c.tolerance.value_or(real_tower ? Real("0.5") : Real("1e-9")), depth));
      } else if (name == "genus-bridge") {
        for (auto& r : check_genus_bridge(t)) reports.push_back(std::move(r));
      } else if (name == "rel-identities") {
        for (auto& r : check_rel_identities(t, limit_tol, depth).checks) reports.push_back(std::move(r));
      } else {
        throw Error(Errc::InvalidArgument, "unknown or inapplicable check '" + name + "'");
      }
    }
    std::vector<InvariantName> names;
    for (const auto& n : invariant_names) names.push_back(InvariantName::parse(n));

    if (c.format == "csv") {
      std::string text = io::levels_csv(t, names, depth);
      bool pass = true;
      for (const auto& r : reports) pass = pass && r.pass;
      for (const auto& n : names) {
        if (n.kind != InvariantName::Kind::Beta) continue;
        const auto e = estimate(t, n, depth, limit_tol);
        text += "\nbeta_n";
        for (const auto& v : e.per_level) text += "," + io::fmt(v);
        text += "\nbeta_limit," + io::fmt(e.limit) + "\n";
      }
      return {text + checks_csv(reports), pass};
    }
    ojson levels = ojson::array();
    for (std::size_t i = 0; i < depth; ++i) levels.push_back(io::level_to_json(t.levels[i]));
    ojson estimates = ojson::array();
    for (const auto& n : names) estimates.push_back(io::estimate_to_json(estimate(t, n, depth, limit_tol)));
    ojson checks = ojson::array();
    bool pass = true;
    for (const auto& r : reports) {
      pass = pass && r.pass;
      checks.push_back(io::check_to_json(r));
    }
    const ojson report{{"schemaVersion", io::kSchemaVersion},
                       {"type", "towerReport"},
                       {"tower", t.label},
                       {"kind", to_string(t.kind)},
                       {"base", io::base_to_json(t.base)},
                       {"depth", depth},
                       {"levels", levels},
                       {"invariants", estimates},
                       {"checks", checks},
                       {"verdict", pass ? "PASS" : "FAIL"}};
    return {dump(report), pass};
  }

  bool pass = true;
  for (const auto& r : reports) pass = pass && r.pass;
  if (c.format == "csv") return {checks_csv(reports).substr(1), pass};
  ojson checks = ojson::array();
  for (const auto& r : reports) checks.push_back(io::check_to_json(r));
  ojson report{{"schemaVersion", io::kSchemaVersion},
               {"type", "familyReport"},
               {"family", td.exchange ? td.exchange->label : td.continuity->label},
               {"kind", td.kind},
               {"checks", checks}};
  if (!extra.empty()) report["data"] = extra;
  report["verdict"] = pass ? "PASS" : "FAIL";
  return {dump(report), pass};
}

// ---------------------------------------------------------------------------
// reconstruct

Output cmd_reconstruct(const Options& o, const io::RunConfig& c) {
  const auto doc = io::read_document(o.input);
  const auto type = io::type_of(doc);
  if (type == "lattice") {
    const auto l = io::lattice_from_json(doc);
    ojson rows = ojson::array();
    std::ostringstream csv;
    csv << "subgroup,z,zIsZero,zExceedsOne,witness\n";
    for (const auto& h : l.labels()) {
      const auto r = criterion1(l, h);
      const std::string witness = r.witness ? r.witness->first + "^" + r.witness->second : "";
      rows.push_back({{"subgroup", h},
                      {"z", r.z},
                      {"zIsZero", r.z_is_zero},
                      {"zExceedsOne", r.z_exceeds_one},
                      {"witness", r.witness ? ojson::array({r.witness->first, r.witness->second}) : ojson(nullptr)}});
      csv << io::csv_escape(h) << ',' << r.z << ',' << (r.z_is_zero ? "true" : "false") << ','
          << (r.z_exceeds_one ? "true" : "false") << ',' << io::csv_escape(witness) << '\n';
    }
    if (c.format == "csv") return {csv.str(), true};
    return {dump({{"schemaVersion", io::kSchemaVersion}, {"type", "latticeReport"}, {"subgroups", rows}}), true};
  }
  require(type == "ztower", Errc::InvalidSpec, "expected a ztower or lattice document, got '" + type + "'");
  const auto d = io::ztower_from_json(doc);
  const Real tol = c.tolerance.value_or(Real("1e-12"));
  const auto b = classify_behavior(d, tol);
  ojson report{{"schemaVersion", io::kSchemaVersion}, {"type", "ztowerReport"}, {"label", d.label},
               {"levels", d.levels.size()}, {"hasBehavior", b.has_behavior}};
  bool pass = true;
  std::optional<NormMatch> m;
  if (b.has_behavior) {
    report["C"] = io::fmt(b.c);
    m = norm_from_c(b.c, tol);
    report["Np"] = to_decimal(m->norm.value());
    report["prime"] = m->norm.prime;
    report["exponent"] = m->norm.exponent;
    report["f"] = m->f;
  } else {
    report["C"] = nullptr;
  }
  if (d.truth) {
    pass = b.has_behavior && m && m->t == d.truth->first && m->f == d.truth->second;
    report["truth"] = {{"t", d.truth->first}, {"f", d.truth->second}};
    report["verdict"] = pass ? "PASS" : "FAIL";
  }
  if (c.format == "csv") {
    std::ostringstream out;
    out << "hasBehavior,C,Np,f\n" << (b.has_behavior ? "true" : "false") << ',' << (b.has_behavior ? io::fmt(b.c) : "")
        << ',' << (m ? to_decimal(m->norm.value()) : "") << ',' << (m ? std::to_string(m->f) : "") << '\n';
    if (d.truth) out << "\nverdict," << (pass ? "PASS" : "FAIL") << '\n';
    return {out.str(), pass};
  }
  return {dump(report), pass};
}

// ---------------------------------------------------------------------------
// suite

Output cmd_suite(const io::RunConfig& c) {
  const auto r = suite::run_all(c.seed);
  if (c.format == "csv") {
    std::ostringstream out;
    out << "id,name,verdict\n";
    for (const auto& x : r.json["criteria"]) {
      out << x["id"].get<int>() << ',' << x["name"].get<std::string>() << ',' << x["verdict"].get<std::string>() << '\n';
    }
    return {out.str(), r.pass};
  }
  return {dump(r.json), r.pass};
}

void print_error(Errc code, const std::string& message) {
  std::cerr << ojson{{"error", std::string(to_string(code))}, {"exitCode", exit_code_for(code)}, {"message", message}}
                   .dump()
            << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariants of number field towers"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--precision-bits", o.precision_bits, "MPFR mantissa bits (>= 64, default 128)");
  app.add_option("--tolerance", o.tolerance, "verdict tolerance of the command");
  app.add_option("--prime-bound", o.prime_bound, "largest rational prime in Euler sums and splitting tables");
  app.add_option("--depth", o.depth, "number of tower levels to use");
  app.add_option("--seed", o.seed, "seed for randomized suites (default 42)");
  app.add_option("--format", o.format, "json or csv");
  app.add_option("--out", o.out, "write the report to this file");
  app.fallthrough();

  auto* field = app.add_subcommand("field", "report on an abelian number field");
  field->add_option("spec", o.input, "field JSON document")->required();
  auto* tower = app.add_subcommand("tower", "per-level invariants and identity checks of a tower or family");
  tower->add_option("spec", o.input, "tower JSON document")->required();
  tower->add_option("--invariants", o.invariants, "comma-separated list, e.g. mu,bs,phi(2),beta");
  tower->add_option("--checks", o.checks, "tvz, genus-bridge, rel-identities, limit-exchange, beta-continuity");
  auto* recon = app.add_subcommand("reconstruct", "classify a ztower datum or evaluate a subgroup lattice");
  recon->add_option("datum", o.input, "ztower or lattice JSON document")->required();
  auto* suite_cmd = app.add_subcommand("suite", "run the acceptance criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(Errc::InvalidArgument, e.what());
    return 2;
  }

  try {
    const auto config = resolve_config(o);
    const PrecisionScope precision(config.precision_bits);
    Output result;
    if (field->parsed()) {
      result = cmd_field(o, config);
    } else if (tower->parsed()) {
      result = cmd_tower(o, config);
    } else if (recon->parsed()) {
      result = cmd_reconstruct(o, config);
    } else if (suite_cmd->parsed()) {
      result = cmd_suite(config);
    }
    emit(o, result.text);
    return result.pass ? 0 : 1;
  } catch (const Error& e) {
    print_error(e.code(), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    print_error(Errc::Internal, e.what());
    return 3;
  }
}
