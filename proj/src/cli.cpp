#include "subspace_forge/cli.hpp"

#include "subspace_forge/catalog.hpp"
#include "subspace_forge/document.hpp"
#include "subspace_forge/errors.hpp"
#include "subspace_forge/functors.hpp"
#include "subspace_forge/spectrum.hpp"
#include "subspace_forge/systems.hpp"
#include "subspace_forge/wild.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace sforge::cli {

using nlohmann::json;

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const char* env_value) {
  if (flag) return *flag;
  if (env_value && *env_value) {
    const std::string_view s(env_value);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw InputError(std::string(kSeedEnv) + " is not an unsigned integer: '" + std::string(s) + "'");
    }
    return v;
  }
  return GenericityOptions{}.seed;
}

namespace {

struct Common {
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::size_t trials = GenericityOptions{}.trials;
  std::string output;

  Tolerance tolerance() const {
    Tolerance t;
    if (tol) t.residual_tol = *tol;
    t.validate();
    return t;
  }
  GenericityOptions genericity() const { return {trials, resolve_seed(seed, std::getenv(kSeedEnv))}; }
};

void add_numeric_options(CLI::App* app, Common& c) {
  app->add_option("--tol", c.tol, "Residual tolerance (default 1e-9)");
}

void add_random_options(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, std::string("Seed; falls back to $") + kSeedEnv);
  app->add_option("--trials", c.trials, "Generic samples per randomized search")->check(CLI::PositiveNumber);
}

json strings(const std::vector<Rational>& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(to_string(x));
  return a;
}

json reflected(unsigned n, const std::vector<Rational>& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(to_string(Rational(n) - x));
  return a;
}

std::string first_failure(const CertificationReport& r) {
  for (const auto& c : r.checks) {
    if (!c.passed) {
      std::ostringstream s;
      s << c.name << " (residual " << c.residual << ")";
      return s.str();
    }
  }
  return "none";
}

void emit(const SystemDocument& doc, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << document::serialize(doc);
    return;
  }
  document::save(doc, path);
  json summary = {{"written", path}, {"kind", kind_name(doc.kind)}, {"dim", doc.dim},
                  {"tag", document::tag_to_json(doc.tag)}};
  if (doc.report) summary["certified"] = doc.report->overall;
  out << summary.dump() << "\n";
}

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
  int n = 0;
  std::optional<std::string> alpha;
  unsigned depth = spectrum::kDefaultDepth;
};

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out) {
  if (a.n < 2) throw InputError("--n must be at least 2 (got " + std::to_string(a.n) + ")");
  if (a.depth == 0) throw InputError("--depth must be at least 1");
  const auto n = static_cast<unsigned>(a.n);
  json j = {{"n", n}};
  if (a.alpha) {
    const Rational alpha = parse_rational(*a.alpha);
    const auto pt = spectrum::classify_alpha(n, alpha, a.depth);
    j["alpha"] = to_string(alpha);
    j["family"] = spectrum::family_name(pt.family);
    j["index"] = pt.index ? json(*pt.index) : json(nullptr);
    j["member"] = pt.in_sigma();
  } else {
    j["depth"] = a.depth;
    if (n >= 3) {
      const auto l0 = spectrum::lambda0(n, a.depth);
      const auto l1 = spectrum::lambda1(n, a.depth);
      j["lambda0"] = strings(l0);
      j["lambda1"] = strings(l1);
      j["reflected_lambda1"] = reflected(n, l1);
      j["reflected_lambda0"] = reflected(n, l0);
    }
    if (n >= 4) {
      const auto [lo, hi] = spectrum::continuous_interval(n);
      j["continuous"] = json::array({lo, hi});
    } else {
      j["continuous"] = nullptr;
    }
    j["sigma"] = strings(spectrum::sigma_points(n, a.depth));
  }
  out << j.dump(2) << "\n";
  return kPass;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string kind;
  unsigned n = 4;
  unsigned k = 0;
  unsigned base = 0;
  unsigned steps = 1;
  unsigned item = 1;
  unsigned series = 1;
  unsigned variant = 1;
  std::vector<double> omega;
  bool allow_discrepancy = false;
  Common common;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  const Tolerance tol = a.common.tolerance();
  const std::uint64_t seed = resolve_seed(a.common.seed, std::getenv(kSeedEnv));
  ProjectionSystem system;
  json provenance;
  if (a.kind == "base") {
    system = functors::base_rep(a.n, a.k);
    provenance = {{"generator", "base"}, {"n", a.n}, {"k", a.k}};
  } else if (a.kind == "phi-tower" || a.kind == "abo-from-tower") {
    auto [tower, trace] = functors::generate_discrete(a.n, a.base, a.steps, tol);
    provenance = {{"generator", a.kind}, {"n", a.n}, {"base", a.base}, {"steps", a.steps}};
    if (a.kind == "abo-from-tower") {
      const auto alpha = std::get<PnAlpha>(tower.tag).alpha;
      system = functors::apply_F(tower, tol);
      trace.steps.push_back({"F", alpha, std::get<PnAboTau>(system.tag).tau, tower.ambient_dim, system.ambient_dim});
    } else {
      system = std::move(tower);
    }
    provenance["trace"] = document::trace_to_json(trace);
  } else if (a.kind == "catalog") {
    CatalogItem item;
    item.item = a.item;
    item.k = a.series;
    item.variant = a.variant;
    if (!a.omega.empty()) {
      if (a.omega.size() != 3) throw InputError("--omega takes three numbers a,b,c");
      item.omega = OmegaPoint{a.omega[0], a.omega[1], a.omega[2]};
    }
    item.validate();
    system = catalog::build(item);
    provenance = document::catalog_descriptor(item);
  } else {
    throw InputError("unknown generator '" + a.kind + "'");
  }

  CertificationReport report = systems::certify(system, tol);
  report.seed = seed;
  SystemDocument doc = document::from_projections(system);
  doc.provenance = provenance;
  doc.seed = seed;
  doc.report = report;
  if (!report.overall) {
    if (!a.allow_discrepancy) {
      err << "formula-discrepancy: " << first_failure(report)
          << "; refusing to write uncertified output (use --allow-discrepancy)\n";
      return kCheckFailure;
    }
    err << "warning: writing uncertified output, failing check " << first_failure(report) << "\n";
  }
  emit(doc, a.common.output, out);
  return report.overall ? kPass : kCheckFailure;
}

// ---------------------------------------------------------------- certify

struct CertifyArgs {
  std::string file;
  std::vector<std::string> checks{"relations"};
  Common common;
};

double orthonormality_residual(const Matrix& b) {
  return numlin::norm(b.adjoint() * b - Matrix::Identity(b.cols(), b.cols()));
}

int cmd_certify(const CertifyArgs& a, std::ostream& out) {
  static const std::set<std::string> known{"relations", "irreducible", "transitive", "indecomposable"};
  for (const auto& c : a.checks) {
    if (!known.contains(c)) throw InputError("unknown check '" + c + "'");
  }
  auto wants = [&](const char* c) { return std::find(a.checks.begin(), a.checks.end(), c) != a.checks.end(); };
  const Tolerance tol = a.common.tolerance();
  const GenericityOptions gen = a.common.genericity();
  const SystemDocument doc = document::load(a.file);
  if (doc.kind == DocumentKind::Report) throw InputError(a.file + ": a report has nothing to certify");

  CertificationReport relations;
  if (doc.kind == DocumentKind::ProjectionSystem) {
    relations = systems::certify(document::to_projection_system(doc, tol), tol);
  } else if (doc.kind == DocumentKind::SubspaceSystem) {
    for (std::size_t i = 0; i < doc.matrices.size(); ++i) {
      relations.add("orthonormal[" + std::to_string(i + 1) + "]", orthonormality_residual(doc.matrices[i]),
                    tol.residual_tol);
    }
  } else {
    const auto pair = document::to_unitary_pair(doc);
    relations.add("unitary[U]", orthonormality_residual(pair.u), tol.residual_tol);
    relations.add("unitary[V]", orthonormality_residual(pair.v), tol.residual_tol);
  }

  CertificationReport report;
  report.seed = gen.seed;
  if (wants("relations")) report.merge(relations);
  const bool structural = wants("irreducible") || wants("transitive") || wants("indecomposable");
  if (structural && !relations.overall) {
    report.notes.push_back("relations failed (" + first_failure(relations) + "); structural checks not evaluated");
    for (const char* c : {"irreducible", "transitive", "indecomposable"}) {
      if (wants(c)) report.add_flag(c, false, std::numeric_limits<double>::infinity());
    }
  } else if (structural) {
    SubspaceSystem subspaces;
    std::optional<ProjectionSystem> projections;
    std::optional<UnitaryPair> pair;
    if (doc.kind == DocumentKind::UnitaryPair) {
      pair = document::to_unitary_pair(doc);
      subspaces = wild::build_suv(*pair, tol);
    } else {
      subspaces = document::to_subspace_system(doc, tol);
      projections = document::to_projection_system(doc, tol);
    }
    if (wants("irreducible")) {
      const std::size_t dim = pair ? wild::pair_intertwiner_dimension(*pair, *pair, tol)
                                   : systems::commutant_dimension(*projections, tol);
      report.add_flag("irreducible", dim == 1, static_cast<double>(dim));
    }
    if (wants("transitive")) {
      const std::size_t dim = systems::end_dimension(subspaces, tol);
      report.add_flag("transitive", dim == 1, static_cast<double>(dim));
    }
    if (wants("indecomposable")) {
      const Verdict v = systems::is_indecomposable(subspaces, tol, gen);
      report.add_flag("indecomposable", v.value, v.witness_residual.value_or(0.0));
      report.probabilistic = report.probabilistic || v.probabilistic;
    }
  }
  json j = {{"file", a.file},
            {"kind", kind_name(doc.kind)},
            {"dim", doc.dim},
            {"tag", document::tag_to_json(doc.tag)},
            {"report", document::report_to_json(report)}};
  out << j.dump(2) << "\n";
  if (!a.common.output.empty()) document::save(document::from_report(report), a.common.output);
  return report.overall ? kPass : kCheckFailure;
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
  std::string a;
  std::string b;
  std::string mode = "unitary";
  Common common;
};

json dimension_vector(const SubspaceSystem& s) {
  json v = json::array();
  for (Index k : s.dimension_vector()) v.push_back(k);
  return v;
}

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  const Tolerance tol = a.common.tolerance();
  const GenericityOptions gen = a.common.genericity();
  const SystemDocument da = document::load(a.a);
  const SystemDocument db = document::load(a.b);
  ProjectionSystem p = document::to_projection_system(da, tol);
  ProjectionSystem q = document::to_projection_system(db, tol);
  p.validate(tol);
  q.validate(tol);
  if (p.size() != q.size()) {
    throw InputError("systems have different numbers of subspaces (" + std::to_string(p.size()) + " and " +
                     std::to_string(q.size()) + ")");
  }
  const SubspaceSystem s = systems::subspaces_from_projections(p, tol);
  const SubspaceSystem t = systems::subspaces_from_projections(q, tol);
  json j = {{"mode", a.mode},
            {"dims", {p.ambient_dim, q.ambient_dim}},
            {"dimension_vectors", {dimension_vector(s), dimension_vector(t)}}};
  int code = kPass;
  if (a.mode == "unitary" || a.mode == "isomorphism") {
    const bool unitary = a.mode == "unitary";
    const Verdict v = unitary ? systems::are_unitarily_equivalent(p, q, tol, gen) : systems::are_isomorphic(s, t, tol, gen);
    j["verdict"] = unitary ? (v.value ? "equivalent" : "inequivalent") : (v.value ? "isomorphic" : "not isomorphic");
    j["probabilistic"] = v.probabilistic;
    j["seed"] = v.seed;
    j["trials"] = v.trials;
    if (unitary) j["intertwiner_dimension"] = systems::intertwiner_space(p, q, tol).dimension();
    j["witness_residual"] = v.witness_residual ? json(*v.witness_residual) : json(nullptr);
    code = v.value ? kPass : kCheckFailure;
  } else if (a.mode == "hom-dim") {
    j["hom_dimension"] = systems::hom_space(s, t, tol).dimension();
    j["reverse_hom_dimension"] = systems::hom_space(t, s, tol).dimension();
    j["end_dimensions"] = {systems::end_dimension(s, tol), systems::end_dimension(t, tol)};
  } else {
    throw InputError("unknown mode '" + a.mode + "'");
  }
  out << j.dump(2) << "\n";
  return code;
}

// ---------------------------------------------------------------- wild

struct WildArgs {
  std::string u, v, pair, target_u, target_v, target_pair;
  std::string file, target;
  std::vector<Index> dims{1, 2, 3, 4};
  std::size_t count = 100;
  Common common;
};

Matrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": not valid JSON: " + e.what());
  }
  if (j.is_array()) return document::matrix_from_json(j, path);
  const SystemDocument doc = document::from_json(j);
  if (doc.matrices.size() != 1) throw InputError(path + ": expected a single matrix");
  return doc.matrices.front();
}

UnitaryPair load_pair(const std::string& pair_file, const std::string& u, const std::string& v, const char* role) {
  if (!pair_file.empty()) return document::to_unitary_pair(document::load(pair_file));
  if (u.empty() || v.empty()) throw InputError(std::string(role) + " pair needs both U and V");
  return {load_matrix(u), load_matrix(v)};
}

OrthoTriple load_triple(const std::string& path) {
  const SystemDocument doc = document::load(path);
  if (doc.kind != DocumentKind::ProjectionSystem || doc.n != 3) {
    throw InputError(path + ": expected a projection_system with three projections");
  }
  return {doc.matrices[0], doc.matrices[1], doc.matrices[2]};
}

int finish_wild(const CertificationReport& report, SystemDocument doc, json j, const Common& c, std::ostream& out) {
  j["report"] = document::report_to_json(report);
  out << j.dump(2) << "\n";
  if (!c.output.empty()) {
    doc.report = report;
    document::save(doc, c.output);
  }
  return report.overall ? kPass : kCheckFailure;
}

int cmd_wild_suv(const WildArgs& a, std::ostream& out) {
  const Tolerance tol = a.common.tolerance();
  const UnitaryPair p = load_pair(a.pair, a.u, a.v, "source");
  p.validate(tol);
  const bool has_target = !a.target_pair.empty() || !a.target_u.empty() || !a.target_v.empty();
  const UnitaryPair q = has_target ? load_pair(a.target_pair, a.target_u, a.target_v, "target") : p;
  q.validate(tol);
  const CertificationReport report = wild::theorem1_crosscheck(p, q, tol);
  SystemDocument doc = document::from_subspaces(wild::build_suv(p, tol));
  doc.provenance = {{"generator", "wild-suv"}, {"pair", document::to_json(document::from_pair(p))}};
  json j = {{"dim", p.dim()},
            {"system_dim", doc.dim},
            {"intertwiner_dimension", wild::pair_intertwiner_dimension(p, q, tol)}};
  return finish_wild(report, std::move(doc), std::move(j), a.common, out);
}

int cmd_wild_triple(const WildArgs& a, std::ostream& out) {
  const Tolerance tol = a.common.tolerance();
  if (a.file.empty()) throw InputError("wild triple needs --file");
  const OrthoTriple t = load_triple(a.file);
  t.validate(tol);
  const OrthoTriple u = a.target.empty() ? t : load_triple(a.target);
  u.validate(tol);
  const CertificationReport report = wild::theorem2_crosscheck(t, u, tol);
  SystemDocument doc = document::from_subspaces(wild::build_orth_triple(t, tol));
  doc.provenance = {{"generator", "wild-triple"}, {"source", a.file}};
  json j = {{"dim", t.dim()},
            {"system_dim", doc.dim},
            {"intertwiner_dimension", wild::triple_intertwiner_dimension(t, u, tol)}};
  return finish_wild(report, std::move(doc), std::move(j), a.common, out);
}

int cmd_wild_sweep(const WildArgs& a, std::ostream& out) {
  const Tolerance tol = a.common.tolerance();
  const std::uint64_t seed = resolve_seed(a.common.seed, std::getenv(kSeedEnv));
  if (a.dims.empty()) throw InputError("--dims must not be empty");
  for (Index d : a.dims) {
    if (d < 1) throw InputError("--dims entries must be positive");
  }
  const SweepSummary s = wild::sweep(a.dims, a.count, seed, tol);
  out << "seed: " << seed << "\n";
  out << "pair instances: " << s.pair_instances << "\n";
  out << "triple instances: " << s.triple_instances << "\n";
  for (const auto& f : s.failures) out << "failure: " << f << "\n";
  out << "mismatches: " << s.mismatches << "\n";
  return s.mismatches == 0 ? kPass : kCheckFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Systems of subspaces: spectra, functor towers, catalog checks, wild reductions",
               "subspace-forge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  SpectrumArgs sp;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Enumerate Sigma_n or classify an alpha");
  spectrum_cmd->add_option("--n", sp.n, "Number of projections")->required();
  spectrum_cmd->add_option("--alpha", sp.alpha, "Value to classify (p/q or decimal)");
  spectrum_cmd->add_option("--depth", sp.depth, "Elements per family");

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Write a certified system document");
  generate_cmd->require_subcommand(1);
  generate_cmd->add_option("-o,--output", gen.common.output, "Output file (default stdout)");
  generate_cmd->add_flag("--allow-discrepancy", gen.allow_discrepancy, "Write even if certification fails");
  add_numeric_options(generate_cmd, gen.common);
  add_random_options(generate_cmd, gen.common);
  generate_cmd->fallthrough();
  auto* g_base = generate_cmd->add_subcommand("base", "pi_k: one-dimensional base representation");
  g_base->add_option("--n", gen.n);
  g_base->add_option("--k", gen.k, "Index of the nonzero projection, 0 for none");
  auto* g_tower = generate_cmd->add_subcommand("phi-tower", "Phi+ applied steps times to a base representation");
  auto* g_abo = generate_cmd->add_subcommand("abo-from-tower", "F applied to a Phi+ tower level");
  for (auto* c : {g_tower, g_abo}) {
    c->add_option("--n", gen.n);
    c->add_option("--base", gen.base, "Base representation index");
    c->add_option("--steps", gen.steps, "Number of Phi+ steps");
  }
  auto* g_cat = generate_cmd->add_subcommand("catalog", "Catalog item of the n = 4 abo algebra");
  g_cat->add_option("--item", gen.item)->required();
  g_cat->add_option("--k", gen.series, "Series parameter");
  g_cat->add_option("--variant", gen.variant);
  g_cat->add_option("--omega", gen.omega, "a,b,c on the unit sphere")->delimiter(',');
  for (auto* c : {g_base, g_tower, g_abo, g_cat}) c->fallthrough();

  CertifyArgs cert;
  auto* certify_cmd = app.add_subcommand("certify", "Check relations and structure of a document");
  certify_cmd->add_option("file", cert.file)->required();
  certify_cmd->add_option("--checks", cert.checks, "relations,irreducible,transitive,indecomposable")->delimiter(',');
  certify_cmd->add_option("-o,--output", cert.common.output, "Also write the report document");
  add_numeric_options(certify_cmd, cert.common);
  add_random_options(certify_cmd, cert.common);

  CompareArgs cmp;
  auto* compare_cmd = app.add_subcommand("compare", "Compare two system documents");
  compare_cmd->add_option("a", cmp.a)->required();
  compare_cmd->add_option("b", cmp.b)->required();
  compare_cmd->add_option("--mode", cmp.mode)->check(CLI::IsMember({"unitary", "isomorphism", "hom-dim"}));
  add_numeric_options(compare_cmd, cmp.common);
  add_random_options(compare_cmd, cmp.common);

  WildArgs wa;
  auto* wild_cmd = app.add_subcommand("wild", "Unitary-pair and projection-triple encodings");
  wild_cmd->require_subcommand(1);
  add_numeric_options(wild_cmd, wa.common);
  wild_cmd->fallthrough();
  auto* w_suv = wild_cmd->add_subcommand("suv", "Five subspaces of H+H encoding (U, V)");
  w_suv->add_option("--u", wa.u, "Matrix file for U");
  w_suv->add_option("--v", wa.v, "Matrix file for V");
  w_suv->add_option("--pair", wa.pair, "unitary_pair document");
  w_suv->add_option("--target-u", wa.target_u);
  w_suv->add_option("--target-v", wa.target_v);
  w_suv->add_option("--target-pair", wa.target_pair);
  w_suv->add_option("-o,--output", wa.common.output, "Write the subspace system");
  auto* w_triple = wild_cmd->add_subcommand("triple", "Five subspaces encoding (P1, P2, P3), P2 P3 = 0");
  w_triple->add_option("--file", wa.file, "projection_system document with three projections");
  w_triple->add_option("--target", wa.target);
  w_triple->add_option("-o,--output", wa.common.output, "Write the subspace system");
  auto* w_sweep = wild_cmd->add_subcommand("sweep", "Seeded batch of both crosschecks");
  w_sweep->add_option("--dims", wa.dims, "Dimensions to draw from")->delimiter(',');
  w_sweep->add_option("--count", wa.count, "Instances of each kind");
  w_sweep->add_option("--seed", wa.common.seed, std::string("Seed; falls back to $") + kSeedEnv);
  for (auto* c : {w_suv, w_triple, w_sweep}) c->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (spectrum_cmd->parsed()) return cmd_spectrum(sp, out);
    if (generate_cmd->parsed()) {
      for (auto* c : {g_base, g_tower, g_abo, g_cat}) {
        if (c->parsed()) gen.kind = c->get_name();
      }
      return cmd_generate(gen, out, err);
    }
    if (certify_cmd->parsed()) return cmd_certify(cert, out);
    if (compare_cmd->parsed()) return cmd_compare(cmp, out);
    if (w_suv->parsed()) return cmd_wild_suv(wa, out);
    if (w_triple->parsed()) return cmd_wild_triple(wa, out);
    if (w_sweep->parsed()) return cmd_wild_sweep(wa, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomainError;
  } catch (const FormulaDiscrepancy& e) {
    err << e.what() << "\n";
    return kCheckFailure;
  } catch (const ConsistencyError& e) {
    err << e.what() << "\n";
    return kCheckFailure;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  }
  err << "no command given\n";
  return kInputError;
}

}  // namespace sforge::cli
