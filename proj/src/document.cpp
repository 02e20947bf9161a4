#include "subspace_forge/document.hpp"

#include "subspace_forge/errors.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace sforge {

using nlohmann::json;

std::string_view kind_name(DocumentKind kind) {
  switch (kind) {
    case DocumentKind::ProjectionSystem: return "projection_system";
    case DocumentKind::SubspaceSystem: return "subspace_system";
    case DocumentKind::UnitaryPair: return "unitary_pair";
    case DocumentKind::Report: return "report";
  }
  return "unknown";
}

DocumentKind parse_kind(std::string_view name) {
  for (auto k : {DocumentKind::ProjectionSystem, DocumentKind::SubspaceSystem, DocumentKind::UnitaryPair,
                 DocumentKind::Report}) {
    if (kind_name(k) == name) return k;
  }
  throw InputError("document: unknown kind '" + std::string(name) + "'");
}

void SystemDocument::validate() const {
  if (kind == DocumentKind::Report) {
    if (!matrices.empty()) throw InputError("document: a report carries no matrices");
    if (!report) throw InputError("document: report document without a report");
    return;
  }
  if (dim < 0) throw InputError("document: negative dim");
  if (matrices.size() != n) {
    throw InputError("document: n = " + std::to_string(n) + " but " + std::to_string(matrices.size()) +
                     " matrices");
  }
  if (kind == DocumentKind::UnitaryPair && n != 2) throw InputError("document: a unitary pair has n = 2");
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    const Matrix& m = matrices[i];
    const std::string what = "document: matrix " + std::to_string(i + 1);
    if (m.rows() != dim) throw InputError(what + " has " + std::to_string(m.rows()) + " rows, dim is " + std::to_string(dim));
    if (kind != DocumentKind::SubspaceSystem && m.cols() != dim) throw InputError(what + " is not square");
    if (kind == DocumentKind::SubspaceSystem && m.cols() > dim) throw InputError(what + " has more columns than rows");
    numlin::require_finite(m, what);
  }
  sforge::validate(tag);
}

namespace {

double number_or_inf(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  if (!j.is_number()) throw InputError("document: expected a number");
  return j.get<double>();
}

const json& member(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("document: missing field '") + key + "'");
  return *it;
}

Rational rational_field(const json& j, const char* key) {
  const json& v = member(j, key);
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  throw InputError(std::string("document: field '") + key + "' must be an exact rational string");
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

bool same_matrix(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Index c = 0; c < a.cols(); ++c) {
    for (Index r = 0; r < a.rows(); ++r) {
      if (!same_bits(a(r, c).real(), b(r, c).real()) || !same_bits(a(r, c).imag(), b(r, c).imag())) return false;
    }
  }
  return true;
}

bool same_report(const CertificationReport& a, const CertificationReport& b) {
  if (a.overall != b.overall || a.probabilistic != b.probabilistic || a.seed != b.seed || a.notes != b.notes) {
    return false;
  }
  if (a.checks.size() != b.checks.size()) return false;
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    const auto& x = a.checks[i];
    const auto& y = b.checks[i];
    if (x.name != y.name || x.passed != y.passed) return false;
    if (!same_bits(x.residual, y.residual) && !(std::isinf(x.residual) && std::isinf(y.residual))) return false;
  }
  return true;
}

}  // namespace

namespace document {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, std::string_view what) {
  const std::string ctx(what);
  if (!j.is_array()) throw InputError(ctx + ": expected an array of rows");
  const Index rows = static_cast<Index>(j.size());
  Index cols = -1;
  for (const auto& row : j) {
    if (!row.is_array()) throw InputError(ctx + ": expected an array of rows");
    if (cols < 0) cols = static_cast<Index>(row.size());
    if (static_cast<Index>(row.size()) != cols) throw InputError(ctx + ": ragged rows");
  }
  Matrix m(rows, std::max<Index>(cols, 0));
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      const json& e = j[r][c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw InputError(ctx + ": entry (" + std::to_string(r) + "," + std::to_string(c) +
                         ") is not a [re, im] number pair");
      }
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json tag_to_json(const AlgebraTag& tag) {
  if (const auto* a = std::get_if<PnAlpha>(&tag)) {
    return {{"algebra", "PnAlpha"}, {"n", a->n}, {"alpha", to_string(a->alpha)}};
  }
  if (const auto* t = std::get_if<PnAboTau>(&tag)) {
    return {{"algebra", "PnAboTau"}, {"n", t->n}, {"tau", to_string(t->tau)}};
  }
  return {{"algebra", "Untyped"}};
}

AlgebraTag tag_from_json(const json& j) {
  if (j.is_null()) return Untyped{};
  if (!j.is_object()) throw InputError("document: tag must be an object");
  const json& alg = member(j, "algebra");
  if (!alg.is_string()) throw InputError("document: tag algebra must be a string");
  const auto name = alg.get<std::string>();
  auto count = [&] {
    const json& n = member(j, "n");
    if (!n.is_number_unsigned()) throw InputError("document: tag n must be a nonnegative integer");
    return n.get<unsigned>();
  };
  AlgebraTag tag;
  if (name == "Untyped") {
    tag = Untyped{};
  } else if (name == "PnAlpha") {
    tag = PnAlpha{count(), rational_field(j, "alpha")};
  } else if (name == "PnAboTau") {
    tag = PnAboTau{count(), rational_field(j, "tau")};
  } else {
    throw InputError("document: unknown algebra '" + name + "'");
  }
  validate(tag);
  return tag;
}

json report_to_json(const CertificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"residual", c.residual}});
  }
  json out = {{"overall", r.overall}, {"probabilistic", r.probabilistic}, {"checks", checks}, {"notes", r.notes}};
  out["seed"] = r.seed ? json(*r.seed) : json(nullptr);
  return out;
}

CertificationReport report_from_json(const json& j) {
  if (!j.is_object()) throw InputError("document: report must be an object");
  CertificationReport r;
  try {
    r.overall = member(j, "overall").get<bool>();
    r.probabilistic = j.value("probabilistic", false);
    if (auto it = j.find("seed"); it != j.end() && !it->is_null()) r.seed = it->get<std::uint64_t>();
    for (const auto& c : member(j, "checks")) {
      r.checks.push_back({member(c, "name").get<std::string>(), member(c, "passed").get<bool>(),
                          number_or_inf(member(c, "residual"))});
    }
    if (auto it = j.find("notes"); it != j.end()) r.notes = it->get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw InputError(std::string("document: malformed report: ") + e.what());
  }
  return r;
}

json trace_to_json(const FunctorTrace& trace) {
  json steps = json::array();
  for (const auto& s : trace.steps) {
    steps.push_back({{"functor", s.functor},
                     {"alpha_in", to_string(s.alpha_in)},
                     {"alpha_out", to_string(s.alpha_out)},
                     {"dim_in", s.dim_in},
                     {"dim_out", s.dim_out}});
  }
  return steps;
}

json catalog_descriptor(const CatalogItem& item) {
  json d = {{"generator", "catalog"},
            {"item", item.item},
            {"k", item.k},
            {"variant", item.variant},
            {"description", item.describe()}};
  d["omega"] = item.omega ? json::array({item.omega->a, item.omega->b, item.omega->c}) : json(nullptr);
  return d;
}

json to_json(const SystemDocument& doc) {
  doc.validate();
  json matrices = json::array();
  for (const auto& m : doc.matrices) matrices.push_back(matrix_to_json(m));
  json j = {{"format", kDocumentFormat},
            {"tool_version", doc.tool_version},
            {"kind", kind_name(doc.kind)},
            {"n", doc.n},
            {"dim", doc.dim},
            {"tag", tag_to_json(doc.tag)},
            {"matrices", matrices},
            {"provenance", doc.provenance}};
  j["seed"] = doc.seed ? json(*doc.seed) : json(nullptr);
  j["report"] = doc.report ? report_to_json(*doc.report) : json(nullptr);
  return j;
}

SystemDocument from_json(const json& j) {
  if (!j.is_object()) throw InputError("document: top level must be an object");
  if (auto it = j.find("format"); it != j.end() && *it != kDocumentFormat) {
    throw InputError("document: unsupported format " + it->dump());
  }
  SystemDocument doc;
  try {
    doc.kind = parse_kind(member(j, "kind").get<std::string>());
    if (auto it = j.find("tool_version"); it != j.end()) doc.tool_version = it->get<std::string>();
    const json& n = member(j, "n");
    const json& dim = member(j, "dim");
    if (!n.is_number_unsigned() || !dim.is_number_unsigned()) {
      throw InputError("document: n and dim must be nonnegative integers");
    }
    doc.n = n.get<unsigned>();
    doc.dim = dim.get<Index>();
    doc.tag = tag_from_json(j.value("tag", json(nullptr)));
    const json& ms = member(j, "matrices");
    if (!ms.is_array()) throw InputError("document: matrices must be an array");
    for (std::size_t i = 0; i < ms.size(); ++i) {
      doc.matrices.push_back(matrix_from_json(ms[i], "document: matrix " + std::to_string(i + 1)));
    }
    doc.provenance = j.value("provenance", json(nullptr));
    if (auto it = j.find("seed"); it != j.end() && !it->is_null()) {
      if (!it->is_number_unsigned()) throw InputError("document: seed must be a nonnegative integer");
      doc.seed = it->get<std::uint64_t>();
    }
    if (auto it = j.find("report"); it != j.end() && !it->is_null()) doc.report = report_from_json(*it);
  } catch (const json::exception& e) {
    throw InputError(std::string("document: ") + e.what());
  }
  doc.validate();
  return doc;
}

// One field per line and one matrix row per line, so documents diff well.
std::string serialize(const SystemDocument& doc) {
  const json j = to_json(doc);
  std::string out = "{\n";
  bool first = true;
  for (const auto& [key, value] : j.items()) {
    if (!first) out += ",\n";
    first = false;
    out += "  " + json(key).dump() + ": ";
    if (key != "matrices" || value.empty()) {
      out += value.dump();
      continue;
    }
    out += "[\n";
    for (std::size_t i = 0; i < value.size(); ++i) {
      out += "    [";
      for (std::size_t r = 0; r < value[i].size(); ++r) out += (r ? ",\n     " : "") + value[i][r].dump();
      out += i + 1 < value.size() ? "],\n" : "]\n";
    }
    out += "  ]";
  }
  return out + "\n}\n";
}

SystemDocument parse(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("document: not valid JSON: ") + e.what());
  }
  return from_json(j);
}

SystemDocument load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void save(const SystemDocument& doc, const std::filesystem::path& path) {
  const std::string text = serialize(doc);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed: " + path.string());
}

SystemDocument from_projections(const ProjectionSystem& p) {
  SystemDocument doc;
  doc.kind = DocumentKind::ProjectionSystem;
  doc.n = static_cast<unsigned>(p.size());
  doc.dim = p.ambient_dim;
  doc.tag = p.tag;
  doc.matrices = p.projections;
  return doc;
}

SystemDocument from_subspaces(const SubspaceSystem& s) {
  SystemDocument doc;
  doc.kind = DocumentKind::SubspaceSystem;
  doc.n = static_cast<unsigned>(s.size());
  doc.dim = s.ambient_dim;
  doc.matrices = s.bases;
  return doc;
}

SystemDocument from_pair(const UnitaryPair& pair) {
  SystemDocument doc;
  doc.kind = DocumentKind::UnitaryPair;
  doc.n = 2;
  doc.dim = pair.dim();
  doc.matrices = {pair.u, pair.v};
  return doc;
}

SystemDocument from_report(const CertificationReport& r) {
  SystemDocument doc;
  doc.kind = DocumentKind::Report;
  doc.report = r;
  doc.seed = r.seed;
  return doc;
}

ProjectionSystem to_projection_system(const SystemDocument& doc, const Tolerance& tol) {
  switch (doc.kind) {
    case DocumentKind::ProjectionSystem: {
      ProjectionSystem p;
      p.ambient_dim = doc.dim;
      p.projections = doc.matrices;
      p.tag = doc.tag;
      return p;
    }
    case DocumentKind::SubspaceSystem: {
      ProjectionSystem p = systems::projections_from_subspaces(to_subspace_system(doc, tol), tol);
      p.tag = doc.tag;
      return p;
    }
    default:
      throw InputError("document: a " + std::string(kind_name(doc.kind)) + " is not a system");
  }
}

SubspaceSystem to_subspace_system(const SystemDocument& doc, const Tolerance& tol) {
  switch (doc.kind) {
    case DocumentKind::ProjectionSystem: {
      ProjectionSystem p = to_projection_system(doc, tol);
      p.validate(tol);
      return systems::subspaces_from_projections(p, tol);
    }
    case DocumentKind::SubspaceSystem: {
      SubspaceSystem s;
      s.ambient_dim = doc.dim;
      s.bases = doc.matrices;
      s.validate(tol);
      return s;
    }
    default:
      throw InputError("document: a " + std::string(kind_name(doc.kind)) + " is not a system");
  }
}

UnitaryPair to_unitary_pair(const SystemDocument& doc) {
  if (doc.kind != DocumentKind::UnitaryPair) throw InputError("document: expected a unitary_pair");
  return {doc.matrices.at(0), doc.matrices.at(1)};
}

bool identical(const SystemDocument& a, const SystemDocument& b) {
  if (a.kind != b.kind || a.n != b.n || a.dim != b.dim || !(a.tag == b.tag) || a.provenance != b.provenance ||
      a.tool_version != b.tool_version || a.seed != b.seed || a.matrices.size() != b.matrices.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.matrices.size(); ++i) {
    if (!same_matrix(a.matrices[i], b.matrices[i])) return false;
  }
  if (a.report.has_value() != b.report.has_value()) return false;
  return !a.report || same_report(*a.report, *b.report);
}

}  // namespace document
}  // namespace sforge
