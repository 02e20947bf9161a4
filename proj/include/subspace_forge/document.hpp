#pragma once

// On-disk JSON format for systems, unitary pairs and reports. Matrices are
// stored row-major as nested arrays of [re, im] pairs; doubles are written in
// shortest round-trip form, so parse(serialize(doc)) reproduces every bit.

#include "subspace_forge/catalog.hpp"
#include "subspace_forge/functors.hpp"
#include "subspace_forge/systems.hpp"
#include "subspace_forge/wild.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sforge {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kDocumentFormat = "subspace-forge/system-document";

enum class DocumentKind { ProjectionSystem, SubspaceSystem, UnitaryPair, Report };

std::string_view kind_name(DocumentKind kind);
DocumentKind parse_kind(std::string_view name);

struct SystemDocument {
  DocumentKind kind = DocumentKind::ProjectionSystem;
  /// Number of matrices: projections, subspace bases, or 2 for a pair.
  unsigned n = 0;
  Index dim = 0;
  AlgebraTag tag = Untyped{};
  std::vector<Matrix> matrices;
  /// Generator descriptor; null when the document was written by hand.
  nlohmann::json provenance;
  std::string tool_version = kToolVersion;
  std::optional<std::uint64_t> seed;
  std::optional<CertificationReport> report;

  /// Shape checks only; algebraic relations are the business of certify.
  void validate() const;
};

namespace document {

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, std::string_view what);

nlohmann::json tag_to_json(const AlgebraTag& tag);
AlgebraTag tag_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const CertificationReport& r);
CertificationReport report_from_json(const nlohmann::json& j);

nlohmann::json trace_to_json(const FunctorTrace& trace);
nlohmann::json catalog_descriptor(const CatalogItem& item);

nlohmann::json to_json(const SystemDocument& doc);
/// Throws InputError on any structural problem.
SystemDocument from_json(const nlohmann::json& j);

std::string serialize(const SystemDocument& doc);
SystemDocument parse(std::string_view text);

SystemDocument load(const std::filesystem::path& path);
void save(const SystemDocument& doc, const std::filesystem::path& path);

SystemDocument from_projections(const ProjectionSystem& p);
SystemDocument from_subspaces(const SubspaceSystem& s);
SystemDocument from_pair(const UnitaryPair& pair);
SystemDocument from_report(const CertificationReport& r);

/// Projection documents are taken as is (no idempotency check); subspace
/// documents are converted through their orthogonal projections.
ProjectionSystem to_projection_system(const SystemDocument& doc, const Tolerance& tol = {});
SubspaceSystem to_subspace_system(const SystemDocument& doc, const Tolerance& tol = {});
UnitaryPair to_unitary_pair(const SystemDocument& doc);

/// Bitwise equality of two documents, including the sign of zeros.
bool identical(const SystemDocument& a, const SystemDocument& b);

}  // namespace document
}  // namespace sforge
