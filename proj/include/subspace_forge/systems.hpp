#pragma once

// Systems of subspaces S = (H; H_1, ..., H_n), their orthogonal projection
// systems, and the linear-algebraic decision procedures for transitivity,
// indecomposability, irreducibility, unitary equivalence and isomorphism.

#include "subspace_forge/numlin.hpp"
#include "subspace_forge/spectrum.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sforge {

struct Untyped {
  bool operator==(const Untyped&) const = default;
};

/// n projections summing to alpha * I.
struct PnAlpha {
  unsigned n = 0;
  Rational alpha;
  bool operator==(const PnAlpha&) const = default;
};

/// Q_1..Q_n summing to I plus P with Q_i P Q_i = tau Q_i; stored in that order.
struct PnAboTau {
  unsigned n = 0;
  Rational tau;
  bool operator==(const PnAboTau&) const = default;
};

using AlgebraTag = std::variant<Untyped, PnAlpha, PnAboTau>;

std::string describe(const AlgebraTag& tag);
void validate(const AlgebraTag& tag);

struct SubspaceSystem {
  Index ambient_dim = 0;
  /// i-th entry: ambient_dim x k_i, orthonormal columns spanning H_i.
  std::vector<Matrix> bases;

  std::size_t size() const { return bases.size(); }
  std::vector<Index> dimension_vector() const;
  /// Throws InputError on shape errors or non-orthonormal bases.
  void validate(const Tolerance& tol = {}) const;
};

struct ProjectionSystem {
  Index ambient_dim = 0;
  std::vector<Matrix> projections;
  AlgebraTag tag = Untyped{};

  std::size_t size() const { return projections.size(); }
  /// Shape, idempotency and hermiticity; tag relations are left to certify().
  void validate(const Tolerance& tol = {}) const;
};

struct HomSpace {
  Index source_dim = 0;
  Index target_dim = 0;
  /// target_dim x source_dim matrices, linearly independent.
  std::vector<Matrix> basis;

  std::size_t dimension() const { return basis.size(); }
};

struct Check {
  std::string name;
  bool passed = false;
  double residual = 0.0;
};

struct CertificationReport {
  std::vector<Check> checks;
  bool overall = true;
  bool probabilistic = false;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> notes;

  /// Records a residual check against `threshold`.
  void add(std::string name, double residual, double threshold);
  /// Records a boolean check; residual carries whatever number explains it.
  void add_flag(std::string name, bool passed, double residual = 0.0);
  void merge(const CertificationReport& other, const std::string& prefix = {});
  const Check* find(std::string_view name) const;
};

/// Outcome of a randomized existence search.
struct Verdict {
  bool value = false;
  /// True when the answer rests on generic sampling rather than a certificate.
  bool probabilistic = false;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  /// Residual of the certificate that decided the verdict, when one exists.
  std::optional<double> witness_residual;

  explicit operator bool() const { return value; }
};

struct GenericityOptions {
  std::size_t trials = 32;
  std::uint64_t seed = 0x5eedf00dULL;
};

namespace systems {

ProjectionSystem projections_from_subspaces(const SubspaceSystem& s, const Tolerance& tol = {});
SubspaceSystem subspaces_from_projections(const ProjectionSystem& p, const Tolerance& tol = {});

/// Basis of {R : (I - P~_i) R P_i = 0 for all i}.
HomSpace hom_space(const SubspaceSystem& s, const SubspaceSystem& t, const Tolerance& tol = {});
std::size_t end_dimension(const SubspaceSystem& s, const Tolerance& tol = {});
bool is_transitive(const SubspaceSystem& s, const Tolerance& tol = {});
bool is_transitive(const ProjectionSystem& p, const Tolerance& tol = {});

Verdict is_indecomposable(const SubspaceSystem& s, const Tolerance& tol = {},
                          const GenericityOptions& opts = {});

/// Basis of {R : R P_i = Q_i R for all i} (maps from p's space to q's space).
HomSpace intertwiner_space(const ProjectionSystem& p, const ProjectionSystem& q,
                           const Tolerance& tol = {});
std::size_t commutant_dimension(const ProjectionSystem& p, const Tolerance& tol = {});
bool is_irreducible(const ProjectionSystem& p, const Tolerance& tol = {});

Verdict are_unitarily_equivalent(const ProjectionSystem& p, const ProjectionSystem& q,
                                 const Tolerance& tol = {}, const GenericityOptions& opts = {});

/// Like are_unitarily_equivalent, but also returns the unitary found.
std::optional<Matrix> find_unitary_intertwiner(const ProjectionSystem& p, const ProjectionSystem& q,
                                               const Tolerance& tol = {},
                                               const GenericityOptions& opts = {});

Verdict are_isomorphic(const SubspaceSystem& s, const SubspaceSystem& t, const Tolerance& tol = {},
                       const GenericityOptions& opts = {});

CertificationReport certify(const ProjectionSystem& p, const Tolerance& tol = {});

}  // namespace systems
}  // namespace sforge
