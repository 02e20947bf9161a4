#pragma once

// Explicit irreducible representations (Q_1, Q_2, Q_3, Q_4, P) of the
// n = 4 algebra with sum Q_i = I and Q_i P Q_i = tau Q_i, built from the
// printed block formulas, and their comparison with F-images of towers.

#include "subspace_forge/systems.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace sforge {

/// (a, b, c) on the unit sphere in one of three branches:
/// a > 0, b > 0, |c| < 1; or a = 0, b > 0, c > 0; or b = 0, a > 0, c > 0.
struct OmegaPoint {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  void validate(double tol = 1e-12) const;
};

struct CatalogItem {
  unsigned item = 1;
  /// Series parameter, items 6..11 only.
  unsigned k = 1;
  /// Items 1, 2, 3: which Q is distinguished (1..4). Item 5 without omega:
  /// which pair of Q's carries the two-dimensional representation (1..6).
  unsigned variant = 1;
  /// Item 5: selects the four-dimensional family.
  std::optional<OmegaPoint> omega;

  void validate() const;
  std::string describe() const;
};

namespace catalog {

Rational tau_of(const CatalogItem& item);

/// Dimensions of Im Q_1, ..., Im Q_4.
std::vector<Index> block_dims(const CatalogItem& item);

/// Whether the item is stated to be the only irreducible representation at its tau.
bool declared_unique(const CatalogItem& item);

/// The literal formulas, without any relation check.
ProjectionSystem build(const CatalogItem& item);

/// build() followed by certification; throws FormulaDiscrepancy naming the
/// first failing relation.
ProjectionSystem generate(const CatalogItem& item, const Tolerance& tol = {});

/// Relations, irreducibility (for declared-unique items) and transitivity of
/// the five-subspace system; never throws on relation failure.
CertificationReport audit(const CatalogItem& item, const Tolerance& tol = {});

OmegaPoint sample_omega(std::mt19937_64& rng, double margin = 1e-3);

std::vector<CatalogItem> enumerate(unsigned k_max, unsigned omega_samples, std::uint64_t seed);

/// Searches F(pi) for pi among pi_m, T(pi_m), Phi+^s(pi_m), T(Phi+^s(pi_m))
/// with matching tau and ranks, and tests unitary equivalence. Items with no
/// such counterpart yield an empty report carrying the note
/// "no functor counterpart".
CertificationReport verify_against_functor(const CatalogItem& item, const Tolerance& tol = {},
                                           const GenericityOptions& opts = {});

inline constexpr const char* kNoCounterpart = "no functor counterpart";

}  // namespace catalog
}  // namespace sforge
