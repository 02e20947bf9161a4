#pragma once

// Five-subspace systems encoding a pair of unitaries and a triple of
// projections with P2 orthogonal to P3, with executable checks that their
// morphism spaces match the intertwiners of the encoded data.

#include "subspace_forge/systems.hpp"

#include <random>
#include <string>
#include <vector>

namespace sforge {

struct UnitaryPair {
  Matrix u;
  Matrix v;

  Index dim() const { return u.rows(); }
  void validate(const Tolerance& tol = {}) const;
};

struct OrthoTriple {
  Matrix p1;
  Matrix p2;
  Matrix p3;

  Index dim() const { return p1.rows(); }
  void validate(const Tolerance& tol = {}) const;
};

struct SweepSummary {
  std::size_t pair_instances = 0;
  std::size_t triple_instances = 0;
  std::size_t mismatches = 0;
  std::vector<std::string> failures;
};

namespace wild {

/// The projections onto H+0, 0+H, {(x,x)}, {(Ux,x)}, {(Vx,x)} in H+H.
std::vector<Matrix> suv_projections(const UnitaryPair& pair, const Tolerance& tol = {});
SubspaceSystem build_suv(const UnitaryPair& pair, const Tolerance& tol = {});

/// dim {R : R U = U~ R, R V = V~ R}.
std::size_t pair_intertwiner_dimension(const UnitaryPair& p, const UnitaryPair& q, const Tolerance& tol = {});

CertificationReport theorem1_crosscheck(const UnitaryPair& p, const UnitaryPair& q, const Tolerance& tol = {});

/// Projections onto Im P1, Im P1^perp, Im P2, Im P3, Im (P2 + P3)^perp.
std::vector<Matrix> orth_triple_projections(const OrthoTriple& t, const Tolerance& tol = {});
SubspaceSystem build_orth_triple(const OrthoTriple& t, const Tolerance& tol = {});

/// dim {R : R P_i = P~_i R, i = 1, 2, 3}.
std::size_t triple_intertwiner_dimension(const OrthoTriple& t, const OrthoTriple& u, const Tolerance& tol = {});

CertificationReport theorem2_crosscheck(const OrthoTriple& t, const OrthoTriple& u, const Tolerance& tol = {});

/// Seeded instance generators. `kind` cycles through generic, conjugated,
/// direct-sum and commuting (diagonal) constructions.
std::pair<UnitaryPair, UnitaryPair> random_pair_instance(std::span<const Index> dims, unsigned kind,
                                                         std::mt19937_64& rng);
std::pair<OrthoTriple, OrthoTriple> random_triple_instance(std::span<const Index> dims, unsigned kind,
                                                           std::mt19937_64& rng);

/// `count` pair instances and `count` triple instances; instance i uses the
/// seed `seed + i`, so every instance can be regenerated on its own.
SweepSummary sweep(std::span<const Index> dims, std::size_t count, std::uint64_t seed, const Tolerance& tol = {});

}  // namespace wild
}  // namespace sforge
