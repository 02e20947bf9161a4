#pragma once

// Base representations and the functors T (complement), S (rebuild on the
// kernel of the assembled isometry), Phi+ = S o T, and the transfer F to
// n + 1 operators. Morphisms lift and descend along S and F.

#include "subspace_forge/systems.hpp"

#include <string>
#include <vector>

namespace sforge {

/// Gamma_i: orthonormal basis of Im P_i as an isometry H_i -> H.
struct IsometryFamily {
  std::vector<Matrix> gammas;

  /// [Gamma_1 ... Gamma_n] : (+)H_i -> H.
  Matrix assembled(Index ambient_dim) const;
  /// Row offsets of each summand inside (+)H_i.
  std::vector<Index> offsets() const;
  Index total_rank() const;
};

/// Delta_k: H_k -> H^, with H^ of dimension hat_dim.
struct DeltaFamily {
  std::vector<Matrix> deltas;
  Index hat_dim = 0;
};

struct FunctorStep {
  std::string functor;
  Rational alpha_in;
  Rational alpha_out;
  Index dim_in = 0;
  Index dim_out = 0;
};

struct FunctorTrace {
  std::vector<FunctorStep> steps;
  /// True when each step starts where the previous one ended.
  bool chained() const;
};

/// Output of S together with the data needed to move morphisms across it.
struct SImage {
  ProjectionSystem input;
  ProjectionSystem system;
  IsometryFamily gammas;
  DeltaFamily deltas;
  Rational alpha;  // of the input
  /// Residuals of Delta*Delta = I, sum Gamma Delta* = 0, the cross relation,
  /// and the output sum relation.
  CertificationReport relations;
};

struct FImage {
  ProjectionSystem input;
  ProjectionSystem system;
  IsometryFamily gammas;
  Rational alpha;  // of the input
  CertificationReport relations;
};

struct DiscreteTower {
  /// levels[0] is the base representation, levels[j] = Phi+^j of it.
  std::vector<ProjectionSystem> levels;
  std::vector<SImage> s_steps;
  FunctorTrace trace;
};

namespace functors {

/// pi_k on C: P_k = 1 and all others 0; k = 0 gives all zero.
ProjectionSystem base_rep(unsigned n, unsigned k);

/// P_i -> I - P_i, alpha -> n - alpha.
ProjectionSystem apply_T(const ProjectionSystem& p);

IsometryFamily gamma_family(const ProjectionSystem& p, const Tolerance& tol = {});

SImage apply_S_image(const ProjectionSystem& p, const Tolerance& tol = {});
std::pair<ProjectionSystem, DeltaFamily> apply_S(const ProjectionSystem& p, const Tolerance& tol = {});

/// S(T(p)); requires alpha < n - 1.
SImage apply_phi_plus_image(const ProjectionSystem& p, const Tolerance& tol = {});
ProjectionSystem apply_phi_plus(const ProjectionSystem& p, const Tolerance& tol = {});

DiscreteTower generate_tower(unsigned n, unsigned k, unsigned steps, const Tolerance& tol = {});
std::pair<ProjectionSystem, FunctorTrace> generate_discrete(unsigned n, unsigned k, unsigned steps,
                                                            const Tolerance& tol = {});

/// Q_i = identity on the i-th summand of (+)H_i, P = Gamma* Gamma / alpha.
FImage apply_F_image(const ProjectionSystem& p, const Tolerance& tol = {});
ProjectionSystem apply_F(const ProjectionSystem& p, const Tolerance& tol = {});

/// Subspace system (Im Q_1, ..., Im Q_n, Im P) of an F image.
SubspaceSystem abo_subspaces(const ProjectionSystem& abo, const Tolerance& tol = {});

/// C: H -> H~ with C P_i = P~_i C P_i, lifted to C^: H^ -> H^~.
/// The adjoint of C^ maps Im Q~_k into Im Q_k.
Matrix lift_morphism_S(const Matrix& c, const SImage& source, const SImage& target, const Tolerance& tol = {});
/// Inverse of lift_morphism_S on {r^ : Q~_k r^ = Q~_k r^ Q_k}.
Matrix descend_morphism_S(const Matrix& r_hat, const SImage& source, const SImage& target,
                          const Tolerance& tol = {});
/// Basis of the space descend_morphism_S accepts.
HomSpace s_morphism_space(const SImage& source, const SImage& target, const Tolerance& tol = {});

Matrix lift_morphism_F(const Matrix& c, const FImage& source, const FImage& target, const Tolerance& tol = {});
Matrix descend_morphism_F(const Matrix& r_hat, const FImage& source, const FImage& target,
                          const Tolerance& tol = {});
HomSpace f_morphism_space(const FImage& source, const FImage& target, const Tolerance& tol = {});

/// Basis of {C : C P_i = P~_i C P_i}, the morphisms lift_* accept.
HomSpace morphism_space(const ProjectionSystem& source, const ProjectionSystem& target,
                        const Tolerance& tol = {});

}  // namespace functors
}  // namespace sforge
