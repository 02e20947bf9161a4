#pragma once

#include "subspace_forge/functors.hpp"
#include "subspace_forge/numlin.hpp"
#include "subspace_forge/systems.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <initializer_list>
#include <random>
#include <vector>

namespace sforge::testing {

inline Matrix column(std::initializer_list<Complex> xs) {
  Matrix m(static_cast<Index>(xs.size()), 1);
  Index i = 0;
  for (auto x : xs) m(i++, 0) = x;
  return m;
}

inline Matrix normalized(Matrix m) {
  m /= m.norm();
  return m;
}

inline Matrix ones(Index d) { return Matrix::Ones(d, d); }

inline SubspaceSystem lines(Index d, std::initializer_list<Matrix> cols) {
  SubspaceSystem s;
  s.ambient_dim = d;
  for (const auto& c : cols) s.bases.push_back(normalized(c));
  return s;
}

/// The plane with the first axis and the line at angle theta.
inline SubspaceSystem axis_and_line(double theta) {
  return lines(2, {column({1.0, 0.0}), column({std::cos(theta), std::sin(theta)})});
}

inline ProjectionSystem conjugate(const ProjectionSystem& p, const Matrix& u) {
  ProjectionSystem q = p;
  for (auto& m : q.projections) m = u * m * u.adjoint();
  return q;
}

inline ProjectionSystem direct_sum(const ProjectionSystem& a, const ProjectionSystem& b) {
  ProjectionSystem s;
  s.ambient_dim = a.ambient_dim + b.ambient_dim;
  s.tag = a.tag;
  for (std::size_t i = 0; i < a.size(); ++i) s.projections.push_back(numlin::direct_sum(a.projections[i], b.projections[i]));
  return s;
}

inline double max_residual(const CertificationReport& r) {
  double worst = 0.0;
  for (const auto& c : r.checks) worst = std::max(worst, c.residual);
  return worst;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return k;
}

// dim {R : R A_i = B_i R} from the null space of the stacked Kronecker
// operator, via a Hermitian eigendecomposition instead of an SVD.
inline Index intertwiner_oracle(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  const Index n = a.front().rows(), m = b.front().rows();
  Matrix gram = Matrix::Zero(n * m, n * m);
  for (std::size_t i = 0; i < a.size(); ++i) {
    // vec(R A - B R) = (A^T kron I - I kron B) vec(R)
    const Matrix op = kron(a[i].transpose(), Matrix::Identity(m, m)) - kron(Matrix::Identity(n, n), b[i]);
    gram += op.adjoint() * op;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  Index count = 0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) count += es.eigenvalues()(i) < 1e-9;
  return count;
}

struct MorphismCase {
  ProjectionSystem source;
  ProjectionSystem target;
};

/// A tower level (or its complement) and a seeded unitary conjugate of it,
/// of its double, or the reverse, so morphism spaces have dimension 1 or 2.
inline MorphismCase morphism_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const unsigned base = static_cast<unsigned>(seed % 2);
  const unsigned steps = 1 + static_cast<unsigned>((seed / 2) % 3);
  ProjectionSystem p = functors::generate_discrete(4, base, steps).first;
  if ((seed / 6) % 2 == 1) p = functors::apply_T(p);
  ProjectionSystem source = p;
  ProjectionSystem target = p;
  switch (seed % 3) {
    case 1: target = direct_sum(p, p); break;
    case 2: source = direct_sum(p, p); break;
    default: break;
  }
  target = conjugate(target, numlin::random_unitary(target.ambient_dim, rng));
  return {source, target};
}

}  // namespace sforge::testing
