#pragma once

// Dense complex linear algebra kernel. Every rank or dimension decision in the
// library goes through singular values and the relative threshold in Tolerance.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace sforge {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

struct Tolerance {
  double residual_tol = 1e-9;
  double rank_rel_tol = 1e-8;

  /// Throws InputError unless both thresholds are strictly positive and finite.
  void validate() const;
};

namespace numlin {

bool is_finite(const Matrix& m);
void require_finite(const Matrix& m, std::string_view what);

/// Frobenius norm; all residuals in the library are reported in this norm.
double norm(const Matrix& m);

/// Singular values in non-increasing order.
std::vector<double> singular_values(const Matrix& m);

std::size_t rank(const Matrix& m, const Tolerance& tol = {});

/// Orthonormal null-space basis as columns (cols(m) x (cols(m) - rank)).
/// Each column is phase-normalized so its largest-magnitude entry is real positive.
Matrix kernel_basis(const Matrix& m, const Tolerance& tol = {});

/// Orthonormal basis of the column space, same normalization as kernel_basis.
Matrix range_basis(const Matrix& m, const Tolerance& tol = {});

/// Range of an orthogonal projection: eigenvectors of its Hermitian part with
/// eigenvalue above 1/2, same normalization as kernel_basis. Rounding noise in
/// a numerically zero projection is not mistaken for a subspace.
Matrix projection_range(const Matrix& p);
std::size_t projection_rank(const Matrix& p);

void normalize_phases(Matrix& columns);

enum class ConstraintMode {
  /// (I - A) X B = 0, i.e. X maps Im B into Im A when A is a projection.
  LeftAbsorb,
  /// A X - X B = 0.
  Commute,
};

struct LinearConstraint {
  Matrix a;
  Matrix b;
  ConstraintMode mode;
};

/// Residual of one constraint at X (Frobenius norm of the left-hand side).
double constraint_residual(const LinearConstraint& c, const Matrix& x);

/// Basis of the joint solution space {X in C^{rows x cols}} of all constraints,
/// computed as the kernel of the stacked vectorized operator. With no
/// constraints the basis is the elementary matrices.
std::vector<Matrix> constraint_solution_space(Index rows, Index cols,
                                              std::span<const LinearConstraint> constraints,
                                              const Tolerance& tol = {});

/// Column-stacked vec() and its inverse.
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Index rows, Index cols);

/// Rank of a family of equally shaped matrices viewed as vectors.
std::size_t family_rank(std::span<const Matrix> family, const Tolerance& tol = {});

Matrix direct_sum(const Matrix& a, const Matrix& b);
Matrix block_diagonal(std::span<const Matrix> blocks);

// Seeded random generation. Gaussian entries have independent standard
// normal real and imaginary parts.
Matrix random_gaussian(Index rows, Index cols, std::mt19937_64& rng);
Matrix random_unitary(Index d, std::mt19937_64& rng);

/// Random orthogonal projection of the given rank, P = W W* for random W.
Matrix random_projection(Index d, Index rank, std::mt19937_64& rng);

/// Random complex combination sum c_j B_j of a basis (zero matrix if empty).
Matrix random_combination(std::span<const Matrix> basis, Index rows, Index cols,
                          std::mt19937_64& rng);

/// Unitary factor U V* of the SVD M = U S V*.
Matrix polar_unitary(const Matrix& m);

}  // namespace numlin
}  // namespace sforge
