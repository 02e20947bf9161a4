#include "support.hpp"

#include "subspace_forge/errors.hpp"
#include "subspace_forge/numlin.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

using namespace sforge;
using sforge::testing::column;
using sforge::testing::ones;
using numlin::ConstraintMode;
using numlin::LinearConstraint;

namespace {

double orthonormality(const Matrix& q) {
  return numlin::norm(q.adjoint() * q - Matrix::Identity(q.cols(), q.cols()));
}

// Null space from the Hermitian eigendecomposition of M* M, independent of the SVD path.
Index eigen_nullity(const Matrix& m, double cut = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.adjoint() * m);
  Index count = 0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) count += es.eigenvalues()(i) < cut;
  return count;
}

}  // namespace

TEST(Kernel, RankOneRowHasThreeDimensionalKernel) {
  Matrix row = Matrix::Ones(1, 4);
  const Matrix k = numlin::kernel_basis(row);
  ASSERT_EQ(k.rows(), 4);
  ASSERT_EQ(k.cols(), 3);
  EXPECT_LT(orthonormality(k), 1e-12);
  EXPECT_LT(numlin::norm(row * k), 1e-12);
}

TEST(Kernel, IdentityHasEmptyKernel) {
  const Matrix k = numlin::kernel_basis(Matrix::Identity(3, 3));
  EXPECT_EQ(k.rows(), 3);
  EXPECT_EQ(k.cols(), 0);
}

TEST(Kernel, AllOnesMatchesEigenOracle) {
  const Matrix m = ones(4);
  const Matrix k = numlin::kernel_basis(m);
  EXPECT_EQ(k.cols(), eigen_nullity(m));
  EXPECT_EQ(k.cols(), 3);
  EXPECT_LT(numlin::norm(m * k), 1e-12);
  const auto sv = numlin::singular_values(m);
  ASSERT_EQ(sv.size(), 4u);
  EXPECT_NEAR(sv[0], 4.0, 1e-12);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_NEAR(sv[i], 0.0, 1e-12);
}

TEST(Kernel, ColumnsArePhaseNormalized) {
  std::mt19937_64 rng(3);
  const Matrix m = numlin::random_gaussian(2, 5, rng);
  const Matrix k = numlin::kernel_basis(m);
  for (Index c = 0; c < k.cols(); ++c) {
    Index arg = 0;
    k.col(c).cwiseAbs().maxCoeff(&arg);
    EXPECT_NEAR(k(arg, c).imag(), 0.0, 1e-14);
    EXPECT_GT(k(arg, c).real(), 0.0);
  }
}

TEST(Kernel, IsDeterministic) {
  std::mt19937_64 a(11), b(11);
  const Matrix m1 = numlin::random_gaussian(3, 6, a);
  const Matrix m2 = numlin::random_gaussian(3, 6, b);
  EXPECT_EQ(numlin::kernel_basis(m1), numlin::kernel_basis(m2));
}

TEST(Rank, Examples) {
  EXPECT_EQ(numlin::rank(ones(4)), 1u);
  EXPECT_EQ(numlin::rank(Matrix::Zero(3, 3)), 0u);
  EXPECT_EQ(numlin::rank(ones(3) / 3.0), 1u);
}

TEST(Rank, RangeBasisSpansColumns) {
  std::mt19937_64 rng(5);
  const Matrix a = numlin::random_gaussian(6, 2, rng);
  const Matrix m = a * numlin::random_gaussian(2, 4, rng);
  const Matrix r = numlin::range_basis(m);
  EXPECT_EQ(r.cols(), 2);
  EXPECT_LT(orthonormality(r), 1e-12);
  EXPECT_LT(numlin::norm(m - r * r.adjoint() * m), 1e-10);
}

TEST(ProjectionRange, IgnoresRoundingNoise) {
  Matrix noisy = Matrix::Zero(3, 3);
  noisy(0, 1) = 1e-17;
  noisy(1, 0) = 1e-17;
  EXPECT_EQ(numlin::projection_rank(noisy), 0u);
  EXPECT_EQ(numlin::projection_range(noisy).cols(), 0);
  const Matrix half = ones(2) / 2.0;
  const Matrix r = numlin::projection_range(half);
  ASSERT_EQ(r.cols(), 1);
  EXPECT_NEAR(r(0, 0).real(), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(r(1, 0).real(), 1.0 / std::sqrt(2.0), 1e-14);
}

TEST(Constraints, NoConstraintGivesElementaryBasis) {
  const std::vector<LinearConstraint> cs{{Matrix::Identity(2, 2), Matrix::Identity(2, 2), ConstraintMode::Commute}};
  EXPECT_EQ(numlin::constraint_solution_space(2, 2, cs).size(), 4u);
  EXPECT_EQ(numlin::constraint_solution_space(2, 3, {}).size(), 6u);
}

TEST(Constraints, CommutingWithDistinctDiagonalIsDiagonal) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  const std::vector<LinearConstraint> cs{{d, d, ConstraintMode::Commute}};
  const auto basis = numlin::constraint_solution_space(2, 2, cs);
  ASSERT_EQ(basis.size(), 2u);
  for (const auto& x : basis) {
    EXPECT_LT(std::abs(x(0, 1)), 1e-12);
    EXPECT_LT(std::abs(x(1, 0)), 1e-12);
  }
}

TEST(Constraints, CoordinateAxesInclusionIsDiagonal) {
  Matrix p1 = Matrix::Zero(2, 2), p2 = Matrix::Zero(2, 2);
  p1(0, 0) = 1.0;
  p2(1, 1) = 1.0;
  const std::vector<LinearConstraint> cs{{p1, p1, ConstraintMode::LeftAbsorb}, {p2, p2, ConstraintMode::LeftAbsorb}};
  EXPECT_EQ(numlin::constraint_solution_space(2, 2, cs).size(), 2u);
}

// Highly degenerate operators (repeated blocks) once produced wrong singular
// vectors from the divide-and-conquer SVD; every basis element must satisfy
// the constraints and the dimension must match the eigen oracle.
class DegenerateCommutant : public ::testing::TestWithParam<int> {};

TEST_P(DegenerateCommutant, SolutionsSatisfyConstraints) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()));
  const Index block = 1 + GetParam() % 3;
  const Index copies = 2 + GetParam() % 3;
  const Matrix u0 = numlin::random_unitary(block, rng);
  std::vector<Matrix> blocks(static_cast<std::size_t>(copies), u0);
  const Matrix w = numlin::random_unitary(block * copies, rng);
  const Matrix u = w * numlin::block_diagonal(blocks) * w.adjoint();
  const std::vector<LinearConstraint> cs{{u, u, ConstraintMode::Commute}};
  const auto basis = numlin::constraint_solution_space(u.rows(), u.cols(), cs);
  // c copies of a generic b x b unitary: commutant M_c(C) (x) (diagonal in its eigenbasis).
  EXPECT_EQ(static_cast<Index>(basis.size()), copies * copies * block);
  for (const auto& x : basis) EXPECT_LT(numlin::constraint_residual(cs[0], x), 1e-9);
  EXPECT_EQ(numlin::family_rank(basis), basis.size());
}

INSTANTIATE_TEST_SUITE_P(Seeds, DegenerateCommutant, ::testing::Range(0, 24));

TEST(Vec, KroneckerIdentity) {
  std::mt19937_64 rng(1);
  const Matrix l = numlin::random_gaussian(3, 2, rng);
  const Matrix x = numlin::random_gaussian(2, 4, rng);
  const Matrix b = numlin::random_gaussian(4, 2, rng);
  // vec(L X B) = (B^T kron L) vec(X) for column-major vec.
  Matrix kron(b.cols() * l.rows(), b.rows() * l.cols());
  for (Index i = 0; i < b.cols(); ++i) {
    for (Index j = 0; j < b.rows(); ++j) kron.block(i * l.rows(), j * l.cols(), l.rows(), l.cols()) = b(j, i) * l;
  }
  EXPECT_LT((numlin::vec(l * x * b) - kron * numlin::vec(x)).norm(), 1e-12);
  EXPECT_EQ(numlin::unvec(numlin::vec(x), 2, 4), x);
  EXPECT_EQ(numlin::vec(x)(1), x(1, 0));
}

TEST(Random, UnitaryAndProjection) {
  std::mt19937_64 rng(9);
  const Matrix u = numlin::random_unitary(5, rng);
  EXPECT_LT(orthonormality(u), 1e-12);
  const Matrix p = numlin::random_projection(5, 2, rng);
  EXPECT_LT(numlin::norm(p * p - p), 1e-12);
  EXPECT_LT(numlin::norm(p - p.adjoint()), 1e-12);
  EXPECT_EQ(numlin::rank(p), 2u);
}

TEST(Random, SameSeedSameMatrix) {
  std::mt19937_64 a(42), b(42);
  EXPECT_EQ(numlin::random_unitary(4, a), numlin::random_unitary(4, b));
}

TEST(Polar, RecoversUnitaryFactor) {
  std::mt19937_64 rng(4);
  const Matrix u = numlin::random_unitary(4, rng);
  const Matrix h = numlin::random_gaussian(4, 4, rng);
  const Matrix pos = h * h.adjoint() + Matrix::Identity(4, 4);
  EXPECT_LT(numlin::norm(numlin::polar_unitary(u * pos) - u), 1e-10);
}

TEST(Finite, RejectsNaN) {
  Matrix m = Matrix::Identity(2, 2);
  m(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(numlin::is_finite(m));
  EXPECT_THROW(numlin::require_finite(m, "m"), InputError);
}

TEST(Tolerance, RejectsNonPositive) {
  EXPECT_THROW((Tolerance{0.0, 1e-8}.validate()), InputError);
  EXPECT_THROW((Tolerance{1e-9, -1.0}.validate()), InputError);
  EXPECT_NO_THROW(Tolerance{}.validate());
}

TEST(DirectSum, BlockLayout) {
  const Matrix a = column({1.0, 2.0});
  const Matrix b = Matrix::Identity(1, 1);
  const Matrix s = numlin::direct_sum(a, b);
  EXPECT_EQ(s.rows(), 3);
  EXPECT_EQ(s.cols(), 2);
  EXPECT_EQ(s(2, 1), Complex(1.0));
  EXPECT_EQ(s(0, 1), Complex(0.0));
}
