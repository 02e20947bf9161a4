#include "subspace_forge/numlin.hpp"

#include "subspace_forge/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace sforge {

void Tolerance::validate() const {
  if (!(residual_tol > 0.0) || !std::isfinite(residual_tol) || !(rank_rel_tol > 0.0) ||
      !std::isfinite(rank_rel_tol)) {
    throw InputError("tolerances must be strictly positive and finite");
  }
}

namespace numlin {

bool is_finite(const Matrix& m);

namespace {

// Tall operators are first reduced to their square R factor; the kernel and
// the singular values are unchanged and the SVD runs on the small factor.
Matrix compress_rows(const Matrix& m) {
  if (m.rows() <= 2 * m.cols()) return m;
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
}

struct SvdResult {
  Eigen::VectorXd sigma;
  Matrix u;
  Matrix v;
};

template <class Solver>
SvdResult run_svd(const Matrix& m, unsigned options) {
  Solver solver(m, options);
  SvdResult out;
  out.sigma = solver.singularValues();
  if (options & (Eigen::ComputeFullU | Eigen::ComputeThinU)) out.u = solver.matrixU();
  if (options & (Eigen::ComputeFullV | Eigen::ComputeThinV)) out.v = solver.matrixV();
  return out;
}

// Checks m V = U S on the computed columns and orthonormality of U and V.
bool trustworthy(const Matrix& m, const SvdResult& r) {
  if (!r.sigma.allFinite() || !is_finite(r.u) || !is_finite(r.v)) return false;
  if (r.v.size() == 0) return true;
  const Index p = r.sigma.size();
  const double top = p > 0 ? r.sigma(0) : 0.0;
  const double bound = 1e-10 * std::max(top, 1e-300) * (1.0 + std::sqrt(static_cast<double>(m.cols())));
  Matrix expected = Matrix::Zero(m.rows(), r.v.cols());
  expected.leftCols(p) = r.u.leftCols(p) * r.sigma.cast<Complex>().asDiagonal();
  if ((m * r.v - expected).norm() > bound) return false;
  const double ortho = 1e-10 * (1.0 + std::sqrt(static_cast<double>(m.cols())));
  if ((r.v.adjoint() * r.v - Matrix::Identity(r.v.cols(), r.v.cols())).norm() > ortho) return false;
  const Matrix up = r.u.leftCols(p);
  return (up.adjoint() * up - Matrix::Identity(p, p)).norm() <= ortho;
}

// Eigen's divide-and-conquer SVD can return wrong (sometimes non-finite)
// singular vectors when singular values are highly degenerate. Its output is
// checked and the one-sided Jacobi solver is used whenever the check fails.
SvdResult svd(const Matrix& m, unsigned options) {
  if (options & (Eigen::ComputeFullV | Eigen::ComputeThinV)) {
    if (!(options & (Eigen::ComputeFullU | Eigen::ComputeThinU))) options |= Eigen::ComputeThinU;
  }
  auto out = run_svd<Eigen::BDCSVD<Matrix>>(m, options);
  if (trustworthy(m, out)) return out;
  out = run_svd<Eigen::JacobiSVD<Matrix>>(m, options);
  if (!trustworthy(m, out)) throw ConsistencyError("singular value decomposition failed its own check", 0.0);
  return out;
}

// Singular values above rank_rel_tol * sigma_max, and above `floor` when given.
std::size_t count_above(const Eigen::VectorXd& sigma, const Tolerance& tol, double floor = 0.0) {
  if (sigma.size() == 0) return 0;
  const double top = sigma(0);
  if (!(top > 0.0)) return 0;
  const double threshold = std::max(tol.rank_rel_tol * top, floor);
  std::size_t r = 0;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > threshold) ++r;
  }
  return r;
}

}  // namespace

bool is_finite(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

void require_finite(const Matrix& m, std::string_view what) {
  if (!is_finite(m)) throw InputError(std::string(what) + ": non-finite entry");
}

double norm(const Matrix& m) { return m.size() == 0 ? 0.0 : m.norm(); }

std::vector<double> singular_values(const Matrix& m) {
  require_finite(m, "singular_values");
  if (m.size() == 0) return {};
  const auto result = svd(compress_rows(m), 0);
  return {result.sigma.data(), result.sigma.data() + result.sigma.size()};
}

std::size_t rank(const Matrix& m, const Tolerance& tol) {
  tol.validate();
  require_finite(m, "rank");
  if (m.size() == 0) return 0;
  return count_above(svd(compress_rows(m), 0).sigma, tol);
}

void normalize_phases(Matrix& columns) {
  for (Index j = 0; j < columns.cols(); ++j) {
    Index best = 0;
    double best_abs = -1.0;
    for (Index i = 0; i < columns.rows(); ++i) {
      const double a = std::abs(columns(i, j));
      // first index wins among (numerically) tied magnitudes
      if (a > best_abs * (1.0 + 1e-12) + 1e-300) {
        best_abs = a;
        best = i;
      }
    }
    if (best_abs > 0.0) {
      const Complex phase = columns(best, j) / best_abs;
      columns.col(j) *= std::conj(phase);
      columns(best, j) = Complex(columns(best, j).real(), 0.0);
    }
  }
}

namespace {

Matrix kernel_with_floor(const Matrix& m, const Tolerance& tol, double floor) {
  tol.validate();
  require_finite(m, "kernel_basis");
  const Index n = m.cols();
  if (n == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::Identity(n, n);
  const Matrix reduced = compress_rows(m);
  const auto result = svd(reduced, Eigen::ComputeFullV);
  const auto r = static_cast<Index>(count_above(result.sigma, tol, floor));
  Matrix basis = result.v.rightCols(n - r);
  normalize_phases(basis);
  return basis;
}

}  // namespace

Matrix kernel_basis(const Matrix& m, const Tolerance& tol) { return kernel_with_floor(m, tol, 0.0); }

Matrix range_basis(const Matrix& m, const Tolerance& tol) {
  tol.validate();
  require_finite(m, "range_basis");
  if (m.size() == 0) return Matrix(m.rows(), 0);
  const auto result = svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto r = static_cast<Index>(count_above(result.sigma, tol));
  Matrix basis = result.u.leftCols(r);
  normalize_phases(basis);
  return basis;
}

Matrix projection_range(const Matrix& p) {
  require_finite(p, "projection_range");
  if (p.rows() != p.cols()) throw InputError("projection_range: matrix is not square");
  if (p.size() == 0) return Matrix(p.rows(), 0);
  const Matrix herm = (p + p.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
  const auto& values = solver.eigenvalues();  // ascending
  Index r = 0;
  while (r < values.size() && values(values.size() - 1 - r) > 0.5) ++r;
  // descending eigenvalue order, matching range_basis
  Matrix basis = solver.eigenvectors().rightCols(r).rowwise().reverse();
  normalize_phases(basis);
  return basis;
}

std::size_t projection_rank(const Matrix& p) { return static_cast<std::size_t>(projection_range(p).cols()); }

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Vector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) throw InputError("unvec: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

double constraint_residual(const LinearConstraint& c, const Matrix& x) {
  switch (c.mode) {
    case ConstraintMode::LeftAbsorb:
      return norm(x * c.b - c.a * x * c.b);
    case ConstraintMode::Commute:
      return norm(c.a * x - x * c.b);
  }
  return 0.0;
}

namespace {

// Kronecker product kron(x, y) with x of shape (p x q), y of shape (r x s).
Matrix kron(const Matrix& x, const Matrix& y) {
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return out;
}

void check_shape(const LinearConstraint& c, Index rows, Index cols) {
  switch (c.mode) {
    case ConstraintMode::LeftAbsorb:
      if (c.a.rows() != rows || c.a.cols() != rows || c.b.rows() != cols) {
        throw InputError("left-absorb constraint inconsistent with unknown shape");
      }
      break;
    case ConstraintMode::Commute:
      if (c.a.rows() != rows || c.a.cols() != rows || c.b.rows() != cols || c.b.cols() != cols) {
        throw InputError("commute constraint inconsistent with unknown shape");
      }
      break;
  }
  require_finite(c.a, "constraint");
  require_finite(c.b, "constraint");
}

}  // namespace

std::vector<Matrix> constraint_solution_space(Index rows, Index cols,
                                              std::span<const LinearConstraint> constraints,
                                              const Tolerance& tol) {
  tol.validate();
  if (rows < 0 || cols < 0) throw InputError("negative unknown shape");
  const Index unknowns = rows * cols;
  if (unknowns == 0) return {};

  // Cancellation can leave an operator that is zero up to rounding; singular
  // values below the residual bound every solution must meet are treated as zero.
  double scale = 1.0;
  Index stacked_rows = 0;
  for (const auto& c : constraints) {
    check_shape(c, rows, cols);
    scale = std::max(scale, norm(c.a) * norm(c.b));
    stacked_rows += c.mode == ConstraintMode::LeftAbsorb ? rows * c.b.cols() : rows * cols;
  }

  // vec(L X B) = (B^T kron L) vec(X) for column-major vec.
  Matrix op(stacked_rows, unknowns);
  Index at = 0;
  const Matrix id_rows = Matrix::Identity(rows, rows);
  const Matrix id_cols = Matrix::Identity(cols, cols);
  for (const auto& c : constraints) {
    if (c.mode == ConstraintMode::LeftAbsorb) {
      if (c.b.cols() == 0) continue;
      const Matrix block = kron(c.b.transpose(), id_rows - c.a);
      op.middleRows(at, block.rows()) = block;
      at += block.rows();
    } else {
      const Matrix block = kron(id_cols, c.a) - kron(c.b.transpose(), id_rows);
      op.middleRows(at, block.rows()) = block;
      at += block.rows();
    }
  }

  const Matrix kernel = kernel_with_floor(op, tol, tol.residual_tol * scale);
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(kernel.cols()));
  for (Index j = 0; j < kernel.cols(); ++j) basis.push_back(unvec(kernel.col(j), rows, cols));
  return basis;
}

std::size_t family_rank(std::span<const Matrix> family, const Tolerance& tol) {
  if (family.empty()) return 0;
  const Index len = family.front().size();
  Matrix stacked(len, static_cast<Index>(family.size()));
  for (std::size_t j = 0; j < family.size(); ++j) {
    if (family[j].size() != len) throw InputError("family_rank: shape mismatch");
    stacked.col(static_cast<Index>(j)) = vec(family[j]);
  }
  return rank(stacked, tol);
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

Matrix block_diagonal(std::span<const Matrix> blocks) {
  Index r = 0;
  Index c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  Matrix out = Matrix::Zero(r, c);
  r = 0;
  c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

Matrix random_gaussian(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = dist(rng);
      const double im = dist(rng);
      out(i, j) = Complex(re, im);
    }
  }
  return out;
}

Matrix random_unitary(Index d, std::mt19937_64& rng) {
  if (d == 0) return Matrix(0, 0);
  const Matrix g = random_gaussian(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  // fix the column phases by the diagonal of R so the distribution is Haar
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

Matrix random_projection(Index d, Index rank, std::mt19937_64& rng) {
  if (rank < 0 || rank > d) throw InputError("random_projection: rank out of range");
  const Matrix u = random_unitary(d, rng);
  const Matrix w = u.leftCols(rank);
  return w * w.adjoint();
}

Matrix random_combination(std::span<const Matrix> basis, Index rows, Index cols,
                          std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix out = Matrix::Zero(rows, cols);
  for (const auto& b : basis) {
    const double re = dist(rng);
    const double im = dist(rng);
    out += Complex(re, im) * b;
  }
  return out;
}

Matrix polar_unitary(const Matrix& m) {
  if (m.size() == 0) return Matrix(m.rows(), m.cols());
  const auto result = svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return result.u * result.v.adjoint();
}

}  // namespace numlin
}  // namespace sforge
