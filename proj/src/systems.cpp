#include "subspace_forge/systems.hpp"

#include "subspace_forge/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace sforge {

std::string describe(const AlgebraTag& tag) {
  struct Visitor {
    std::string operator()(const Untyped&) const { return "Untyped"; }
    std::string operator()(const PnAlpha& t) const {
      return "PnAlpha(n=" + std::to_string(t.n) + ", alpha=" + to_string(t.alpha) + ")";
    }
    std::string operator()(const PnAboTau& t) const {
      return "PnAboTau(n=" + std::to_string(t.n) + ", tau=" + to_string(t.tau) + ")";
    }
  };
  return std::visit(Visitor{}, tag);
}

void validate(const AlgebraTag& tag) {
  if (const auto* a = std::get_if<PnAlpha>(&tag)) {
    if (a->n < 1 || a->alpha < 0) throw InputError("invalid tag " + describe(tag));
  } else if (const auto* t = std::get_if<PnAboTau>(&tag)) {
    if (t->n < 1 || t->tau < 0) throw InputError("invalid tag " + describe(tag));
  }
}

std::vector<Index> SubspaceSystem::dimension_vector() const {
  std::vector<Index> dims;
  dims.reserve(bases.size());
  for (const auto& b : bases) dims.push_back(b.cols());
  return dims;
}

void SubspaceSystem::validate(const Tolerance& tol) const {
  tol.validate();
  if (ambient_dim < 0) throw InputError("negative ambient dimension");
  for (std::size_t i = 0; i < bases.size(); ++i) {
    const auto& b = bases[i];
    if (b.rows() != ambient_dim || b.cols() > ambient_dim) {
      throw InputError("subspace " + std::to_string(i + 1) + ": basis shape does not fit ambient dimension");
    }
    numlin::require_finite(b, "subspace basis");
    const double r = numlin::norm(b.adjoint() * b - Matrix::Identity(b.cols(), b.cols()));
    if (r > tol.residual_tol) {
      throw InputError("subspace " + std::to_string(i + 1) + ": basis not orthonormal (residual " +
                       std::to_string(r) + ")");
    }
  }
}

void ProjectionSystem::validate(const Tolerance& tol) const {
  tol.validate();
  sforge::validate(tag);
  if (ambient_dim < 0) throw InputError("negative ambient dimension");
  for (std::size_t i = 0; i < projections.size(); ++i) {
    const auto& p = projections[i];
    if (p.rows() != ambient_dim || p.cols() != ambient_dim) {
      throw InputError("projection " + std::to_string(i + 1) + ": shape does not match ambient dimension");
    }
    numlin::require_finite(p, "projection");
    const double idem = numlin::norm(p * p - p);
    const double herm = numlin::norm(p - p.adjoint());
    if (idem > tol.residual_tol || herm > tol.residual_tol) {
      throw InputError("projection " + std::to_string(i + 1) + ": not an orthogonal projection (idempotency " +
                       std::to_string(idem) + ", hermiticity " + std::to_string(herm) + ")");
    }
  }
}

void CertificationReport::add(std::string name, double residual, double threshold) {
  const bool ok = std::isfinite(residual) && residual <= threshold;
  checks.push_back({std::move(name), ok, residual});
  overall = overall && ok;
}

void CertificationReport::add_flag(std::string name, bool passed, double residual) {
  checks.push_back({std::move(name), passed, residual});
  overall = overall && passed;
}

void CertificationReport::merge(const CertificationReport& other, const std::string& prefix) {
  for (const auto& c : other.checks) checks.push_back({prefix + c.name, c.passed, c.residual});
  overall = overall && other.overall;
  probabilistic = probabilistic || other.probabilistic;
  for (const auto& n : other.notes) notes.push_back(prefix + n);
  if (!seed && other.seed) seed = other.seed;
}

const Check* CertificationReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace systems {

ProjectionSystem projections_from_subspaces(const SubspaceSystem& s, const Tolerance& tol) {
  s.validate(tol);
  ProjectionSystem p;
  p.ambient_dim = s.ambient_dim;
  p.projections.reserve(s.size());
  for (const auto& b : s.bases) p.projections.push_back(b * b.adjoint());
  return p;
}

SubspaceSystem subspaces_from_projections(const ProjectionSystem& p, const Tolerance& tol) {
  p.validate(tol);
  SubspaceSystem s;
  s.ambient_dim = p.ambient_dim;
  s.bases.reserve(p.size());
  for (const auto& proj : p.projections) s.bases.push_back(numlin::projection_range(proj));
  return s;
}

namespace {

void require_same_count(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw InputError(std::string(what) + ": systems have different numbers of subspaces (" +
                     std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

double constraint_threshold(const numlin::LinearConstraint& c, const Tolerance& tol) {
  return tol.residual_tol * std::max(1.0, numlin::norm(c.a) * numlin::norm(c.b));
}

std::vector<Matrix> solve_checked(Index rows, Index cols, const std::vector<numlin::LinearConstraint>& cs,
                                  const Tolerance& tol) {
  auto basis = numlin::constraint_solution_space(rows, cols, cs, tol);
  for (const auto& x : basis) {
    for (const auto& c : cs) {
      const double r = numlin::constraint_residual(c, x);
      if (r > constraint_threshold(c, tol)) throw ConsistencyError("solution-space basis constraint", r);
    }
  }
  return basis;
}

std::vector<numlin::LinearConstraint> inclusion_constraints(const SubspaceSystem& s,
                                                            const SubspaceSystem& t) {
  std::vector<numlin::LinearConstraint> cs;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.bases[i].cols() == 0) continue;
    const Matrix target_proj = t.bases[i] * t.bases[i].adjoint();
    cs.push_back({target_proj, s.bases[i], numlin::ConstraintMode::LeftAbsorb});
  }
  return cs;
}

}  // namespace

HomSpace hom_space(const SubspaceSystem& s, const SubspaceSystem& t, const Tolerance& tol) {
  require_same_count(s.size(), t.size(), "hom_space");
  s.validate(tol);
  t.validate(tol);
  HomSpace h;
  h.source_dim = s.ambient_dim;
  h.target_dim = t.ambient_dim;
  h.basis = solve_checked(t.ambient_dim, s.ambient_dim, inclusion_constraints(s, t), tol);
  return h;
}

std::size_t end_dimension(const SubspaceSystem& s, const Tolerance& tol) {
  return hom_space(s, s, tol).dimension();
}

bool is_transitive(const SubspaceSystem& s, const Tolerance& tol) { return end_dimension(s, tol) == 1; }

bool is_transitive(const ProjectionSystem& p, const Tolerance& tol) {
  return is_transitive(subspaces_from_projections(p, tol), tol);
}

namespace {

// Groups eigenvalues whose single-linkage distance is within `gap`.
std::vector<std::vector<Complex>> cluster(const Eigen::VectorXcd& eig, double gap) {
  const auto n = static_cast<std::size_t>(eig.size());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(eig(static_cast<Index>(i)) - eig(static_cast<Index>(j))) <= gap) parent[root(i)] = root(j);
    }
  }
  std::vector<std::vector<Complex>> groups;
  std::vector<long> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = root(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[r])].push_back(eig(static_cast<Index>(i)));
  }
  return groups;
}

// Spectral (Riesz) projection of x onto the generalized eigenspace of
// `inside`, by trapezoidal quadrature of the resolvent on a circle that
// separates `inside` from `outside`.
std::optional<Matrix> riesz_projection(const Matrix& x, const std::vector<Complex>& inside,
                                       const std::vector<Complex>& outside) {
  Complex centre = std::accumulate(inside.begin(), inside.end(), Complex(0.0));
  centre /= static_cast<double>(inside.size());
  double r_in = 0.0;
  for (const auto& z : inside) r_in = std::max(r_in, std::abs(z - centre));
  double r_out = std::numeric_limits<double>::infinity();
  for (const auto& z : outside) r_out = std::min(r_out, std::abs(z - centre));
  if (!(r_out > r_in)) return std::nullopt;
  const double radius = r_in > 0.0 ? std::sqrt(r_in * r_out) : 0.5 * r_out;

  constexpr int kNodes = 256;
  const Index d = x.rows();
  const Matrix id = Matrix::Identity(d, d);
  Matrix acc = Matrix::Zero(d, d);
  for (int k = 0; k < kNodes; ++k) {
    const double theta = 2.0 * std::numbers::pi * (k + 0.5) / kNodes;
    const Complex w = std::polar(1.0, theta);
    const Complex z = centre + radius * w;
    acc += w * Eigen::PartialPivLU<Matrix>(z * id - x).solve(id);
  }
  return Matrix(acc * (radius / kNodes));
}

}  // namespace

Verdict is_indecomposable(const SubspaceSystem& s, const Tolerance& tol, const GenericityOptions& opts) {
  const auto end = hom_space(s, s, tol);
  Verdict v;
  v.seed = opts.seed;
  if (end.dimension() <= 1) {
    v.value = true;
    return v;
  }
  const Index d = s.ambient_dim;
  const auto constraints = inclusion_constraints(s, s);
  std::mt19937_64 rng(opts.seed);
  const double gap = 1e3 * tol.residual_tol;
  for (std::size_t trial = 0; trial < opts.trials; ++trial) {
    Matrix x = numlin::random_combination(end.basis, d, d, rng);
    const double scale = numlin::norm(x);
    if (scale == 0.0) continue;
    x /= scale;
    Eigen::ComplexEigenSolver<Matrix> solver(x, false);
    const auto groups = cluster(solver.eigenvalues(), gap);
    if (groups.size() < 2) continue;
    std::vector<Complex> rest;
    for (std::size_t g = 1; g < groups.size(); ++g) rest.insert(rest.end(), groups[g].begin(), groups[g].end());
    const auto e = riesz_projection(x, groups.front(), rest);
    if (!e) continue;
    double residual = numlin::norm(*e * *e - *e);
    for (const auto& c : constraints) residual = std::max(residual, numlin::constraint_residual(c, *e));
    const double size = numlin::norm(*e);
    const double co_size = numlin::norm(Matrix::Identity(d, d) - *e);
    if (residual <= 1e3 * tol.residual_tol && size > 0.5 && co_size > 0.5) {
      v.value = false;
      v.trials = trial + 1;
      v.witness_residual = residual;
      return v;
    }
  }
  v.value = true;
  v.probabilistic = true;
  v.trials = opts.trials;
  return v;
}

HomSpace intertwiner_space(const ProjectionSystem& p, const ProjectionSystem& q, const Tolerance& tol) {
  require_same_count(p.size(), q.size(), "intertwiner_space");
  p.validate(tol);
  q.validate(tol);
  std::vector<numlin::LinearConstraint> cs;
  cs.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    cs.push_back({q.projections[i], p.projections[i], numlin::ConstraintMode::Commute});
  }
  HomSpace h;
  h.source_dim = p.ambient_dim;
  h.target_dim = q.ambient_dim;
  h.basis = solve_checked(q.ambient_dim, p.ambient_dim, cs, tol);
  return h;
}

std::size_t commutant_dimension(const ProjectionSystem& p, const Tolerance& tol) {
  return intertwiner_space(p, p, tol).dimension();
}

bool is_irreducible(const ProjectionSystem& p, const Tolerance& tol) { return commutant_dimension(p, tol) == 1; }

namespace {

double intertwining_residual(const Matrix& w, const ProjectionSystem& p, const ProjectionSystem& q) {
  double r = numlin::norm(w.adjoint() * w - Matrix::Identity(w.cols(), w.cols()));
  for (std::size_t i = 0; i < p.size(); ++i) {
    r = std::max(r, numlin::norm(w * p.projections[i] - q.projections[i] * w));
  }
  return r;
}

double intertwining_threshold(const ProjectionSystem& p, const Tolerance& tol) {
  return tol.residual_tol * std::max(1.0, std::sqrt(static_cast<double>(p.ambient_dim)));
}

struct UnitarySearch {
  std::optional<Matrix> unitary;
  bool exhaustive = true;
  std::size_t trials = 0;
  double residual = 0.0;
};

UnitarySearch search_unitary(const ProjectionSystem& p, const ProjectionSystem& q, const Tolerance& tol,
                             const GenericityOptions& opts) {
  require_same_count(p.size(), q.size(), "are_unitarily_equivalent");
  UnitarySearch out;
  if (p.ambient_dim != q.ambient_dim) return out;
  if (p.ambient_dim == 0) {
    out.unitary = Matrix(0, 0);
    return out;
  }
  const auto space = intertwiner_space(p, q, tol);
  if (space.dimension() == 0) return out;
  const double threshold = intertwining_threshold(p, tol);

  // Schur: between irreducible systems a nonzero intertwiner is a scaled unitary.
  if (space.dimension() == 1 && commutant_dimension(p, tol) == 1 && commutant_dimension(q, tol) == 1) {
    const Matrix w = numlin::polar_unitary(space.basis.front());
    const double r = intertwining_residual(w, p, q);
    out.trials = 1;
    out.residual = r;
    if (r <= threshold) out.unitary = w;
    return out;
  }

  std::mt19937_64 rng(opts.seed);
  const Index d = p.ambient_dim;
  for (std::size_t trial = 0; trial < opts.trials; ++trial) {
    const Matrix r = numlin::random_combination(space.basis, d, d, rng);
    const auto sigma = numlin::singular_values(r);
    out.trials = trial + 1;
    if (sigma.empty() || !(sigma.back() > tol.rank_rel_tol * sigma.front())) continue;
    // R* R lies in the commutant, so the polar factor still intertwines.
    const Matrix w = numlin::polar_unitary(r);
    const double res = intertwining_residual(w, p, q);
    if (res <= threshold) {
      out.unitary = w;
      out.residual = res;
      return out;
    }
  }
  out.exhaustive = false;
  return out;
}

}  // namespace

std::optional<Matrix> find_unitary_intertwiner(const ProjectionSystem& p, const ProjectionSystem& q,
                                               const Tolerance& tol, const GenericityOptions& opts) {
  return search_unitary(p, q, tol, opts).unitary;
}

Verdict are_unitarily_equivalent(const ProjectionSystem& p, const ProjectionSystem& q, const Tolerance& tol,
                                 const GenericityOptions& opts) {
  const auto found = search_unitary(p, q, tol, opts);
  Verdict v;
  v.seed = opts.seed;
  v.trials = found.trials;
  v.value = found.unitary.has_value();
  v.probabilistic = !found.exhaustive;
  if (found.unitary) v.witness_residual = found.residual;
  return v;
}

Verdict are_isomorphic(const SubspaceSystem& s, const SubspaceSystem& t, const Tolerance& tol,
                       const GenericityOptions& opts) {
  require_same_count(s.size(), t.size(), "are_isomorphic");
  Verdict v;
  v.seed = opts.seed;
  if (s.ambient_dim != t.ambient_dim || s.dimension_vector() != t.dimension_vector()) return v;
  if (s.ambient_dim == 0) {
    v.value = true;
    return v;
  }
  const auto forward = hom_space(s, t, tol);
  if (forward.dimension() == 0) return v;

  const Index d = s.ambient_dim;
  std::mt19937_64 rng(opts.seed);
  for (std::size_t trial = 0; trial < opts.trials; ++trial) {
    const Matrix r = numlin::random_combination(forward.basis, d, d, rng);
    const auto sigma = numlin::singular_values(r);
    if (sigma.empty() || !(sigma.back() > tol.rank_rel_tol * sigma.front())) continue;
    double residual = 0.0;
    bool images_match = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Matrix image = r * s.bases[i];
      const Matrix& tb = t.bases[i];
      residual = std::max(residual, numlin::norm(image - tb * (tb.adjoint() * image)) / std::max(1.0, sigma.front()));
      if (static_cast<Index>(numlin::rank(image, tol)) != tb.cols()) images_match = false;
    }
    if (!images_match || residual > tol.residual_tol * std::max(1.0, static_cast<double>(d))) continue;
    if (hom_space(t, s, tol).dimension() == 0) break;
    v.value = true;
    v.trials = trial + 1;
    v.witness_residual = residual;
    return v;
  }
  v.probabilistic = true;
  v.trials = opts.trials;
  return v;
}

CertificationReport certify(const ProjectionSystem& p, const Tolerance& tol) {
  tol.validate();
  CertificationReport report;
  const double thr = tol.residual_tol;
  const Index d = p.ambient_dim;
  bool shapes_ok = true;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& m = p.projections[i];
    const std::string idx = "[" + std::to_string(i + 1) + "]";
    if (m.rows() != d || m.cols() != d || !numlin::is_finite(m)) {
      report.add_flag("shape" + idx, false, std::numeric_limits<double>::infinity());
      shapes_ok = false;
      continue;
    }
    report.add("idempotent" + idx, numlin::norm(m * m - m), thr);
    report.add("hermitian" + idx, numlin::norm(m - m.adjoint()), thr);
  }
  if (!shapes_ok) return report;

  const Matrix id = Matrix::Identity(d, d);
  if (const auto* a = std::get_if<PnAlpha>(&p.tag)) {
    report.add_flag("count", p.size() == a->n, p.size() == a->n ? 0.0 : static_cast<double>(p.size()));
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& m : p.projections) sum += m;
    report.add("sum=alpha*I", numlin::norm(sum - to_double(a->alpha) * id), thr);
  } else if (const auto* t = std::get_if<PnAboTau>(&p.tag)) {
    const bool count_ok = p.size() == t->n + 1;
    report.add_flag("count", count_ok, count_ok ? 0.0 : static_cast<double>(p.size()));
    if (!count_ok) return report;
    const Matrix& big_p = p.projections.back();
    Matrix sum = Matrix::Zero(d, d);
    for (unsigned i = 0; i < t->n; ++i) sum += p.projections[i];
    report.add("sumQ=I", numlin::norm(sum - id), thr);
    const double tau = to_double(t->tau);
    for (unsigned i = 0; i < t->n; ++i) {
      const Matrix& q = p.projections[i];
      report.add("QPQ=tauQ[" + std::to_string(i + 1) + "]", numlin::norm(q * big_p * q - tau * q), thr);
    }
  }
  return report;
}

}  // namespace systems
}  // namespace sforge
