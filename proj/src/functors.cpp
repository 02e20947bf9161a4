#include "subspace_forge/functors.hpp"

#include "subspace_forge/errors.hpp"

#include <cmath>

namespace sforge {

Matrix IsometryFamily::assembled(Index ambient_dim) const {
  Matrix g(ambient_dim, total_rank());
  Index at = 0;
  for (const auto& gi : gammas) {
    g.middleCols(at, gi.cols()) = gi;
    at += gi.cols();
  }
  return g;
}

std::vector<Index> IsometryFamily::offsets() const {
  std::vector<Index> out;
  Index at = 0;
  for (const auto& gi : gammas) {
    out.push_back(at);
    at += gi.cols();
  }
  return out;
}

Index IsometryFamily::total_rank() const {
  Index k = 0;
  for (const auto& gi : gammas) k += gi.cols();
  return k;
}

bool FunctorTrace::chained() const {
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (steps[i].alpha_in != steps[i - 1].alpha_out || steps[i].dim_in != steps[i - 1].dim_out) return false;
  }
  return true;
}

namespace functors {

namespace {

const PnAlpha& alpha_tag(const ProjectionSystem& p, const char* op) {
  const auto* tag = std::get_if<PnAlpha>(&p.tag);
  if (tag == nullptr) throw InputError(std::string(op) + " needs a system tagged PnAlpha");
  if (tag->n != p.size()) throw InputError(std::string(op) + ": tag n does not match projection count");
  return *tag;
}

void require_sum_relation(const ProjectionSystem& p, const PnAlpha& tag, const Tolerance& tol, const char* op) {
  p.validate(tol);
  Matrix sum = Matrix::Zero(p.ambient_dim, p.ambient_dim);
  for (const auto& m : p.projections) sum += m;
  const double r = numlin::norm(sum - to_double(tag.alpha) * Matrix::Identity(p.ambient_dim, p.ambient_dim));
  if (r > tol.residual_tol) {
    throw InputError(std::string(op) + ": projections do not sum to alpha*I (residual " + std::to_string(r) + ")");
  }
}

void require_passed(const CertificationReport& report) {
  for (const auto& c : report.checks) {
    if (!c.passed) throw ConsistencyError(c.name, c.residual);
  }
}

double scale_of(const Matrix& m) { return std::max(1.0, numlin::norm(m)); }

}  // namespace

ProjectionSystem base_rep(unsigned n, unsigned k) {
  if (n == 0) throw InputError("base_rep needs n >= 1");
  if (k > n) throw InputError("base_rep: k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
  ProjectionSystem p;
  p.ambient_dim = 1;
  p.projections.assign(n, Matrix::Zero(1, 1));
  if (k > 0) p.projections[k - 1](0, 0) = 1.0;
  p.tag = PnAlpha{n, Rational(k == 0 ? 0 : 1)};
  return p;
}

ProjectionSystem apply_T(const ProjectionSystem& p) {
  const auto& tag = alpha_tag(p, "apply_T");
  ProjectionSystem out;
  out.ambient_dim = p.ambient_dim;
  const Matrix id = Matrix::Identity(p.ambient_dim, p.ambient_dim);
  for (const auto& m : p.projections) out.projections.push_back(id - m);
  out.tag = PnAlpha{tag.n, spectrum::alpha_map_T(tag.n, tag.alpha)};
  return out;
}

IsometryFamily gamma_family(const ProjectionSystem& p, const Tolerance& tol) {
  p.validate(tol);
  IsometryFamily g;
  for (const auto& m : p.projections) g.gammas.push_back(numlin::projection_range(m));
  return g;
}

SImage apply_S_image(const ProjectionSystem& p, const Tolerance& tol) {
  const auto& tag = alpha_tag(p, "apply_S");
  if (tag.alpha <= 1) throw DomainError("apply_S requires alpha > 1 (alpha = " + to_string(tag.alpha) + ")");
  require_sum_relation(p, tag, tol, "apply_S");

  SImage img;
  img.input = p;
  img.alpha = tag.alpha;
  img.gammas = gamma_family(p, tol);
  const Index d = p.ambient_dim;
  const Index total = img.gammas.total_rank();
  const Matrix gamma = img.gammas.assembled(d);
  const Matrix w = numlin::kernel_basis(gamma, tol);
  if (w.cols() != total - d) {
    throw ConsistencyError("kernel dimension of assembled isometry", static_cast<double>(w.cols() - (total - d)));
  }

  const double alpha = to_double(tag.alpha);
  const double c = std::sqrt(alpha / (alpha - 1.0));
  const auto offsets = img.gammas.offsets();
  img.deltas.hat_dim = w.cols();
  const Rational alpha_out = spectrum::alpha_map_S(tag.alpha);
  img.system.ambient_dim = w.cols();
  img.system.tag = PnAlpha{tag.n, alpha_out};
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Index kk = img.gammas.gammas[k].cols();
    Matrix delta = c * w.middleRows(offsets[k], kk).adjoint();
    img.system.projections.push_back(delta * delta.adjoint());
    img.deltas.deltas.push_back(std::move(delta));
  }

  auto& rel = img.relations;
  const double thr = tol.residual_tol;
  const auto& deltas = img.deltas.deltas;
  const auto& gammas = img.gammas.gammas;
  Matrix mixed = Matrix::Zero(d, w.cols());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Index ki = deltas[i].cols();
    rel.add("Delta*Delta=I[" + std::to_string(i + 1) + "]",
            numlin::norm(deltas[i].adjoint() * deltas[i] - Matrix::Identity(ki, ki)), thr);
    mixed += gammas[i] * deltas[i].adjoint();
  }
  rel.add("sum Gamma Delta*=0", numlin::norm(mixed), thr);
  double cross = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (i == j) continue;
      cross = std::max(cross, numlin::norm(deltas[i].adjoint() * deltas[j] +
                                           gammas[i].adjoint() * gammas[j] / (alpha - 1.0)));
    }
  }
  rel.add("Delta_i*Delta_j=-Gamma_i*Gamma_j/(alpha-1)", cross, thr);
  rel.merge(systems::certify(img.system, tol), "output ");
  require_passed(rel);
  return img;
}

std::pair<ProjectionSystem, DeltaFamily> apply_S(const ProjectionSystem& p, const Tolerance& tol) {
  auto img = apply_S_image(p, tol);
  return {std::move(img.system), std::move(img.deltas)};
}

SImage apply_phi_plus_image(const ProjectionSystem& p, const Tolerance& tol) {
  const auto& tag = alpha_tag(p, "apply_phi_plus");
  if (tag.alpha >= Rational(static_cast<int>(tag.n) - 1)) {
    throw DomainError("Phi+ requires alpha < n - 1 (alpha = " + to_string(tag.alpha) + ")");
  }
  return apply_S_image(apply_T(p), tol);
}

ProjectionSystem apply_phi_plus(const ProjectionSystem& p, const Tolerance& tol) {
  return apply_phi_plus_image(p, tol).system;
}

DiscreteTower generate_tower(unsigned n, unsigned k, unsigned steps, const Tolerance& tol) {
  DiscreteTower tower;
  tower.levels.push_back(base_rep(n, k));
  for (unsigned s = 1; s <= steps; ++s) {
    const auto& prev = tower.levels.back();
    const Rational a_in = std::get<PnAlpha>(prev.tag).alpha;
    SImage img;
    try {
      img = apply_phi_plus_image(prev, tol);
    } catch (const DomainError& e) {
      throw DomainError("tower step " + std::to_string(s) + ": " + e.what());
    }
    const Rational t_alpha = spectrum::alpha_map_T(n, a_in);
    tower.trace.steps.push_back({"T", a_in, t_alpha, prev.ambient_dim, prev.ambient_dim});
    tower.trace.steps.push_back(
        {"S", t_alpha, std::get<PnAlpha>(img.system.tag).alpha, prev.ambient_dim, img.system.ambient_dim});
    const auto report = systems::certify(img.system, tol);
    if (!report.overall) throw ConsistencyError("tower level certification", 0.0);
    tower.levels.push_back(img.system);
    tower.s_steps.push_back(std::move(img));
  }
  return tower;
}

std::pair<ProjectionSystem, FunctorTrace> generate_discrete(unsigned n, unsigned k, unsigned steps,
                                                            const Tolerance& tol) {
  auto tower = generate_tower(n, k, steps, tol);
  return {std::move(tower.levels.back()), std::move(tower.trace)};
}

FImage apply_F_image(const ProjectionSystem& p, const Tolerance& tol) {
  const auto& tag = alpha_tag(p, "apply_F");
  if (tag.alpha == 0) throw DomainError("apply_F requires alpha != 0");
  require_sum_relation(p, tag, tol, "apply_F");

  FImage img;
  img.input = p;
  img.alpha = tag.alpha;
  img.gammas = gamma_family(p, tol);
  const Index total = img.gammas.total_rank();
  const Matrix gamma = img.gammas.assembled(p.ambient_dim);
  const auto offsets = img.gammas.offsets();
  const double alpha = to_double(tag.alpha);

  img.system.ambient_dim = total;
  img.system.tag = PnAboTau{tag.n, Rational(1) / tag.alpha};
  for (std::size_t i = 0; i < p.size(); ++i) {
    Matrix q = Matrix::Zero(total, total);
    const Index ki = img.gammas.gammas[i].cols();
    q.block(offsets[i], offsets[i], ki, ki).setIdentity();
    img.system.projections.push_back(std::move(q));
  }
  img.system.projections.push_back(gamma.adjoint() * gamma / alpha);

  img.relations = systems::certify(img.system, tol);
  const auto rank_p = static_cast<Index>(numlin::projection_rank(img.system.projections.back()));
  img.relations.add_flag("rank P = source dimension", rank_p == p.ambient_dim,
                         static_cast<double>(std::abs(rank_p - p.ambient_dim)));
  require_passed(img.relations);
  return img;
}

ProjectionSystem apply_F(const ProjectionSystem& p, const Tolerance& tol) { return apply_F_image(p, tol).system; }

SubspaceSystem abo_subspaces(const ProjectionSystem& abo, const Tolerance& tol) {
  return systems::subspaces_from_projections(abo, tol);
}

HomSpace morphism_space(const ProjectionSystem& source, const ProjectionSystem& target, const Tolerance& tol) {
  return systems::hom_space(systems::subspaces_from_projections(source, tol),
                            systems::subspaces_from_projections(target, tol), tol);
}

namespace {

void require_compatible(const ProjectionSystem& a, const ProjectionSystem& b, const Rational& alpha_a,
                        const Rational& alpha_b, const char* op) {
  if (a.size() != b.size()) throw InputError(std::string(op) + ": systems have different projection counts");
  if (alpha_a != alpha_b) throw InputError(std::string(op) + ": source and target alpha differ");
}

// Largest residual of C P_i = P~_i C P_i over i.
double morphism_residual(const Matrix& c, const ProjectionSystem& source, const ProjectionSystem& target) {
  double r = 0.0;
  for (std::size_t i = 0; i < source.size(); ++i) {
    const Matrix cp = c * source.projections[i];
    r = std::max(r, numlin::norm(cp - target.projections[i] * cp));
  }
  return r;
}

// Largest residual of Q~_k R = Q~_k R Q_k over k, the constraint on hat morphisms.
double hat_residual(const Matrix& r_hat, const ProjectionSystem& source_hat, const ProjectionSystem& target_hat,
                    std::size_t count) {
  double r = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const Matrix qr = target_hat.projections[k] * r_hat;
    r = std::max(r, numlin::norm(qr - qr * source_hat.projections[k]));
  }
  return r;
}

void require_shape(const Matrix& m, Index rows, Index cols, const char* op) {
  if (m.rows() != rows || m.cols() != cols) throw InputError(std::string(op) + ": matrix shape mismatch");
  numlin::require_finite(m, op);
}

}  // namespace

Matrix lift_morphism_S(const Matrix& c, const SImage& source, const SImage& target, const Tolerance& tol) {
  require_compatible(source.input, target.input, source.alpha, target.alpha, "lift_morphism_S");
  require_shape(c, target.input.ambient_dim, source.input.ambient_dim, "lift_morphism_S");
  const double scale = scale_of(c);
  const double in_res = morphism_residual(c, source.input, target.input);
  if (in_res > tol.residual_tol * scale) {
    throw InputError("lift_morphism_S: input is not a morphism (residual " + std::to_string(in_res) + ")");
  }
  const double alpha = to_double(source.alpha);
  const auto& g = source.gammas.gammas;
  const auto& gt = target.gammas.gammas;
  const auto& dl = source.deltas.deltas;
  const auto& dt = target.deltas.deltas;

  Matrix c_hat = Matrix::Zero(target.system.ambient_dim, source.system.ambient_dim);
  std::vector<Matrix> restricted;
  for (std::size_t i = 0; i < g.size(); ++i) {
    restricted.push_back(gt[i].adjoint() * c * g[i]);
    c_hat += dt[i] * restricted.back() * dl[i].adjoint();
  }
  c_hat *= (alpha - 1.0) / alpha;

  double r12 = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    r12 = std::max(r12, numlin::norm(dt[k].adjoint() * c_hat - restricted[k] * dl[k].adjoint()));
  }
  if (r12 > tol.residual_tol * scale) throw ConsistencyError("Delta~*_k C^ = C_k Delta*_k", r12);
  const double r14 = hat_residual(c_hat, source.system, target.system, g.size());
  if (r14 > tol.residual_tol * scale) throw ConsistencyError("lifted morphism hat constraint", r14);
  return c_hat;
}

Matrix descend_morphism_S(const Matrix& r_hat, const SImage& source, const SImage& target, const Tolerance& tol) {
  require_compatible(source.input, target.input, source.alpha, target.alpha, "descend_morphism_S");
  require_shape(r_hat, target.system.ambient_dim, source.system.ambient_dim, "descend_morphism_S");
  const double scale = scale_of(r_hat);
  const auto& g = source.gammas.gammas;
  const auto& gt = target.gammas.gammas;
  const double in_res = hat_residual(r_hat, source.system, target.system, g.size());
  if (in_res > tol.residual_tol * scale) {
    throw InputError("descend_morphism_S: input violates the hat constraint (residual " + std::to_string(in_res) +
                     ")");
  }
  const double alpha = to_double(source.alpha);
  const auto& dl = source.deltas.deltas;
  const auto& dt = target.deltas.deltas;

  Matrix r = Matrix::Zero(target.input.ambient_dim, source.input.ambient_dim);
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < g.size(); ++i) {
    blocks.push_back(dt[i].adjoint() * r_hat * dl[i]);
    r += gt[i] * blocks.back() * g[i].adjoint();
  }
  r /= alpha;

  double r20 = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) r20 = std::max(r20, numlin::norm(r * g[k] - gt[k] * blocks[k]));
  if (r20 > tol.residual_tol * scale) throw ConsistencyError("r Gamma_k = Gamma~_k r_k", r20);
  const double r19 = morphism_residual(r, source.input, target.input);
  if (r19 > tol.residual_tol * scale) throw ConsistencyError("descended morphism constraint", r19);
  return r;
}

HomSpace s_morphism_space(const SImage& source, const SImage& target, const Tolerance& tol) {
  // r^ is admissible iff its adjoint maps Im Q~_k into Im Q_k.
  auto reversed = morphism_space(target.system, source.system, tol);
  HomSpace h;
  h.source_dim = reversed.target_dim;
  h.target_dim = reversed.source_dim;
  for (const auto& b : reversed.basis) h.basis.push_back(b.adjoint());
  return h;
}

Matrix lift_morphism_F(const Matrix& c, const FImage& source, const FImage& target, const Tolerance& tol) {
  require_compatible(source.input, target.input, source.alpha, target.alpha, "lift_morphism_F");
  require_shape(c, target.input.ambient_dim, source.input.ambient_dim, "lift_morphism_F");
  const double scale = scale_of(c);
  const double in_res = morphism_residual(c, source.input, target.input);
  if (in_res > tol.residual_tol * scale) {
    throw InputError("lift_morphism_F: input is not a morphism (residual " + std::to_string(in_res) + ")");
  }
  const auto& g = source.gammas.gammas;
  const auto& gt = target.gammas.gammas;
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < g.size(); ++i) blocks.push_back(gt[i].adjoint() * c * g[i]);
  const Matrix c_hat = numlin::block_diagonal(blocks);

  const Matrix adj = c_hat.adjoint();
  const std::size_t n = g.size();
  double r30 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix aq = adj * target.system.projections[i];
    r30 = std::max(r30, numlin::norm(aq - source.system.projections[i] * aq));
  }
  if (r30 > tol.residual_tol * scale) throw ConsistencyError("C^* Q~_i = Q_i C^* Q~_i", r30);
  const Matrix ap = adj * target.system.projections[n];
  const double r31 = numlin::norm(ap - source.system.projections[n] * ap);
  if (r31 > tol.residual_tol * scale) throw ConsistencyError("C^* P~ = P C^* P~", r31);
  return c_hat;
}

Matrix descend_morphism_F(const Matrix& r_hat, const FImage& source, const FImage& target, const Tolerance& tol) {
  require_compatible(source.input, target.input, source.alpha, target.alpha, "descend_morphism_F");
  require_shape(r_hat, target.system.ambient_dim, source.system.ambient_dim, "descend_morphism_F");
  const double scale = scale_of(r_hat);
  const std::size_t n = source.gammas.gammas.size();
  const double in_res = hat_residual(r_hat, source.system, target.system, n + 1);
  if (in_res > tol.residual_tol * scale) {
    throw InputError("descend_morphism_F: input violates the hat constraint (residual " + std::to_string(in_res) +
                     ")");
  }
  const Matrix g = source.gammas.assembled(source.input.ambient_dim);
  const Matrix gt = target.gammas.assembled(target.input.ambient_dim);
  const Matrix r = gt * r_hat * g.adjoint() / to_double(source.alpha);

  const double r37 = morphism_residual(r, source.input, target.input);
  if (r37 > tol.residual_tol * scale) throw ConsistencyError("r P_i = P~_i r P_i", r37);
  const auto offs = source.gammas.offsets();
  const auto offs_t = target.gammas.offsets();
  double r35 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& gi = source.gammas.gammas[i];
    const auto& gti = target.gammas.gammas[i];
    const Matrix block = r_hat.block(offs_t[i], offs[i], gti.cols(), gi.cols());
    r35 = std::max(r35, numlin::norm(gti.adjoint() * r * gi - block));
  }
  if (r35 > tol.residual_tol * scale) throw ConsistencyError("r_i = Gamma~_i* r Gamma_i", r35);
  return r;
}

HomSpace f_morphism_space(const FImage& source, const FImage& target, const Tolerance& tol) {
  auto reversed = morphism_space(target.system, source.system, tol);
  HomSpace h;
  h.source_dim = reversed.target_dim;
  h.target_dim = reversed.source_dim;
  for (const auto& b : reversed.basis) h.basis.push_back(b.adjoint());
  return h;
}

}  // namespace functors
}  // namespace sforge
