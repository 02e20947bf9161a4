#include "subspace_forge/wild.hpp"

#include "subspace_forge/errors.hpp"

#include <cmath>

namespace sforge {

void UnitaryPair::validate(const Tolerance& tol) const {
  tol.validate();
  const Index d = u.rows();
  if (u.cols() != d || v.rows() != d || v.cols() != d) throw InputError("unitary pair: shapes differ");
  numlin::require_finite(u, "unitary pair");
  numlin::require_finite(v, "unitary pair");
  const Matrix id = Matrix::Identity(d, d);
  const double ru = numlin::norm(u.adjoint() * u - id);
  const double rv = numlin::norm(v.adjoint() * v - id);
  if (ru > tol.residual_tol || rv > tol.residual_tol) {
    throw InputError("unitary pair: not unitary (residuals " + std::to_string(ru) + ", " + std::to_string(rv) + ")");
  }
}

void OrthoTriple::validate(const Tolerance& tol) const {
  ProjectionSystem p;
  p.ambient_dim = p1.rows();
  p.projections = {p1, p2, p3};
  p.validate(tol);
  const double r = numlin::norm(p2 * p3);
  if (r > tol.residual_tol) {
    throw InputError("triple: P2 and P3 are not orthogonal (residual " + std::to_string(r) + ")");
  }
}

namespace wild {

std::vector<Matrix> suv_projections(const UnitaryPair& pair, const Tolerance& tol) {
  pair.validate(tol);
  const Index d = pair.dim();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix zero = Matrix::Zero(d, d);
  auto block = [&](const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& e) {
    Matrix m(2 * d, 2 * d);
    m << a, b, c, e;
    return m;
  };
  return {block(id, zero, zero, zero), block(zero, zero, zero, id), block(id, id, id, id) / 2.0,
          block(id, pair.u, pair.u.adjoint(), id) / 2.0, block(id, pair.v, pair.v.adjoint(), id) / 2.0};
}

SubspaceSystem build_suv(const UnitaryPair& pair, const Tolerance& tol) {
  pair.validate(tol);
  const Index d = pair.dim();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix zero = Matrix::Zero(d, d);
  auto stack = [&](const Matrix& top, const Matrix& bottom) {
    Matrix m(2 * d, d);
    m << top, bottom;
    return m;
  };
  const double s = std::sqrt(0.5);
  SubspaceSystem out;
  out.ambient_dim = 2 * d;
  out.bases = {stack(id, zero), stack(zero, id), s * stack(id, id), s * stack(pair.u, id), s * stack(pair.v, id)};
  return out;
}

std::size_t pair_intertwiner_dimension(const UnitaryPair& p, const UnitaryPair& q, const Tolerance& tol) {
  p.validate(tol);
  q.validate(tol);
  const std::vector<numlin::LinearConstraint> cs{{q.u, p.u, numlin::ConstraintMode::Commute},
                                                 {q.v, p.v, numlin::ConstraintMode::Commute}};
  return numlin::constraint_solution_space(q.dim(), p.dim(), cs, tol).size();
}

CertificationReport theorem1_crosscheck(const UnitaryPair& p, const UnitaryPair& q, const Tolerance& tol) {
  CertificationReport report;
  const auto sp = build_suv(p, tol);
  const auto sq = build_suv(q, tol);
  const auto hom = systems::hom_space(sp, sq, tol).dimension();
  const auto inter = pair_intertwiner_dimension(p, q, tol);
  report.add_flag("hom dimension = pair intertwiner dimension", hom == inter,
                  std::abs(static_cast<double>(hom) - static_cast<double>(inter)));
  report.notes.push_back("hom dimension " + std::to_string(hom) + ", intertwiner dimension " + std::to_string(inter));
  for (const auto* pair : {&p, &q}) {
    const bool transitive = systems::is_transitive(build_suv(*pair, tol), tol);
    const bool irreducible = pair_intertwiner_dimension(*pair, *pair, tol) == 1;
    report.add_flag(pair == &p ? "transitive iff irreducible (source)" : "transitive iff irreducible (target)",
                    transitive == irreducible, 0.0);
  }
  std::size_t index = 0;
  for (const auto& proj : suv_projections(p, tol)) {
    const auto r = static_cast<Index>(numlin::projection_rank(proj));
    report.add_flag("rank P" + std::to_string(++index) + " = d", r == p.dim(),
                    std::abs(static_cast<double>(r - p.dim())));
  }
  return report;
}

std::vector<Matrix> orth_triple_projections(const OrthoTriple& t, const Tolerance& tol) {
  t.validate(tol);
  const Matrix id = Matrix::Identity(t.dim(), t.dim());
  return {t.p1, id - t.p1, t.p2, t.p3, id - t.p2 - t.p3};
}

SubspaceSystem build_orth_triple(const OrthoTriple& t, const Tolerance& tol) {
  ProjectionSystem p;
  p.ambient_dim = t.dim();
  p.projections = orth_triple_projections(t, tol);
  return systems::subspaces_from_projections(p, tol);
}

std::size_t triple_intertwiner_dimension(const OrthoTriple& t, const OrthoTriple& u, const Tolerance& tol) {
  t.validate(tol);
  u.validate(tol);
  const std::vector<numlin::LinearConstraint> cs{{u.p1, t.p1, numlin::ConstraintMode::Commute},
                                                 {u.p2, t.p2, numlin::ConstraintMode::Commute},
                                                 {u.p3, t.p3, numlin::ConstraintMode::Commute}};
  return numlin::constraint_solution_space(u.dim(), t.dim(), cs, tol).size();
}

CertificationReport theorem2_crosscheck(const OrthoTriple& t, const OrthoTriple& u, const Tolerance& tol) {
  CertificationReport report;
  const auto st = build_orth_triple(t, tol);
  const auto su = build_orth_triple(u, tol);
  const auto hom = systems::hom_space(st, su, tol).dimension();
  const auto inter = triple_intertwiner_dimension(t, u, tol);
  report.add_flag("hom dimension = triple intertwiner dimension", hom == inter,
                  std::abs(static_cast<double>(hom) - static_cast<double>(inter)));
  report.notes.push_back("hom dimension " + std::to_string(hom) + ", intertwiner dimension " + std::to_string(inter));
  for (const auto* triple : {&t, &u}) {
    const bool transitive = systems::is_transitive(build_orth_triple(*triple, tol), tol);
    const bool irreducible = triple_intertwiner_dimension(*triple, *triple, tol) == 1;
    const std::string side = triple == &t ? " (source)" : " (target)";
    report.add_flag("transitive iff irreducible" + side, transitive == irreducible, 0.0);
    Matrix sum = Matrix::Zero(triple->dim(), triple->dim());
    for (const auto& m : orth_triple_projections(*triple, tol)) sum += m;
    report.add("five projections sum to 2I" + side,
               numlin::norm(sum - 2.0 * Matrix::Identity(triple->dim(), triple->dim())), tol.residual_tol);
  }
  return report;
}

namespace {

Index pick(std::span<const Index> dims, std::mt19937_64& rng) {
  if (dims.empty()) throw InputError("no dimensions to sample from");
  std::uniform_int_distribution<std::size_t> dist(0, dims.size() - 1);
  const Index d = dims[dist(rng)];
  if (d < 1) throw InputError("dimensions must be >= 1");
  return d;
}

UnitaryPair generic_pair(Index d, std::mt19937_64& rng) {
  Matrix u = numlin::random_unitary(d, rng);
  Matrix v = numlin::random_unitary(d, rng);
  return {std::move(u), std::move(v)};
}

UnitaryPair conjugate(const UnitaryPair& p, std::mt19937_64& rng) {
  const Matrix w = numlin::random_unitary(p.dim(), rng);
  return {w * p.u * w.adjoint(), w * p.v * w.adjoint()};
}

UnitaryPair diagonal_pair(Index d, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  Matrix u = Matrix::Zero(d, d);
  Matrix v = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    u(i, i) = coin(rng) ? 1.0 : -1.0;
    v(i, i) = coin(rng) ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
  }
  return {std::move(u), std::move(v)};
}

OrthoTriple generic_triple(Index d, std::mt19937_64& rng) {
  std::uniform_int_distribution<Index> rank1(0, d);
  std::uniform_int_distribution<Index> rank2(0, d);
  const Index r1 = rank1(rng);
  const Index r2 = rank2(rng);
  std::uniform_int_distribution<Index> rank3(0, d - r2);
  const Index r3 = rank3(rng);
  const Matrix w = numlin::random_unitary(d, rng);
  const Matrix w2 = w.leftCols(r2);
  const Matrix w3 = w.middleCols(r2, r3);
  return {numlin::random_projection(d, r1, rng), w2 * w2.adjoint(), w3 * w3.adjoint()};
}

OrthoTriple conjugate(const OrthoTriple& t, std::mt19937_64& rng) {
  const Matrix w = numlin::random_unitary(t.dim(), rng);
  return {w * t.p1 * w.adjoint(), w * t.p2 * w.adjoint(), w * t.p3 * w.adjoint()};
}

OrthoTriple diagonal_triple(Index d, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> slot(0, 2);
  Matrix p1 = Matrix::Zero(d, d);
  Matrix p2 = Matrix::Zero(d, d);
  Matrix p3 = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    if (coin(rng)) p1(i, i) = 1.0;
    const int s = slot(rng);
    if (s == 1) p2(i, i) = 1.0;
    if (s == 2) p3(i, i) = 1.0;
  }
  return {std::move(p1), std::move(p2), std::move(p3)};
}

UnitaryPair sum(const UnitaryPair& a, const UnitaryPair& b) {
  return {numlin::direct_sum(a.u, b.u), numlin::direct_sum(a.v, b.v)};
}

OrthoTriple sum(const OrthoTriple& a, const OrthoTriple& b) {
  return {numlin::direct_sum(a.p1, b.p1), numlin::direct_sum(a.p2, b.p2), numlin::direct_sum(a.p3, b.p3)};
}

}  // namespace

std::pair<UnitaryPair, UnitaryPair> random_pair_instance(std::span<const Index> dims, unsigned kind,
                                                         std::mt19937_64& rng) {
  const Index d = pick(dims, rng);
  switch (kind % 4) {
    case 1: {
      auto p = generic_pair(d, rng);
      auto q = conjugate(p, rng);
      return {std::move(p), std::move(q)};
    }
    case 2: {
      if (d < 2) break;
      const Index a = d / 2;
      const auto x = generic_pair(a, rng);
      std::bernoulli_distribution repeat(0.5);
      const auto y = (2 * a == d && repeat(rng)) ? x : generic_pair(d - a, rng);
      auto p = sum(x, y);
      auto q = conjugate(p, rng);
      return {std::move(p), std::move(q)};
    }
    case 3: return {diagonal_pair(d, rng), diagonal_pair(pick(dims, rng), rng)};
    default: break;
  }
  return {generic_pair(d, rng), generic_pair(pick(dims, rng), rng)};
}

std::pair<OrthoTriple, OrthoTriple> random_triple_instance(std::span<const Index> dims, unsigned kind,
                                                           std::mt19937_64& rng) {
  const Index d = pick(dims, rng);
  switch (kind % 4) {
    case 1: {
      auto t = generic_triple(d, rng);
      auto u = conjugate(t, rng);
      return {std::move(t), std::move(u)};
    }
    case 2: {
      if (d < 2) break;
      const Index a = d / 2;
      const auto x = generic_triple(a, rng);
      std::bernoulli_distribution repeat(0.5);
      const auto y = (2 * a == d && repeat(rng)) ? x : generic_triple(d - a, rng);
      auto t = sum(x, y);
      auto u = conjugate(t, rng);
      return {std::move(t), std::move(u)};
    }
    case 3: return {diagonal_triple(d, rng), diagonal_triple(pick(dims, rng), rng)};
    default: break;
  }
  return {generic_triple(d, rng), generic_triple(pick(dims, rng), rng)};
}

SweepSummary sweep(std::span<const Index> dims, std::size_t count, std::uint64_t seed, const Tolerance& tol) {
  SweepSummary summary;
  for (std::size_t i = 0; i < count; ++i) {
    std::mt19937_64 rng(seed + i);
    const auto kind = static_cast<unsigned>(i);
    const auto [p, q] = random_pair_instance(dims, kind, rng);
    const auto r1 = theorem1_crosscheck(p, q, tol);
    ++summary.pair_instances;
    if (!r1.overall) {
      ++summary.mismatches;
      summary.failures.push_back("pair instance " + std::to_string(i) + ": " + r1.notes.front());
    }
    const auto [t, u] = random_triple_instance(dims, kind, rng);
    const auto r2 = theorem2_crosscheck(t, u, tol);
    ++summary.triple_instances;
    if (!r2.overall) {
      ++summary.mismatches;
      summary.failures.push_back("triple instance " + std::to_string(i) + ": " + r2.notes.front());
    }
  }
  return summary;
}

}  // namespace wild
}  // namespace sforge
