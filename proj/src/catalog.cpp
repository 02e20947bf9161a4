#include "subspace_forge/catalog.hpp"

#include "subspace_forge/errors.hpp"
#include "subspace_forge/functors.hpp"

#include <array>
#include <cmath>
#include <initializer_list>

namespace sforge {

using Real = Eigen::MatrixXd;

void OmegaPoint::validate(double tol) const {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) throw InputError("omega point must be finite");
  if (std::abs(a * a + b * b + c * c - 1.0) > tol) throw InputError("omega point is not on the unit sphere");
  const bool generic = a > 0.0 && b > 0.0 && c > -1.0 && c < 1.0;
  const bool a_zero = a == 0.0 && b > 0.0 && c > 0.0;
  const bool b_zero = b == 0.0 && a > 0.0 && c > 0.0;
  if (!(generic || a_zero || b_zero)) throw InputError("omega point lies in no branch");
}

void CatalogItem::validate() const {
  if (item < 1 || item > 11) throw InputError("catalog item must be in 1..11");
  if (item >= 6) {
    if (k < 1) throw InputError("items 6..11 need k >= 1");
  } else if (k != 1) {
    throw InputError("item " + std::to_string(item) + " takes no k");
  }
  if (omega && item != 5) throw InputError("only item 5 takes an omega point");
  if (omega) omega->validate();
  unsigned variants = 1;
  if (item <= 3) variants = 4;
  if (item == 5 && !omega) variants = 6;
  if (variant < 1 || variant > variants) {
    throw InputError("item " + std::to_string(item) + " has variants 1.." + std::to_string(variants));
  }
}

std::string CatalogItem::describe() const {
  std::string s = "item " + std::to_string(item);
  if (item >= 6) s += " k=" + std::to_string(k);
  if (item <= 3 || (item == 5 && !omega)) s += " variant=" + std::to_string(variant);
  if (omega) {
    s += " omega=(" + std::to_string(omega->a) + "," + std::to_string(omega->b) + "," + std::to_string(omega->c) + ")";
  }
  return s;
}

namespace catalog {

namespace {

constexpr std::array<std::pair<unsigned, unsigned>, 6> kPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

// e_{i,j} of shape r x s, 1-based.
Real e(Index i, Index j, Index r, Index s) {
  Real m = Real::Zero(r, s);
  m(i - 1, j - 1) = 1.0;
  return m;
}

double sign(unsigned exponent) { return exponent % 2 == 0 ? 1.0 : -1.0; }

Real id(Index n) { return Real::Identity(n, n); }

Real blocks(std::initializer_list<std::initializer_list<Real>> rows) {
  Index total_rows = 0;
  Index total_cols = 0;
  for (const auto& b : *rows.begin()) total_cols += b.cols();
  for (const auto& row : rows) total_rows += row.begin()->rows();
  Real out(total_rows, total_cols);
  Index r = 0;
  for (const auto& row : rows) {
    Index c = 0;
    for (const auto& b : row) {
      out.block(r, c, b.rows(), b.cols()) = b;
      c += b.cols();
    }
    r += row.begin()->rows();
  }
  return out;
}

// (1/alpha) [[A, B], [B^T, C]]
Real assemble(const Real& a, const Real& b, const Real& c, double alpha) {
  return blocks({{a, b}, {b.transpose(), c}}) / alpha;
}

double alpha_of(unsigned item, unsigned k) {
  const double kk = k;
  switch (item) {
    case 6: return 2.0 - 2.0 / (2 * kk + 1);
    case 7: return 2.0 - 1.0 / (2 * kk + 1);
    case 8: return 2.0 - 1.0 / (2 * kk);
    case 9: return 2.0 + 1.0 / (2 * kk);
    case 10: return 2.0 + 1.0 / (2 * kk + 1);
    case 11: return 2.0 + 2.0 / (2 * kk + 1);
    default: return 0.0;
  }
}

Real series6(Index k) {
  const double a = alpha_of(6, static_cast<unsigned>(k));
  const double d = 2.0 * k + 1;
  Real a1 = Real::Zero(k, k);
  Real c1 = Real::Zero(k, k);
  for (Index i = 1; i <= k; ++i) {
    a1 += (2.0 * k + 3 - 4.0 * i) * e(i, i, k, k);
    c1 += (2.0 * k + 1 - 4.0 * i) * e(i, i, k, k);
  }
  a1 /= d;
  c1 /= d;
  auto b = [&](unsigned l, unsigned m) {
    Real x = Real::Zero(k, k);
    for (Index i = 1; i <= k; ++i) x += sign(l) / d * std::sqrt((2.0 * k - 2 * i + 1) * (2.0 * i - 1)) * e(i, i, k, k);
    for (Index i = 1; i <= k - 1; ++i) x += sign(m) / d * std::sqrt((2.0 * k - 2 * i) * (2.0 * i)) * e(i + 1, i, k, k);
    return x;
  };
  const Real big_a = blocks({{id(k), a1}, {a1, id(k)}});
  const Real big_c = blocks({{id(k), c1}, {c1, id(k)}});
  const Real big_b = blocks({{b(0, 0), b(0, 1)}, {b(1, 0), b(1, 1)}});
  return assemble(big_a, big_b, big_c, a);
}

Real series7(Index k) {
  const double a = alpha_of(7, static_cast<unsigned>(k));
  const double d = 2.0 * k + 1;
  Real eta = Real::Zero(1, k);
  eta(0, 0) = std::sqrt(k / d);
  Real a1 = Real::Zero(k + 1, k);
  Real c1 = Real::Zero(k, k);
  for (Index i = 1; i <= k; ++i) {
    a1 -= 2.0 * i * e(i + 1, i, k + 1, k) / d;
    c1 -= (2.0 * i - 1) * e(i, i, k, k) / d;
  }
  auto b = [&](unsigned l, unsigned m) {
    Real x = Real::Zero(k, k);
    for (Index i = 1; i <= k; ++i)
      x += sign(l) / (4.0 * k + 2) * std::sqrt((2.0 * k - 2 * i + 1) * (2.0 * k + 2 * i)) * e(i, i, k, k);
    for (Index i = 1; i <= k - 1; ++i)
      x += sign(m) / (4.0 * k + 2) * std::sqrt((2.0 * k - 2 * i) * (2.0 * k + 2 * i + 1)) * e(i, i + 1, k, k);
    return x;
  };
  const Real big_a = blocks({{id(k + 1), a1}, {a1.transpose(), id(k)}});
  const Real big_c = blocks({{id(k), c1}, {c1, id(k)}});
  const Real big_b = blocks({{eta, eta}, {b(0, 0), b(1, 0)}, {b(0, 1), b(1, 1)}});
  return assemble(big_a, big_b, big_c, a);
}

Real series8(Index k) {
  const double a = alpha_of(8, static_cast<unsigned>(k));
  Real eta = Real::Zero(1, k);
  eta(0, 0) = std::sqrt((2.0 * k - 1) / (4.0 * k));
  Real a1 = Real::Zero(k - 1, k);
  Real c1 = Real::Zero(k, k);
  for (Index i = 1; i <= k - 1; ++i) a1 -= static_cast<double>(i) * e(i, i + 1, k - 1, k) / static_cast<double>(k);
  for (Index i = 1; i <= k; ++i) c1 -= (2.0 * i - 1) * e(i, i, k, k) / (2.0 * k);
  auto b = [&](unsigned l, unsigned m) {
    Real x = Real::Zero(k - 1, k);
    for (Index i = 1; i <= k - 1; ++i) {
      x += sign(l) / (4.0 * k) * std::sqrt((2.0 * k - 2 * i) * (2.0 * k + 2 * i - 1)) * e(i, i, k - 1, k);
      x += sign(m) / (4.0 * k) * std::sqrt((2.0 * k - 2 * i - 1) * (2.0 * k + 2 * i)) * e(i, i + 1, k - 1, k);
    }
    return x;
  };
  const Real big_a = blocks({{id(k - 1), a1}, {a1.transpose(), id(k)}});
  const Real big_c = blocks({{id(k), c1}, {c1, id(k)}});
  const Real big_b = blocks({{b(0, 0), b(1, 0)}, {eta, eta}, {b(0, 1), b(1, 1)}});
  return assemble(big_a, big_b, big_c, a);
}

Real series9(Index k) {
  const double a = alpha_of(9, static_cast<unsigned>(k));
  Real eta = Real::Zero(1, k);
  eta(0, 0) = std::sqrt((2.0 * k + 1) / (4.0 * k));
  Real a1 = Real::Zero(k + 1, k);
  Real c1 = Real::Zero(k, k);
  for (Index i = 1; i <= k; ++i) {
    a1 += static_cast<double>(i) * e(i + 1, i, k + 1, k) / static_cast<double>(k);
    c1 += (2.0 * i - 1) * e(i, i, k, k) / (2.0 * k);
  }
  auto b = [&](unsigned l, unsigned m) {
    Real x = Real::Zero(k, k);
    for (Index i = 1; i <= k; ++i)
      x += sign(l) / (4.0 * k) * std::sqrt((2.0 * k + 2 * i) * (2.0 * k - 2 * i + 1)) * e(i, i, k, k);
    for (Index i = 1; i <= k - 1; ++i)
      x += sign(m) / (4.0 * k) * std::sqrt((2.0 * k + 2 * i + 1) * (2.0 * k - 2 * i)) * e(i, i + 1, k, k);
    return x;
  };
  const Real big_a = blocks({{id(k + 1), a1}, {a1.transpose(), id(k)}});
  const Real big_c = blocks({{id(k), c1}, {c1, id(k)}});
  const Real big_b = blocks({{eta, eta}, {b(1, 1), b(0, 1)}, {b(1, 0), b(0, 0)}});
  return assemble(big_a, big_b, big_c, a);
}

Real series10(Index k) {
  const double a = alpha_of(10, static_cast<unsigned>(k));
  const double d = 2.0 * k + 1;
  Real eta = Real::Zero(1, k + 1);
  eta(0, 0) = std::sqrt((k + 1.0) / d);
  Real a1 = Real::Zero(k, k + 1);
  Real c1 = Real::Zero(k + 1, k + 1);
  for (Index i = 1; i <= k; ++i) a1 += 2.0 * i * e(i, i + 1, k, k + 1) / d;
  for (Index i = 1; i <= k + 1; ++i) c1 += (2.0 * i - 1) * e(i, i, k + 1, k + 1) / d;
  auto b = [&](unsigned l, unsigned m) {
    Real x = Real::Zero(k, k + 1);
    for (Index i = 1; i <= k; ++i) {
      x += sign(l) / (4.0 * k + 2) * std::sqrt((2.0 * k - 2 * i + 2) * (2.0 * k + 2 * i + 1)) * e(i, i, k, k + 1);
      x += sign(m) / (4.0 * k + 2) * std::sqrt((2.0 * k + 2 * i - 1) * (2.0 * k + 2 * i + 2)) *
           e(i, i + 1, k, k + 1);
    }
    return x;
  };
  const Real big_a = blocks({{id(k), a1}, {a1.transpose(), id(k + 1)}});
  const Real big_c = blocks({{id(k + 1), c1}, {c1, id(k + 1)}});
  const Real big_b = blocks({{b(1, 1), b(0, 1)}, {eta, eta}, {b(1, 0), b(0, 0)}});
  return assemble(big_a, big_b, big_c, a);
}

Real series11(Index k) {
  const double a = alpha_of(11, static_cast<unsigned>(k));
  const double d = 2.0 * k + 1;
  const Index kk = k + 1;
  Real a1 = Real::Zero(kk, kk);
  Real c1 = e(1, 1, kk, kk);
  for (Index i = 1; i <= kk; ++i) a1 -= (2.0 * k + 3 - 4.0 * i) * e(i, i, kk, kk) / d;
  for (Index i = 2; i <= kk; ++i) c1 -= (2.0 * k + 5 - 4.0 * i) * e(i, i, kk, kk) / d;
  auto b = [&](unsigned l, unsigned m) {
    Real x = e(1, 1, kk, kk) / std::sqrt(d);
    for (Index i = 2; i <= kk; ++i) x += sign(l) / d * std::sqrt((2.0 * k - 2 * i + 3) * (2.0 * i - 1)) * e(i, i, kk, kk);
    for (Index i = 1; i <= k; ++i) x += sign(m) / d * std::sqrt((2.0 * k - 2 * i + 2) * (2.0 * i)) * e(i, i + 1, kk, kk);
    return x;
  };
  const Real big_a = blocks({{id(kk), a1}, {a1, id(kk)}});
  const Real big_c = blocks({{id(kk), c1}, {c1, id(kk)}});
  const Real big_b = blocks({{b(1, 1), b(0, 1)}, {b(1, 0), b(0, 0)}});
  return assemble(big_a, big_b, big_c, a);
}

Matrix omega_family(const OmegaPoint& w) {
  const double s = std::sqrt(1.0 - w.a * w.a);
  const Complex i(0.0, 1.0);
  const double a = w.a;
  const double b = w.b;
  const double c = w.c;
  const Complex x = c * (c - i * b) / s;  // (1,2) entry
  const Complex y = b * (b + i * c) / s;  // (1,3) entry
  Matrix p(4, 4);
  p << 1.0, x, y, a,
       std::conj(x), 1.0, -a, std::conj(y),
       std::conj(y), -a, 1.0, std::conj(x),
       a, y, x, 1.0;
  return p / 2.0;
}

ProjectionSystem from_blocks(const std::vector<Index>& dims, const Matrix& p, const Rational& tau) {
  ProjectionSystem s;
  Index total = 0;
  for (auto d : dims) total += d;
  s.ambient_dim = total;
  Index at = 0;
  for (auto d : dims) {
    Matrix q = Matrix::Zero(total, total);
    q.block(at, at, d, d).setIdentity();
    s.projections.push_back(std::move(q));
    at += d;
  }
  s.projections.push_back(p);
  s.tag = PnAboTau{4, tau};
  return s;
}

}  // namespace

Rational tau_of(const CatalogItem& item) {
  item.validate();
  const int k = static_cast<int>(item.k);
  switch (item.item) {
    case 1: return Rational(0);
    case 2: return Rational(1);
    case 3: return Rational(1, 3);
    case 4: return Rational(1, 4);
    case 5: return Rational(1, 2);
    case 6: return Rational(1) / (Rational(2) - Rational(2, 2 * k + 1));
    case 7: return Rational(1) / (Rational(2) - Rational(1, 2 * k + 1));
    case 8: return Rational(1) / (Rational(2) - Rational(1, 2 * k));
    case 9: return Rational(1) / (Rational(2) + Rational(1, 2 * k));
    case 10: return Rational(1) / (Rational(2) + Rational(1, 2 * k + 1));
    default: return Rational(1) / (Rational(2) + Rational(2, 2 * k + 1));
  }
}

std::vector<Index> block_dims(const CatalogItem& item) {
  item.validate();
  const Index k = item.k;
  switch (item.item) {
    case 1:
    case 2: {
      std::vector<Index> d(4, 0);
      d[item.variant - 1] = 1;
      return d;
    }
    case 3: {
      std::vector<Index> d(4, 1);
      d[item.variant - 1] = 0;
      return d;
    }
    case 4: return {1, 1, 1, 1};
    case 5: {
      if (item.omega) return {1, 1, 1, 1};
      std::vector<Index> d(4, 0);
      const auto [i, j] = kPairs[item.variant - 1];
      d[i] = d[j] = 1;
      return d;
    }
    case 6: return {k, k, k, k};
    case 7: return {k + 1, k, k, k};
    case 8: return {k - 1, k, k, k};
    case 9: return {k + 1, k, k, k};
    case 10: return {k, k + 1, k + 1, k + 1};
    default: return {k + 1, k + 1, k + 1, k + 1};
  }
}

bool declared_unique(const CatalogItem& item) { return item.item == 4 || item.item >= 6; }

ProjectionSystem build(const CatalogItem& item) {
  item.validate();
  const auto dims = block_dims(item);
  const Rational tau = tau_of(item);
  const Index k = item.k;
  Matrix p;
  switch (item.item) {
    case 1: p = Matrix::Zero(1, 1); break;
    case 2: p = Matrix::Ones(1, 1); break;
    case 3: p = Matrix::Ones(3, 3) / 3.0; break;
    case 4: p = Matrix::Ones(4, 4) / 4.0; break;
    case 5: p = item.omega ? omega_family(*item.omega) : Matrix(Matrix::Ones(2, 2) / 2.0); break;
    case 6: p = series6(k).cast<Complex>(); break;
    case 7: p = series7(k).cast<Complex>(); break;
    case 8: p = series8(k).cast<Complex>(); break;
    case 9: p = series9(k).cast<Complex>(); break;
    case 10: p = series10(k).cast<Complex>(); break;
    default: p = series11(k).cast<Complex>(); break;
  }
  return from_blocks(dims, p, tau);
}

ProjectionSystem generate(const CatalogItem& item, const Tolerance& tol) {
  auto system = build(item);
  const auto report = systems::certify(system, tol);
  for (const auto& c : report.checks) {
    if (!c.passed) throw FormulaDiscrepancy(item.describe(), c.name, c.residual);
  }
  return system;
}

CertificationReport audit(const CatalogItem& item, const Tolerance& tol) {
  const auto system = build(item);
  auto report = systems::certify(system, tol);
  if (!report.overall) {
    report.notes.push_back("formula-discrepancy: relations fail, structural checks skipped");
    return report;
  }
  if (declared_unique(item)) {
    const auto dim = systems::commutant_dimension(system, tol);
    report.add_flag("irreducible", dim == 1, dim == 1 ? 0.0 : static_cast<double>(dim));
  }
  const auto end_dim = systems::end_dimension(systems::subspaces_from_projections(system, tol), tol);
  report.add_flag("transitive", end_dim == 1, end_dim == 1 ? 0.0 : static_cast<double>(end_dim));
  return report;
}

OmegaPoint sample_omega(std::mt19937_64& rng, double margin) {
  std::normal_distribution<double> dist(0.0, 1.0);
  for (;;) {
    const double x = dist(rng);
    const double y = dist(rng);
    const double z = dist(rng);
    const double r = std::sqrt(x * x + y * y + z * z);
    if (r == 0.0) continue;
    OmegaPoint w{std::abs(x) / r, std::abs(y) / r, z / r};
    if (w.a > margin && w.b > margin && std::abs(w.c) < 1.0 - margin) return w;
  }
}

std::vector<CatalogItem> enumerate(unsigned k_max, unsigned omega_samples, std::uint64_t seed) {
  if (k_max < 1) throw InputError("enumerate needs k_max >= 1");
  std::vector<CatalogItem> out;
  for (unsigned item = 1; item <= 3; ++item) {
    for (unsigned v = 1; v <= 4; ++v) out.push_back({item, 1, v, std::nullopt});
  }
  out.push_back({4, 1, 1, std::nullopt});
  for (unsigned v = 1; v <= 6; ++v) out.push_back({5, 1, v, std::nullopt});
  std::mt19937_64 rng(seed);
  for (unsigned s = 0; s < omega_samples; ++s) out.push_back({5, 1, 1, sample_omega(rng)});
  for (unsigned item = 6; item <= 11; ++item) {
    for (unsigned k = 1; k <= k_max; ++k) out.push_back({item, k, 1, std::nullopt});
  }
  return out;
}

namespace {

struct Candidate {
  unsigned base;
  unsigned steps;
  bool reflected;

  std::string describe() const {
    std::string s = "pi_" + std::to_string(base);
    if (steps > 0) s = "Phi+^" + std::to_string(steps) + "(" + s + ")";
    if (reflected) s = "T(" + s + ")";
    return "F(" + s + ")";
  }
};

constexpr unsigned kMaxTowerSteps = 64;

std::vector<Candidate> candidates_for(const Rational& alpha) {
  std::vector<Candidate> out;
  const Rational four(4);
  for (unsigned m = 0; m <= 4; ++m) {
    Rational a(m == 0 ? 0 : 1);
    for (unsigned s = 0; s <= kMaxTowerSteps; ++s) {
      if (a == alpha) out.push_back({m, s, false});
      if (four - a == alpha) out.push_back({m, s, true});
      if (a >= 3) break;
      a = spectrum::alpha_map_phi_plus(4, a);
    }
  }
  return out;
}

}  // namespace

CertificationReport verify_against_functor(const CatalogItem& item, const Tolerance& tol,
                                           const GenericityOptions& opts) {
  CertificationReport report;
  report.seed = opts.seed;
  const Rational tau = tau_of(item);
  if (tau == 0 || (item.item == 5)) {
    report.notes.push_back(kNoCounterpart);
    return report;
  }
  const auto cands = candidates_for(Rational(1) / tau);
  if (cands.empty()) {
    report.notes.push_back(kNoCounterpart);
    return report;
  }
  const auto catalog_system = build(item);
  if (!systems::certify(catalog_system, tol).overall) {
    report.add_flag("catalog relations", false, 0.0);
    report.notes.push_back("formula-discrepancy: catalog system fails its relations");
    return report;
  }
  const auto dims = block_dims(item);
  bool matched_ranks = false;
  for (const auto& cand : cands) {
    auto source = functors::generate_discrete(4, cand.base, cand.steps, tol).first;
    if (cand.reflected) source = functors::apply_T(source);
    std::vector<Index> ranks;
    for (const auto& p : source.projections) ranks.push_back(static_cast<Index>(std::lround(p.trace().real())));
    if (ranks != dims) continue;
    matched_ranks = true;
    const auto image = functors::apply_F(source, tol);
    report.notes.push_back("counterpart " + cand.describe());
    report.add_flag("dimension", image.ambient_dim == catalog_system.ambient_dim,
                    static_cast<double>(std::abs(image.ambient_dim - catalog_system.ambient_dim)));
    report.add_flag("tau", std::get<PnAboTau>(image.tag).tau == tau, 0.0);
    const auto verdict = systems::are_unitarily_equivalent(image, catalog_system, tol, opts);
    report.probabilistic = report.probabilistic || verdict.probabilistic;
    report.add_flag("unitarily equivalent", verdict.value, verdict.witness_residual.value_or(0.0));
    return report;
  }
  if (!matched_ranks) report.add_flag("rank-matching counterpart", false, 0.0);
  return report;
}

}  // namespace catalog
}  // namespace sforge
