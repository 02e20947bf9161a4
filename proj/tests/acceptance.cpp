// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance                 run all nine
//   acceptance --criterion N   run one (used by ctest)

#include "support.hpp"

#include "subspace_forge/catalog.hpp"
#include "subspace_forge/errors.hpp"
#include "subspace_forge/functors.hpp"
#include "subspace_forge/spectrum.hpp"
#include "subspace_forge/systems.hpp"
#include "subspace_forge/wild.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace sforge;
using namespace sforge::testing;

namespace {

constexpr double kResidual = 1e-9;
constexpr std::uint64_t kSeed = 0x5eedf00dULL;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed requirement; later failures are appended.
  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (!pass) detail << "; ";
    pass = false;
    detail << what;
  }
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Rational alpha_of(const ProjectionSystem& p) { return std::get<PnAlpha>(p.tag).alpha; }

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

// Spectrum families and the small Sigma_n, exact.
Outcome criterion1() {
  Outcome o;
  const Stopwatch clock;
  for (unsigned d = 1; d <= 12; ++d) {
    const auto l0 = spectrum::lambda0(4, d);
    const auto l1 = spectrum::lambda1(4, d);
    bool ok = l0.size() == d && l1.size() == d && l0[0] == 0 && l1[0] == 1;
    for (unsigned k = 1; ok && k < d; ++k) {
      ok = l0[k] == 2 - Rational(2, 2 * k + 1) && l1[k] == 2 - Rational(1, k + 1);
    }
    o.require(ok, "lambda families differ at depth " + std::to_string(d));
  }
  o.require(spectrum::sigma_points(2) == std::vector<Rational>{0, 1, 2}, "Sigma_2");
  o.require(spectrum::sigma_points(3) == std::vector<Rational>{0, 1, Rational(3, 2), 2, 3}, "Sigma_3");
  const double t = clock.seconds();
  o.require(t < 1.0, "runtime " + fmt(t) + " s");
  if (o.pass) o.detail << "depths 1..12 exact, Sigma_2 and Sigma_3 exact, " << fmt(t) << " s";
  return o;
}

// Phi+ tower from pi_0: dimensions, alpha, trace, certification, transitivity.
Outcome criterion2() {
  Outcome o;
  const Stopwatch clock;
  const auto tower = functors::generate_tower(4, 0, 5);
  std::vector<SubspaceSystem> subspaces;
  for (unsigned s = 1; s <= 5; ++s) {
    const auto& p = tower.levels[s];
    const std::string at = "s=" + std::to_string(s) + ": ";
    o.require(p.ambient_dim == 2 * static_cast<Index>(s) + 1, at + "dim " + std::to_string(p.ambient_dim));
    const Rational alpha = 2 - Rational(2, 2 * s + 1);
    o.require(alpha_of(p) == alpha, at + "alpha " + to_string(alpha_of(p)));
    double trace = 0.0;
    for (const auto& m : p.projections) trace += m.trace().real();
    const double expected = to_double(alpha) * static_cast<double>(p.ambient_dim);
    o.require(std::abs(trace - expected) <= kResidual, at + "trace off by " + fmt(std::abs(trace - expected)));
    const auto report = systems::certify(p);
    o.require(report.overall && max_residual(report) <= kResidual, at + "certify");
    o.require(systems::is_transitive(p), at + "not transitive");
    subspaces.push_back(systems::subspaces_from_projections(p));
  }
  for (std::size_t i = 0; i + 1 < subspaces.size(); ++i) {
    o.require(!systems::are_isomorphic(subspaces[i], subspaces[i + 1]).value,
              "levels " + std::to_string(i + 1) + " and " + std::to_string(i + 2) + " isomorphic");
  }
  const double t = clock.seconds();
  o.require(t < 5.0, "runtime " + fmt(t) + " s");
  if (o.pass) o.detail << "dims 3..11, alpha exact, certified, transitive, pairwise non-isomorphic, " << fmt(t) << " s";
  return o;
}

// S relations along the tower, and S twice on seeded discrete instances.
Outcome criterion3() {
  Outcome o;
  const auto tower = functors::generate_tower(4, 0, 5);
  double worst = 0.0;
  for (std::size_t i = 0; i < tower.s_steps.size(); ++i) {
    const auto& rel = tower.s_steps[i].relations;
    worst = std::max(worst, max_residual(rel));
    o.require(rel.overall && max_residual(rel) <= kResidual, "S step " + std::to_string(i + 1) + " relations");
  }
  std::size_t instances = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const unsigned n = 4 + static_cast<unsigned>(seed % 2);
    const unsigned base = static_cast<unsigned>(seed % 3);
    const unsigned steps = 1 + static_cast<unsigned>((seed / 3) % 2);
    ProjectionSystem p = functors::generate_discrete(n, base, steps).first;
    std::mt19937_64 rng(kSeed + seed);
    p = conjugate(p, numlin::random_unitary(p.ambient_dim, rng));
    const auto once = functors::apply_S_image(p);
    const auto twice = functors::apply_S_image(once.system);
    worst = std::max({worst, max_residual(once.relations), max_residual(twice.relations)});
    const std::string at = "instance " + std::to_string(seed) + ": ";
    o.require(once.relations.overall && twice.relations.overall, at + "relations");
    o.require(systems::are_unitarily_equivalent(twice.system, p).value, at + "S(S(p)) not equivalent to p");
    ++instances;
  }
  o.require(worst <= kResidual, "worst residual " + fmt(worst));
  if (o.pass) {
    o.detail << tower.s_steps.size() << " tower S steps, " << instances
             << " S-twice instances equivalent, worst residual " << fmt(worst);
  }
  return o;
}

// F of the pi_0 tower against catalog item 6.
Outcome criterion4() {
  Outcome o;
  for (unsigned k = 1; k <= 3; ++k) {
    const std::string at = "k=" + std::to_string(k) + ": ";
    const auto source = functors::generate_discrete(4, 0, k).first;
    const auto image = functors::apply_F(source);
    const auto item = catalog::generate({6, k, 1, std::nullopt});
    o.require(systems::intertwiner_space(image, item).dimension() > 0, at + "zero intertwiner space");
    o.require(systems::is_irreducible(image) && systems::is_irreducible(item), at + "not irreducible");
    o.require(systems::are_unitarily_equivalent(image, item).value, at + "not unitarily equivalent");
    const Rational tau = std::get<PnAboTau>(image.tag).tau;
    o.require(tau == 1 / alpha_of(source) && tau == std::get<PnAboTau>(item.tag).tau,
              at + "tau " + to_string(tau));
    const auto report = systems::certify(image);
    o.require(report.overall && max_residual(report) <= kResidual, at + "F image relations");
  }
  if (o.pass) o.detail << "k = 1..3 equivalent to item 6, tau = 1/alpha exact";
  return o;
}

// Every printed catalog item; failures are listed one per line.
Outcome criterion5() {
  Outcome o;
  const Stopwatch clock;
  const auto items = catalog::enumerate(4, 8, kSeed);
  std::size_t sound = 0;
  for (const auto& item : items) {
    const auto p = catalog::build(item);
    const auto report = systems::certify(p);
    bool ok = report.overall && max_residual(report) <= kResidual;
    if (!ok) {
      for (const auto& c : report.checks) {
        if (c.passed && c.residual <= kResidual) continue;
        std::cout << "  discrepancy: " << item.describe() << ": " << c.name << " residual " << fmt(c.residual) << "\n";
        break;
      }
      o.require(false, item.describe() + " fails its relations");
      continue;
    }
    if (catalog::declared_unique(item)) {
      const auto dim = systems::commutant_dimension(p);
      if (dim != 1) std::cout << "  discrepancy: " << item.describe() << ": commutant dimension " << dim << "\n";
      ok = ok && dim == 1;
      o.require(dim == 1, item.describe() + " commutant dimension " + std::to_string(dim));
    }
    const bool transitive = systems::is_transitive(functors::abo_subspaces(p));
    if (!transitive) std::cout << "  discrepancy: " << item.describe() << ": subspace system not transitive\n";
    o.require(transitive, item.describe() + " not transitive");
    sound += ok && transitive;
  }
  const double t = clock.seconds();
  o.require(t < 30.0, "runtime " + fmt(t) + " s");
  if (o.pass) o.detail << items.size() << " items sound, " << fmt(t) << " s";
  else o.detail << " (" << sound << "/" << items.size() << " sound, " << fmt(t) << " s)";
  return o;
}

const std::vector<Index> kWildDims{1, 2, 3, 4};

// Pair encoding: hom of the five-subspace systems against pair intertwiners.
Outcome criterion6() {
  Outcome o;
  for (std::size_t i = 0; i < 100; ++i) {
    std::mt19937_64 rng(kSeed + i);
    const auto [p, q] = wild::random_pair_instance(kWildDims, static_cast<unsigned>(i), rng);
    const std::string at = "instance " + std::to_string(i) + ": ";
    const auto hom = systems::hom_space(wild::build_suv(p), wild::build_suv(q)).dimension();
    const auto inter = wild::pair_intertwiner_dimension(p, q);
    const auto oracle = intertwiner_oracle({p.u, p.v}, {q.u, q.v});
    o.require(hom == inter && static_cast<Index>(inter) == oracle,
              at + "hom " + std::to_string(hom) + ", intertwiners " + std::to_string(inter) + ", oracle " +
                  std::to_string(oracle));
    for (const auto* side : {&p, &q}) {
      const bool transitive = systems::is_transitive(wild::build_suv(*side));
      o.require(transitive == (wild::pair_intertwiner_dimension(*side, *side) == 1), at + "transitivity mismatch");
    }
  }
  if (o.pass) o.detail << "100 instances, hom = pair intertwiners = oracle, transitive iff commutant scalar";
  return o;
}

// Triple encoding: hom of the five-subspace systems against triple intertwiners.
Outcome criterion7() {
  Outcome o;
  double worst = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    std::mt19937_64 rng(kSeed + i);
    const auto [t, u] = wild::random_triple_instance(kWildDims, static_cast<unsigned>(i), rng);
    const std::string at = "instance " + std::to_string(i) + ": ";
    const auto hom = systems::hom_space(wild::build_orth_triple(t), wild::build_orth_triple(u)).dimension();
    const auto inter = wild::triple_intertwiner_dimension(t, u);
    const auto oracle = intertwiner_oracle({t.p1, t.p2, t.p3}, {u.p1, u.p2, u.p3});
    o.require(hom == inter && static_cast<Index>(inter) == oracle,
              at + "hom " + std::to_string(hom) + ", intertwiners " + std::to_string(inter) + ", oracle " +
                  std::to_string(oracle));
    for (const auto* side : {&t, &u}) {
      Matrix sum = Matrix::Zero(side->dim(), side->dim());
      for (const auto& m : wild::orth_triple_projections(*side)) sum += m;
      const double r = numlin::norm(sum - 2.0 * Matrix::Identity(side->dim(), side->dim()));
      worst = std::max(worst, r);
      o.require(r <= kResidual, at + "sum of projections off by " + fmt(r));
    }
  }
  if (o.pass) o.detail << "100 instances, hom = triple intertwiners = oracle, |sum - 2I| <= " << fmt(worst);
  return o;
}

Matrix unit(const Matrix& m) { return m / m.norm(); }

// Morphisms between tower levels and their conjugates or doubles.
Outcome criterion8() {
  Outcome o;
  double worst = 0.0;
  auto check = [&](const Matrix& got, const Matrix& want, const std::string& what) {
    const double r = numlin::norm(got - want);
    worst = std::max(worst, r);
    o.require(r <= kResidual, what + " residual " + fmt(r));
  };
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto m = morphism_case(seed);
    const std::string at = "morphism " + std::to_string(seed) + ": ";
    std::mt19937_64 rng(kSeed + seed);
    const auto hom = functors::morphism_space(m.source, m.target);
    if (hom.dimension() == 0) {
      o.require(false, at + "empty morphism space");
      continue;
    }
    const Matrix c = unit(numlin::random_combination(hom.basis, m.target.ambient_dim, m.source.ambient_dim, rng));

    const auto s_src = functors::apply_S_image(m.source);
    const auto s_tgt = functors::apply_S_image(m.target);
    check(functors::descend_morphism_S(functors::lift_morphism_S(c, s_src, s_tgt), s_src, s_tgt), c,
          at + "S lift-descend");
    const auto s_hom = functors::s_morphism_space(s_src, s_tgt);
    const Matrix r_s = unit(numlin::random_combination(s_hom.basis, s_tgt.system.ambient_dim,
                                                       s_src.system.ambient_dim, rng));
    check(functors::lift_morphism_S(functors::descend_morphism_S(r_s, s_src, s_tgt), s_src, s_tgt), r_s,
          at + "S descend-lift");

    const auto f_src = functors::apply_F_image(m.source);
    const auto f_tgt = functors::apply_F_image(m.target);
    check(functors::descend_morphism_F(functors::lift_morphism_F(c, f_src, f_tgt), f_src, f_tgt), c,
          at + "F lift-descend");
    const auto f_hom = functors::f_morphism_space(f_src, f_tgt);
    const Matrix r_f = unit(numlin::random_combination(f_hom.basis, f_tgt.system.ambient_dim,
                                                       f_src.system.ambient_dim, rng));
    check(functors::lift_morphism_F(functors::descend_morphism_F(r_f, f_src, f_tgt), f_src, f_tgt), r_f,
          at + "F descend-lift");
  }
  if (o.pass) o.detail << "50 morphisms, both directions for S and F, worst residual " << fmt(worst);
  return o;
}

// Axis and the line at 45 degrees against the two coordinate axes.
Outcome criterion9() {
  Outcome o;
  const auto theta = axis_and_line(std::numbers::pi / 4);
  const auto axes = lines(2, {column({1.0, 0.0}), column({0.0, 1.0})});
  const auto theta_p = systems::projections_from_subspaces(theta);
  const auto axes_p = systems::projections_from_subspaces(axes);
  o.require(systems::are_isomorphic(theta, axes).value, "not isomorphic to the axes");
  o.require(!systems::are_unitarily_equivalent(theta_p, axes_p).value, "unitarily equivalent to the axes");
  o.require(!systems::is_indecomposable(theta).value, "reported indecomposable");
  o.require(systems::is_irreducible(theta_p), "projection pair reducible");
  if (o.pass) o.detail << "isomorphic, not unitarily equivalent, decomposable, irreducible pair";
  return o;
}

const std::vector<std::function<Outcome()>> kCriteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                      criterion6, criterion7, criterion8, criterion9};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::optional<unsigned> only;
  app.add_option("--criterion", only, "Run a single criterion")->check(CLI::Range(1u, 9u));
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (unsigned n = 1; n <= kCriteria.size(); ++n) {
    if (only && *only != n) continue;
    Outcome o;
    try {
      o = kCriteria[n - 1]();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail.str() << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
