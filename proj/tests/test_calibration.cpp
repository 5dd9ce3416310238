#include <gtest/gtest.h>

#include <cmath>

#include "gcurrents/builtin.hpp"
#include "gcurrents/calibration.hpp"
#include "gcurrents/competitors.hpp"

using namespace gcurrents;

namespace {

PolyCurrent solved_current(const BuiltinInstance& inst, std::size_t which = 0) {
  auto r = solve_steiner(inst.terminals);
  return canonical_current(inst.form.setup(), r.optima.at(which).segments(), inst.terminals);
}

}  // namespace

TEST(Evaluate, TriangleForm) {
  auto inst = builtin_instance("triangle");
  const auto& s = inst.form.setup();
  const ECovector1& w = inst.form.cells().front().omega;
  // Along the leg to p_1 the form reads +-1 on g_1.
  Point tau = inst.terminals[0] / norm(inst.terminals[0]);
  double v = evaluate(s, w, tau, s.generator(1));
  EXPECT_NEAR(std::abs(v), 1, 1e-15);
  EXPECT_NEAR(evaluate(s, w, tau * -1.0, s.generator(1)), -v, 1e-15);
  EXPECT_THROW(evaluate(s, w, Point{2, 0}, s.generator(1)), InputError);
}

TEST(Comass, TriangleIsOneAtAnExtremePoint) {
  auto inst = builtin_instance("triangle");
  const auto& s = inst.form.setup();
  auto c = comass_attained(s, inst.form.cells().front().omega);
  EXPECT_NEAR(c.value, 1, 1e-12);
  EXPECT_EQ(norm_e(s, c.attained_at), 1);
}

TEST(Comass, ScalesLinearly) {
  auto inst = builtin_instance("square");
  for (const auto& cell : inst.form.cells()) {
    double c = comass(inst.form.setup(), cell.omega);
    EXPECT_NEAR(c, 1, 1e-12);
    EXPECT_NEAR(comass(inst.form.setup(), cell.omega.scaled(2.5)), 2.5 * c, 1e-12);
  }
}

TEST(Comass, AgreesWithDenseDirectionSearch) {
  auto inst = builtin_instance("hexagon7");
  const auto& s = inst.form.setup();
  auto ext = extreme_points(s);
  for (const auto& cell : inst.form.cells()) {
    double dense = 0;
    for (int k = 0; k < 3600; ++k) {
      double a = 2 * M_PI * k / 3600;
      Point tau{std::cos(a), std::sin(a)};
      for (const auto& g : ext) dense = std::max(dense, evaluate(s, cell.omega, tau, g));
    }
    double c = comass(s, cell.omega);
    EXPECT_LE(dense, c + 1e-12);
    EXPECT_NEAR(dense, c, 1e-5);
  }
}

TEST(Partition, BuiltinsCoverTheBoxOnce) {
  for (const auto& name : builtin_names()) {
    auto inst = builtin_instance(name);
    Box box = doubled_bounding_box(inst.terminals);
    EXPECT_NO_THROW(inst.form.validate_partition(box, 1e-9)) << name;
  }
}

TEST(Partition, DetectsGapsAndOverlaps) {
  GroupSetup s(2);
  ECovector1 w{{{1, 0}}};
  Box box{-1, -1, 1, 1};
  PiecewiseForm gap(s, {{{HalfPlane::make(1, 0, -0.1)}, w}, {{HalfPlane::make(-1, 0, -0.1)}, w}});
  EXPECT_THROW(gap.validate_partition(box, 1e-9), InputError);
  PiecewiseForm overlap(s, {{{HalfPlane::make(1, 0, 0.1)}, w}, {{HalfPlane::make(-1, 0, 0.1)}, w}});
  EXPECT_THROW(overlap.validate_partition(box, 1e-9), InputError);
}

TEST(Compatibility, SquareEdgesAreTheDiagonals) {
  auto inst = builtin_instance("square");
  auto edges = inst.form.shared_edges(doubled_bounding_box(inst.terminals), 1e-9);
  EXPECT_EQ(edges.size(), 4u);
  for (const auto& e : edges) {
    Point d = e.b - e.a;
    EXPECT_NEAR(std::abs(d[0]), std::abs(d[1]), 1e-9);
  }
  EXPECT_TRUE(check_compatibility(inst.form, doubled_bounding_box(inst.terminals)).passed);
}

TEST(Compatibility, CatchesTangentialJump) {
  GroupSetup s(2);
  PiecewiseForm f(s, {{{HalfPlane::make(1, 0, 0)}, ECovector1{{{0, 1}}}},
                      {{HalfPlane::make(-1, 0, 0)}, ECovector1{{{0, 0.5}}}}});
  auto r = check_compatibility(f, Box{-1, -1, 1, 1});
  EXPECT_FALSE(r.passed);
  EXPECT_NEAR(r.max_residual, 0.5, 1e-12);
  // A jump across the interface (normal direction) is allowed.
  PiecewiseForm g(s, {{{HalfPlane::make(1, 0, 0)}, ECovector1{{{1, 0}}}},
                      {{HalfPlane::make(-1, 0, 0)}, ECovector1{{{-1, 0}}}}});
  EXPECT_TRUE(check_compatibility(g, Box{-1, -1, 1, 1}).passed);
}

TEST(Verify, TriangleCertificate) {
  auto inst = builtin_instance("triangle");
  auto cert = verify_calibration(inst.form, solved_current(inst));
  EXPECT_TRUE(cert.passed);
  EXPECT_LT(cert.support.max_residual, 1e-7);
  EXPECT_LT(cert.compatibility.max_residual, 1e-7);
  EXPECT_LT(cert.comass.max_residual, 1e-7);
  EXPECT_NEAR(cert.pairing, cert.mass, 1e-9);
}

TEST(Verify, SquareCertifiesBothOptima) {
  auto inst = builtin_instance("square");
  for (std::size_t k = 0; k < 2; ++k) {
    auto t = solved_current(inst, k);
    auto fam = generate_competitors(inst.form.setup(), inst.terminals, {}, 30);
    auto cert = verify_calibration(inst.form, t, fam);
    EXPECT_TRUE(cert.passed) << cert.support.witness;
    EXPECT_TRUE(cert.lower_bound.passed) << cert.lower_bound.witness;
    EXPECT_NEAR(cert.mass, 2 + 2 * std::sqrt(3.0), 1e-9);
  }
}

TEST(Verify, HexagonSolverOutput) {
  auto inst = builtin_instance("hexagon7");
  auto r = solve_steiner(inst.terminals);
  for (const auto& s : r.optima) {
    auto cert = verify_calibration(inst.form, canonical_current(inst.form.setup(), s.segments(), inst.terminals));
    EXPECT_TRUE(cert.passed) << cert.support.witness;
  }
}

TEST(Verify, NonMinimizerFailsSupport) {
  auto inst = builtin_instance("square");
  const auto& s = inst.form.setup();
  std::vector<Atom> atoms;
  for (int i = 0; i < 4; ++i) atoms.push_back({inst.terminals[i], s.generator(i + 1)});
  auto mst = mst_edges(inst.terminals);
  std::vector<std::pair<Point, Point>> edges;
  for (auto [a, b] : mst) edges.emplace_back(inst.terminals[a], inst.terminals[b]);
  auto cert = verify_calibration(inst.form, tree_current(s, edges, atoms));
  EXPECT_FALSE(cert.passed);
  EXPECT_FALSE(cert.support.passed);
  EXPECT_LT(cert.pairing, cert.mass - 0.1);
}

TEST(Verify, MismatchedSetupIsAnInputError) {
  auto tri = builtin_instance("triangle");
  auto sq = builtin_instance("square");
  EXPECT_THROW(verify_calibration(tri.form, solved_current(sq)), InputError);
  EXPECT_THROW(builtin_instance("pentagon"), InputError);
}
