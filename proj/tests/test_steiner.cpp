#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "gcurrents/competitors.hpp"
#include "gcurrents/steiner.hpp"
#include "oracles.hpp"

using namespace gcurrents;

namespace {

const double kS3 = std::sqrt(3.0) / 2;
const std::vector<Point> kTriangle{{0.5, kS3}, {0.5, -kS3}, {-1, 0}};
const std::vector<Point> kSquare{{1, 1}, {1, -1}, {-1, -1}, {-1, 1}};
const std::vector<Point> kHexagon{{-0.5, kS3}, {0.5, kS3}, {1, 0}, {0.5, -kS3}, {-0.5, -kS3}, {-1, 0}, {0, 0}};

double sum_dist(const std::vector<Point>& pts, const Point& x) {
  double s = 0;
  for (const auto& p : pts) s += distance(p, x);
  return s;
}

// Terminal bipartitions cut by the edges; identifies a full topology.
std::set<std::set<int>> splits(const SteinerTopology& t) {
  std::set<std::set<int>> out;
  auto adj = t.adjacency();
  for (auto [u, v] : t.edges) {
    std::set<int> side;
    std::vector<int> stack{v};
    std::set<int> seen{u, v};
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      if (x < t.n) side.insert(x);
      for (int y : adj[x]) {
        if (seen.insert(y).second) stack.push_back(y);
      }
    }
    if (side.count(0)) {
      std::set<int> other;
      for (int i = 0; i < t.n; ++i) {
        if (!side.count(i)) other.insert(i);
      }
      side = other;
    }
    out.insert(side);
  }
  return out;
}

}  // namespace

TEST(Fermat, Examples) {
  Point f = fermat_point(kTriangle[0], kTriangle[1], kTriangle[2]);
  EXPECT_NEAR(f[0], 0, 1e-12);
  EXPECT_NEAR(f[1], 0, 1e-12);
  Point mid = fermat_point({0, 0}, {2, 0}, {1, 0});
  EXPECT_TRUE(approx_equal(mid, {1, 0}, 1e-12));
  // 150 degrees at the origin.
  double a = 150 * M_PI / 180;
  Point v{0, 0}, p{1, 0}, q{std::cos(a), std::sin(a)};
  EXPECT_TRUE(approx_equal(fermat_point(p, q, v), v, 1e-12));
  Point grid = oracle::fermat_grid({p, q, v});
  EXPECT_LT(distance(grid, v), 1e-6);
}

TEST(Fermat, MatchesGridOracle) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> c(-2, 2);
  for (int k = 0; k < 30; ++k) {
    std::vector<Point> pts{{c(rng), c(rng)}, {c(rng), c(rng)}, {c(rng), c(rng)}};
    Point f = fermat_point(pts[0], pts[1], pts[2]);
    Point g = oracle::fermat_grid(pts);
    EXPECT_LE(sum_dist(pts, f), sum_dist(pts, g) + 1e-9);
    EXPECT_LT(distance(f, g), 1e-5);
  }
}

TEST(Topologies, Counts) {
  EXPECT_EQ(enumerate_topologies(3).size(), 1u);
  EXPECT_EQ(enumerate_topologies(4).size(), 3u);
  EXPECT_EQ(enumerate_topologies(5).size(), 15u);
  EXPECT_EQ(enumerate_topologies(6).size(), 105u);
  EXPECT_THROW(enumerate_topologies(2), InputError);
  EXPECT_THROW(enumerate_topologies(9), InputError);
}

TEST(Topologies, FullAndPairwiseDistinct) {
  for (int n = 4; n <= 6; ++n) {
    std::set<std::set<std::set<int>>> seen;
    for (const auto& t : enumerate_topologies(n)) {
      EXPECT_EQ(t.steiner, n - 2);
      EXPECT_EQ(static_cast<int>(t.edges.size()), t.vertex_count() - 1);
      auto adj = t.adjacency();
      for (int v = 0; v < t.vertex_count(); ++v) EXPECT_EQ(adj[v].size(), v < n ? 1u : 3u);
      EXPECT_TRUE(seen.insert(splits(t)).second);
    }
  }
}

TEST(Optimize, Triangle) {
  auto sol = optimize_topology(enumerate_topologies(3).front(), kTriangle);
  EXPECT_NEAR(sol.length, 3, 1e-9);
  EXPECT_TRUE(sol.converged);
}

TEST(Optimize, SquareAgainstGridOracle) {
  double best = 1e9;
  for (const auto& t : enumerate_topologies(4)) best = std::min(best, optimize_topology(t, kSquare).length);
  EXPECT_NEAR(best, 2 + 2 * std::sqrt(3.0), 1e-9);
  EXPECT_NEAR(oracle::four_point_grid(kSquare), best, 1e-6);
  EXPECT_GE(oracle::four_point_grid(kSquare), best - 1e-9);
}

TEST(Optimize, LengthNeverIncreasesAcrossSweeps) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> c(-1, 1);
  for (int k = 0; k < 20; ++k) {
    std::vector<Point> pts;
    for (int i = 0; i < 5; ++i) pts.push_back({c(rng), c(rng)});
    for (const auto& t : enumerate_topologies(5)) {
      auto sol = optimize_topology(t, pts);
      for (std::size_t i = 1; i < sol.history.size(); ++i) EXPECT_LE(sol.history[i], sol.history[i - 1] + 1e-12);
    }
  }
}

TEST(Solve, TwoPoints) {
  auto r = solve_steiner({{0, 0}, {3, 4}});
  EXPECT_DOUBLE_EQ(r.length(), 5);
  EXPECT_EQ(r.best().edges.size(), 1u);
}

TEST(Solve, TriangleJunctionAtOrigin) {
  auto r = solve_steiner(kTriangle);
  EXPECT_NEAR(r.length(), 3, 1e-9);
  ASSERT_EQ(r.best().steiner_points(), 1u);
  EXPECT_TRUE(approx_equal(r.best().vertices[3], {0, 0}, 1e-9));
}

TEST(Solve, SquareHasTwoOptima) {
  auto r = solve_steiner(kSquare);
  EXPECT_NEAR(r.length(), 2 + 2 * std::sqrt(3.0), 1e-9);
  ASSERT_EQ(r.optima.size(), 2u);
  const double a = 1 - 1 / std::sqrt(3.0);
  int horizontal = 0, vertical = 0;
  for (const auto& s : r.optima) {
    ASSERT_EQ(s.steiner_points(), 2u);
    Point x = s.vertices[4], y = s.vertices[5];
    if (std::abs(x[1]) < 1e-9 && std::abs(y[1]) < 1e-9 && std::abs(std::abs(x[0]) - a) < 1e-9) ++horizontal;
    if (std::abs(x[0]) < 1e-9 && std::abs(y[0]) < 1e-9 && std::abs(std::abs(x[1]) - a) < 1e-9) ++vertical;
  }
  EXPECT_EQ(horizontal, 1);
  EXPECT_EQ(vertical, 1);
}

TEST(Solve, HexagonWithCentre) {
  auto r = solve_steiner(kHexagon);
  EXPECT_NEAR(r.length(), 3 * std::sqrt(3.0), 1e-9);
  ASSERT_FALSE(r.optima.empty());
  for (const auto& s : r.optima) {
    // Three junctions, each joining two outer vertices to the centre.
    EXPECT_EQ(s.steiner_points(), 3u);
    for (std::size_t v = 7; v < s.vertices.size(); ++v) {
      bool to_centre = false;
      for (auto [a, b] : s.edges) to_centre = to_centre || ((a == v && b == 6) || (b == v && a == 6));
      EXPECT_TRUE(to_centre);
    }
    EXPECT_LT(check_angles(s).max_deviation, 1e-7);
  }
}

TEST(Solve, RejectsBadInput) {
  EXPECT_THROW(solve_steiner({{0, 0}}), InputError);
  EXPECT_THROW(solve_steiner({{0, 0}, {1, 1}, {0, 0}}), InputError);
  EXPECT_THROW(solve_steiner({{0, 0, 0}, {1, 1, 1}}), InputError);
}

TEST(Solve, ClassicalBoundsAndAngles) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> c(-1, 1);
  for (int k = 0; k < 30; ++k) {
    int n = 3 + k % 4;
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back({c(rng), c(rng)});
    auto r = solve_steiner(pts);
    double mst = mst_length(pts);
    EXPECT_LE(r.length(), mst + 1e-9);
    EXPECT_GE(r.length(), mst / 2);
    for (const auto& s : r.optima) {
      auto a = check_angles(s);
      EXPECT_TRUE(a.all_degree_three);
      EXPECT_LT(a.max_deviation, Tolerances{}.angle);
    }
  }
}

TEST(Equivalence, Examples) {
  auto tri = equivalence_check(kTriangle, 60);
  EXPECT_TRUE(tri.passed) << tri.witness;
  EXPECT_NEAR(tri.mass, 3, 1e-9);
  auto sq = equivalence_check(kSquare, 60);
  EXPECT_TRUE(sq.passed) << sq.witness;
  EXPECT_NEAR(sq.mass, 2 + 2 * std::sqrt(3.0), 1e-9);
  EXPECT_GE(sq.min_competitor_mass, sq.mass - 1e-9);
  auto two = equivalence_check({{0, 0}, {3, 4}}, 10);
  EXPECT_TRUE(two.passed);
  EXPECT_DOUBLE_EQ(two.mass, 5);
}

TEST(Competitors, ShareTheBoundary) {
  GroupSetup s(4);
  auto fam = generate_competitors(s, kSquare, solve_steiner(kSquare).best().segments(), 50, 9);
  ASSERT_EQ(fam.size(), 50u);
  auto want = terminal_boundary(s, kSquare);
  for (const auto& c : fam) EXPECT_TRUE(approx_equal(boundary(c, 1e-9), want, 1e-9));
}
