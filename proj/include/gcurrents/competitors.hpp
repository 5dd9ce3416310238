#pragma once

// Random currents sharing the boundary sum_i g_i delta_{p_i}: used to try to
// beat a claimed minimizer.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gcurrents/currents.hpp"
#include "gcurrents/geometry.hpp"
#include "gcurrents/steiner.hpp"

namespace gcurrents {

namespace detail {

/// Tree with labels 0..m-1 decoded from a random Pruefer sequence.
inline std::vector<std::pair<std::size_t, std::size_t>> random_tree(std::size_t m, std::mt19937_64& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  if (m < 2) return edges;
  if (m == 2) return {{0, 1}};
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  std::vector<std::size_t> code(m - 2);
  for (auto& c : code) c = pick(rng);
  std::vector<std::size_t> degree(m, 1);
  for (auto c : code) ++degree[c];
  for (auto c : code) {
    std::size_t leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    edges.emplace_back(leaf, c);
    --degree[leaf];
    --degree[c];
  }
  std::size_t u = m, v = m;
  for (std::size_t i = 0; i < m; ++i) {
    if (degree[i] == 1) (u == m ? u : v) = i;
  }
  edges.emplace_back(u, v);
  return edges;
}

}  // namespace detail

/// Builds `count` competitors, cycling through: minimum spanning tree, random
/// spanning trees over the terminals plus a few random points, the given
/// tree with its non-terminal vertices jittered, relaxed random topologies,
/// sums of random polylines p_i -> p_n, and random stars.
inline std::vector<PolyCurrent> generate_competitors(const GroupSetup& setup, const std::vector<Point>& terminals,
                                                     const std::vector<std::pair<Point, Point>>& tree,
                                                     std::size_t count, std::uint64_t seed = 7) {
  const int n = setup.terminals();
  if (static_cast<int>(terminals.size()) != n) throw InputError("terminal count does not match n");
  const std::size_t dim = terminals.front().dim();
  std::mt19937_64 rng(seed);

  Point lo = terminals.front(), hi = terminals.front();
  for (const auto& p : terminals) {
    for (std::size_t i = 0; i < dim; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  double diam = std::max(distance(lo, hi), 1e-9);
  auto random_point = [&] {
    Point p(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      double pad = 0.2 * std::max(hi[i] - lo[i], 0.1 * diam);
      p[i] = std::uniform_real_distribution<double>(lo[i] - pad, hi[i] + pad)(rng);
    }
    return p;
  };
  std::vector<Atom> atoms;
  for (int i = 0; i < n; ++i) atoms.push_back({terminals[i], setup.generator(i + 1)});
  auto on_points = [&](const std::vector<Point>& pts, const std::vector<std::pair<std::size_t, std::size_t>>& e) {
    std::vector<std::pair<Point, Point>> edges;
    for (auto [u, v] : e) edges.emplace_back(pts[u], pts[v]);
    return tree_current(setup, edges, atoms);
  };

  std::vector<SteinerTopology> topologies;
  if (n >= 3 && n <= 8 && dim == 2) topologies = enumerate_topologies(n);

  std::vector<PolyCurrent> out;
  for (std::size_t k = 0; out.size() < count; ++k) {
    switch (k % 6) {
      case 0:
        if (k == 0) {
          out.push_back(on_points(terminals, mst_edges(terminals)));
          break;
        }
        [[fallthrough]];
      case 5: {
        std::vector<Point> pts = terminals;
        pts.push_back(random_point());
        std::vector<std::pair<std::size_t, std::size_t>> e;
        for (int i = 0; i < n; ++i) e.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(n));
        out.push_back(on_points(pts, e));
        break;
      }
      case 1: {
        std::vector<Point> pts = terminals;
        std::size_t extra = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
        for (std::size_t i = 0; i < extra; ++i) pts.push_back(random_point());
        out.push_back(on_points(pts, detail::random_tree(pts.size(), rng)));
        break;
      }
      case 2: {
        if (tree.empty()) continue;
        std::vector<std::pair<Point, Point>> moved;
        PointIndex fixed(Tolerances{}.geom);
        for (const auto& p : terminals) fixed.insert(p);
        PointIndex inner(Tolerances{}.geom);
        std::vector<Point> shift;
        double amount = std::uniform_real_distribution<double>(0.01, 0.3)(rng) * diam;
        auto jitter = [&](const Point& p) {
          if (fixed.find(p)) return p;
          std::size_t id = inner.insert(p);
          while (shift.size() <= id) {
            Point d(dim);
            for (std::size_t i = 0; i < dim; ++i) d[i] = std::normal_distribution<double>(0, amount)(rng);
            shift.push_back(d);
          }
          return p + shift[id];
        };
        for (const auto& [a, b] : tree) moved.emplace_back(jitter(a), jitter(b));
        out.push_back(tree_current(setup, moved, atoms));
        break;
      }
      case 3: {
        if (topologies.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, topologies.size() - 1);
        auto sol = optimize_topology(topologies[pick(rng)], terminals);
        out.push_back(tree_current(setup, sol.segments(), atoms));
        break;
      }
      case 4: {
        PolyCurrent sum(setup, dim);
        for (int i = 0; i + 1 < n; ++i) {
          std::vector<Point> path{terminals[i]};
          std::size_t stops = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
          for (std::size_t s = 0; s < stops; ++s) path.push_back(random_point());
          path.push_back(terminals[n - 1]);
          for (std::size_t s = 0; s + 1 < path.size(); ++s) {
            if (distance(path[s], path[s + 1]) > 0) sum.add(path[s], path[s + 1], -setup.generator(i + 1));
          }
        }
        out.push_back(sum.canonical());
        break;
      }
    }
  }
  return out;
}

struct EquivalenceReport {
  bool passed = true;
  double length = 0;                // H^1 of the solver tree
  double mass = 0;                  // mass of its canonical current
  bool unit_multiplicities = true;  // every edge carries an element of norm 1
  std::size_t competitors = 0;
  double min_competitor_mass = std::numeric_limits<double>::infinity();
  std::string witness{};
  SteinerResult solution;
  PolyCurrent current;
};

/// Solves the Steiner problem, builds the canonical current on the best
/// tree and checks that its mass equals the tree length and that no
/// competitor with the same boundary is lighter.
inline EquivalenceReport equivalence_check(const std::vector<Point>& terminals, std::size_t competitors = 100,
                                           const Tolerances& tol = {}, std::uint64_t seed = 7) {
  const GroupSetup setup(static_cast<int>(terminals.size()));
  EquivalenceReport r{.solution = solve_steiner(terminals, tol), .current = PolyCurrent(setup, 2)};
  const auto segments = r.solution.best().segments();
  r.current = canonical_current(setup, segments, terminals, tol.geom);
  r.length = r.solution.length();
  r.mass = mass(r.current);
  for (const auto& s : r.current.segments()) r.unit_multiplicities = r.unit_multiplicities && norm_e(setup, s.theta) == 1;
  const double slack = tol.geom * std::max(1.0, r.length);
  if (std::abs(r.mass - r.length) > slack || !r.unit_multiplicities) {
    r.passed = false;
    r.witness = "canonical mass " + std::to_string(r.mass) + " vs length " + std::to_string(r.length);
  }
  const auto family = generate_competitors(setup, terminals, segments, competitors, seed);
  for (std::size_t k = 0; k < family.size(); ++k) {
    double m = mass(family[k].canonical(tol.geom));
    ++r.competitors;
    r.min_competitor_mass = std::min(r.min_competitor_mass, m);
    if (m < r.mass - slack && r.passed) {
      r.passed = false;
      r.witness = "competitor " + std::to_string(k + 1) + " has mass " + std::to_string(m);
    }
  }
  return r;
}

}  // namespace gcurrents
