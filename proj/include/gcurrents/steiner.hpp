#pragma once

// Exact small-n Euclidean Steiner trees: enumerate full topologies, relax
// each one by moving Steiner points to the Fermat point of their neighbours,
// keep the shortest.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gcurrents/currents.hpp"
#include "gcurrents/errors.hpp"
#include "gcurrents/geometry.hpp"

namespace gcurrents {

namespace detail {

inline bool coincide(const Point& a, const Point& b) {
  double scale = 1.0 + std::max(norm(a), norm(b));
  return distance(a, b) <= 1e-14 * scale;
}

/// cos of the angle at p in the triangle (p, q, r).
inline double cos_at(const Point& p, const Point& q, const Point& r) {
  Point u = q - p, v = r - p;
  return std::clamp(dot(u, v) / (norm(u) * norm(v)), -1.0, 1.0);
}

}  // namespace detail

/// Point minimizing |x-a| + |x-b| + |x-c|.
inline Point fermat_point(const Point& a, const Point& b, const Point& c) {
  if (a.dim() != 2 || b.dim() != 2 || c.dim() != 2) throw InputError("fermat_point is planar");
  if (detail::coincide(a, b) || detail::coincide(a, c)) return a;
  if (detail::coincide(b, c)) return b;
  double ca = detail::cos_at(a, b, c), cb = detail::cos_at(b, a, c), cc = detail::cos_at(c, a, b);
  // At exactly 120 degrees the vertex is the answer; the slack keeps
  // rounding from leaving a point a hair away from it.
  constexpr double at_vertex = -0.5 + 1e-12;
  if (ca <= at_vertex) return a;
  if (cb <= at_vertex) return b;
  if (cc <= at_vertex) return c;
  constexpr double third = std::numbers::pi / 3;
  double wa = distance(b, c) / std::sin(std::acos(ca) + third);
  double wb = distance(a, c) / std::sin(std::acos(cb) + third);
  double wc = distance(a, b) / std::sin(std::acos(cc) + third);
  return (wa * a + wb * b + wc * c) / (wa + wb + wc);
}

/// Weighted geometric median. Falls back to Weiszfeld iteration when the
/// closed form does not apply.
inline Point geometric_median(const std::vector<Point>& pts, const std::vector<double>& w,
                              const Point& start, double tol, int max_steps = 100000) {
  if (pts.empty()) throw InputError("geometric median of no points");
  if (pts.size() == 1) return pts[0];
  if (pts.size() == 3 && w[0] == 1 && w[1] == 1 && w[2] == 1) return fermat_point(pts[0], pts[1], pts[2]);
  for (std::size_t q = 0; q < pts.size(); ++q) {
    Point pull(pts[q].dim());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double d = distance(pts[i], pts[q]);
      if (i != q && d > 0) pull += (w[i] / d) * (pts[i] - pts[q]);
    }
    if (norm(pull) <= w[q] * (1 + 1e-12)) return pts[q];
  }
  Point x = start;
  for (int it = 0; it < max_steps; ++it) {
    Point num(x.dim());
    double den = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double d = std::max(distance(pts[i], x), 1e-300);
      num += (w[i] / d) * pts[i];
      den += w[i] / d;
    }
    Point next = num / den;
    double step = distance(next, x);
    x = next;
    if (step < tol * 1e-3) break;
  }
  return x;
}

/// Tree on terminals 0..n-1 and Steiner points n..n+s-1.
struct SteinerTopology {
  int n = 0;
  int steiner = 0;
  std::vector<std::pair<int, int>> edges;

  int vertex_count() const { return n + steiner; }

  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(vertex_count()));
    for (auto [u, v] : edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    return adj;
  }
};

struct SteinerSolution {
  std::vector<Point> terminals;
  std::vector<Point> vertices;  // terminals first, then surviving Steiner points
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  double length = 0;
  SteinerTopology topology;
  std::size_t topology_index = 0;
  bool converged = true;
  int iterations = 0;
  std::vector<double> history;  // tree length after each relocation sweep

  std::vector<std::pair<Point, Point>> segments() const {
    std::vector<std::pair<Point, Point>> out;
    for (auto [u, v] : edges) out.emplace_back(vertices[u], vertices[v]);
    return out;
  }
  std::size_t steiner_points() const { return vertices.size() - terminals.size(); }
};

/// All full topologies (n - 2 Steiner points of degree 3), built by inserting
/// terminal k on each edge of every topology for k - 1 terminals.
inline std::vector<SteinerTopology> enumerate_topologies(int n) {
  if (n < 3 || n > 8) throw InputError("enumerate_topologies supports 3 <= n <= 8, got " + std::to_string(n));
  std::vector<SteinerTopology> current{{n, 1, {{0, n}, {1, n}, {2, n}}}};
  for (int k = 3; k < n; ++k) {
    std::vector<SteinerTopology> next;
    for (const auto& t : current) {
      int s = n + t.steiner;
      for (std::size_t e = 0; e < t.edges.size(); ++e) {
        SteinerTopology u = t;
        auto [a, b] = t.edges[e];
        u.steiner += 1;
        u.edges[e] = {a, s};
        u.edges.push_back({s, b});
        u.edges.push_back({k, s});
        next.push_back(std::move(u));
      }
    }
    current = std::move(next);
  }
  return current;
}

namespace detail {

/// Damped Newton on sum_e sqrt(|x_u - x_v|^2 + eps^2) with eps shrinking
/// from scale/10 to scale*1e-12. Moves the Steiner points of `pos` close to
/// the topology's optimum, including degenerate ones, so the exact Fermat
/// sweeps that follow only have to polish.
inline void smoothed_newton(const SteinerTopology& topo, std::vector<Point>& pos, double scale) {
  const int n = topo.n;
  const int s = topo.steiner;
  const int dim = 2 * s;
  auto var = [&](int v) { return 2 * (v - n); };
  auto objective = [&](const std::vector<Point>& x, double eps) {
    double f = 0;
    for (auto [u, v] : topo.edges) {
      Point d = x[u] - x[v];
      f += std::sqrt(dot(d, d) + eps * eps);
    }
    return f;
  };
  for (double eps = scale * 0.1; eps >= scale * 1e-12; eps *= 0.1) {
    for (int step = 0; step < 60; ++step) {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
      for (auto [u, v] : topo.edges) {
        Eigen::Vector2d d(pos[u][0] - pos[v][0], pos[u][1] - pos[v][1]);
        double r = std::sqrt(d.squaredNorm() + eps * eps);
        Eigen::Vector2d grad = d / r;
        Eigen::Matrix2d hess = (Eigen::Matrix2d::Identity() * r * r - d * d.transpose()) / (r * r * r);
        if (u >= n) {
          g.segment<2>(var(u)) += grad;
          h.block<2, 2>(var(u), var(u)) += hess;
        }
        if (v >= n) {
          g.segment<2>(var(v)) -= grad;
          h.block<2, 2>(var(v), var(v)) += hess;
        }
        if (u >= n && v >= n) {
          h.block<2, 2>(var(u), var(v)) -= hess;
          h.block<2, 2>(var(v), var(u)) -= hess;
        }
      }
      Eigen::VectorXd dir = -h.ldlt().solve(g);
      double decrement = -g.dot(dir);
      if (!(decrement > 1e-30 * scale)) break;
      double f0 = objective(pos, eps);
      double t = 1;
      std::vector<Point> trial = pos;
      while (t > 1e-12) {
        for (int v = n; v < n + s; ++v) {
          trial[v][0] = pos[v][0] + t * dir[var(v)];
          trial[v][1] = pos[v][1] + t * dir[var(v) + 1];
        }
        if (objective(trial, eps) <= f0 - 0.25 * t * decrement) break;
        t *= 0.5;
      }
      if (t <= 1e-12) break;
      pos = trial;
      if (decrement < 1e-28 * scale) break;
    }
  }
}

}  // namespace detail

/// Relaxes one topology. Steiner points start at the Laplacian barycentres,
/// are brought near the optimum by smoothed Newton steps and then moved one
/// at a time to the Fermat point of their neighbours until they stop moving.
/// Points that meet are merged and the merged node is moved to the weighted
/// geometric median of its neighbours.
inline SteinerSolution optimize_topology(const SteinerTopology& topo, const std::vector<Point>& terminals,
                                         const Tolerances& tol = {}) {
  const int n = topo.n;
  if (static_cast<int>(terminals.size()) != n) throw InputError("topology and terminal count disagree");
  if (static_cast<int>(topo.edges.size()) != topo.vertex_count() - 1) throw InputError("topology is not a tree");
  for (const auto& p : terminals) {
    if (p.dim() != 2) throw InputError("the Steiner solver is planar");
  }
  const int nv = topo.vertex_count();
  auto adj = topo.adjacency();

  std::vector<Point> pos(static_cast<std::size_t>(nv));
  Point centroid(2);
  for (const auto& p : terminals) centroid += p;
  centroid = centroid / n;
  for (int v = 0; v < nv; ++v) pos[v] = v < n ? terminals[v] : centroid;
  for (int sweep = 0; sweep < 2000; ++sweep) {
    double move = 0;
    for (int s = n; s < nv; ++s) {
      Point avg(2);
      for (int u : adj[s]) avg += pos[u];
      avg = avg / static_cast<double>(adj[s].size());
      move = std::max(move, distance(avg, pos[s]));
      pos[s] = avg;
    }
    if (move < tol.geom * 1e-3) break;
  }
  double scale = 0;
  for (const auto& p : terminals) scale = std::max(scale, distance(p, centroid));
  detail::smoothed_newton(topo, pos, std::max(scale, 1e-300));

  std::vector<int> parent(static_cast<std::size_t>(nv));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  auto merge_close = [&] {
    bool again = true;
    while (again) {
      again = false;
      for (auto [u, v] : topo.edges) {
        int ru = find(u), rv = find(v);
        if (ru == rv || distance(pos[ru], pos[rv]) > tol.geom) continue;
        if (ru < n && rv < n) continue;  // distinct terminals never merge
        if (rv < n) std::swap(ru, rv);
        parent[rv] = ru;
        again = true;
      }
    }
  };

  SteinerSolution sol;
  sol.terminals = terminals;
  sol.topology = topo;
  sol.converged = false;

  auto tree_length = [&] {
    double len = 0;
    for (auto [u, v] : topo.edges) len += distance(pos[find(u)], pos[find(v)]);
    return len;
  };
  auto polish = [&] {
    while (sol.iterations < tol.max_iter) {
      ++sol.iterations;
      double move = 0;
      for (int s = n; s < nv; ++s) {
        if (find(s) != s) continue;
        std::vector<int> nb;
        std::vector<double> weight;
        for (int m = 0; m < nv; ++m) {
          if (find(m) != s) continue;
          for (int u : adj[m]) {
            int r = find(u);
            if (r == s) continue;
            auto at = std::find(nb.begin(), nb.end(), r);
            if (at == nb.end()) {
              nb.push_back(r);
              weight.push_back(1);
            } else {
              weight[static_cast<std::size_t>(at - nb.begin())] += 1;
            }
          }
        }
        std::vector<Point> pts;
        for (int r : nb) pts.push_back(pos[r]);
        Point next = geometric_median(pts, weight, pos[s], tol.geom, 200);
        move = std::max(move, distance(next, pos[s]));
        pos[s] = next;
      }
      merge_close();
      sol.history.push_back(tree_length());
      if (move < tol.geom) return true;
    }
    return false;
  };
  // A short edge whose collapse costs nothing beyond rounding is collapsed;
  // this settles Steiner points that sit on a flat 120-degree tie.
  auto snap_short_edges = [&] {
    bool any = false;
    for (auto [u, v] : topo.edges) {
      int ru = find(u), rv = find(v);
      if (ru == rv || (ru < n && rv < n)) continue;
      if (distance(pos[ru], pos[rv]) > 1e-6 * scale) continue;
      if (rv < n) std::swap(ru, rv);
      double before = tree_length();
      Point saved = pos[rv];
      pos[rv] = pos[ru];
      if (tree_length() <= before + 1e-13 * scale) {
        parent[rv] = ru;
        any = true;
      } else {
        pos[rv] = saved;
      }
    }
    return any;
  };

  merge_close();
  sol.converged = polish();
  for (int round = 0; sol.converged && round < nv && snap_short_edges(); ++round) sol.converged = polish();

  std::vector<std::size_t> slot(static_cast<std::size_t>(nv), 0);
  for (int v = 0; v < n; ++v) {
    sol.vertices.push_back(pos[v]);
    slot[v] = static_cast<std::size_t>(v);
  }
  for (int s = n; s < nv; ++s) {
    if (find(s) == s) {
      slot[s] = sol.vertices.size();
      sol.vertices.push_back(pos[s]);
    }
  }
  for (auto [u, v] : topo.edges) {
    std::size_t a = slot[find(u)], b = slot[find(v)];
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (std::find(sol.edges.begin(), sol.edges.end(), std::pair{a, b}) == sol.edges.end()) sol.edges.push_back({a, b});
  }
  std::sort(sol.edges.begin(), sol.edges.end());
  for (auto [a, b] : sol.edges) sol.length += distance(sol.vertices[a], sol.vertices[b]);
  return sol;
}

/// Prim's minimum spanning tree on the complete Euclidean graph.
inline std::vector<std::pair<std::size_t, std::size_t>> mst_edges(const std::vector<Point>& pts) {
  const std::size_t n = pts.size();
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (n < 2) return out;
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> from(n, 0);
  std::vector<bool> in(n, false);
  best[0] = 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t v = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in[i] && (v == n || best[i] < best[v])) v = i;
    }
    in[v] = true;
    if (k > 0) out.emplace_back(std::min(from[v], v), std::max(from[v], v));
    for (std::size_t i = 0; i < n; ++i) {
      double d = distance(pts[v], pts[i]);
      if (!in[i] && d < best[i]) {
        best[i] = d;
        from[i] = v;
      }
    }
  }
  return out;
}

inline double mst_length(const std::vector<Point>& pts) {
  double len = 0;
  for (auto [u, v] : mst_edges(pts)) len += distance(pts[u], pts[v]);
  return len;
}

/// Largest deviation from -1/2 of the cosine between edges meeting at a
/// Steiner point, and whether every Steiner point has degree 3.
struct AngleReport {
  double max_deviation = 0;
  bool all_degree_three = true;
};

inline AngleReport check_angles(const SteinerSolution& s) {
  AngleReport r;
  for (std::size_t v = s.terminals.size(); v < s.vertices.size(); ++v) {
    std::vector<Point> dirs;
    for (auto [a, b] : s.edges) {
      if (a == v || b == v) {
        Point d = s.vertices[a == v ? b : a] - s.vertices[v];
        dirs.push_back(d / norm(d));
      }
    }
    if (dirs.size() != 3) r.all_degree_three = false;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      for (std::size_t j = i + 1; j < dirs.size(); ++j) {
        r.max_deviation = std::max(r.max_deviation, std::abs(dot(dirs[i], dirs[j]) + 0.5));
      }
    }
  }
  return r;
}

namespace detail {

inline bool same_tree(const SteinerSolution& x, const SteinerSolution& y, double tol) {
  if (x.edges.size() != y.edges.size()) return false;
  for (auto [a, b] : x.edges) {
    bool found = false;
    for (auto [c, d] : y.edges) {
      const Point &p = x.vertices[a], &q = x.vertices[b], &r = y.vertices[c], &s = y.vertices[d];
      if ((distance(p, r) <= tol && distance(q, s) <= tol) || (distance(p, s) <= tol && distance(q, r) <= tol)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace detail

struct SteinerResult {
  /// Geometrically distinct optimal trees, sorted by (length, topology index).
  std::vector<SteinerSolution> optima;
  std::size_t topologies = 0;
  std::size_t unconverged = 0;

  const SteinerSolution& best() const { return optima.front(); }
  double length() const { return optima.front().length; }
};

/// Minimum over all full topologies, with degenerate collapses. Every tree
/// within 1e-9 relative length of the best is reported.
inline SteinerResult solve_steiner(const std::vector<Point>& terminals, const Tolerances& tol = {}) {
  const int n = static_cast<int>(terminals.size());
  if (n < 2 || n > 8) throw InputError("solve_steiner supports 2 <= n <= 8 terminals, got " + std::to_string(n));
  for (int i = 0; i < n; ++i) {
    if (terminals[i].dim() != 2) throw InputError("terminals must be planar points");
    for (int j = 0; j < i; ++j) {
      if (distance(terminals[i], terminals[j]) <= tol.geom) {
        throw InputError("duplicate terminals " + std::to_string(j + 1) + " and " + std::to_string(i + 1) + " at " +
                         to_string(terminals[i]));
      }
    }
  }
  SteinerResult res;
  if (n == 2) {
    SteinerSolution s;
    s.terminals = terminals;
    s.vertices = terminals;
    s.edges = {{0, 1}};
    s.length = distance(terminals[0], terminals[1]);
    s.topology = {2, 0, {{0, 1}}};
    s.iterations = 0;
    res.optima.push_back(s);
    res.topologies = 1;
    return res;
  }
  auto topologies = enumerate_topologies(n);
  res.topologies = topologies.size();
  std::vector<SteinerSolution> all;
  all.reserve(topologies.size());
  for (std::size_t k = 0; k < topologies.size(); ++k) {
    all.push_back(optimize_topology(topologies[k], terminals, tol));
    all.back().topology_index = k;
    if (!all.back().converged) ++res.unconverged;
  }
  std::stable_sort(all.begin(), all.end(), [](const SteinerSolution& a, const SteinerSolution& b) {
    return a.length < b.length;
  });
  const double best = all.front().length;
  const double slack = 1e-9 * std::max(1.0, best);
  for (const auto& s : all) {
    if (s.length > best + slack) break;
    bool dup = std::any_of(res.optima.begin(), res.optima.end(),
                           [&](const SteinerSolution& o) { return detail::same_tree(o, s, 1e-6); });
    if (!dup) res.optima.push_back(s);
  }
  if (!res.optima.front().converged) {
    throw ConvergenceError("best topology did not converge within " + std::to_string(tol.max_iter) + " sweeps");
  }
  return res;
}

}  // namespace gcurrents
