#pragma once

// Classical (real and integer) minimal mass for a boundary made of point
// masses: a transport problem on segments x_i -> y_j.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "gcurrents/errors.hpp"
#include "gcurrents/geometry.hpp"
#include "gcurrents/rational.hpp"

namespace gcurrents {

struct WeightedPoint {
  Point x;
  std::int64_t mult = 1;
};

/// B_0 = -sum a_i delta_{x_i} + sum b_j delta_{y_j}.
struct ClassicalBoundary {
  std::vector<WeightedPoint> sources;
  std::vector<WeightedPoint> sinks;

  void validate() const {
    if (sources.empty() || sinks.empty()) throw InputError("boundary needs at least one source and one sink");
    std::int64_t a = 0, b = 0;
    std::size_t dim = sources.front().x.dim();
    for (const auto* side : {&sources, &sinks}) {
      for (const auto& w : *side) {
        if (w.mult <= 0) throw InputError("multiplicities must be positive integers");
        if (w.x.dim() != dim) throw InputError("points of mixed dimension");
      }
    }
    for (const auto& w : sources) a += w.mult;
    for (const auto& w : sinks) b += w.mult;
    if (a != b) {
      throw InputError("unbalanced boundary: sources carry " + std::to_string(a) + ", sinks carry " + std::to_string(b));
    }
  }
  double cost(std::size_t i, std::size_t j) const { return distance(sources[i].x, sinks[j].x); }
};

/// Q = sum k^{ij} [x_i -> y_j]; only positive weights are stored.
struct SegmentPlan {
  std::map<std::pair<std::size_t, std::size_t>, Rational> weights;

  Rational at(std::size_t i, std::size_t j) const {
    auto it = weights.find({i, j});
    return it == weights.end() ? Rational(0) : it->second;
  }
  void set(std::size_t i, std::size_t j, const Rational& w) {
    if (w == 0) {
      weights.erase({i, j});
    } else {
      weights[{i, j}] = w;
    }
  }
  bool integral() const {
    return std::all_of(weights.begin(), weights.end(), [](const auto& kv) { return is_integer(kv.second); });
  }
  friend bool operator==(const SegmentPlan&, const SegmentPlan&) = default;
};

inline double plan_mass(const ClassicalBoundary& b, const SegmentPlan& q) {
  double m = 0;
  for (const auto& [ij, w] : q.weights) m += to_double(w) * b.cost(ij.first, ij.second);
  return m;
}

/// Exact check of the row sums a_i and column sums b_j.
inline bool has_marginals(const ClassicalBoundary& b, const SegmentPlan& q) {
  std::vector<Rational> row(b.sources.size()), col(b.sinks.size());
  for (const auto& [ij, w] : q.weights) {
    if (ij.first >= row.size() || ij.second >= col.size() || w < 0) return false;
    row[ij.first] += w;
    col[ij.second] += w;
  }
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] != b.sources[i].mult) return false;
  }
  for (std::size_t j = 0; j < col.size(); ++j) {
    if (col[j] != b.sinks[j].mult) return false;
  }
  return true;
}

/// Number of connected pieces of the support of q, counting shared endpoints.
inline std::size_t plan_components(const ClassicalBoundary& b, const SegmentPlan& q, double tol = Tolerances{}.geom) {
  PointIndex idx(tol);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& [ij, w] : q.weights) {
    edges.emplace_back(idx.insert(b.sources[ij.first].x), idx.insert(b.sinks[ij.second].x));
  }
  std::vector<std::size_t> parent(idx.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t pieces = idx.size();
  for (auto [u, v] : edges) {
    u = find(u);
    v = find(v);
    if (u != v) {
      parent[u] = v;
      --pieces;
    }
  }
  return pieces;
}

struct TransportResult {
  double value = 0;
  SegmentPlan plan;
};

/// Optimal plan by successive shortest paths on the bipartite network. The
/// flow stays integral, which is also an optimum of the real relaxation.
inline TransportResult transport_min(const ClassicalBoundary& b) {
  b.validate();
  const std::size_t m = b.sources.size(), n = b.sinks.size();
  const std::size_t s = m + n, t = s + 1, nodes = t + 1;
  struct Arc {
    std::size_t to;
    std::int64_t cap;
    double cost;
    std::size_t rev;
  };
  std::vector<std::vector<Arc>> g(nodes);
  auto add = [&](std::size_t u, std::size_t v, std::int64_t cap, double cost) {
    g[u].push_back({v, cap, cost, g[v].size()});
    g[v].push_back({u, 0, -cost, g[u].size() - 1});
  };
  std::int64_t total = 0;
  for (std::size_t i = 0; i < m; ++i) {
    add(s, i, b.sources[i].mult, 0);
    total += b.sources[i].mult;
  }
  for (std::size_t j = 0; j < n; ++j) add(m + j, t, b.sinks[j].mult, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) add(i, m + j, total, b.cost(i, j));
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::int64_t sent = 0;
  while (sent < total) {
    std::vector<double> dist(nodes, inf);
    std::vector<std::pair<std::size_t, std::size_t>> prev(nodes, {nodes, 0});
    dist[s] = 0;
    for (std::size_t round = 0; round < nodes; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u < nodes; ++u) {
        if (dist[u] == inf) continue;
        for (std::size_t k = 0; k < g[u].size(); ++k) {
          const Arc& a = g[u][k];
          if (a.cap > 0 && dist[u] + a.cost < dist[a.to] - 1e-15) {
            dist[a.to] = dist[u] + a.cost;
            prev[a.to] = {u, k};
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (dist[t] == inf) throw ConvergenceError("transport network lost feasibility");
    std::int64_t push = total - sent;
    for (std::size_t v = t; v != s; v = prev[v].first) push = std::min(push, g[prev[v].first][prev[v].second].cap);
    for (std::size_t v = t; v != s; v = prev[v].first) {
      Arc& a = g[prev[v].first][prev[v].second];
      a.cap -= push;
      g[a.to][a.rev].cap += push;
    }
    sent += push;
  }

  TransportResult r;
  for (std::size_t i = 0; i < m; ++i) {
    for (const Arc& a : g[i]) {
      if (a.to >= m && a.to < m + n) {
        std::int64_t flow = g[a.to][a.rev].cap;
        if (flow > 0) r.plan.set(i, a.to - m, Rational(flow));
      }
    }
  }
  r.value = plan_mass(b, r.plan);
  return r;
}

struct IntegerizeResult {
  SegmentPlan plan;
  std::size_t cycles = 0;
};

/// Rounds a feasible plan to an integral one without increasing its mass.
/// Fractional cells form a bipartite graph where every row and column has
/// degree 0 or at least 2, so a walk finds an alternating cycle Qbar (+1 on
/// row->column steps, -1 on column->row steps). F(t) = mass(Q - t Qbar) is
/// affine; we step in the non-increasing direction by alpha (or beta), the
/// least fractional part on the cells being lowered, which makes at least one
/// cell integral.
inline IntegerizeResult integerize(const ClassicalBoundary& b, SegmentPlan plan) {
  b.validate();
  if (!has_marginals(b, plan)) throw InputError("integerize needs a feasible plan");
  const std::size_t m = b.sources.size(), n = b.sinks.size();
  IntegerizeResult r;
  for (;;) {
    std::vector<std::vector<std::size_t>> row_cells(m), col_cells(n);
    std::size_t start = m;
    for (const auto& [ij, w] : plan.weights) {
      if (is_integer(w)) continue;
      row_cells[ij.first].push_back(ij.second);
      col_cells[ij.second].push_back(ij.first);
      start = std::min(start, ij.first);
    }
    if (start == m) break;

    // Nodes: rows are 0..m-1, columns m..m+n-1.
    std::vector<std::size_t> seen(m + n, SIZE_MAX), walk{start};
    seen[start] = 0;
    std::size_t came_from = SIZE_MAX;
    for (;;) {
      std::size_t cur = walk.back(), next = SIZE_MAX;
      if (cur < m) {
        for (std::size_t j : row_cells[cur]) {
          if (m + j != came_from) {
            next = m + j;
            break;
          }
        }
      } else {
        for (std::size_t i : col_cells[cur - m]) {
          if (i != came_from) {
            next = i;
            break;
          }
        }
      }
      if (next == SIZE_MAX) throw ConvergenceError("fractional cell without a partner: marginals are not integral");
      came_from = cur;
      if (seen[next] != SIZE_MAX) {
        walk.erase(walk.begin(), walk.begin() + static_cast<std::ptrdiff_t>(seen[next]));
        walk.push_back(next);
        break;
      }
      seen[next] = walk.size();
      walk.push_back(next);
    }

    std::vector<std::pair<std::size_t, std::size_t>> plus, minus;
    for (std::size_t k = 0; k + 1 < walk.size(); ++k) {
      std::size_t u = walk[k], v = walk[k + 1];
      if (u < m) {
        plus.emplace_back(u, v - m);
      } else {
        minus.emplace_back(v, u - m);
      }
    }
    double slope = 0;  // F(t) = F(0) - t * slope
    for (auto [i, j] : plus) slope += b.cost(i, j);
    for (auto [i, j] : minus) slope -= b.cost(i, j);

    const auto& lowered = slope >= 0 ? plus : minus;
    const auto& raised = slope >= 0 ? minus : plus;
    Rational step = frac(plan.at(lowered.front().first, lowered.front().second));
    for (auto [i, j] : lowered) step = std::min(step, frac(plan.at(i, j)));
    for (auto [i, j] : lowered) plan.set(i, j, plan.at(i, j) - step);
    for (auto [i, j] : raised) plan.set(i, j, plan.at(i, j) + step);
    ++r.cycles;
  }
  r.plan = std::move(plan);
  return r;
}

}  // namespace gcurrents
