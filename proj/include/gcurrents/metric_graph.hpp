#pragma once

// G-currents on metric graphs: exact mass minimization for boundary k R by
// branch and bound, and the scan of M(kR) against k M(R).

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "gcurrents/errors.hpp"
#include "gcurrents/geometry.hpp"
#include "gcurrents/group.hpp"
#include "gcurrents/rational.hpp"

namespace gcurrents {

struct GraphEdge {
  std::size_t u = 0, v = 0;  // orientation used for theta
  Rational length;
};

class MetricGraph {
 public:
  explicit MetricGraph(GroupSetup setup) : setup_(setup) {}

  const GroupSetup& setup() const { return setup_; }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<std::optional<Point>>& positions() const { return pos_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const std::map<std::size_t, GroupElement>& terminals() const { return terminals_; }
  std::size_t vertex_count() const { return ids_.size(); }

  std::size_t add_vertex(const std::string& id, std::optional<Point> pos = std::nullopt) {
    if (index_.count(id)) throw InputError("duplicate vertex id '" + id + "'");
    index_[id] = ids_.size();
    ids_.push_back(id);
    pos_.push_back(std::move(pos));
    return ids_.size() - 1;
  }

  std::size_t index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw InputError("unknown vertex id '" + id + "'");
    return it->second;
  }

  void add_edge(const std::string& u, const std::string& v, const Rational& length) {
    std::size_t a = index_of(u), b = index_of(v);
    if (a == b) throw InputError("loop edge at '" + u + "'");
    if (!(length > 0)) throw InputError("edge " + u + "-" + v + " has non-positive length " + to_string(length));
    edges_.push_back({a, b, length});
  }

  void set_terminal(const std::string& id, const GroupElement& g) {
    setup_.check(g);
    std::size_t v = index_of(id);
    if (terminals_.count(v)) throw InputError("vertex '" + id + "' listed twice as a terminal");
    terminals_[v] = g;
  }

  GroupElement terminal(std::size_t v) const {
    auto it = terminals_.find(v);
    return it == terminals_.end() ? setup_.zero() : it->second;
  }

  /// R must be closed: its group elements sum to zero.
  void validate() const {
    GroupElement sum = setup_.zero();
    for (const auto& [v, g] : terminals_) sum += g;
    if (!sum.is_zero()) throw InputError("boundary is not closed: terminal elements sum to " + to_string(sum));
  }

 private:
  GroupSetup setup_;
  std::vector<std::string> ids_;
  std::vector<std::optional<Point>> pos_;
  std::map<std::string, std::size_t> index_;
  std::vector<GraphEdge> edges_;
  std::map<std::size_t, GroupElement> terminals_;
};

/// theta[e] is the multiplicity on edges()[e] oriented u -> v.
struct GraphCurrent {
  std::vector<GroupElement> theta;
  friend bool operator==(const GraphCurrent&, const GraphCurrent&) = default;
};

inline Rational graph_mass(const MetricGraph& g, const GraphCurrent& c) {
  Rational m = 0;
  for (std::size_t e = 0; e < g.edges().size(); ++e) m += g.edges()[e].length * norm_e(g.setup(), c.theta.at(e));
  return m;
}

/// Boundary at each vertex: incoming minus outgoing multiplicity.
inline std::vector<GroupElement> graph_boundary(const MetricGraph& g, const GraphCurrent& c) {
  std::vector<GroupElement> b(g.vertex_count(), g.setup().zero());
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    b[g.edges()[e].v] += c.theta.at(e);
    b[g.edges()[e].u] -= c.theta.at(e);
  }
  return b;
}

inline bool has_boundary(const MetricGraph& g, const GraphCurrent& c, std::int64_t k) {
  if (c.theta.size() != g.edges().size()) return false;
  auto b = graph_boundary(g, c);
  for (std::size_t v = 0; v < b.size(); ++v) {
    if (!(b[v] == g.terminal(v) * k)) return false;
  }
  return true;
}

struct GraphSolveOptions {
  std::uint64_t node_cap = 10'000'000;
};

struct GraphMinResult {
  Rational value;
  GraphCurrent current;
  std::uint64_t nodes = 0;
};

namespace detail {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

/// Min-cost transport of integer demands (positive = supply) under the
/// distance matrix d; kInf if some supply cannot reach a demand.
inline std::int64_t scalar_transport(const std::vector<std::int64_t>& demand,
                                     const std::vector<std::vector<std::int64_t>>& d) {
  std::vector<std::size_t> src, dst;
  std::vector<std::int64_t> supply, want;
  for (std::size_t v = 0; v < demand.size(); ++v) {
    if (demand[v] > 0) {
      src.push_back(v);
      supply.push_back(demand[v]);
    } else if (demand[v] < 0) {
      dst.push_back(v);
      want.push_back(-demand[v]);
    }
  }
  if (src.empty()) return 0;
  const std::size_t m = src.size(), n = dst.size(), s = m + n, t = s + 1;
  struct Arc {
    std::size_t to;
    std::int64_t cap, cost;
    std::size_t rev;
  };
  std::vector<std::vector<Arc>> g(t + 1);
  auto add = [&](std::size_t u, std::size_t v, std::int64_t cap, std::int64_t cost) {
    g[u].push_back({v, cap, cost, g[v].size()});
    g[v].push_back({u, 0, -cost, g[u].size() - 1});
  };
  std::int64_t total = 0;
  for (std::size_t i = 0; i < m; ++i) {
    add(s, i, supply[i], 0);
    total += supply[i];
  }
  for (std::size_t j = 0; j < n; ++j) add(m + j, t, want[j], 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (d[src[i]][dst[j]] < kInf) add(i, m + j, total, d[src[i]][dst[j]]);
    }
  }
  std::int64_t cost = 0, sent = 0;
  while (sent < total) {
    std::vector<std::int64_t> dist(t + 1, kInf);
    std::vector<std::pair<std::size_t, std::size_t>> prev(t + 1, {t + 1, 0});
    dist[s] = 0;
    for (std::size_t round = 0; round <= t; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u <= t; ++u) {
        if (dist[u] == kInf) continue;
        for (std::size_t k = 0; k < g[u].size(); ++k) {
          const Arc& a = g[u][k];
          if (a.cap > 0 && dist[u] + a.cost < dist[a.to]) {
            dist[a.to] = dist[u] + a.cost;
            prev[a.to] = {u, k};
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (dist[t] == kInf) return kInf;
    std::int64_t push = total - sent;
    for (std::size_t v = t; v != s; v = prev[v].first) push = std::min(push, g[prev[v].first][prev[v].second].cap);
    for (std::size_t v = t; v != s; v = prev[v].first) {
      Arc& a = g[prev[v].first][prev[v].second];
      a.cap -= push;
      g[a.to][a.rev].cap += push;
    }
    sent += push;
    cost += push * dist[t];
  }
  return cost;
}

class GraphSearch {
 public:
  GraphSearch(const MetricGraph& g, std::int64_t k, const GraphSolveOptions& opt)
      : g_(g), setup_(g.setup()), r_(setup_.rank()), k_(k), opt_(opt) {}

  GraphMinResult run() {
    g_.validate();
    if (k_ < 1) throw InputError("scale k must be a positive integer, got " + std::to_string(k_));
    const std::size_t nv = g_.vertex_count(), ne = g_.edges().size();
    scale_lengths();

    order_.resize(ne);
    for (std::size_t e = 0; e < ne; ++e) order_[e] = e;
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return ilen_[a] > ilen_[b]; });
    last_.assign(nv, SIZE_MAX);
    for (std::size_t d = 0; d < ne; ++d) {
      last_[g_.edges()[order_[d]].u] = d;
      last_[g_.edges()[order_[d]].v] = d;
    }
    build_depth_tables();

    need_.assign(nv, setup_.zero());
    for (std::size_t v = 0; v < nv; ++v) need_[v] = g_.terminal(v) * k_;

    best_ = warm_start();
    ub_ = best_cost_ + 1;  // lets the search replace the warm start by an equal-cost current found first
    theta_.assign(ne, setup_.zero());
    found_ = false;
    if (lower_bound(0) < ub_) dfs(0, 0);

    GraphMinResult res;
    res.value = Rational(BigInt(best_cost_), denominator_);
    res.current = best_;
    res.nodes = nodes_;
    return res;
  }

 private:
  void scale_lengths() {
    BigInt den = 1;
    for (const auto& e : g_.edges()) {
      const BigInt& q = boost::multiprecision::denominator(e.length);
      den = den / boost::multiprecision::gcd(den, q) * q;
    }
    denominator_ = den;
    ilen_.clear();
    for (const auto& e : g_.edges()) {
      Rational scaled = e.length * Rational(den);
      BigInt v = boost::multiprecision::numerator(scaled);
      if (v > BigInt(1) << 40) throw ResourceLimitError("edge lengths need more than 40 bits after scaling");
      ilen_.push_back(v.convert_to<std::int64_t>());
    }
  }

  // dist_[d] and comp_[d] describe the subgraph of edges order_[d..].
  void build_depth_tables() {
    const std::size_t nv = g_.vertex_count(), ne = order_.size();
    dist_.assign(ne + 1, std::vector<std::vector<std::int64_t>>(nv, std::vector<std::int64_t>(nv, kInf)));
    comp_.assign(ne + 1, std::vector<std::size_t>(nv));
    for (std::size_t d = ne + 1; d-- > 0;) {
      auto& dist = dist_[d];
      for (std::size_t v = 0; v < nv; ++v) dist[v][v] = 0;
      for (std::size_t p = d; p < ne; ++p) {
        const auto& e = g_.edges()[order_[p]];
        std::int64_t w = ilen_[order_[p]];
        dist[e.u][e.v] = std::min(dist[e.u][e.v], w);
        dist[e.v][e.u] = std::min(dist[e.v][e.u], w);
      }
      for (std::size_t m = 0; m < nv; ++m) {
        for (std::size_t a = 0; a < nv; ++a) {
          if (dist[a][m] == kInf) continue;
          for (std::size_t b = 0; b < nv; ++b) {
            if (dist[m][b] < kInf) dist[a][b] = std::min(dist[a][b], dist[a][m] + dist[m][b]);
          }
        }
      }
      for (std::size_t v = 0; v < nv; ++v) {
        std::size_t c = v;
        for (std::size_t u = 0; u < v; ++u) {
          if (dist[u][v] < kInf) {
            c = comp_[d][u];
            break;
          }
        }
        comp_[d][v] = c;
      }
    }
  }

  std::int64_t cost(std::size_t e, const GroupElement& th) const { return ilen_[e] * norm_e(setup_, th); }

  // Any w in E* with dual norm 1 gives mass >= the scalar transport of
  // <w, need>; we take the extreme points h_i and h_i - h_j.
  std::int64_t lower_bound(std::size_t d) const {
    const std::size_t nv = need_.size();
    std::map<std::size_t, GroupElement> balance;
    for (std::size_t v = 0; v < nv; ++v) {
      auto [it, fresh] = balance.try_emplace(comp_[d][v], setup_.zero());
      it->second += need_[v];
    }
    for (const auto& [c, b] : balance) {
      if (!b.is_zero()) return kInf;
    }
    std::int64_t best = 0;
    std::vector<std::int64_t> demand(nv);
    for (std::size_t i = 0; i < r_; ++i) {
      for (std::size_t j = i; j < r_; ++j) {
        bool any = false;
        for (std::size_t v = 0; v < nv; ++v) {
          demand[v] = need_[v][i] - (j == i ? 0 : need_[v][j]);
          any = any || demand[v] != 0;
        }
        if (any) best = std::max(best, scalar_transport(demand, dist_[d]));
      }
    }
    return best;
  }

  void apply(std::size_t e, const GroupElement& th, int sign) {
    const auto& edge = g_.edges()[e];
    if (sign > 0) {
      need_[edge.v] -= th;
      need_[edge.u] += th;
    } else {
      need_[edge.v] += th;
      need_[edge.u] -= th;
    }
  }

  void visit(std::size_t d, std::int64_t acc, const GroupElement& th) {  // th must not alias need_
    if (++nodes_ > opt_.node_cap) {
      throw ResourceLimitError("branch and bound exceeded " + std::to_string(opt_.node_cap) + " nodes");
    }
    const std::size_t e = order_[d];
    const auto& edge = g_.edges()[e];
    apply(e, th, +1);
    bool closed_ok = (last_[edge.u] != d || need_[edge.u].is_zero()) && (last_[edge.v] != d || need_[edge.v].is_zero());
    std::int64_t next = acc + cost(e, th);
    if (closed_ok && next < ub_) {
      theta_[e] = th;
      if (next + lower_bound(d + 1) < ub_) dfs(d + 1, next);
    }
    apply(e, th, -1);
  }

  void dfs(std::size_t d, std::int64_t acc) {
    if (d == order_.size()) {
      best_cost_ = acc;
      ub_ = acc;
      best_.theta = theta_;
      found_ = true;
      return;
    }
    const std::size_t e = order_[d];
    const auto& edge = g_.edges()[e];
    if (last_[edge.v] == d) {
      GroupElement forced = need_[edge.v];
      visit(d, acc, forced);
      return;
    }
    if (last_[edge.u] == d) {
      visit(d, acc, -need_[edge.u]);
      return;
    }
    std::int64_t budget = (ub_ - 1 - acc) / ilen_[e];
    if (budget < 0) return;
    GroupElement th(r_);
    enumerate(d, acc, th, 0, 0, 0, budget);
  }

  // Lexicographic enumeration of th with max(th+) - min(th-) <= budget.
  void enumerate(std::size_t d, std::int64_t acc, GroupElement& th, std::size_t i, std::int64_t hi, std::int64_t lo,
                 std::int64_t budget) {
    if (i == r_) {
      visit(d, acc, th);
      return;
    }
    for (std::int64_t x = hi - budget; x <= budget + lo; ++x) {
      th[i] = x;
      enumerate(d, acc, th, i + 1, std::max(hi, x), std::min(lo, x), budget);
      budget = std::min(budget, (ub_ - 1 - acc) / ilen_[order_[d]]);
    }
    th[i] = 0;
  }

  // Shortest-path forest rooted at the last terminal of each component.
  GraphCurrent warm_start() {
    const std::size_t nv = g_.vertex_count();
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(nv);
    for (std::size_t e = 0; e < g_.edges().size(); ++e) {
      adj[g_.edges()[e].u].emplace_back(g_.edges()[e].v, e);
      adj[g_.edges()[e].v].emplace_back(g_.edges()[e].u, e);
    }
    GraphCurrent cur{std::vector<GroupElement>(g_.edges().size(), setup_.zero())};
    std::vector<std::int64_t> dist(nv, kInf);
    std::vector<std::size_t> parent_edge(nv, SIZE_MAX), settled;
    std::vector<std::size_t> roots;
    for (std::size_t v = nv; v-- > 0;) {
      if (comp_[0][v] == v) roots.push_back(v);
    }
    for (std::size_t root : roots) {
      // Prefer a terminal as the root of its component.
      for (std::size_t v = nv; v-- > 0;) {
        if (comp_[0][v] == root && !g_.terminal(v).is_zero()) {
          root = v;
          break;
        }
      }
      std::priority_queue<std::pair<std::int64_t, std::size_t>, std::vector<std::pair<std::int64_t, std::size_t>>,
                          std::greater<>>
          pq;
      dist[root] = 0;
      pq.emplace(0, root);
      std::vector<std::size_t> order;
      while (!pq.empty()) {
        auto [dv, v] = pq.top();
        pq.pop();
        if (dv != dist[v]) continue;
        order.push_back(v);
        for (auto [w, e] : adj[v]) {
          if (dv + ilen_[e] < dist[w]) {
            dist[w] = dv + ilen_[e];
            parent_edge[w] = e;
            pq.emplace(dist[w], w);
          }
        }
      }
      std::vector<GroupElement> sub(nv, setup_.zero());
      for (std::size_t v : order) sub[v] = g_.terminal(v) * k_;
      for (std::size_t idx = order.size(); idx-- > 1;) {
        std::size_t v = order[idx], e = parent_edge[v];
        const auto& edge = g_.edges()[e];
        std::size_t p = edge.u == v ? edge.v : edge.u;
        // The edge v -> p carries -sub[v].
        cur.theta[e] = edge.u == v ? -sub[v] : sub[v];
        sub[p] += sub[v];
      }
      if (!sub[root].is_zero()) {
        throw InputError("no current has this boundary: a connected component carries " + to_string(sub[root]));
      }
    }
    best_cost_ = 0;
    for (std::size_t e = 0; e < cur.theta.size(); ++e) best_cost_ += cost(e, cur.theta[e]);
    return cur;
  }

  const MetricGraph& g_;
  GroupSetup setup_;
  std::size_t r_;
  std::int64_t k_;
  GraphSolveOptions opt_;
  BigInt denominator_ = 1;
  std::vector<std::int64_t> ilen_;
  std::vector<std::size_t> order_, last_;
  std::vector<std::vector<std::vector<std::int64_t>>> dist_;
  std::vector<std::vector<std::size_t>> comp_;
  std::vector<GroupElement> need_, theta_;
  GraphCurrent best_;
  std::int64_t best_cost_ = 0, ub_ = 0;
  std::uint64_t nodes_ = 0;
  bool found_ = false;
};

}  // namespace detail

/// Exact minimum of sum_e len(e) ||theta(e)||_E over integer currents with
/// boundary k R. Among optima, reports the first one in the search order
/// (edges by decreasing length, multiplicities in lexicographic order), or
/// the shortest-path forest when nothing beats it.
inline GraphMinResult graph_min_mass(const MetricGraph& g, std::int64_t k, const GraphSolveOptions& opt = {}) {
  return detail::GraphSearch(g, k, opt).run();
}

struct ScanRow {
  std::int64_t k = 1;
  Rational mass;        // M(kR)
  Rational homogeneous; // k M(R)
  double ratio = 1;     // M(kR) / (k M(R))
  bool drop = false;    // M(kR) < k M(R)
  std::uint64_t nodes = 0;
  GraphCurrent current;
};

/// Rows k = 1..kmax. Throws if some row violates M(kR) <= k M(R), which
/// would mean the solver missed an optimum.
inline std::vector<ScanRow> homogeneity_scan(const MetricGraph& g, std::int64_t kmax, const GraphSolveOptions& opt = {}) {
  if (kmax < 1) throw InputError("kmax must be at least 1");
  std::vector<ScanRow> rows;
  Rational m1;
  for (std::int64_t k = 1; k <= kmax; ++k) {
    auto r = graph_min_mass(g, k, opt);
    if (k == 1) m1 = r.value;
    ScanRow row;
    row.k = k;
    row.mass = r.value;
    row.homogeneous = m1 * k;
    row.ratio = m1 == 0 ? 1.0 : to_double(r.value / row.homogeneous);
    row.drop = r.value < row.homogeneous;
    row.nodes = r.nodes;
    row.current = std::move(r.current);
    if (r.value > row.homogeneous) {
      throw ConvergenceError("M(" + std::to_string(k) + "R) = " + to_string(r.value) + " exceeds k M(R) = " +
                             to_string(row.homogeneous));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace gcurrents
