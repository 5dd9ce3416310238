#pragma once

// Polyhedral 1-currents with multiplicities in G.
//
// Orientation convention: a segment a->b with multiplicity theta has boundary
// theta*delta_b - theta*delta_a.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "gcurrents/errors.hpp"
#include "gcurrents/geometry.hpp"
#include "gcurrents/group.hpp"

namespace gcurrents {

struct Segment {
  Point a;
  Point b;
  GroupElement theta;

  double length() const { return distance(a, b); }
};

struct Atom {
  Point point;
  GroupElement g;
};

/// A finite sum of Dirac masses with G-valued weights, kept sorted by point
/// with coincident points merged and zero weights dropped.
class Point0Current {
 public:
  Point0Current(GroupSetup setup, double tol = Tolerances{}.geom) : setup_(setup), tol_(tol) {}

  void add(const Point& p, const GroupElement& g) {
    setup_.check(g);
    for (auto it = atoms_.begin(); it != atoms_.end(); ++it) {
      if (approx_equal(it->point, p, tol_)) {
        it->g += g;
        if (it->g.is_zero()) atoms_.erase(it);
        return;
      }
    }
    if (g.is_zero()) return;
    auto pos = std::lower_bound(atoms_.begin(), atoms_.end(), p,
                                [](const Atom& x, const Point& q) { return x.point < q; });
    atoms_.insert(pos, Atom{p, g});
  }

  const GroupSetup& setup() const { return setup_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }

  /// Weight at p, zero if p carries no atom.
  GroupElement at(const Point& p) const {
    for (const auto& a : atoms_) {
      if (approx_equal(a.point, p, tol_)) return a.g;
    }
    return setup_.zero();
  }

  /// Sum of all weights; zero for every boundary.
  GroupElement total() const {
    GroupElement s = setup_.zero();
    for (const auto& a : atoms_) s += a.g;
    return s;
  }

  friend Point0Current operator-(const Point0Current& x, const Point0Current& y) {
    Point0Current r = x;
    for (const auto& a : y.atoms_) r.add(a.point, -a.g);
    return r;
  }

 private:
  GroupSetup setup_;
  double tol_;
  std::vector<Atom> atoms_;
};

/// True when x and y have the same atoms up to point tolerance.
inline bool approx_equal(const Point0Current& x, const Point0Current& y, double tol) {
  if (x.size() != y.size()) return false;
  for (const auto& a : x.atoms()) {
    bool found = false;
    for (const auto& b : y.atoms()) {
      if (approx_equal(a.point, b.point, tol)) {
        if (a.g != b.g) return false;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

/// Sum of atoms g_i * delta_{p_i}; the usual boundary of a Steiner problem.
inline Point0Current terminal_boundary(const GroupSetup& setup, const std::vector<Point>& terminals) {
  if (static_cast<int>(terminals.size()) != setup.terminals()) {
    throw InputError("expected " + std::to_string(setup.terminals()) + " terminals, got " +
                     std::to_string(terminals.size()));
  }
  Point0Current b(setup);
  for (int i = 0; i < setup.terminals(); ++i) b.add(terminals[i], setup.generator(i + 1));
  return b;
}

class PolyCurrent {
 public:
  PolyCurrent(GroupSetup setup, std::size_t dim) : setup_(setup), dim_(dim) {}

  PolyCurrent(GroupSetup setup, std::size_t dim, std::vector<Segment> segments)
      : setup_(setup), dim_(dim) {
    for (auto& s : segments) add(std::move(s));
  }

  void add(Segment s) {
    if (s.a.dim() != dim_ || s.b.dim() != dim_) {
      throw InputError("segment endpoint has dimension " + std::to_string(s.a.dim()) +
                       ", current lives in R^" + std::to_string(dim_));
    }
    setup_.check(s.theta);
    if (s.a == s.b) throw InputError("segment of zero length at " + to_string(s.a));
    if (s.theta.is_zero()) throw InputError("segment with zero multiplicity");
    segments_.push_back(std::move(s));
  }
  void add(Point a, Point b, GroupElement theta) { add(Segment{std::move(a), std::move(b), std::move(theta)}); }

  const GroupSetup& setup() const { return setup_; }
  std::size_t dim() const { return dim_; }
  const std::vector<Segment>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }

  /// Splits every segment at the endpoints of the others, merges coincident
  /// pieces, drops zero multiplicities and orients each piece from its
  /// lexicographically smaller endpoint. Idempotent.
  PolyCurrent canonical(double tol = Tolerances{}.geom) const {
    PointIndex index(tol);
    std::vector<std::pair<std::size_t, std::size_t>> ends;
    ends.reserve(segments_.size());
    for (const auto& s : segments_) ends.emplace_back(index.insert(s.a), index.insert(s.b));

    std::map<std::pair<std::size_t, std::size_t>, GroupElement> pieces;
    auto deposit = [&](std::size_t u, std::size_t w, const GroupElement& theta) {
      if (u == w) return;
      if (index[w] < index[u]) {
        auto [it, fresh] = pieces.try_emplace({w, u}, setup_.zero());
        it->second -= theta;
      } else {
        auto [it, fresh] = pieces.try_emplace({u, w}, setup_.zero());
        it->second += theta;
      }
    };

    for (std::size_t k = 0; k < segments_.size(); ++k) {
      auto [ia, ib] = ends[k];
      if (ia == ib || segments_[k].theta.is_zero()) continue;
      const Point& a = index[ia];
      const Point& b = index[ib];
      Point ab = b - a;
      double len2 = dot(ab, ab);
      std::vector<std::pair<double, std::size_t>> cuts{{0.0, ia}, {1.0, ib}};
      for (std::size_t v = 0; v < index.size(); ++v) {
        if (v == ia || v == ib) continue;
        if (distance_to_segment(index[v], a, b) <= tol) {
          cuts.emplace_back(dot(index[v] - a, ab) / len2, v);
        }
      }
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        deposit(cuts[c].second, cuts[c + 1].second, segments_[k].theta);
      }
    }

    PolyCurrent out(setup_, dim_);
    for (const auto& [key, theta] : pieces) {
      if (!theta.is_zero()) out.segments_.push_back(Segment{index[key.first], index[key.second], theta});
    }
    std::sort(out.segments_.begin(), out.segments_.end(), [](const Segment& x, const Segment& y) {
      if (x.a == y.a) return x.b < y.b;
      return x.a < y.a;
    });
    return out;
  }

  PolyCurrent& operator+=(const PolyCurrent& o) {
    require_compatible(o);
    for (const auto& s : o.segments_) segments_.push_back(s);
    return *this;
  }
  friend PolyCurrent operator+(PolyCurrent x, const PolyCurrent& y) { return x += y; }
  friend PolyCurrent operator-(const PolyCurrent& x) { return x.scaled(-1); }
  friend PolyCurrent operator-(PolyCurrent x, const PolyCurrent& y) { return x += -y; }

  PolyCurrent scaled(std::int64_t k) const {
    PolyCurrent out = *this;
    for (auto& s : out.segments_) s.theta *= k;
    return out;
  }

 private:
  void require_compatible(const PolyCurrent& o) const {
    if (!(o.setup_ == setup_) || o.dim_ != dim_) {
      throw InputError("cannot combine currents with different n or ambient dimension");
    }
  }

  GroupSetup setup_;
  std::size_t dim_;
  std::vector<Segment> segments_;
};

/// Sum over segments of length * ||theta||_E.
inline double mass(const PolyCurrent& t) {
  double m = 0;
  for (const auto& s : t.segments()) {
    m += s.length() * static_cast<double>(norm_e(t.setup(), s.theta));
  }
  return m;
}

/// Mass of the classical current <h_j, T>, j in 1..n-1.
inline double component_mass(const PolyCurrent& t, int j) {
  if (j < 1 || j >= t.setup().terminals()) throw InputError("component index out of range");
  double m = 0;
  for (const auto& s : t.segments()) {
    m += s.length() * static_cast<double>(std::llabs(s.theta[static_cast<std::size_t>(j - 1)]));
  }
  return m;
}

inline Point0Current boundary(const PolyCurrent& t, double tol = Tolerances{}.geom) {
  Point0Current b(t.setup(), tol);
  for (const auto& s : t.segments()) {
    b.add(s.b, s.theta);
    b.add(s.a, -s.theta);
  }
  return b;
}

/// Canonical forms agree up to point tolerance.
inline bool approx_equal(const PolyCurrent& x, const PolyCurrent& y, double tol = Tolerances{}.geom) {
  if (!(x.setup() == y.setup()) || x.dim() != y.dim()) return false;
  PolyCurrent d = (x - y).canonical(tol);
  return d.empty();
}

namespace detail {

struct TreeGraph {
  PointIndex vertices;
  std::vector<std::vector<std::size_t>> adj;
  explicit TreeGraph(double tol) : vertices(tol) {}
};

inline TreeGraph build_tree(const std::vector<std::pair<Point, Point>>& edges, double tol) {
  TreeGraph g(tol);
  std::vector<std::pair<std::size_t, std::size_t>> ids;
  for (const auto& [a, b] : edges) {
    std::size_t u = g.vertices.insert(a);
    std::size_t v = g.vertices.insert(b);
    if (u == v) throw InputError("tree edge of zero length at " + to_string(a));
    ids.emplace_back(u, v);
  }
  g.adj.assign(g.vertices.size(), {});
  for (auto [u, v] : ids) {
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  if (ids.size() + 1 != g.vertices.size()) {
    throw InputError("edge list is not a tree: " + std::to_string(ids.size()) + " edges on " +
                     std::to_string(g.vertices.size()) + " vertices");
  }
  return g;
}

}  // namespace detail

/// The unique current on a tree with the given boundary atoms: the edge from
/// v towards the root carries minus the sum of the atoms in the subtree of v.
inline PolyCurrent tree_current(const GroupSetup& setup,
                                const std::vector<std::pair<Point, Point>>& edges,
                                const std::vector<Atom>& atoms, double tol = Tolerances{}.geom) {
  if (atoms.empty()) throw InputError("tree_current needs at least one boundary atom");
  std::size_t dim = atoms.front().point.dim();
  if (edges.empty()) {
    PolyCurrent empty(setup, dim);
    GroupElement sum = setup.zero();
    for (const auto& a : atoms) {
      if (!approx_equal(a.point, atoms.front().point, tol)) {
        throw InputError("empty tree cannot carry atoms at distinct points");
      }
      sum += a.g;
    }
    if (!sum.is_zero()) throw InputError("boundary atoms do not sum to zero");
    return empty;
  }
  detail::TreeGraph g = detail::build_tree(edges, tol);
  const std::size_t nv = g.vertices.size();
  std::vector<GroupElement> weight(nv, setup.zero());
  GroupElement total = setup.zero();
  for (const auto& a : atoms) {
    setup.check(a.g);
    auto id = g.vertices.find(a.point);
    if (!id) throw InputError("terminal " + to_string(a.point) + " is not a vertex of the tree");
    weight[*id] += a.g;
    total += a.g;
  }
  if (!total.is_zero()) throw InputError("boundary atoms do not sum to zero");

  const std::size_t root = *g.vertices.find(atoms.back().point);
  std::vector<std::size_t> parent(nv, nv), order;
  std::vector<bool> seen(nv, false);
  order.reserve(nv);
  order.push_back(root);
  seen[root] = true;
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t w : g.adj[order[k]]) {
      if (seen[w]) continue;
      seen[w] = true;
      parent[w] = order[k];
      order.push_back(w);
    }
  }
  if (order.size() != nv) throw InputError("edge list is not connected");

  PolyCurrent out(setup, dim);
  for (std::size_t k = order.size(); k-- > 1;) {
    std::size_t v = order[k];
    if (!weight[v].is_zero()) out.add(g.vertices[v], g.vertices[parent[v]], -weight[v]);
    weight[parent[v]] += weight[v];
  }
  return out;
}

/// Routes -g_i from p_i to p_n along the tree, i < n.
inline PolyCurrent canonical_current(const GroupSetup& setup,
                                     const std::vector<std::pair<Point, Point>>& edges,
                                     const std::vector<Point>& terminals,
                                     double tol = Tolerances{}.geom) {
  if (static_cast<int>(terminals.size()) != setup.terminals()) {
    throw InputError("expected " + std::to_string(setup.terminals()) + " terminals, got " +
                     std::to_string(terminals.size()));
  }
  std::vector<Atom> atoms;
  for (int i = 0; i < setup.terminals(); ++i) atoms.push_back({terminals[i], setup.generator(i + 1)});
  return tree_current(setup, edges, atoms, tol);
}

struct DecompositionPart {
  int component = 0;             // j in 1..n-1
  std::int64_t multiplicity = 0; // positive
  std::vector<Point> vertices;   // closed walks repeat the first vertex at the end
  PolyCurrent current;           // multiplicity * g_j along the walk
};

struct Decomposition {
  std::vector<DecompositionPart> paths;
  std::vector<DecompositionPart> cycles;

  PolyCurrent sum(const GroupSetup& setup, std::size_t dim) const {
    PolyCurrent s(setup, dim);
    for (const auto& p : paths) s += p.current;
    for (const auto& c : cycles) s += c.current;
    return s;
  }
};

namespace detail {

struct FlowArc {
  std::size_t from, to;
  std::size_t segment;
  std::int64_t flow;
};

}  // namespace detail

/// Per dual component, extracts injective source-to-sink paths and then
/// cycles from the integer flow <h_j, theta>. Walks start at the
/// lexicographically smallest available vertex and follow the arc to the
/// smallest target; a closed loop met during a walk is peeled off as a cycle.
inline Decomposition decompose(const PolyCurrent& input, double tol = Tolerances{}.geom) {
  const PolyCurrent t = input.canonical(tol);
  const GroupSetup& setup = t.setup();
  PointIndex index(tol);
  for (const auto& s : t.segments()) {
    index.insert(s.a);
    index.insert(s.b);
  }
  const std::size_t nv = index.size();
  std::vector<std::size_t> rank(nv);
  {
    std::vector<std::size_t> order(nv);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return index[x] < index[y]; });
    for (std::size_t r = 0; r < nv; ++r) rank[order[r]] = r;
  }

  Decomposition out;
  for (std::size_t j = 0; j < setup.rank(); ++j) {
    std::vector<detail::FlowArc> arcs;
    std::vector<std::vector<std::size_t>> outgoing(nv);
    std::vector<std::int64_t> excess(nv, 0);  // outflow - inflow
    for (std::size_t k = 0; k < t.size(); ++k) {
      const auto& s = t.segments()[k];
      std::int64_t f = s.theta[j];
      if (f == 0) continue;
      std::size_t u = *index.find(s.a), v = *index.find(s.b);
      if (f < 0) {
        std::swap(u, v);
        f = -f;
      }
      outgoing[u].push_back(arcs.size());
      arcs.push_back({u, v, k, f});
      excess[u] += f;
      excess[v] -= f;
    }
    for (auto& list : outgoing) {
      std::sort(list.begin(), list.end(),
                [&](std::size_t x, std::size_t y) { return rank[arcs[x].to] < rank[arcs[y].to]; });
    }

    GroupElement unit = setup.zero();
    unit[j] = 1;
    auto make_part = [&](const std::vector<std::size_t>& walk_arcs, std::int64_t m, bool closed) {
      DecompositionPart part{static_cast<int>(j + 1), m, {}, PolyCurrent(setup, t.dim())};
      part.vertices.push_back(index[arcs[walk_arcs.front()].from]);
      for (std::size_t a : walk_arcs) {
        arcs[a].flow -= m;
        part.vertices.push_back(index[arcs[a].to]);
        part.current.add(index[arcs[a].from], index[arcs[a].to], unit * m);
      }
      (closed ? out.cycles : out.paths).push_back(std::move(part));
    };
    auto next_arc = [&](std::size_t v) -> std::optional<std::size_t> {
      for (std::size_t a : outgoing[v]) {
        if (arcs[a].flow > 0) return a;
      }
      return std::nullopt;
    };
    auto lex_first = [&](auto pred) -> std::optional<std::size_t> {
      std::optional<std::size_t> best;
      for (std::size_t v = 0; v < nv; ++v) {
        if (pred(v) && (!best || rank[v] < rank[*best])) best = v;
      }
      return best;
    };
    // Walks from `start`; when `to_sink` the walk stops at the first vertex
    // with negative excess, otherwise it runs until it closes a loop.
    auto walk = [&](std::size_t start, bool to_sink) {
      std::vector<std::size_t> stack_v{start}, stack_a;
      std::vector<std::size_t> pos(nv, nv);
      pos[start] = 0;
      while (true) {
        std::size_t v = stack_v.back();
        if (to_sink && stack_v.size() > 1 && excess[v] < 0) {
          std::int64_t m = std::min(excess[start], -excess[v]);
          for (std::size_t a : stack_a) m = std::min(m, arcs[a].flow);
          excess[start] -= m;
          excess[v] += m;
          make_part(stack_a, m, false);
          return;
        }
        auto a = next_arc(v);
        if (!a) throw InputError("flow is not conserved at " + to_string(index[v]));
        std::size_t w = arcs[*a].to;
        if (pos[w] != nv) {
          std::vector<std::size_t> loop(stack_a.begin() + static_cast<std::ptrdiff_t>(pos[w]), stack_a.end());
          loop.push_back(*a);
          std::int64_t m = arcs[loop.front()].flow;
          for (std::size_t x : loop) m = std::min(m, arcs[x].flow);
          make_part(loop, m, true);
          if (!to_sink) return;
          for (std::size_t k = pos[w] + 1; k < stack_v.size(); ++k) pos[stack_v[k]] = nv;
          stack_v.resize(pos[w] + 1);
          stack_a.resize(pos[w]);
          continue;
        }
        pos[w] = stack_v.size();
        stack_v.push_back(w);
        stack_a.push_back(*a);
      }
    };

    while (auto s = lex_first([&](std::size_t v) { return excess[v] > 0; })) walk(*s, true);
    while (auto s = lex_first([&](std::size_t v) { return next_arc(v).has_value(); })) walk(*s, false);
  }
  return out;
}

/// Drops every cycle of the decomposition. Requires the boundary to be
/// sum_i g_i delta_{p_i}, so each component has a single unit path.
inline PolyCurrent acyclic_part(const PolyCurrent& t, double tol = Tolerances{}.geom) {
  const GroupSetup& setup = t.setup();
  Point0Current b = boundary(t, tol);
  for (std::size_t j = 0; j < setup.rank(); ++j) {
    int plus = 0, minus = 0;
    for (const auto& a : b.atoms()) {
      if (a.g[j] == 1) ++plus;
      else if (a.g[j] == -1) ++minus;
      else if (a.g[j] != 0) plus = minus = -100;
    }
    if (plus != 1 || minus != 1) {
      throw InputError("acyclic_part: component " + std::to_string(j + 1) +
                       " of the boundary is not of the form delta_p - delta_q");
    }
  }
  Decomposition d = decompose(t, tol);
  if (d.cycles.empty()) return t.canonical(tol);
  PolyCurrent out(setup, t.dim());
  for (const auto& p : d.paths) out += p.current;
  return out.canonical(tol);
}

}  // namespace gcurrents
