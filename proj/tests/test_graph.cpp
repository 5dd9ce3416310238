#include <gtest/gtest.h>

#include <random>

#include "gcurrents/json_io.hpp"
#include "gcurrents/metric_graph.hpp"
#include "oracles.hpp"

using namespace gcurrents;

namespace {

std::string data(const std::string& name) { return std::string(GCUR_DATA_DIR) + "/" + name; }

MetricGraph build(const oracle::TinyGraph& t) {
  const int n = static_cast<int>(t.boundary.front().size()) + 1;
  MetricGraph g{GroupSetup(n)};
  for (std::size_t v = 0; v < t.vertices; ++v) g.add_vertex("v" + std::to_string(v));
  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    g.add_edge("v" + std::to_string(t.edges[e].first), "v" + std::to_string(t.edges[e].second), t.length[e]);
  }
  for (std::size_t v = 0; v < t.vertices; ++v) {
    GroupElement b(t.boundary[v]);
    if (!b.is_zero()) g.set_terminal("v" + std::to_string(v), b);
  }
  return g;
}

// Connected random graph on `nv` vertices with a spanning path plus extras.
oracle::TinyGraph random_graph(std::mt19937_64& rng, std::size_t nv, std::size_t extra) {
  oracle::TinyGraph t;
  t.vertices = nv;
  std::uniform_int_distribution<std::int64_t> len(1, 5);
  std::vector<std::size_t> order(nv);
  for (std::size_t v = 0; v < nv; ++v) order[v] = v;
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t v = 1; v < nv; ++v) t.edges.emplace_back(order[v - 1], order[v]);
  std::uniform_int_distribution<std::size_t> pick(0, nv - 1);
  while (t.edges.size() < nv - 1 + extra) {
    std::size_t a = pick(rng), b = pick(rng);
    if (a != b) t.edges.emplace_back(a, b);
  }
  for (std::size_t e = 0; e < t.edges.size(); ++e) t.length.push_back(len(rng));
  return t;
}

// Terminals g_1, g_2, g_3 = -(g_1 + g_2) at three distinct vertices.
void three_terminals(std::mt19937_64& rng, oracle::TinyGraph& t, std::vector<std::size_t>& where) {
  std::vector<std::size_t> order(t.vertices);
  for (std::size_t v = 0; v < t.vertices; ++v) order[v] = v;
  std::shuffle(order.begin(), order.end(), rng);
  where.assign(order.begin(), order.begin() + 3);
  t.boundary.assign(t.vertices, {0, 0});
  t.boundary[where[0]] = {1, 0};
  t.boundary[where[1]] = {0, 1};
  t.boundary[where[2]] = {-1, -1};
}

}  // namespace

TEST(Graph, SingleEdgeScalesLinearly) {
  MetricGraph g = graph_from_json(read_json_file(data("single_edge.json")));
  auto rows = homogeneity_scan(g, 4);
  for (const auto& r : rows) {
    EXPECT_EQ(r.mass, r.homogeneous);
    EXPECT_FALSE(r.drop);
    EXPECT_DOUBLE_EQ(r.ratio, 1);
    EXPECT_TRUE(has_boundary(g, r.current, r.k));
  }
  EXPECT_EQ(rows.front().mass, Rational(5, 2));
}

TEST(Graph, TriangleGraph) {
  MetricGraph g = graph_from_json(read_json_file(data("triangle_graph.json")));
  auto r = graph_min_mass(g, 1);
  EXPECT_TRUE(has_boundary(g, r.current, 1));
  EXPECT_EQ(graph_mass(g, r.current), r.value);
  EXPECT_EQ(r.value, 2);
}

TEST(Graph, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 15; ++k) {
    auto t = random_graph(rng, 4, 1);
    std::vector<std::size_t> where;
    three_terminals(rng, t, where);
    auto g = build(t);
    auto r = graph_min_mass(g, 1);
    ASSERT_TRUE(has_boundary(g, r.current, 1));
    EXPECT_EQ(r.value, oracle::graph_exhaustive(t, 2));
  }
}

TEST(Graph, UnitBoundaryIsTheGraphSteinerTree) {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 30; ++k) {
    auto t = random_graph(rng, 6, 4);
    std::vector<std::size_t> where;
    three_terminals(rng, t, where);
    auto g = build(t);
    auto r = graph_min_mass(g, 1);
    ASSERT_TRUE(has_boundary(g, r.current, 1));
    EXPECT_EQ(graph_mass(g, r.current), r.value);
    EXPECT_EQ(r.value, oracle::graph_steiner_subsets(t, where));
  }
}

TEST(Graph, DoubledBoundaryBounds) {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 20; ++k) {
    auto t = random_graph(rng, 6, 3);
    std::vector<std::size_t> where;
    three_terminals(rng, t, where);
    auto g = build(t);
    auto d = oracle::graph_distances(t);
    auto one = graph_min_mass(g, 1).value;
    auto two = graph_min_mass(g, 2);
    ASSERT_TRUE(has_boundary(g, two.current, 2));
    EXPECT_LE(two.value, 2 * one);
    // Component j alone must move 2 units from p_j to p_3.
    for (int j = 0; j < 2; ++j) EXPECT_GE(two.value, 2 * d[where[j]][where[2]]);
  }
}

TEST(Graph, HouseDropsAtTwo) {
  MetricGraph g = graph_from_json(read_json_file(data("house.json")));
  auto rows = homogeneity_scan(g, 2);
  EXPECT_EQ(rows[0].mass, 12);
  EXPECT_EQ(rows[1].mass, 23);
  EXPECT_EQ(rows[1].homogeneous, 24);
  EXPECT_TRUE(rows[1].drop);
  for (const auto& r : rows) {
    EXPECT_TRUE(has_boundary(g, r.current, r.k));
    EXPECT_EQ(graph_mass(g, r.current), r.mass);
  }
}

TEST(Graph, StarGapDropsAtTwo) {
  MetricGraph g = graph_from_json(read_json_file(data("star_gap.json")));
  auto rows = homogeneity_scan(g, 2);
  EXPECT_EQ(rows[0].mass, 5);
  EXPECT_EQ(rows[1].mass, 9);
}

TEST(Graph, Errors) {
  MetricGraph g{GroupSetup(2)};
  g.add_vertex("a");
  g.add_vertex("b");
  EXPECT_THROW(g.add_vertex("a"), InputError);
  EXPECT_THROW(g.add_edge("a", "a", 1), InputError);
  EXPECT_THROW(g.add_edge("a", "b", 0), InputError);
  EXPECT_THROW(g.add_edge("a", "zz", 1), InputError);
  g.set_terminal("a", GroupElement{1});
  EXPECT_THROW(g.validate(), InputError);
  g.set_terminal("b", GroupElement{-1});
  EXPECT_THROW(graph_min_mass(g, 1), InputError);  // not connected
}

TEST(Graph, NodeCap) {
  MetricGraph g = graph_from_json(read_json_file(data("house.json")));
  GraphSolveOptions opt;
  opt.node_cap = 10;
  EXPECT_THROW(graph_min_mass(g, 2, opt), ResourceLimitError);
}
