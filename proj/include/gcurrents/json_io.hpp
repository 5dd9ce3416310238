#pragma once

// JSON readers and writers for every file format the tools exchange.
// Readers report the offending field path; rationals travel as "p/q".

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gcurrents/calibration.hpp"
#include "gcurrents/currents.hpp"
#include "gcurrents/errors.hpp"
#include "gcurrents/metric_graph.hpp"
#include "gcurrents/rational.hpp"
#include "gcurrents/steiner.hpp"
#include "gcurrents/transport.hpp"

namespace gcurrents {

using Json = nlohmann::ordered_json;

namespace detail {

inline void line_col(const std::string& text, std::size_t byte, std::size_t& line, std::size_t& col) {
  line = 1;
  col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
}

[[noreturn]] inline void bad(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

inline const Json& field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, "missing field '" + key + "'");
  return *it;
}

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number()) bad(where, "expected a number");
  return j.get<double>();
}

inline std::int64_t integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  return j.get<std::int64_t>();
}

inline const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array");
  return j;
}

inline Point point(const Json& j, const std::string& where, std::size_t dim = 0) {
  array(j, where);
  if (j.empty()) bad(where, "empty coordinate list");
  if (dim && j.size() != dim) bad(where, "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(j.size()));
  Point p(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) p[i] = number(j[i], where + "[" + std::to_string(i) + "]");
  return p;
}

inline GroupElement element(const Json& j, const GroupSetup& setup, const std::string& where) {
  array(j, where);
  if (j.size() != setup.rank()) {
    bad(where, "expected " + std::to_string(setup.rank()) + " integers for n = " + std::to_string(setup.terminals()) +
                   ", got " + std::to_string(j.size()));
  }
  GroupElement g(setup.rank());
  for (std::size_t i = 0; i < j.size(); ++i) g[i] = integer(j[i], where + "[" + std::to_string(i) + "]");
  return g;
}

inline GroupSetup setup_of(const Json& j, const std::string& where) {
  std::int64_t n = integer(field(j, "n", where), where + ".n");
  try {
    return GroupSetup(static_cast<int>(n));
  } catch (const InputError& e) {
    bad(where + ".n", e.what());
  }
}

inline Rational rational(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) bad(where, "expected a rational string such as \"3/2\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const InputError& e) {
    bad(where, e.what());
  }
}

}  // namespace detail

inline Json parse_json(const std::string& text, const std::string& source = "input") {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 0, col = 0;
    detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1, line, col);
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

inline Json to_json(const Point& p) {
  Json j = Json::array();
  for (double x : p.coords()) j.push_back(x);
  return j;
}

inline Json to_json(const GroupElement& g) {
  Json j = Json::array();
  for (auto x : g) j.push_back(x);
  return j;
}

// Points: { "points": [[x, y], ...] }

inline std::vector<Point> points_from_json(const Json& j) {
  const Json& arr = detail::array(detail::field(j, "points", "points file"), "points");
  std::vector<Point> pts;
  for (std::size_t i = 0; i < arr.size(); ++i) pts.push_back(detail::point(arr[i], "points[" + std::to_string(i) + "]", 2));
  return pts;
}

inline Json points_to_json(const std::vector<Point>& pts) {
  Json arr = Json::array();
  for (const auto& p : pts) arr.push_back(to_json(p));
  return Json{{"points", arr}};
}

// Currents: { "n", "d", "segments": [ { "a", "b", "theta" } ] }

inline PolyCurrent current_from_json(const Json& j) {
  const std::string where = "current";
  GroupSetup setup = detail::setup_of(j, where);
  std::int64_t d = detail::integer(detail::field(j, "d", where), "current.d");
  if (d < 1) detail::bad("current.d", "dimension must be positive");
  PolyCurrent t(setup, static_cast<std::size_t>(d));
  const Json& segs = detail::array(detail::field(j, "segments", where), "current.segments");
  for (std::size_t k = 0; k < segs.size(); ++k) {
    std::string at = "current.segments[" + std::to_string(k) + "]";
    Point a = detail::point(detail::field(segs[k], "a", at), at + ".a", static_cast<std::size_t>(d));
    Point b = detail::point(detail::field(segs[k], "b", at), at + ".b", static_cast<std::size_t>(d));
    GroupElement th = detail::element(detail::field(segs[k], "theta", at), setup, at + ".theta");
    try {
      t.add(a, b, th);
    } catch (const InputError& e) {
      detail::bad(at, e.what());
    }
  }
  return t;
}

inline Json current_to_json(const PolyCurrent& t) {
  Json segs = Json::array();
  for (const auto& s : t.segments()) segs.push_back(Json{{"a", to_json(s.a)}, {"b", to_json(s.b)}, {"theta", to_json(s.theta)}});
  return Json{{"n", t.setup().terminals()}, {"d", t.dim()}, {"segments", segs}};
}

// Calibrations: { "n", "cells": [ { "halfplanes": [[a, b, c]], "omega": [[w1, w2]] } ] }

inline PiecewiseForm form_from_json(const Json& j, const std::string& name = "file") {
  const std::string where = "calibration";
  GroupSetup setup = detail::setup_of(j, where);
  const Json& cells = detail::array(detail::field(j, "cells", where), "calibration.cells");
  if (cells.empty()) detail::bad("calibration.cells", "no cells");
  std::vector<Cell> out;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    std::string at = "calibration.cells[" + std::to_string(k) + "]";
    Cell c;
    const Json& hs = detail::array(detail::field(cells[k], "halfplanes", at), at + ".halfplanes");
    for (std::size_t h = 0; h < hs.size(); ++h) {
      std::string hat = at + ".halfplanes[" + std::to_string(h) + "]";
      Point abc = detail::point(hs[h], hat, 3);
      try {
        c.halfplanes.push_back(HalfPlane::make(abc[0], abc[1], abc[2]));
      } catch (const InputError& e) {
        detail::bad(hat, e.what());
      }
    }
    const Json& om = detail::array(detail::field(cells[k], "omega", at), at + ".omega");
    if (om.size() != setup.rank()) {
      detail::bad(at + ".omega", "expected " + std::to_string(setup.rank()) + " rows, got " + std::to_string(om.size()));
    }
    for (std::size_t r = 0; r < om.size(); ++r) {
      Point row = detail::point(om[r], at + ".omega[" + std::to_string(r) + "]", 2);
      c.omega.rows.push_back({row[0], row[1]});
    }
    out.push_back(std::move(c));
  }
  return PiecewiseForm(setup, std::move(out), name);
}

inline Json form_to_json(const PiecewiseForm& f) {
  Json cells = Json::array();
  for (const auto& c : f.cells()) {
    Json hs = Json::array(), om = Json::array();
    for (const auto& h : c.halfplanes) hs.push_back(Json::array({h.a, h.b, h.c}));
    for (const auto& r : c.omega.rows) om.push_back(Json::array({r[0], r[1]}));
    cells.push_back(Json{{"halfplanes", hs}, {"omega", om}});
  }
  return Json{{"n", f.setup().terminals()}, {"cells", cells}};
}

// Graphs: { "n", "vertices": [ { "id", "pos"? } ], "edges": [ { "u", "v", "len" } ],
//           "terminals": [ { "id", "g" } ] }

inline MetricGraph graph_from_json(const Json& j) {
  const std::string where = "graph";
  MetricGraph g(detail::setup_of(j, where));
  auto id_of = [](const Json& x, const std::string& at) {
    if (!x.is_string()) detail::bad(at, "expected a string id");
    return x.get<std::string>();
  };
  const Json& vs = detail::array(detail::field(j, "vertices", where), "graph.vertices");
  for (std::size_t k = 0; k < vs.size(); ++k) {
    std::string at = "graph.vertices[" + std::to_string(k) + "]";
    std::optional<Point> pos;
    if (vs[k].is_object() && vs[k].contains("pos")) pos = detail::point(vs[k]["pos"], at + ".pos", 2);
    try {
      g.add_vertex(id_of(detail::field(vs[k], "id", at), at + ".id"), pos);
    } catch (const InputError& e) {
      detail::bad(at, e.what());
    }
  }
  const Json& es = detail::array(detail::field(j, "edges", where), "graph.edges");
  for (std::size_t k = 0; k < es.size(); ++k) {
    std::string at = "graph.edges[" + std::to_string(k) + "]";
    std::string u = id_of(detail::field(es[k], "u", at), at + ".u");
    std::string v = id_of(detail::field(es[k], "v", at), at + ".v");
    Rational len = detail::rational(detail::field(es[k], "len", at), at + ".len");
    try {
      g.add_edge(u, v, len);
    } catch (const InputError& e) {
      detail::bad(at, e.what());
    }
  }
  const Json& ts = detail::array(detail::field(j, "terminals", where), "graph.terminals");
  for (std::size_t k = 0; k < ts.size(); ++k) {
    std::string at = "graph.terminals[" + std::to_string(k) + "]";
    std::string id = id_of(detail::field(ts[k], "id", at), at + ".id");
    GroupElement el = detail::element(detail::field(ts[k], "g", at), g.setup(), at + ".g");
    try {
      g.set_terminal(id, el);
    } catch (const InputError& e) {
      detail::bad(at, e.what());
    }
  }
  g.validate();
  return g;
}

inline Json graph_to_json(const MetricGraph& g) {
  Json vs = Json::array(), es = Json::array(), ts = Json::array();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    Json x{{"id", g.ids()[v]}};
    if (g.positions()[v]) x["pos"] = to_json(*g.positions()[v]);
    vs.push_back(x);
  }
  for (const auto& e : g.edges()) es.push_back(Json{{"u", g.ids()[e.u]}, {"v", g.ids()[e.v]}, {"len", to_string(e.length)}});
  for (const auto& [v, el] : g.terminals()) ts.push_back(Json{{"id", g.ids()[v]}, {"g", to_json(el)}});
  return Json{{"n", g.setup().terminals()}, {"vertices", vs}, {"edges", es}, {"terminals", ts}};
}

inline Json graph_current_to_json(const MetricGraph& g, const GraphCurrent& c) {
  Json arr = Json::array();
  for (std::size_t e = 0; e < c.theta.size(); ++e) {
    if (c.theta[e].is_zero()) continue;
    arr.push_back(Json{{"u", g.ids()[g.edges()[e].u]}, {"v", g.ids()[g.edges()[e].v]}, {"theta", to_json(c.theta[e])}});
  }
  return arr;
}

inline GraphCurrent graph_current_from_json(const MetricGraph& g, const Json& j) {
  GraphCurrent c{std::vector<GroupElement>(g.edges().size(), g.setup().zero())};
  detail::array(j, "current");
  for (std::size_t k = 0; k < j.size(); ++k) {
    std::string at = "current[" + std::to_string(k) + "]";
    std::size_t u = g.index_of(detail::field(j[k], "u", at).get<std::string>());
    std::size_t v = g.index_of(detail::field(j[k], "v", at).get<std::string>());
    GroupElement th = detail::element(detail::field(j[k], "theta", at), g.setup(), at + ".theta");
    bool placed = false;
    for (std::size_t e = 0; e < g.edges().size() && !placed; ++e) {
      if (g.edges()[e].u == u && g.edges()[e].v == v && c.theta[e].is_zero()) {
        c.theta[e] = th;
        placed = true;
      }
    }
    if (!placed) detail::bad(at, "no free edge from '" + g.ids()[u] + "' to '" + g.ids()[v] + "'");
  }
  return c;
}

// Classical boundaries: { "sources": [ { "x": [..], "mult": int } ], "sinks": [...] }

inline ClassicalBoundary boundary_from_json(const Json& j) {
  ClassicalBoundary b;
  for (const char* side : {"sources", "sinks"}) {
    const Json& arr = detail::array(detail::field(j, side, "boundary"), side);
    auto& out = std::string(side) == "sources" ? b.sources : b.sinks;
    for (std::size_t k = 0; k < arr.size(); ++k) {
      std::string at = std::string(side) + "[" + std::to_string(k) + "]";
      Point x = detail::point(detail::field(arr[k], "x", at), at + ".x");
      std::int64_t m = arr[k].contains("mult") ? detail::integer(arr[k]["mult"], at + ".mult") : 1;
      out.push_back({x, m});
    }
  }
  b.validate();
  return b;
}

inline Json boundary_to_json(const ClassicalBoundary& b) {
  Json j;
  for (const char* side : {"sources", "sinks"}) {
    Json arr = Json::array();
    for (const auto& w : std::string(side) == "sources" ? b.sources : b.sinks) arr.push_back(Json{{"x", to_json(w.x)}, {"mult", w.mult}});
    j[side] = arr;
  }
  return j;
}

inline Json plan_to_json(const SegmentPlan& q) {
  Json arr = Json::array();
  for (const auto& [ij, w] : q.weights) arr.push_back(Json{{"i", ij.first}, {"j", ij.second}, {"k", to_string(w)}});
  return arr;
}

inline SegmentPlan plan_from_json(const Json& j) {
  SegmentPlan q;
  detail::array(j, "plan");
  for (std::size_t k = 0; k < j.size(); ++k) {
    std::string at = "plan[" + std::to_string(k) + "]";
    std::int64_t i = detail::integer(detail::field(j[k], "i", at), at + ".i");
    std::int64_t jj = detail::integer(detail::field(j[k], "j", at), at + ".j");
    if (i < 0 || jj < 0) detail::bad(at, "negative index");
    Rational w = detail::rational(detail::field(j[k], "k", at), at + ".k");
    if (w < 0) detail::bad(at + ".k", "negative weight");
    q.set(static_cast<std::size_t>(i), static_cast<std::size_t>(jj), w);
  }
  return q;
}

// Reports.

inline Json solution_to_json(const SteinerSolution& s) {
  Json vs = Json::array(), es = Json::array();
  for (const auto& p : s.vertices) vs.push_back(to_json(p));
  for (auto [u, v] : s.edges) es.push_back(Json::array({u, v}));
  return Json{{"length", s.length},
              {"topology_index", s.topology_index},
              {"steiner_points", s.steiner_points()},
              {"vertices", vs},
              {"edges", es},
              {"max_angle_deviation", check_angles(s).max_deviation}};
}

inline Json residual_to_json(const ResidualReport& r) {
  return Json{{"condition", r.condition}, {"passed", r.passed}, {"max_residual", r.max_residual}, {"checked", r.checked},
              {"witness", r.witness}};
}

inline Json certificate_to_json(const Certificate& c) {
  Json lb{{"passed", c.lower_bound.passed},
          {"competitors", c.lower_bound.competitors},
          {"pairing_spread", c.lower_bound.pairing_spread},
          {"witness", c.lower_bound.witness}};
  if (c.lower_bound.competitors) {
    lb["min_mass_margin"] = c.lower_bound.min_mass_margin;
    lb["min_competitor_mass"] = c.lower_bound.min_competitor_mass;
  }
  return Json{{"passed", c.passed},
              {"support", residual_to_json(c.support)},
              {"compatibility", residual_to_json(c.compatibility)},
              {"comass", residual_to_json(c.comass)},
              {"mass", c.mass},
              {"pairing", c.pairing},
              {"lower_bound", lb}};
}

inline Json scan_to_json(const MetricGraph& g, const std::vector<ScanRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back(Json{{"k", r.k},
                       {"mass", to_string(r.mass)},
                       {"k_times_m1", to_string(r.homogeneous)},
                       {"ratio", r.ratio},
                       {"strict_drop", r.drop},
                       {"nodes", r.nodes},
                       {"current", graph_current_to_json(g, r.current)}});
  }
  return arr;
}

}  // namespace gcurrents
