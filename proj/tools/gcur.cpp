// gcur: command-line front end.
//
//   gcur solve points.json [--svg tree.svg]
//   gcur verify triangle current.json
//   gcur graph data/house.json --kmax 3 [--node-cap N]
//   gcur baseline data/square_alternating.json --svg plan.svg
//   gcur axioms
//
// Exit status: 0 pass, 1 fail, 2 input error, 3 resource cap.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gcurrents/gcurrents.hpp"

using namespace gcurrents;

namespace {

struct Options {
  Tolerances tol;
  std::string json_path, svg_path;
  std::string input, current;
  std::int64_t kmax = 2;
  std::size_t competitors = 100;
  int n = 0;
  std::size_t samples = 2000;
  std::uint64_t node_cap = GraphSolveOptions{}.node_cap;
};

int emit(const Options& o, const Json& out, const std::string& summary) {
  if (o.json_path.empty()) {
    std::cout << out.dump(2) << "\n";
  } else {
    write_text_file(o.json_path, out.dump(2) + "\n");
    std::cout << summary << "\n";
  }
  return out.value("passed", true) ? 0 : 1;
}

void svg(const Options& o, const std::string& text) {
  if (!o.svg_path.empty()) write_text_file(o.svg_path, text);
}

int cmd_solve(const Options& o) {
  auto pts = points_from_json(read_json_file(o.input));
  auto res = solve_steiner(pts, o.tol);
  GroupSetup setup(static_cast<int>(pts.size()));
  PolyCurrent t = canonical_current(setup, res.best().segments(), pts, o.tol.geom);
  Json optima = Json::array();
  for (const auto& s : res.optima) optima.push_back(solution_to_json(s));
  Json out{{"command", "solve"},
           {"n", pts.size()},
           {"length", res.length()},
           {"mst_length", mst_length(pts)},
           {"topologies", res.topologies},
           {"optima", optima},
           {"current", current_to_json(t)},
           {"mass", mass(t)}};
  svg(o, svg_current(pts, t, "Steiner tree, length " + std::to_string(res.length())));
  return emit(o, out, "length " + std::to_string(res.length()) + ", " + std::to_string(res.optima.size()) + " optimal tree(s)");
}

/// Reads p_i off a boundary of the form sum_i g_i delta_{p_i}, if it has it.
std::optional<std::vector<Point>> terminals_of(const PolyCurrent& t, double tol) {
  const auto& setup = t.setup();
  auto b = boundary(t, tol);
  if (static_cast<int>(b.size()) != setup.terminals()) return std::nullopt;
  std::vector<std::optional<Point>> found(static_cast<std::size_t>(setup.terminals()));
  for (const auto& a : b.atoms()) {
    for (int i = 1; i <= setup.terminals(); ++i) {
      if (a.g == setup.generator(i)) found[static_cast<std::size_t>(i - 1)] = a.point;
    }
  }
  std::vector<Point> out;
  for (const auto& p : found) {
    if (!p) return std::nullopt;
    out.push_back(*p);
  }
  return out;
}

int cmd_verify(const Options& o) {
  std::optional<PiecewiseForm> form;
  for (const auto& name : builtin_names()) {
    if (o.input == name) form = builtin_instance(name).form;
  }
  if (!form) form = form_from_json(read_json_file(o.input), o.input);
  Json cj = read_json_file(o.current);
  PolyCurrent t = current_from_json(cj.contains("current") ? cj["current"] : cj);
  if (!(t.setup() == form->setup())) {
    throw InputError("calibration has n = " + std::to_string(form->setup().terminals()) + " but the current has n = " +
                     std::to_string(t.setup().terminals()));
  }
  std::vector<PolyCurrent> family;
  const PolyCurrent canon = t.canonical(o.tol.geom);
  if (auto terms = terminals_of(canon, o.tol.geom)) {
    std::vector<std::pair<Point, Point>> tree;
    for (const auto& s : canon.segments()) tree.emplace_back(s.a, s.b);
    family = generate_competitors(t.setup(), *terms, tree, o.competitors);
  }
  Certificate c = verify_calibration(*form, t, family, o.tol);
  Json out = certificate_to_json(c);
  out["passed"] = c.passed && c.lower_bound.passed;
  out["form"] = form->name();
  return emit(o, out, std::string(c.passed ? "PASS" : "FAIL") + ": mass " + std::to_string(c.mass) + ", pairing " +
                          std::to_string(c.pairing));
}

int cmd_graph(const Options& o) {
  MetricGraph g = graph_from_json(read_json_file(o.input));
  auto rows = homogeneity_scan(g, o.kmax, GraphSolveOptions{o.node_cap});
  Json drops = Json::array();
  const ScanRow* shown = &rows.front();
  for (const auto& r : rows) {
    if (r.drop) {
      drops.push_back(r.k);
      if (shown->k == 1) shown = &r;
    }
  }
  Json out{{"command", "graph"}, {"kmax", o.kmax}, {"rows", scan_to_json(g, rows)}, {"strict_drops", drops}};
  svg(o, svg_graph(g, shown->current, "M(" + std::to_string(shown->k) + "R) = " + to_string(shown->mass)));
  std::string summary = "M(R) = " + to_string(rows.front().mass);
  for (const auto& r : rows) {
    if (r.drop) summary += ", M(" + std::to_string(r.k) + "R) = " + to_string(r.mass) + " < " + to_string(r.homogeneous);
  }
  return emit(o, out, summary);
}

int cmd_baseline(const Options& o) {
  ClassicalBoundary b = boundary_from_json(read_json_file(o.input));
  TransportResult real = transport_min(b);
  IntegerizeResult integral = integerize(b, real.plan);
  double int_mass = plan_mass(b, integral.plan);
  bool equal = std::abs(int_mass - real.value) <= o.tol.geom * std::max(1.0, real.value);
  std::size_t pieces = plan_components(b, integral.plan, o.tol.geom);
  Json out{{"command", "baseline"},
           {"real_min", real.value},
           {"integer_min", int_mass},
           {"equal", equal},
           {"cycles_cancelled", integral.cycles},
           {"plan", plan_to_json(integral.plan)},
           {"support_components", pieces},
           {"connected", pieces == 1}};
  PointIndex idx(o.tol.geom);
  for (const auto& w : b.sources) idx.insert(w.x);
  for (const auto& w : b.sinks) idx.insert(w.x);
  if (idx.size() >= 2 && idx.size() <= 8 && b.sources.front().x.dim() == 2) {
    double steiner = solve_steiner(idx.points(), o.tol).length();
    out["steiner_length"] = steiner;
    out["below_steiner"] = real.value < steiner - o.tol.geom;
  }
  out["passed"] = equal;
  svg(o, svg_plan(b, integral.plan, "classical minimum " + std::to_string(real.value)));
  return emit(o, out, "real " + std::to_string(real.value) + ", integer " + std::to_string(int_mass) + ", " +
                          std::to_string(pieces) + " component(s)");
}

int cmd_axioms(const Options& o) {
  Json reports = Json::array();
  bool all = true;
  int lo = o.n ? o.n : 2, hi = o.n ? o.n : 7;
  for (int n = lo; n <= hi; ++n) {
    AxiomReport r = check_axioms(GroupSetup(n), o.samples);
    all = all && r.passed;
    Json rs = Json::array();
    for (const auto& a : r.results) {
      rs.push_back(Json{{"axiom", a.axiom}, {"passed", a.passed}, {"checked", a.checked}, {"witness", a.witness}});
    }
    reports.push_back(Json{{"n", n}, {"passed", r.passed}, {"results", rs}});
  }
  Json out{{"command", "axioms"}, {"passed", all}, {"reports", reports}};
  return emit(o, out, all ? "all axioms hold" : "axiom failure");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group-valued currents, Steiner trees and calibrations"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Options o;
  app.add_option("--tol-geom", o.tol.geom, "point identification tolerance")->check(CLI::PositiveNumber);
  app.add_option("--tol-calib", o.tol.calib, "calibration residual tolerance")->check(CLI::PositiveNumber);
  app.add_option("--json", o.json_path, "write the JSON report here instead of stdout");

  auto* solve = app.add_subcommand("solve", "Steiner tree and canonical current for a points file");
  solve->add_option("points", o.input)->required();
  solve->add_option("--svg", o.svg_path, "draw the tree");

  auto* verify = app.add_subcommand("verify", "check a calibration against a current");
  verify->add_option("form", o.input, "calibration file or one of: triangle, square, hexagon7")->required();
  verify->add_option("current", o.current, "current file (or the output of solve)")->required();
  verify->add_option("--competitors", o.competitors, "random competitors for the lower-bound report");

  auto* graph = app.add_subcommand("graph", "scan M(kR) against k M(R) on a metric graph");
  graph->add_option("graph", o.input)->required();
  graph->add_option("--kmax", o.kmax, "largest k")->check(CLI::PositiveNumber);
  graph->add_option("--svg", o.svg_path, "draw the first k with M(kR) < k M(R), else k = 1");
  graph->add_option("--node-cap", o.node_cap, "branch-and-bound node limit per k")->check(CLI::PositiveNumber);

  auto* baseline = app.add_subcommand("baseline", "classical real and integer minimum for point masses");
  baseline->add_option("boundary", o.input)->required();
  baseline->add_option("--svg", o.svg_path, "draw the integral plan");

  auto* axioms = app.add_subcommand("axioms", "check the norm axioms for n = 2..7");
  axioms->add_option("--n", o.n, "only this n")->check(CLI::Range(2, GroupSetup::kMaxTerminals));
  axioms->add_option("--samples", o.samples, "random pairs for the truncation axiom")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*solve) return cmd_solve(o);
    if (*verify) return cmd_verify(o);
    if (*graph) return cmd_graph(o);
    if (*baseline) return cmd_baseline(o);
    return cmd_axioms(o);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const ConvergenceError& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
