#pragma once

// Minimal SVG writer for trees, plans and graphs. World y points up; the
// viewport is the bounding box padded by 10% on each side.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "gcurrents/currents.hpp"
#include "gcurrents/geometry.hpp"
#include "gcurrents/metric_graph.hpp"
#include "gcurrents/transport.hpp"

namespace gcurrents {

class SvgCanvas {
 public:
  /// `extent` are the points that must be visible.
  explicit SvgCanvas(const std::vector<Point>& extent, double width = 640) : width_(width) {
    if (extent.empty()) throw InputError("nothing to draw");
    xmin_ = xmax_ = extent.front()[0];
    ymin_ = ymax_ = extent.front()[1];
    for (const auto& p : extent) {
      xmin_ = std::min(xmin_, p[0]);
      xmax_ = std::max(xmax_, p[0]);
      ymin_ = std::min(ymin_, p[1]);
      ymax_ = std::max(ymax_, p[1]);
    }
    double span = std::max({xmax_ - xmin_, ymax_ - ymin_, 1e-9});
    double px = 0.1 * std::max(xmax_ - xmin_, 0.1 * span), py = 0.1 * std::max(ymax_ - ymin_, 0.1 * span);
    xmin_ -= px;
    xmax_ += px;
    ymin_ -= py;
    ymax_ += py;
    scale_ = width_ / (xmax_ - xmin_);
    height_ = (ymax_ - ymin_) * scale_;
    unit_ = 0.01 * width_;
  }

  void line(const Point& a, const Point& b, const std::string& color = "#1f4e8c", double stroke = 2) {
    body_ << "<line x1=\"" << x(a) << "\" y1=\"" << y(a) << "\" x2=\"" << x(b) << "\" y2=\"" << y(b)
          << "\" stroke=\"" << color << "\" stroke-width=\"" << stroke << "\"/>\n";
  }
  void dot(const Point& p, const std::string& color = "black", double r = 0) {
    body_ << "<circle cx=\"" << x(p) << "\" cy=\"" << y(p) << "\" r=\"" << (r > 0 ? r : 0.6 * unit_) << "\" fill=\""
          << color << "\"/>\n";
  }
  void label(const Point& p, const std::string& text, const std::string& color = "black", double dx = 0, double dy = 0) {
    body_ << "<text x=\"" << x(p) + dx * unit_ << "\" y=\"" << y(p) - dy * unit_ << "\" font-size=\"" << 2.2 * unit_
          << "\" font-family=\"sans-serif\" fill=\"" << color << "\" text-anchor=\"middle\">" << escape(text)
          << "</text>\n";
  }
  /// Arrow head at the middle of a -> b.
  void arrow(const Point& a, const Point& b, const std::string& color = "#1f4e8c") {
    double ax = x(a), ay = y(a), bx = x(b), by = y(b);
    double len = std::hypot(bx - ax, by - ay);
    if (len <= 0) return;
    double ux = (bx - ax) / len, uy = (by - ay) / len, mx = (ax + bx) / 2, my = (ay + by) / 2, s = 1.2 * unit_;
    body_ << "<polygon points=\"" << mx + s * ux << "," << my + s * uy << " " << mx - s * ux + 0.6 * s * uy << ","
          << my - s * uy - 0.6 * s * ux << " " << mx - s * ux - 0.6 * s * uy << "," << my - s * uy + 0.6 * s * ux
          << "\" fill=\"" << color << "\"/>\n";
  }

  std::string str(const std::string& title = "") const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\"" << height_
        << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n";
    if (!title.empty()) out << "<title>" << escape(title) << "</title>\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" << body_.str() << "</svg>\n";
    return out.str();
  }

 private:
  double x(const Point& p) const { return (p[0] - xmin_) * scale_; }
  double y(const Point& p) const { return (ymax_ - p[1]) * scale_; }
  static std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '<') {
        out += "&lt;";
      } else if (c == '>') {
        out += "&gt;";
      } else if (c == '&') {
        out += "&amp;";
      } else {
        out += c;
      }
    }
    return out;
  }

  double width_, height_ = 0, scale_ = 1, unit_ = 1;
  double xmin_ = 0, xmax_ = 0, ymin_ = 0, ymax_ = 0;
  std::ostringstream body_;
};

/// Terminals p_1..p_n, the support of t and a multiplicity label per segment.
inline std::string svg_current(const std::vector<Point>& terminals, const PolyCurrent& t, const std::string& title = "") {
  std::vector<Point> extent = terminals;
  for (const auto& s : t.segments()) {
    extent.push_back(s.a);
    extent.push_back(s.b);
  }
  SvgCanvas c(extent);
  for (const auto& s : t.segments()) {
    c.line(s.a, s.b);
    c.arrow(s.a, s.b);
    c.label((s.a + s.b) * 0.5, to_string(s.theta), "#8c1f1f", 0, 1.5);
  }
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    c.dot(terminals[i]);
    c.label(terminals[i], "p" + std::to_string(i + 1), "black", 0, 1.8);
  }
  return c.str(title);
}

/// Sources in red, sinks in blue, plan segments weighted by k^{ij}.
inline std::string svg_plan(const ClassicalBoundary& b, const SegmentPlan& q, const std::string& title = "") {
  std::vector<Point> extent;
  for (const auto& w : b.sources) extent.push_back(w.x);
  for (const auto& w : b.sinks) extent.push_back(w.x);
  SvgCanvas c(extent);
  for (const auto& [ij, w] : q.weights) {
    const Point& a = b.sources[ij.first].x;
    const Point& e = b.sinks[ij.second].x;
    c.line(a, e, "#1f4e8c", 1 + to_double(w));
    c.arrow(a, e);
    c.label((a + e) * 0.5, to_string(w), "#1f4e8c", 0, 1.5);
  }
  for (const auto& w : b.sources) {
    c.dot(w.x, "#c0392b");
    c.label(w.x, "-" + std::to_string(w.mult), "#c0392b", 0, 1.8);
  }
  for (const auto& w : b.sinks) {
    c.dot(w.x, "#2471a3");
    c.label(w.x, "+" + std::to_string(w.mult), "#2471a3", 0, 1.8);
  }
  return c.str(title);
}

/// Vertices without a position are placed on a circle.
inline std::string svg_graph(const MetricGraph& g, const GraphCurrent& cur, const std::string& title = "") {
  const std::size_t nv = g.vertex_count();
  std::vector<Point> at(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    double a = 2 * M_PI * static_cast<double>(v) / static_cast<double>(std::max<std::size_t>(nv, 1));
    at[v] = g.positions()[v] ? *g.positions()[v] : Point{std::cos(a), std::sin(a)};
  }
  SvgCanvas c(at);
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto& edge = g.edges()[e];
    bool used = e < cur.theta.size() && !cur.theta[e].is_zero();
    c.line(at[edge.u], at[edge.v], used ? "#1f4e8c" : "#bbbbbb", used ? 2.5 : 1);
    Point mid = (at[edge.u] + at[edge.v]) * 0.5;
    c.label(mid, to_string(edge.length), "#777777", 0, -2.5);
    if (used) {
      c.arrow(at[edge.u], at[edge.v]);
      c.label(mid, to_string(cur.theta[e]), "#8c1f1f", 0, 1.5);
    }
  }
  for (std::size_t v = 0; v < nv; ++v) {
    bool term = !g.terminal(v).is_zero();
    c.dot(at[v], term ? "black" : "#777777");
    c.label(at[v], g.ids()[v], "black", 0, 1.8);
  }
  return c.str(title);
}

}  // namespace gcurrents
