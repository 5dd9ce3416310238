#pragma once

// Piecewise-constant E*-valued 1-forms on convex polygonal partitions of the
// plane, and the three checks that make such a form a calibration:
//   (i)   <omega; tau, theta> = ||theta||_E on the support of T,
//   (ii)  (omega_r - omega_s)(tau, .) = 0 along every shared edge,
//   (iii) comass(omega) <= 1 everywhere.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gcurrents/currents.hpp"
#include "gcurrents/errors.hpp"
#include "gcurrents/geometry.hpp"
#include "gcurrents/group.hpp"

namespace gcurrents {

/// omega^j = rows[j][0] dx_1 + rows[j][1] dx_2, j = 1..n-1.
struct ECovector1 {
  std::vector<std::array<double, 2>> rows;

  std::size_t size() const { return rows.size(); }

  /// The E*-vector omega(tau, .) in coordinates over h_1..h_{n-1}.
  std::vector<double> apply(const Point& tau) const {
    std::vector<double> w(rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j) w[j] = rows[j][0] * tau[0] + rows[j][1] * tau[1];
    return w;
  }

  friend ECovector1 operator-(const ECovector1& x, const ECovector1& y) {
    if (x.size() != y.size()) throw InputError("covectors with different row counts");
    ECovector1 d = x;
    for (std::size_t j = 0; j < d.size(); ++j) {
      d.rows[j][0] -= y.rows[j][0];
      d.rows[j][1] -= y.rows[j][1];
    }
    return d;
  }
  ECovector1 scaled(double s) const {
    ECovector1 out = *this;
    for (auto& r : out.rows) r = {r[0] * s, r[1] * s};
    return out;
  }
};

namespace detail {

inline void check_covector(const GroupSetup& setup, const ECovector1& omega) {
  if (omega.size() != setup.rank()) {
    throw InputError("covector has " + std::to_string(omega.size()) + " rows, expected " +
                     std::to_string(setup.rank()));
  }
  for (const auto& r : omega.rows) {
    if (!std::isfinite(r[0]) || !std::isfinite(r[1])) throw InputError("covector entry is not finite");
  }
}

inline Point unit_tangent(const Point& tau, double tol) {
  if (tau.dim() != 2) throw InputError("tangent must be a planar vector");
  if (std::abs(norm(tau) - 1) > tol) throw InputError("tangent " + to_string(tau) + " is not a unit vector");
  return tau;
}

}  // namespace detail

/// sum_j v_j (omega_{j,1} tau_1 + omega_{j,2} tau_2).
inline double evaluate(const GroupSetup& setup, const ECovector1& omega, const Point& tau, const EVector& v,
                       double tol = Tolerances{}.calib) {
  detail::check_covector(setup, omega);
  setup.check(v);
  auto w = omega.apply(detail::unit_tangent(tau, tol));
  double s = 0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * to_double(v[j]);
  return s;
}

inline double evaluate(const GroupSetup& setup, const ECovector1& omega, const Point& tau, const GroupElement& g,
                       double tol = Tolerances{}.calib) {
  return evaluate(setup, omega, tau, embed(g), tol);
}

struct ComassValue {
  double value = 0;
  GroupElement attained_at;  // extreme point realizing the maximum
};

/// max over extreme points g of |(sum_j g_j omega_{j,1}, sum_j g_j omega_{j,2})|.
inline ComassValue comass_attained(const GroupSetup& setup, const ECovector1& omega) {
  detail::check_covector(setup, omega);
  ComassValue best{-1, setup.zero()};
  for (const auto& g : extreme_points(setup)) {
    double x = 0, y = 0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      x += static_cast<double>(g[j]) * omega.rows[j][0];
      y += static_cast<double>(g[j]) * omega.rows[j][1];
    }
    double len = std::hypot(x, y);
    if (len > best.value) best = {len, g};
  }
  return best;
}

inline double comass(const GroupSetup& setup, const ECovector1& omega) {
  return comass_attained(setup, omega).value;
}

/// a x + b y <= c, stored with (a, b) normalized.
struct HalfPlane {
  double a = 0, b = 0, c = 0;

  static HalfPlane make(double a, double b, double c) {
    double len = std::hypot(a, b);
    if (!(len > 0)) throw InputError("half-plane with zero normal");
    if (std::abs(len - 1) < 1e-15) return {a, b, c};  // keeps written files stable
    return {a / len, b / len, c / len};
  }
  double excess(const Point& p) const { return a * p[0] + b * p[1] - c; }
};

struct Cell {
  std::vector<HalfPlane> halfplanes;  // empty means the whole plane
  ECovector1 omega;

  bool contains(const Point& p, double tol) const {
    return std::all_of(halfplanes.begin(), halfplanes.end(), [&](const HalfPlane& h) { return h.excess(p) <= tol; });
  }
};

struct Box {
  double xmin = 0, ymin = 0, xmax = 0, ymax = 0;

  std::vector<Point> polygon() const { return {{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}}; }
  double area() const { return (xmax - xmin) * (ymax - ymin); }
};

/// Bounding box of the points, doubled about its centre.
inline Box doubled_bounding_box(const std::vector<Point>& pts) {
  if (pts.empty()) throw InputError("bounding box of no points");
  Box b{pts[0][0], pts[0][1], pts[0][0], pts[0][1]};
  for (const auto& p : pts) {
    b.xmin = std::min(b.xmin, p[0]);
    b.xmax = std::max(b.xmax, p[0]);
    b.ymin = std::min(b.ymin, p[1]);
    b.ymax = std::max(b.ymax, p[1]);
  }
  double hx = std::max(b.xmax - b.xmin, 1e-6), hy = std::max(b.ymax - b.ymin, 1e-6);
  double cx = (b.xmin + b.xmax) / 2, cy = (b.ymin + b.ymax) / 2;
  return {cx - hx, cy - hy, cx + hx, cy + hy};
}

namespace detail {

inline std::vector<Point> clip(const std::vector<Point>& poly, const HalfPlane& h) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % poly.size()];
    double ep = h.excess(p), eq = h.excess(q);
    if (ep <= 0) out.push_back(p);
    if ((ep < 0 && eq > 0) || (ep > 0 && eq < 0)) out.push_back(p + (ep / (ep - eq)) * (q - p));
  }
  return out;
}

inline double area(const std::vector<Point>& poly) {
  double s = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) s += cross2(poly[i], poly[(i + 1) % poly.size()]);
  return std::abs(s) / 2;
}

}  // namespace detail

struct SharedEdge {
  std::size_t r = 0, s = 0;  // r < s
  Point a, b;
};

/// A constant covector on each cell of a convex partition of the plane.
class PiecewiseForm {
 public:
  PiecewiseForm(GroupSetup setup, std::vector<Cell> cells, std::string name = {})
      : setup_(setup), cells_(std::move(cells)), name_(std::move(name)) {
    if (cells_.empty()) throw InputError("a form needs at least one cell");
    for (const auto& c : cells_) detail::check_covector(setup_, c.omega);
  }

  const GroupSetup& setup() const { return setup_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::string& name() const { return name_; }

  /// Index of the first cell whose closure contains p.
  std::optional<std::size_t> cell_of(const Point& p, double tol) const {
    for (std::size_t k = 0; k < cells_.size(); ++k) {
      if (cells_[k].contains(p, tol)) return k;
    }
    return std::nullopt;
  }

  /// Each cell clipped to the box.
  std::vector<std::vector<Point>> clipped(const Box& box) const {
    std::vector<std::vector<Point>> out;
    for (const auto& c : cells_) {
      auto poly = box.polygon();
      for (const auto& h : c.halfplanes) poly = detail::clip(poly, h);
      out.push_back(std::move(poly));
    }
    return out;
  }

  /// Throws InputError if the cells leave gaps in the box or overlap.
  void validate_partition(const Box& box, double tol) const {
    auto polys = clipped(box);
    double total = 0;
    for (const auto& p : polys) total += p.size() >= 3 ? detail::area(p) : 0;
    const double slack = tol * std::max(1.0, box.area());
    for (std::size_t r = 0; r < cells_.size(); ++r) {
      for (std::size_t s = r + 1; s < cells_.size(); ++s) {
        auto inter = polys[r];
        for (const auto& h : cells_[s].halfplanes) inter = detail::clip(inter, h);
        double a = inter.size() >= 3 ? detail::area(inter) : 0;
        if (a > slack) {
          throw InputError("malformed partition: cells " + std::to_string(r + 1) + " and " + std::to_string(s + 1) +
                           " overlap with area " + std::to_string(a));
        }
      }
    }
    if (std::abs(total - box.area()) > slack) {
      throw InputError("malformed partition: cells cover area " + std::to_string(total) + " of a box of area " +
                       std::to_string(box.area()));
    }
  }

  /// Pieces of cell boundaries shared by two cells, inside the box.
  std::vector<SharedEdge> shared_edges(const Box& box, double tol) const {
    auto polys = clipped(box);
    std::vector<SharedEdge> out;
    const double diam = std::hypot(box.xmax - box.xmin, box.ymax - box.ymin);
    for (std::size_t r = 0; r < polys.size(); ++r) {
      const auto& poly = polys[r];
      if (poly.size() < 3) continue;
      for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % poly.size()];
        double len = distance(a, b);
        if (len <= tol) continue;
        std::vector<double> cuts{0.0, 1.0};
        for (const auto& other : polys) {
          for (const auto& v : other) {
            if (distance_to_segment(v, a, b) <= tol) cuts.push_back(dot(v - a, b - a) / (len * len));
          }
        }
        std::sort(cuts.begin(), cuts.end());
        Point tangent = (b - a) / len;
        Point outward{tangent[1], -tangent[0]};
        if (cells_[r].contains(midpoint(a, b) + (1e-6 * diam) * outward, 0)) {
          outward = outward * -1.0;
        }
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
          if ((cuts[c + 1] - cuts[c]) * len <= tol) continue;
          Point pa = a + cuts[c] * (b - a), pb = a + cuts[c + 1] * (b - a);
          Point probe = midpoint(pa, pb) + (1e-6 * diam) * outward;
          if (probe[0] < box.xmin || probe[0] > box.xmax || probe[1] < box.ymin || probe[1] > box.ymax) continue;
          for (std::size_t s = 0; s < cells_.size(); ++s) {
            if (s == r || !cells_[s].contains(probe, 0)) continue;
            if (r < s) out.push_back({r, s, pa, pb});
            break;
          }
        }
      }
    }
    return out;
  }

 private:
  static Point midpoint(const Point& a, const Point& b) { return (a + b) * 0.5; }

  GroupSetup setup_;
  std::vector<Cell> cells_;
  std::string name_;
};

struct CellSegment {
  Segment segment;
  std::size_t cell = 0;
};

/// Cuts every segment where it crosses a cell boundary line and assigns each
/// piece to the cell containing its midpoint.
inline std::vector<CellSegment> split_along_cells(const PiecewiseForm& form, const PolyCurrent& t,
                                                  double tol = Tolerances{}.geom) {
  if (!(t.setup() == form.setup())) throw InputError("form and current have different n");
  if (t.dim() != 2) throw InputError("calibration checks are planar");
  std::vector<CellSegment> out;
  for (const auto& s : t.segments()) {
    Point d = s.b - s.a;
    double len = norm(d);
    if (len <= tol) continue;
    std::vector<double> cuts{0.0, 1.0};
    for (const auto& c : form.cells()) {
      for (const auto& h : c.halfplanes) {
        double ea = h.excess(s.a), eb = h.excess(s.b);
        if ((ea < -tol && eb > tol) || (ea > tol && eb < -tol)) cuts.push_back(ea / (ea - eb));
      }
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      if ((cuts[k + 1] - cuts[k]) * len <= tol) continue;
      Point a = s.a + cuts[k] * d, b = s.a + cuts[k + 1] * d;
      auto cell = form.cell_of((a + b) * 0.5, tol);
      if (!cell) throw InputError("point " + to_string((a + b) * 0.5) + " lies in no cell");
      out.push_back({Segment{a, b, s.theta}, *cell});
    }
  }
  return out;
}

/// <T, omega> = sum over pieces of length * <omega_cell; tau, theta>.
inline double pairing(const PiecewiseForm& form, const PolyCurrent& t, double tol = Tolerances{}.geom) {
  double total = 0;
  for (const auto& cs : split_along_cells(form, t, tol)) {
    double len = cs.segment.length();
    Point tau = (cs.segment.b - cs.segment.a) / len;
    total += len * evaluate(form.setup(), form.cells()[cs.cell].omega, tau, cs.segment.theta, 1e-6);
  }
  return total;
}

struct ResidualReport {
  std::string condition;
  bool passed = true;
  double max_residual = 0;
  std::size_t checked = 0;
  std::string witness;
};

/// Condition (i). Every segment must already lie in the closure of one cell.
inline ResidualReport check_support(const PiecewiseForm& form, const PolyCurrent& t, const Tolerances& tol = {}) {
  if (!(t.setup() == form.setup())) throw InputError("form and current have different n");
  ResidualReport rep{"support", true, 0, 0, {}};
  for (const auto& s : t.segments()) {
    std::optional<std::size_t> cell;
    for (std::size_t k = 0; k < form.cells().size() && !cell; ++k) {
      const auto& c = form.cells()[k];
      if (c.contains(s.a, tol.geom) && c.contains(s.b, tol.geom)) cell = k;
    }
    if (!cell) {
      throw InputError("segment " + to_string(s.a) + " -> " + to_string(s.b) +
                       " crosses a cell boundary; split it along the cells first");
    }
    double len = s.length();
    if (len <= tol.geom) continue;
    Point tau = (s.b - s.a) / len;
    double value = evaluate(form.setup(), form.cells()[*cell].omega, tau, s.theta, 1e-6);
    double r = std::abs(value - static_cast<double>(norm_e(form.setup(), s.theta)));
    ++rep.checked;
    if (r > rep.max_residual) {
      rep.max_residual = r;
      rep.witness = "segment " + to_string(s.a) + " -> " + to_string(s.b) + " theta " + to_string(s.theta) +
                    " in cell " + std::to_string(*cell + 1) + ": pairing " + std::to_string(value);
    }
  }
  rep.passed = rep.max_residual < tol.calib;
  return rep;
}

/// Condition (ii) on the shared edges inside `box`.
inline ResidualReport check_compatibility(const PiecewiseForm& form, const Box& box, const Tolerances& tol = {}) {
  form.validate_partition(box, 1e-9);
  ResidualReport rep{"compatibility", true, 0, 0, {}};
  for (const auto& e : form.shared_edges(box, tol.geom)) {
    Point tau = (e.b - e.a) / distance(e.a, e.b);
    auto jump = (form.cells()[e.r].omega - form.cells()[e.s].omega).apply(tau);
    ++rep.checked;
    for (std::size_t j = 0; j < jump.size(); ++j) {
      if (std::abs(jump[j]) > rep.max_residual) {
        rep.max_residual = std::abs(jump[j]);
        rep.witness = "cells " + std::to_string(e.r + 1) + "/" + std::to_string(e.s + 1) + " along " +
                      to_string(e.a) + " -> " + to_string(e.b) + ", component " + std::to_string(j + 1);
      }
    }
  }
  rep.passed = rep.max_residual < tol.calib;
  return rep;
}

/// Condition (iii); the residual is max(0, comass - 1).
inline ResidualReport check_comass(const PiecewiseForm& form, const Tolerances& tol = {}) {
  ResidualReport rep{"comass", true, 0, 0, {}};
  double worst = -1;
  for (std::size_t k = 0; k < form.cells().size(); ++k) {
    auto c = comass_attained(form.setup(), form.cells()[k].omega);
    ++rep.checked;
    if (c.value > worst) {
      worst = c.value;
      rep.witness = "cell " + std::to_string(k + 1) + ": comass " + std::to_string(c.value) + " at " +
                    to_string(c.attained_at);
    }
  }
  rep.max_residual = std::max(0.0, worst - 1);
  rep.passed = rep.max_residual <= tol.calib;
  return rep;
}

/// Consequence of a valid calibration checked on competitors T' with the
/// same boundary: the pairing does not depend on T' and bounds its mass.
struct LowerBoundReport {
  bool passed = true;
  std::size_t competitors = 0;
  double pairing_spread = 0;    // max |<T', omega> - <T, omega>|
  double min_mass_margin = std::numeric_limits<double>::infinity();  // min mass(T') - <T', omega>
  double min_competitor_mass = std::numeric_limits<double>::infinity();
  std::string witness;
};

struct Certificate {
  bool passed = false;
  ResidualReport support, compatibility, comass;
  double mass = 0;
  double pairing = 0;
  LowerBoundReport lower_bound;
};

/// Runs (i), (ii) and (iii) for T; the certificate passes iff all three do.
/// Competitors, if any, feed the lower-bound report.
inline Certificate verify_calibration(const PiecewiseForm& form, const PolyCurrent& t,
                                      const std::vector<PolyCurrent>& competitors = {}, const Tolerances& tol = {}) {
  if (!(t.setup() == form.setup())) {
    throw InputError("form has n = " + std::to_string(form.setup().terminals()) + ", current has n = " +
                     std::to_string(t.setup().terminals()));
  }
  if (t.dim() != 2) throw InputError("calibration checks are planar");
  const PolyCurrent canon = t.canonical(tol.geom);
  std::vector<Point> pts;
  for (const auto& s : canon.segments()) {
    pts.push_back(s.a);
    pts.push_back(s.b);
  }
  if (pts.empty()) throw InputError("empty current");
  Box box = doubled_bounding_box(pts);

  PolyCurrent pieces(t.setup(), 2);
  for (const auto& cs : split_along_cells(form, canon, tol.geom)) pieces.add(cs.segment);

  Certificate cert;
  cert.support = check_support(form, pieces, tol);
  cert.compatibility = check_compatibility(form, box, tol);
  cert.comass = check_comass(form, tol);
  cert.passed = cert.support.passed && cert.compatibility.passed && cert.comass.passed;
  cert.mass = mass(canon);
  cert.pairing = pairing(form, canon, tol.geom);

  const Point0Current b = boundary(canon, tol.geom);
  auto& lb = cert.lower_bound;
  for (std::size_t k = 0; k < competitors.size(); ++k) {
    const auto& c = competitors[k];
    if (!approx_equal(boundary(c, 1e-7), b, 1e-7)) {
      throw InputError("competitor " + std::to_string(k + 1) + " has a different boundary");
    }
    double m = mass(c.canonical(tol.geom));
    double p = pairing(form, c, tol.geom);
    ++lb.competitors;
    lb.min_competitor_mass = std::min(lb.min_competitor_mass, m);
    double spread = std::abs(p - cert.pairing);
    if (spread > lb.pairing_spread) lb.pairing_spread = spread;
    if (m - p < lb.min_mass_margin) lb.min_mass_margin = m - p;
    double slack = tol.calib * std::max(1.0, m);
    if ((spread > slack || m - p < -slack || m < cert.mass - slack) && lb.witness.empty()) {
      lb.passed = false;
      lb.witness = "competitor " + std::to_string(k + 1) + ": mass " + std::to_string(m) + ", pairing " +
                   std::to_string(p);
    }
  }
  return cert;
}

}  // namespace gcurrents
