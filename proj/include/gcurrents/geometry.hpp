#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gcurrents/errors.hpp"

namespace gcurrents {

/// Numerical tolerances shared by the geometric modules.
struct Tolerances {
  double geom = 1e-9;    // point identification, length units
  double angle = 1e-7;   // 120-degree test on unit-vector dot products
  double calib = 1e-7;   // calibration residuals
  int max_iter = 100000; // Fermat relocation sweeps
};

/// A point (or vector) of R^d.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim) : x_(dim, 0.0) {}
  Point(std::initializer_list<double> init) : x_(init) {}
  explicit Point(std::vector<double> x) : x_(std::move(x)) {}

  std::size_t dim() const { return x_.size(); }
  double& operator[](std::size_t i) { return x_[i]; }
  double operator[](std::size_t i) const { return x_[i]; }
  const std::vector<double>& coords() const { return x_; }

  Point& operator+=(const Point& o) {
    require_dim(o);
    for (std::size_t i = 0; i < x_.size(); ++i) x_[i] += o.x_[i];
    return *this;
  }
  Point& operator-=(const Point& o) {
    require_dim(o);
    for (std::size_t i = 0; i < x_.size(); ++i) x_[i] -= o.x_[i];
    return *this;
  }
  Point& operator*=(double s) {
    for (auto& v : x_) v *= s;
    return *this;
  }
  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(Point a, double s) { return a *= s; }
  friend Point operator*(double s, Point a) { return a *= s; }
  friend Point operator/(Point a, double s) { return a *= 1.0 / s; }

  friend bool operator==(const Point& a, const Point& b) { return a.x_ == b.x_; }
  /// Lexicographic; used for canonical ordering and tie breaking.
  friend bool operator<(const Point& a, const Point& b) { return a.x_ < b.x_; }

 private:
  void require_dim(const Point& o) const {
    if (o.x_.size() != x_.size()) {
      throw InputError("points of different dimension (" + std::to_string(x_.size()) + " vs " +
                       std::to_string(o.x_.size()) + ")");
    }
  }

  std::vector<double> x_;
};

inline double dot(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) throw InputError("dot product of points of different dimension");
  double s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Point& a, const Point& b) { return norm(a - b); }

inline bool approx_equal(const Point& a, const Point& b, double tol) {
  return a.dim() == b.dim() && distance(a, b) <= tol;
}

/// Distance from p to the closed segment [a, b].
inline double distance_to_segment(const Point& p, const Point& a, const Point& b) {
  Point ab = b - a;
  double len2 = dot(ab, ab);
  if (len2 == 0) return distance(p, a);
  double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

inline double cross2(const Point& a, const Point& b) { return a[0] * b[1] - a[1] * b[0]; }

inline std::string to_string(const Point& p) {
  std::ostringstream out;
  out.precision(12);
  out << '(';
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i) out << ", ";
    out << p[i];
  }
  out << ')';
  return out.str();
}

/// Snaps points to representatives within a tolerance. Ids are handed out in
/// insertion order.
class PointIndex {
 public:
  explicit PointIndex(double tol) : tol_(tol) {}

  std::size_t insert(const Point& p) {
    if (auto id = find(p)) return *id;
    pts_.push_back(p);
    return pts_.size() - 1;
  }

  std::optional<std::size_t> find(const Point& p) const {
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (approx_equal(pts_[i], p, tol_)) return i;
    }
    return std::nullopt;
  }

  const Point& operator[](std::size_t i) const { return pts_[i]; }
  std::size_t size() const { return pts_.size(); }
  const std::vector<Point>& points() const { return pts_; }

 private:
  double tol_;
  std::vector<Point> pts_;
};

}  // namespace gcurrents
