#pragma once

// The three worked calibrations: equilateral triangle, square, and regular
// hexagon plus centre. Entries are the printed ones; only the partitions of
// the square and the terminal order of the hexagon had to be fixed here.

#include <cmath>
#include <string>
#include <vector>

#include "gcurrents/calibration.hpp"
#include "gcurrents/errors.hpp"
#include "gcurrents/geometry.hpp"
#include "gcurrents/group.hpp"

namespace gcurrents {

struct BuiltinInstance {
  std::string name;
  std::vector<Point> terminals;  // p_i carries g_i
  PiecewiseForm form;
};

inline std::vector<std::string> builtin_names() { return {"triangle", "square", "hexagon7"}; }

namespace detail {

inline const double kS3 = std::sqrt(3.0) / 2;

inline BuiltinInstance triangle_instance() {
  GroupSetup setup(3);
  Cell all{{}, ECovector1{{{{0.5, kS3}}, {{0.5, -kS3}}}}};
  return {"triangle", {{0.5, kS3}, {0.5, -kS3}, {-1, 0}}, PiecewiseForm(setup, {all}, "triangle")};
}

// Four wedges cut out by the diagonals: omega_1 above, omega_2 to the right,
// omega_3 below, omega_4 to the left.
inline BuiltinInstance square_instance() {
  GroupSetup setup(4);
  const double c = 1 - kS3;
  auto wedge = [](double a1, double b1, double a2, double b2) {
    return std::vector<HalfPlane>{HalfPlane::make(a1, b1, 0), HalfPlane::make(a2, b2, 0)};
  };
  std::vector<Cell> cells{
      {wedge(1, -1, -1, -1), ECovector1{{{{kS3, 0.5}}, {{c, -0.5}}, {{-c, -0.5}}}}},
      {wedge(-1, 1, -1, -1), ECovector1{{{{0.5, kS3}}, {{0.5, -kS3}}, {{-0.5, -c}}}}},
      {wedge(1, 1, -1, 1), ECovector1{{{{c, 0.5}}, {{kS3, -0.5}}, {{-kS3, -0.5}}}}},
      {wedge(1, 1, 1, -1), ECovector1{{{{0.5, c}}, {{0.5, -c}}, {{-0.5, -kS3}}}}},
  };
  return {"square", {{1, 1}, {1, -1}, {-1, -1}, {-1, 1}}, PiecewiseForm(setup, cells, "square")};
}

// Cone r spans the directions between 120 - 60 r and 180 - 60 r degrees.
// g_1..g_6 sit at 120, 60, 0, -60, -120, 180 degrees and g_7 at the centre.
inline BuiltinInstance hexagon7_instance() {
  GroupSetup setup(7);
  auto cone = [](int r) {
    double lo = (120.0 - 60.0 * r) * M_PI / 180, hi = (180.0 - 60.0 * r) * M_PI / 180;
    return std::vector<HalfPlane>{HalfPlane::make(std::sin(lo), -std::cos(lo), 0),
                                  HalfPlane::make(-std::sin(hi), std::cos(hi), 0)};
  };
  auto form = [](std::vector<std::pair<int, std::array<double, 2>>> nonzero) {
    ECovector1 w{std::vector<std::array<double, 2>>(6, {0.0, 0.0})};
    for (auto& [row, entry] : nonzero) w.rows[static_cast<std::size_t>(row - 1)] = entry;
    return w;
  };
  std::vector<Cell> cells{
      {cone(1), form({{1, {-kS3, 0.5}}, {2, {kS3, 0.5}}})},
      {cone(2), form({{2, {0, 1}}, {3, {kS3, -0.5}}})},
      {cone(3), form({{3, {kS3, 0.5}}, {4, {0, -1}}})},
      {cone(4), form({{4, {kS3, -0.5}}, {5, {-kS3, -0.5}}})},
      {cone(5), form({{5, {0, -1}}, {6, {-kS3, 0.5}}})},
      {cone(6), form({{1, {0, 1}}, {6, {-kS3, -0.5}}})},
  };
  std::vector<Point> terminals{{-0.5, kS3}, {0.5, kS3}, {1, 0}, {0.5, -kS3}, {-0.5, -kS3}, {-1, 0}, {0, 0}};
  return {"hexagon7", terminals, PiecewiseForm(setup, cells, "hexagon7")};
}

}  // namespace detail

inline BuiltinInstance builtin_instance(const std::string& name) {
  if (name == "triangle") return detail::triangle_instance();
  if (name == "square") return detail::square_instance();
  if (name == "hexagon7") return detail::hexagon7_instance();
  throw InputError("unknown built-in form '" + name + "' (known: triangle, square, hexagon7)");
}

}  // namespace gcurrents
