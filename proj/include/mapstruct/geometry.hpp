#pragma once

#include <cmath>
#include <numbers>

namespace mapstruct {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point2, Point2) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }

inline double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

// Angle folded into [0, 180).
inline double axial_deg(double deg) {
  double a = std::fmod(deg, 180.0);
  if (a < 0.0) a += 180.0;
  if (a >= 180.0) a -= 180.0;
  return a;
}

// Smallest difference between two undirected orientations, in [0, 90].
inline double axial_difference_deg(double a, double b) {
  const double d = axial_deg(a - b);
  return std::min(d, 180.0 - d);
}

// Unit normal of a line with the given direction angle.
inline Point2 line_normal(double angle_deg) {
  const double a = deg2rad(angle_deg);
  return {-std::sin(a), std::cos(a)};
}

// Geometric center of a width x height cell grid, cell (x, y) being at (x, y).
inline Point2 grid_center(int width, int height) {
  return {(width - 1) / 2.0, (height - 1) / 2.0};
}

inline Point2 rotate_about(Point2 p, Point2 center, double angle_deg) {
  const double a = deg2rad(angle_deg);
  const double c = std::cos(a);
  const double s = std::sin(a);
  const Point2 d = p - center;
  return {center.x + c * d.x - s * d.y, center.y + s * d.x + c * d.y};
}

}  // namespace mapstruct
