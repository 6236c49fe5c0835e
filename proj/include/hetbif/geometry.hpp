#pragma once

#include <array>
#include <cmath>

namespace hetbif {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 normalized(Vec2 a) { return (1.0 / norm(a)) * a; }
/// Counter-clockwise quarter turn.
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline bool is_finite(Vec2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }

/// Row-major 2x2 matrix.
struct Mat2 {
  double a = 0.0, b = 0.0;  // first row
  double c = 0.0, d = 0.0;  // second row

  constexpr double trace() const { return a + d; }
  constexpr double det() const { return a * d - b * c; }
  constexpr Vec2 operator*(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  friend constexpr Mat2 operator-(Mat2 m) { return {-m.a, -m.b, -m.c, -m.d}; }
};

/// Axis-aligned box in a two-dimensional plane (state or parameter space).
struct Box {
  double xmin = -1.0, xmax = 1.0;
  double ymin = -1.0, ymax = 1.0;

  constexpr bool contains(Vec2 p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
};

}  // namespace hetbif
