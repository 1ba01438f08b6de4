#pragma once

#include <algorithm>
#include <cmath>

namespace skewflow {

struct Vec2 {
  double x{0.0};
  double y{0.0};

  friend constexpr Vec2 operator+(Vec2 u, Vec2 v) { return {u.x + v.x, u.y + v.y}; }
  friend constexpr Vec2 operator-(Vec2 u, Vec2 v) { return {u.x - v.x, u.y - v.y}; }
  friend constexpr Vec2 operator-(Vec2 u) { return {-u.x, -u.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;

  double norm() const { return std::hypot(x, y); }
};

/// Row-major 2x2 matrix [a b; c d].
struct Mat2 {
  double a{0.0};
  double b{0.0};
  double c{0.0};
  double d{0.0};

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 scalar(double s) { return {s, 0.0, 0.0, s}; }

  constexpr double trace() const { return a + d; }
  constexpr double det() const { return a * d - b * c; }

  friend constexpr Mat2 operator+(const Mat2& m, const Mat2& n) {
    return {m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d};
  }
  friend constexpr Mat2 operator-(const Mat2& m, const Mat2& n) {
    return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d};
  }
  friend constexpr Mat2 operator*(double s, const Mat2& m) {
    return {s * m.a, s * m.b, s * m.c, s * m.d};
  }
  friend constexpr Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
  friend constexpr Vec2 operator*(const Mat2& m, Vec2 v) {
    return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
  }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;

  double column_norm(int j) const {
    return j == 0 ? std::hypot(a, c) : std::hypot(b, d);
  }
  double max_column_norm() const { return std::max(column_norm(0), column_norm(1)); }

  /// Spectral norm (largest singular value).
  double operator_norm() const {
    const double f = a * a + b * b + c * c + d * d;
    const double g = det();
    const double disc = std::max(0.0, f * f - 4.0 * g * g);
    return std::sqrt(0.5 * (f + std::sqrt(disc)));
  }

  double max_abs_entry() const {
    return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  }
};

}  // namespace skewflow
