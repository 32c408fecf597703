#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace normlab {

/// A point or vector of the plane in the fixed global coordinate basis.
struct Vec2 {
  double u = 0.0;
  double w = 0.0;

  constexpr Vec2 operator+(const Vec2& o) const { return {u + o.u, w + o.w}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {u - o.u, w - o.w}; }
  constexpr Vec2 operator-() const { return {-u, -w}; }
  constexpr Vec2 operator*(double s) const { return {u * s, w * s}; }
  constexpr Vec2 operator/(double s) const { return {u / s, w / s}; }
  constexpr Vec2& operator+=(const Vec2& o) {
    u += o.u;
    w += o.w;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    u -= o.u;
    w -= o.w;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, const Vec2& v) { return {s * v.u, s * v.w}; }

constexpr double dot(const Vec2& a, const Vec2& b) { return a.u * b.u + a.w * b.w; }

/// Signed area of the parallelogram spanned by a and b.
constexpr double det(const Vec2& a, const Vec2& b) { return a.u * b.w - a.w * b.u; }

/// Euclidean length in coordinates; a chart-level measurement, not the plane's norm.
inline double coord_length(const Vec2& v) { return std::hypot(v.u, v.w); }

inline Vec2 direction(double theta) { return {std::cos(theta), std::sin(theta)}; }

inline bool is_finite(const Vec2& v) { return std::isfinite(v.u) && std::isfinite(v.w); }

inline void require_finite(const Vec2& v, const char* what) {
  if (!is_finite(v)) throw std::invalid_argument(std::string(what) + ": non-finite coordinates");
}

/// Row-major 2x2 matrix.
struct Mat2 {
  double m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;

  constexpr Vec2 operator*(const Vec2& v) const {
    return {m00 * v.u + m01 * v.w, m10 * v.u + m11 * v.w};
  }
  constexpr double determinant() const { return m00 * m11 - m01 * m10; }
  constexpr Mat2 inverse() const {
    const double d = determinant();
    return {m11 / d, -m01 / d, -m10 / d, m00 / d};
  }
  constexpr bool operator==(const Mat2&) const = default;
};

}  // namespace normlab
