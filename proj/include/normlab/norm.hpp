#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "vec2.hpp"

namespace normlab {

class Norm;

/// ‖v‖² = vᵀ A v for a symmetric positive definite A.
struct Quadratic {
  Mat2 form;
};

/// ℓp norm; p == infinity selects the max norm.
struct PNorm {
  double p;
};

/// Centrally symmetric convex polygon given by its vertices in counterclockwise
/// order. Evaluated through one supporting functional per pair of opposite edges.
class Polygon {
 public:
  explicit Polygon(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  double evaluate(const Vec2& v) const {
    double best = 0.0;
    for (const auto& f : functionals_) best = std::max(best, std::abs(dot(f, v)));
    return best;
  }

 private:
  std::vector<Vec2> vertices_;
  // Outward edge normals divided by the edge's support height, first half only.
  std::vector<Vec2> functionals_;
};

/// ‖v‖ = ‖map · v‖_inner. The unit ball is map⁻¹ applied to the inner ball.
struct LinearImage {
  std::shared_ptr<const Norm> inner;
  Mat2 map;
};

/// A norm on the plane. Immutable after construction; copies share structure.
class Norm {
 public:
  using Kind = std::variant<Quadratic, PNorm, Polygon, LinearImage>;

  static Norm quadratic(const Mat2& form);
  static Norm euclidean() { return quadratic(Mat2{}); }
  static Norm pnorm(double p);
  static Norm polygon(std::vector<Vec2> vertices) { return Norm(Polygon(std::move(vertices))); }
  static Norm linear_image(const Norm& inner, const Mat2& map);

  /// Regular 2k-gon with a vertex at (1, 0).
  static Norm regular_polygon(int vertex_count);

  const Kind& kind() const { return kind_; }

  double operator()(const Vec2& v) const;

 private:
  explicit Norm(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline Polygon::Polygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 4) throw std::invalid_argument("polygon: needs at least 4 vertices");
  if (n % 2 != 0) throw std::invalid_argument("polygon: vertex count must be even for central symmetry");
  for (const auto& v : vertices_) {
    require_finite(v, "polygon vertex");
    if (v.u == 0.0 && v.w == 0.0) throw std::invalid_argument("polygon: vertex at the origin");
  }
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i)
    if (!(vertices_[i + half] == -vertices_[i]))
      throw std::invalid_argument("polygon: vertices are not centrally symmetric (v[i + n/2] must equal -v[i])");

  // Strictly increasing angle around one full turn, and strictly convex corners.
  const double base = std::atan2(vertices_[0].w, vertices_[0].u);
  double prev = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    double a = std::atan2(vertices_[i].w, vertices_[i].u) - base;
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    if (!(a > prev)) throw std::invalid_argument("polygon: vertices must be strictly ordered counterclockwise by angle");
    prev = a;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = vertices_[i];
    const Vec2& b = vertices_[(i + 1) % n];
    const Vec2& c = vertices_[(i + 2) % n];
    if (!(det(b - a, c - b) > 0.0)) throw std::invalid_argument("polygon: vertices are not in strictly convex position");
  }

  functionals_.reserve(half);
  for (std::size_t i = 0; i < half; ++i) {
    const Vec2& a = vertices_[i];
    const Vec2& b = vertices_[i + 1];
    const Vec2 e = b - a;
    const Vec2 normal{e.w, -e.u};
    const double height = det(a, b);
    functionals_.push_back(normal / height);
  }
}

inline Norm Norm::quadratic(const Mat2& form) {
  if (!std::isfinite(form.m00) || !std::isfinite(form.m01) || !std::isfinite(form.m10) || !std::isfinite(form.m11))
    throw std::invalid_argument("quadratic: non-finite form");
  if (form.m01 != form.m10) throw std::invalid_argument("quadratic: form must be symmetric");
  if (!(form.m00 > 0.0) || !(form.determinant() > 0.0))
    throw std::invalid_argument("quadratic: form must be positive definite");
  return Norm(Quadratic{form});
}

inline Norm Norm::pnorm(double p) {
  if (std::isnan(p) || !(p >= 1.0)) throw std::invalid_argument("pnorm: p must be >= 1 or infinity");
  return Norm(PNorm{p});
}

inline Norm Norm::linear_image(const Norm& inner, const Mat2& map) {
  const double d = map.determinant();
  if (!std::isfinite(d) || d == 0.0) throw std::invalid_argument("linear_image: map must be invertible");
  return Norm(LinearImage{std::make_shared<const Norm>(inner), map});
}

inline Norm Norm::regular_polygon(int vertex_count) {
  if (vertex_count < 4 || vertex_count % 2 != 0)
    throw std::invalid_argument("regular_polygon: vertex count must be even and >= 4");
  std::vector<Vec2> v(static_cast<std::size_t>(vertex_count));
  const int half = vertex_count / 2;
  for (int i = 0; i < half; ++i) {
    v[i] = direction(2.0 * std::numbers::pi * i / vertex_count);
    v[i + half] = -v[i];
  }
  return polygon(std::move(v));
}

namespace detail {

inline double pnorm_value(double p, const Vec2& v) {
  const double a = std::abs(v.u);
  const double b = std::abs(v.w);
  if (p == 1.0) return a + b;
  if (std::isinf(p)) return std::max(a, b);
  const double m = std::max(a, b);
  if (m == 0.0) return 0.0;
  const double s = std::min(a, b) / m;
  return m * std::pow(1.0 + std::pow(s, p), 1.0 / p);
}

}  // namespace detail

inline double Norm::operator()(const Vec2& v) const {
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Quadratic>) {
          // Rescaled so tiny or huge v neither underflows nor overflows.
          const double m = std::max(std::abs(v.u), std::abs(v.w));
          if (m == 0.0) return 0.0;
          const double a = v.u / m;
          const double b = v.w / m;
          const double q = k.form.m00 * a * a + 2.0 * k.form.m01 * a * b + k.form.m11 * b * b;
          return m * std::sqrt(std::max(q, 0.0));
        } else if constexpr (std::is_same_v<K, PNorm>) {
          return detail::pnorm_value(k.p, v);
        } else if constexpr (std::is_same_v<K, Polygon>) {
          return k.evaluate(v);
        } else {
          return (*k.inner)(k.map * v);
        }
      },
      kind_);
}

/// The norm of v. Rejects non-finite input.
inline double gauge(const Norm& n, const Vec2& v) {
  require_finite(v, "gauge");
  return n(v);
}

/// The point λ(cos θ, sin θ), λ > 0, with gauge r.
inline Vec2 sphere_point(const Norm& n, double theta, double r = 1.0) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("sphere_point: radius must be positive");
  const Vec2 dir = direction(theta);
  return dir * (r / n(dir));
}

// ---------------------------------------------------------------------------
// Flat segments and strict convexity

/// A segment [c, c_prime] contained in the unit sphere.
struct FlatSegment {
  Vec2 c;
  Vec2 c_prime;
  bool certified = false;
};

enum class Convexity { StrictlyConvex, Polyhedral };

/// Structural convexity class of a norm, read off its description.
inline Convexity convexity_class(const Norm& n) {
  return std::visit(
      [](const auto& k) -> Convexity {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Quadratic>) {
          return Convexity::StrictlyConvex;
        } else if constexpr (std::is_same_v<K, PNorm>) {
          return (k.p == 1.0 || std::isinf(k.p)) ? Convexity::Polyhedral : Convexity::StrictlyConvex;
        } else if constexpr (std::is_same_v<K, Polygon>) {
          return Convexity::Polyhedral;
        } else {
          return convexity_class(*k.inner);
        }
      },
      n.kind());
}

/// Vertices of the unit sphere, counterclockwise, for polyhedral norms.
inline std::vector<Vec2> sphere_vertices(const Norm& n) {
  return std::visit(
      [](const auto& k) -> std::vector<Vec2> {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Quadratic>) {
          throw std::invalid_argument("sphere_vertices: quadratic norm has no vertices");
        } else if constexpr (std::is_same_v<K, PNorm>) {
          if (k.p == 1.0) return {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
          if (std::isinf(k.p)) return {{1, -1}, {1, 1}, {-1, 1}, {-1, -1}};
          throw std::invalid_argument("sphere_vertices: strictly convex p-norm has no vertices");
        } else if constexpr (std::is_same_v<K, Polygon>) {
          return k.vertices();
        } else {
          auto inner = sphere_vertices(*k.inner);
          const Mat2 inv = k.map.inverse();
          for (auto& v : inner) v = inv * v;
          // A reflection reverses the orientation of the vertex cycle.
          if (k.map.determinant() < 0.0) std::reverse(inner.begin(), inner.end());
          return inner;
        }
      },
      n.kind());
}

inline constexpr double kFlatnessTolerance = 1e-10;

/// Midpoint scan for flat pieces of the sphere. A run of at least three
/// consecutive samples is reported as an uncertified segment while every
/// neighbouring midpoint and the midpoint of the run's first sample with each
/// later one stay within kFlatnessTolerance of the sphere. Resolution-limited:
/// edges spanning fewer than three samples are missed.
inline std::vector<FlatSegment> scan_flat_segments(const Norm& n, int resolution) {
  if (resolution < 64) throw std::invalid_argument("scan_flat_segments: resolution must be >= 64");
  const std::size_t count = static_cast<std::size_t>(resolution);
  std::vector<Vec2> pts(count);
  for (std::size_t i = 0; i < count; ++i) pts[i] = sphere_point(n, 2.0 * std::numbers::pi * i / resolution);
  auto flat = [&](const Vec2& a, const Vec2& b) { return 1.0 - n(0.5 * (a + b)) <= kFlatnessTolerance; };
  auto at = [&](std::size_t i) -> const Vec2& { return pts[i % count]; };

  std::vector<char> pair_flat(count);
  for (std::size_t i = 0; i < count; ++i) pair_flat[i] = flat(pts[i], at(i + 1));

  // Start at a sample no run can pass through: a curved pair or a corner.
  std::size_t start = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t prev = (i + count - 1) % count;
    if (!pair_flat[prev] || !flat(pts[prev], at(i + 1))) {
      start = i;
      break;
    }
  }

  std::vector<FlatSegment> out;
  std::size_t j = 0;
  while (j < count) {
    if (!pair_flat[(start + j) % count]) {
      ++j;
      continue;
    }
    const Vec2& first = at(start + j);
    std::size_t end = j + 1;
    while (end < count && pair_flat[(start + end) % count] && flat(first, at(start + end + 1))) ++end;
    if (end - j >= 2) out.push_back({first, at(start + end), false});
    j = end;
  }
  return out;
}

/// Maximal segments of the unit sphere. Exact polygon edges for polyhedral
/// norms, empty for strictly convex ones.
inline std::vector<FlatSegment> detect_flat_segments(const Norm& n, int resolution = 1024) {
  if (resolution < 64) throw std::invalid_argument("detect_flat_segments: resolution must be >= 64");
  if (convexity_class(n) == Convexity::StrictlyConvex) return {};
  const auto v = sphere_vertices(n);
  std::vector<FlatSegment> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back({v[i], v[(i + 1) % v.size()], true});
  return out;
}

struct ConvexityVerdict {
  bool strictly_convex = true;
  std::optional<FlatSegment> segment;  // first flat segment when not strictly convex
};

inline ConvexityVerdict is_strictly_convex(const Norm& n, int resolution = 1024) {
  auto segs = detect_flat_segments(n, resolution);
  if (segs.empty()) return {true, std::nullopt};
  return {false, segs.front()};
}

// ---------------------------------------------------------------------------
// Euclidean probe

inline constexpr double kEuclideanTolerance = 1e-9;
inline constexpr double kGoldenFraction = 0.6180339887498949;  // (√5 − 1) / 2

struct EuclideanVerdict {
  bool euclidean = false;
  double residual = 0.0;
};

/// The unit pair (θu, θv) used by the parallelogram-law probe: θu walks a
/// uniform grid over the full turn while the opening angle follows the golden
/// ratio sequence over [0, π).
inline std::pair<double, double> parallelogram_probe_angles(int i, int samples) {
  const double tu = 2.0 * std::numbers::pi * i / samples;
  double frac = std::fmod((i + 0.5) * kGoldenFraction, 1.0);
  return {tu, tu + std::numbers::pi * frac};
}

/// Parallelogram-law residual max |‖u+v‖² + ‖u−v‖² − 2‖u‖² − 2‖v‖²| over
/// `samples` unit pairs; Euclidean iff the residual is at most 1e-9.
inline EuclideanVerdict is_euclidean(const Norm& n, int samples = 1000) {
  if (samples < 100) throw std::invalid_argument("is_euclidean: samples must be >= 100");
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto [tu, tv] = parallelogram_probe_angles(i, samples);
    const Vec2 u = sphere_point(n, tu);
    const Vec2 v = sphere_point(n, tv);
    const double s = n(u + v);
    const double d = n(u - v);
    const double nu = n(u);
    const double nv = n(v);
    worst = std::max(worst, std::abs(s * s + d * d - 2.0 * nu * nu - 2.0 * nv * nv));
  }
  return {worst <= kEuclideanTolerance, worst};
}

}  // namespace normlab
