#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "norm.hpp"
#include "roots.hpp"

namespace normlab {

/// ‖x+y‖ − ‖x−y‖. Zero exactly when x is isosceles orthogonal to y.
inline double iso_residual(const Norm& n, const Vec2& x, const Vec2& y) { return n(x + y) - n(x - y); }

namespace detail {

/// A root (lo == hi) or a whole interval of zeros of a scanned function.
struct ScanEvent {
  double lo = 0.0;
  double hi = 0.0;
  bool interval = false;
};

/// Locates the zeros of a continuous g with g(t + π) = −g(t), sampled at
/// t0 + kπ/samples. Sign changes are refined by bisection; runs of at least
/// three consecutive samples with |g| <= zero_tol are reported as intervals
/// whose end points are refined against the same threshold. Event parameters
/// lie in [t_s, t_s + π] for the first non-zero sample t_s, so a run that
/// straddles t0 + π is reported contiguously.
template <class G>
std::vector<ScanEvent> scan_antiperiodic(const G& g, double t0, int samples, double zero_tol) {
  const double step = std::numbers::pi / samples;
  std::vector<double> vals(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) vals[k] = g(t0 + k * step);

  int s0 = 0;
  while (s0 < samples && std::abs(vals[s0]) <= zero_tol) ++s0;
  if (s0 == samples) throw std::logic_error("scan_antiperiodic: function vanishes at every sample");

  auto value = [&](int j) { return j < samples ? vals[j] : -vals[j - samples]; };
  auto param = [&](int j) { return t0 + j * step; };
  auto is_zero = [&](double v) { return std::abs(v) <= zero_tol; };

  std::vector<ScanEvent> events;
  int j = s0;
  const int end = s0 + samples;
  while (j < end) {
    const double vj = value(j);
    const double vn = value(j + 1);
    if (!is_zero(vn)) {
      if ((vj > 0.0) != (vn > 0.0)) {
        const double t = roots::bisect_sign_change(g, param(j), param(j + 1));
        events.push_back({t, t, false});
      }
      ++j;
      continue;
    }
    int m = j + 1;
    while (m + 1 <= end && is_zero(value(m + 1))) ++m;
    const int run = m - j;
    if (run >= 3) {
      const auto lo = roots::bisect_predicate([&](double t) { return !is_zero(g(t)); }, param(j), param(j + 1));
      const auto hi = roots::bisect_predicate([&](double t) { return is_zero(g(t)); }, param(m), param(m + 1));
      events.push_back({lo.hi, hi.lo, true});
    } else {
      int best = j + 1;
      for (int k = j + 2; k <= m; ++k)
        if (std::abs(value(k)) < std::abs(value(best))) best = k;
      events.push_back({param(best), param(best), false});
    }
    j = m + 1;
  }
  return events;
}

}  // namespace detail

/// A vector y of prescribed norm with ‖z+y‖ = ‖z−y‖. When a whole arc of the
/// sphere solves the equation, `interval` holds its end points and y is a
/// point inside it.
struct IsoSolution {
  Vec2 y;
  double residual = 0.0;
  double angle = 0.0;  // polar angle of y, in [0, π)
  std::optional<std::pair<Vec2, Vec2>> interval;
  std::optional<std::pair<double, double>> angle_interval;  // contiguous, lo <= hi
};

struct IsoOptions {
  int resolution = 2048;
};

inline constexpr double kIsoFlatTolerance = 1e-12;
inline constexpr double kIsoRootTolerance = 1e-10;

/// All y with ‖y‖ = r isosceles orthogonal to z, up to sign (angle in [0, π)).
inline std::vector<IsoSolution> find_iso_orthogonal(const Norm& n, const Vec2& z, double r, const IsoOptions& opt = {}) {
  require_finite(z, "find_iso_orthogonal");
  if (z.u == 0.0 && z.w == 0.0) throw std::invalid_argument("find_iso_orthogonal: z must be nonzero");
  if (!(r > 0.0)) throw std::invalid_argument("find_iso_orthogonal: radius must be positive");
  if (opt.resolution < 8) throw std::invalid_argument("find_iso_orthogonal: resolution too small");

  const double scale = std::max(r, n(z));
  auto g = [&](double t) { return iso_residual(n, z, sphere_point(n, t, r)); };
  const auto events = detail::scan_antiperiodic(g, 0.0, opt.resolution, kIsoFlatTolerance * scale);
  if (events.empty()) throw std::logic_error("find_iso_orthogonal: scan found no solution");

  constexpr double pi = std::numbers::pi;
  std::vector<IsoSolution> out;
  for (const auto& e : events) {
    IsoSolution s;
    if (!e.interval) {
      double t = e.lo;
      s.y = sphere_point(n, t, r);
      s.residual = std::abs(iso_residual(n, z, s.y));
      if (t >= pi) {
        t -= pi;
        s.y = -s.y;
      }
      s.angle = t;
    } else {
      double lo = e.lo;
      double hi = e.hi;
      double mid = 0.5 * (lo + hi);
      double sign = 1.0;
      if (mid >= pi) {
        lo -= pi;
        hi -= pi;
        mid -= pi;
        sign = -1.0;
      }
      s.y = sign * sphere_point(n, mid + (sign < 0 ? pi : 0.0), r);
      s.angle = mid;
      s.angle_interval = std::make_pair(lo, hi);
      const Vec2 ylo = sign * sphere_point(n, e.lo, r);
      const Vec2 yhi = sign * sphere_point(n, e.hi, r);
      s.interval = std::make_pair(ylo, yhi);
      s.residual = std::max({std::abs(iso_residual(n, z, s.y)), std::abs(iso_residual(n, z, ylo)),
                             std::abs(iso_residual(n, z, yhi))});
    }
    if (s.residual > kIsoRootTolerance * scale)
      throw std::logic_error("find_iso_orthogonal: refined solution misses the residual bound");
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const IsoSolution& a, const IsoSolution& b) { return a.angle < b.angle; });
  return out;
}

// ---------------------------------------------------------------------------
// Chord with prescribed midpoint

struct ChordPair {
  Vec2 x;
  Vec2 x_prime;
  bool unique = true;
  double angle = 0.0;  // direction of x − z
};

struct ChordOptions {
  int samples = 256;
  double grid_offset = 0.0;  // shifts the start of the t-grid
};

inline constexpr double kChordMidpointTolerance = 1e-10;

namespace detail {

/// λ > 0 with ‖z + λ·dir‖ = 1, for z strictly inside the unit ball.
inline double exit_distance(const Norm& n, const Vec2& z, const Vec2& dir) {
  const double gz = n(z);
  const double gd = n(dir);
  double lo = (1.0 - gz) / gd;
  double hi = (1.0 + gz) / gd;
  const auto b = roots::bisect_predicate([&](double l) { return n(z + l * dir) < 1.0; }, lo, hi);
  lo = b.lo;
  hi = b.hi;
  return std::abs(n(z + lo * dir) - 1.0) <= std::abs(n(z + hi * dir) - 1.0) ? lo : hi;
}

}  // namespace detail

/// The pair x, x' on the unit sphere with (x + x')/2 = z, for 0 < ‖z‖ < 1.
/// Found by equalising the distances from z to the sphere along opposite rays.
/// For norms that are not strictly convex the first solution in t-order is
/// returned and `unique` is cleared when the scan sees another.
inline ChordPair chord_midpoint_pair(const Norm& n, const Vec2& z, const ChordOptions& opt = {}) {
  require_finite(z, "chord_midpoint_pair");
  const double gz = n(z);
  if (gz == 0.0) throw std::invalid_argument("chord_midpoint_pair: z must be nonzero");
  if (!(gz < 1.0)) throw std::invalid_argument("chord_midpoint_pair: z must lie inside the unit ball");

  auto far = [&](double t) {
    const Vec2 d = direction(t);
    return z + detail::exit_distance(n, z, d) * d;
  };
  auto reach = [&](double t) { return n(far(t) - z); };
  auto h = [&](double t) { return reach(t + std::numbers::pi) - reach(t); };

  const auto events = detail::scan_antiperiodic(h, opt.grid_offset, opt.samples, 1e-12);
  if (events.empty()) throw std::logic_error("chord_midpoint_pair: scan found no chord");
  const auto& first = events.front();
  const double t = first.lo;

  ChordPair out;
  out.x = far(t);
  out.x_prime = far(t + std::numbers::pi);
  out.angle = t;
  out.unique = events.size() == 1 && !first.interval;
  const Vec2 mid = 0.5 * (out.x + out.x_prime);
  if (n(mid - z) > kChordMidpointTolerance)
    throw std::logic_error("chord_midpoint_pair: refined chord misses the midpoint bound");
  return out;
}

}  // namespace normlab
