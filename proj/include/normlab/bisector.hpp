#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "norm.hpp"
#include "ortho.hpp"
#include "roots.hpp"

namespace normlab {

/// Solution set {base + s·x : s ∈ [s_lo, s_hi]} of ‖p − x‖ = ‖p + x‖ on one line
/// parallel to x.
struct LineRoot {
  Vec2 base;
  double s_lo = 0.0;
  double s_hi = 0.0;

  double s_mid() const { return 0.5 * (s_lo + s_hi); }
  double width() const { return s_hi - s_lo; }
  Vec2 at(const Vec2& x, double s) const { return base + s * x; }
  Vec2 midpoint(const Vec2& x) const { return at(x, s_mid()); }
};

inline constexpr double kLineRootFlatTolerance = 1e-13;
inline constexpr double kLineRootTolerance = 1e-10;

/// Signed bisector residual ‖p − x‖ − ‖p + x‖ at p = base + s·x. Non-increasing in s.
inline double bisector_phi(const Norm& n, const Vec2& x, const Vec2& base, double s) {
  const Vec2 p = base + s * x;
  return n(p - x) - n(p + x);
}

/// Where the line base + s·x crosses B(−x, x). The map s ↦ ‖base + (s−1)x‖ is
/// convex, so φ(s) = ‖p − x‖ − ‖p + x‖ is non-increasing with φ(−∞) > 0 > φ(+∞);
/// both ends of its zero set are located by monotone bisection.
inline LineRoot line_root(const Norm& n, const Vec2& x, const Vec2& base) {
  require_finite(x, "line_root");
  require_finite(base, "line_root");
  const double gx = n(x);
  if (gx == 0.0) throw std::invalid_argument("line_root: x must be nonzero");
  const double eps = kLineRootFlatTolerance * std::max({1.0, gx, n(base)});
  auto phi = [&](double s) { return bisector_phi(n, x, base, s); };

  double r = 1.0;
  while (!(phi(-r) > eps && phi(r) < -eps)) {
    r *= 2.0;
    if (r > 1e300) throw std::runtime_error("line_root: failed to bracket the bisector");
  }
  const auto lo = roots::bisect_predicate([&](double s) { return phi(s) > eps; }, -r, r);
  const auto hi = roots::bisect_predicate([&](double s) { return phi(s) >= -eps; }, -r, r);
  LineRoot out{base, lo.hi, hi.lo};
  if (out.s_lo > out.s_hi) out.s_lo = out.s_hi = 0.5 * (out.s_lo + out.s_hi);
  return out;
}

/// Sampled B(−x, x): one LineRoot per line base = offset·transversal + s·x.
struct BisectorTrace {
  Vec2 x;
  Vec2 transversal;
  std::vector<double> offsets;
  std::vector<LineRoot> roots;

  std::vector<Vec2> midpoints() const {
    std::vector<Vec2> out;
    out.reserve(roots.size());
    for (const auto& r : roots) out.push_back(r.midpoint(x));
    return out;
  }
};

/// The coordinate axis least aligned with x.
inline Vec2 transversal_for(const Vec2& x) {
  return std::abs(x.u) >= std::abs(x.w) ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0};
}

inline double trace_offset(double t_max, int count, int k) {
  return t_max * static_cast<double>(2 * k - (count - 1)) / static_cast<double>(count - 1);
}

/// B(−x, x) sampled on `count` evenly spaced parallel lines with offsets in
/// [−t_max, t_max]; the middle line passes through the origin.
inline BisectorTrace trace_symmetric(const Norm& n, const Vec2& x, double t_max, int count) {
  require_finite(x, "trace_symmetric");
  if (n(x) == 0.0) throw std::invalid_argument("trace_symmetric: x must be nonzero");
  if (count < 3 || count % 2 == 0) throw std::invalid_argument("trace_symmetric: count must be odd and >= 3");
  if (!(t_max > 0.0)) throw std::invalid_argument("trace_symmetric: t_max must be positive");
  BisectorTrace tr{x, transversal_for(x), {}, {}};
  tr.offsets.reserve(count);
  tr.roots.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double o = trace_offset(t_max, count, k);
    tr.offsets.push_back(o);
    tr.roots.push_back(line_root(n, x, o * tr.transversal));
  }
  return tr;
}

/// Largest coordinate distance of the trace midpoints from the line through
/// the origin and the midpoint at the largest offset.
inline double deviation_from_line(const BisectorTrace& trace) {
  if (trace.roots.size() < 3) throw std::invalid_argument("deviation_from_line: needs at least 3 offsets");
  const auto mids = trace.midpoints();
  const Vec2 far = mids.back();
  const double len = coord_length(far);
  if (len == 0.0) throw std::logic_error("deviation_from_line: reference midpoint at the origin");
  const Vec2 dir = far / len;
  double worst = 0.0;
  for (const auto& m : mids) worst = std::max(worst, std::abs(det(m, dir)));
  return worst;
}

/// B(a, b) = center + scale·B(−u, u).
struct GeneralReduction {
  Vec2 center;
  double scale = 0.0;
  Vec2 u;
};

inline GeneralReduction reduce_general(const Norm& n, const Vec2& a, const Vec2& b) {
  require_finite(a, "reduce_general");
  require_finite(b, "reduce_general");
  if (a == b) throw std::invalid_argument("reduce_general: a and b must differ");
  const double d = n(a - b);
  return {0.5 * (a + b), 0.5 * d, (a - b) / d};
}

// ---------------------------------------------------------------------------
// Intersections of two symmetric bisectors

inline constexpr double kIntersectionTolerance = 1e-9;
inline constexpr double kNonzeroRadius = 1e-6;

struct IntersectOptions {
  double t_max = 0.0;  // 0 selects 8·max(‖x‖, ‖y‖)
  int count = 201;
};

/// Nonzero common points of B(−x, x) and B(−y, y) found along a trace of
/// B(−x, x). Sign changes of ψ(z) = ‖z − y‖ − ‖z + y‖ between trace points are
/// refined in the offset parameter, stretches where ψ vanishes contribute their
/// refined end points and interior samples, and the flat pieces of non-strictly
/// convex bisectors are searched along their line segments. Only points with
/// both residuals <= 1e-9 and norm above 1e-6·max(‖x‖, ‖y‖) are returned.
inline std::vector<Vec2> intersect_symmetric(const Norm& n, const Vec2& x, const Vec2& y,
                                             const IntersectOptions& opt = {}) {
  require_finite(x, "intersect_symmetric");
  require_finite(y, "intersect_symmetric");
  const double gx = n(x);
  const double gy = n(y);
  if (!(std::abs(det(x, y)) > 1e-9 * gx * gy))
    throw std::invalid_argument("intersect_symmetric: x and y must be linearly independent");
  const double scale = std::max(gx, gy);
  const double t_max = opt.t_max > 0.0 ? opt.t_max : 8.0 * scale;
  const BisectorTrace tr = trace_symmetric(n, x, t_max, opt.count);

  auto psi = [&](const Vec2& z) { return n(z - y) - n(z + y); };
  const double zero_tol = 1e-12 * scale;
  auto mid_at = [&](double o) { return line_root(n, x, o * tr.transversal).midpoint(x); };

  std::vector<Vec2> found;
  auto accept = [&](const Vec2& z) {
    if (!(n(z) > kNonzeroRadius * scale)) return;
    if (std::abs(psi(z)) > kIntersectionTolerance) return;
    if (std::abs(n(z - x) - n(z + x)) > kIntersectionTolerance) return;
    for (const auto& f : found)
      if (n(f - z) <= 1e-9 * scale) return;
    found.push_back(z);
  };

  const std::size_t count = tr.roots.size();
  std::vector<Vec2> mids = tr.midpoints();
  std::vector<double> vals(count);
  for (std::size_t k = 0; k < count; ++k) vals[k] = psi(mids[k]);
  auto is_zero = [&](double v) { return std::abs(v) <= zero_tol; };

  for (std::size_t k = 0; k < count; ++k) {
    if (std::abs(vals[k]) <= kIntersectionTolerance) accept(mids[k]);

    // Flat pieces: the whole segment between the interval ends lies on B(−x, x).
    const LineRoot& root = tr.roots[k];
    if (root.width() > 1e-9 * scale) {
      const Vec2 zlo = root.at(x, root.s_lo);
      const Vec2 zhi = root.at(x, root.s_hi);
      const double plo = psi(zlo);
      const double phi_hi = psi(zhi);
      if (std::abs(plo) <= kIntersectionTolerance) accept(zlo);
      if (std::abs(phi_hi) <= kIntersectionTolerance) accept(zhi);
      if (!is_zero(plo) && !is_zero(phi_hi) && (plo > 0.0) != (phi_hi > 0.0)) {
        const double s = roots::bisect_sign_change([&](double q) { return psi(root.at(x, q)); }, root.s_lo, root.s_hi);
        accept(root.at(x, s));
      }
    }

    if (k + 1 == count) break;
    const double a = vals[k];
    const double b = vals[k + 1];
    const double oa = tr.offsets[k];
    const double ob = tr.offsets[k + 1];
    if (!is_zero(a) && !is_zero(b)) {
      if ((a > 0.0) != (b > 0.0)) {
        const double o = roots::bisect_sign_change([&](double q) { return psi(mid_at(q)); }, oa, ob);
        accept(mid_at(o));
      }
    } else if (is_zero(a) != is_zero(b)) {
      // End of a stretch where ψ vanishes along the trace.
      const bool zero_left = is_zero(a);
      const auto br = roots::bisect_predicate(
          [&](double o) { return is_zero(psi(mid_at(o))) == zero_left; }, oa, ob);
      accept(mid_at(zero_left ? br.lo : br.hi));
    }
  }
  return found;
}

// ---------------------------------------------------------------------------
// Directions in which B(−z, z) leaves the origin

/// Closed range of polar angles [lo, hi]; lo == hi for a single direction.
struct AngleInterval {
  double lo = 0.0;
  double hi = 0.0;
};

using AngleSet = std::vector<AngleInterval>;

/// For each radius s, the directions t (up to sign) in which B(−z, z) meets the
/// sphere of radius s.
inline std::vector<AngleSet> origin_direction_cone(const Norm& n, const Vec2& z, const std::vector<double>& radii,
                                                   const IsoOptions& opt = {}) {
  require_finite(z, "origin_direction_cone");
  const double gz = n(z);
  if (gz == 0.0) throw std::invalid_argument("origin_direction_cone: z must be nonzero");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !(radii[i] < gz))
      throw std::invalid_argument("origin_direction_cone: radii must lie in (0, ‖z‖)");
    if (i > 0 && !(radii[i] < radii[i - 1]))
      throw std::invalid_argument("origin_direction_cone: radii must be strictly decreasing");
  }
  std::vector<AngleSet> out;
  out.reserve(radii.size());
  for (const double s : radii) {
    AngleSet set;
    // p ∈ B(−z, z) ⇔ ‖z + p‖ = ‖z − p‖ ⇔ z ⟂ p.
    for (const auto& sol : find_iso_orthogonal(n, z, s, opt)) {
      if (sol.angle_interval)
        set.push_back({sol.angle_interval->first, sol.angle_interval->second});
      else
        set.push_back({sol.angle, sol.angle});
    }
    out.push_back(std::move(set));
  }
  return out;
}

}  // namespace normlab
