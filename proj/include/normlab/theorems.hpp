#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bisector.hpp"
#include "norm.hpp"
#include "ortho.hpp"
#include "parallel.hpp"

namespace normlab {

/// No witness could be produced within the search budget.
class SearchFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The norm has no flat segment, so the constructive witnesses do not apply.
class NoFlatSegment : public std::invalid_argument {
 public:
  NoFlatSegment() : std::invalid_argument("no flat segment") {}
};

inline constexpr double kWitnessTolerance = 1e-9;

/// A nonzero z lying on both B(−x, x) and B(−y, y) for independent x, y.
struct Witness {
  Vec2 x;
  Vec2 y;
  Vec2 z;
  double lambda = 0.0;  // ‖y‖ / ‖x‖
  double residual_x = 0.0;
  double residual_y = 0.0;
  double independence = 0.0;  // |det(x, y)|
};

/// Fills in the derived fields and enforces the witness invariants.
inline Witness make_witness(const Norm& n, const Vec2& x, const Vec2& y, const Vec2& z) {
  Witness w{x, y, z, n(y) / n(x), std::abs(n(z - x) - n(z + x)), std::abs(n(z - y) - n(z + y)),
            std::abs(det(x, y))};
  std::string why;
  if (!(n(z) > kNonzeroRadius * n(x))) why = "common point is zero";
  else if (!(w.residual_x <= kWitnessTolerance)) why = "z is off B(-x,x)";
  else if (!(w.residual_y <= kWitnessTolerance)) why = "z is off B(-y,y)";
  else if (!(w.independence > kWitnessTolerance)) why = "x and y are dependent";
  if (!why.empty()) throw std::logic_error("invalid witness: " + why);
  return w;
}

namespace detail {

inline FlatSegment checked_segment(const Norm& n, const std::optional<FlatSegment>& given) {
  FlatSegment seg;
  if (given) {
    seg = *given;
  } else {
    const auto verdict = is_strictly_convex(n);
    if (verdict.strictly_convex) throw NoFlatSegment();
    seg = *verdict.segment;
  }
  const Vec2 mid = 0.5 * (seg.c + seg.c_prime);
  for (const Vec2& p : {seg.c, seg.c_prime, mid})
    if (std::abs(n(p) - 1.0) > 1e-9) throw std::invalid_argument("segment does not lie on the unit sphere");
  if (std::abs(det(seg.c, seg.c_prime)) <= 1e-12) throw std::invalid_argument("segment end points are dependent");
  return seg;
}

}  // namespace detail

/// Witness for a norm with a flat segment [c, c'] ⊂ S: with
/// a = (3c + c')/4, a' = −(3c' + c)/4, b = c, b' = −(c + c')/2 the common
/// point is z = (a + a')/2 = (b + b')/2 and x = a − z, y = b − z are unit vectors.
inline Witness witness_nonstrict_prop(const Norm& n, const std::optional<FlatSegment>& segment = std::nullopt) {
  const FlatSegment seg = detail::checked_segment(n, segment);
  const Vec2& c = seg.c;
  const Vec2& cp = seg.c_prime;
  const Vec2 a = 0.25 * (3.0 * c + cp);
  const Vec2 a_prime = -0.25 * (3.0 * cp + c);
  const Vec2 b = c;
  const Vec2 z = 0.5 * (a + a_prime);
  return make_witness(n, a - z, b - z, z);
}

/// Witness with ‖y‖ = λ‖x‖ from a flat segment [a, b] ⊂ S: x = (3a + b)/4,
/// y = λ(a + 3b)/4, common point λ(y/λ − x)/2 for λ <= 1 and (y/λ − x)/2 for λ >= 1.
inline Witness witness_nonstrict_theorem(const Norm& n, double lambda,
                                         const std::optional<FlatSegment>& segment = std::nullopt) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
  if (lambda == 1.0) throw std::invalid_argument("lambda must differ from 1");
  const FlatSegment seg = detail::checked_segment(n, segment);
  const Vec2 x = 0.25 * (3.0 * seg.c + seg.c_prime);
  const Vec2 zz = 0.25 * (seg.c + 3.0 * seg.c_prime);
  const Vec2 half = 0.5 * (zz - x);
  const Vec2 common = lambda <= 1.0 ? lambda * half : half;
  return make_witness(n, x, lambda * zz, common);
}

struct StrictSearch {
  int angles = 90;
  int p_samples = 201;
  double t_max = 8.0;
  double min_independence = 1e-3;
  unsigned threads = 0;
};

inline constexpr double kStraightTolerance = 1e-9;

struct DeviationScan {
  std::vector<double> angles;
  std::vector<double> deviations;
  std::vector<BisectorTrace> traces;

  double max_deviation() const {
    return deviations.empty() ? 0.0 : *std::max_element(deviations.begin(), deviations.end());
  }
};

/// Deviation from straightness of B(−x, x) for `angles` unit x over [0, π).
inline DeviationScan bisector_deviation_scan(const Norm& n, int angles, double t_max, int count,
                                             unsigned threads = 0) {
  if (angles < 1) throw std::invalid_argument("bisector_deviation_scan: angles must be positive");
  DeviationScan scan;
  scan.angles.resize(angles);
  scan.deviations.resize(angles);
  scan.traces.resize(angles);
  parallel_for(
      static_cast<std::size_t>(angles),
      [&](std::size_t k) {
        const double theta = std::numbers::pi * static_cast<double>(k) / angles;
        scan.angles[k] = theta;
        scan.traces[k] = trace_symmetric(n, sphere_point(n, theta), t_max, count);
        scan.deviations[k] = deviation_from_line(scan.traces[k]);
      },
      threads);
  return scan;
}

/// Witness with ‖y‖ = λ‖x₀‖ for a strictly convex norm. Picks x₀ with a curved
/// bisector, walks p outward along B(−x₀, x₀) until p leaves B(−λx₀, λx₀), and
/// takes y on the sphere of radius λ‖x₀‖ isosceles orthogonal to p.
inline Witness witness_strictconvex_theorem(const Norm& n, double lambda, const StrictSearch& search = {}) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
  if (lambda == 1.0) throw std::invalid_argument("lambda must differ from 1");
  if (convexity_class(n) != Convexity::StrictlyConvex)
    throw std::invalid_argument("witness_strictconvex_theorem: norm is not strictly convex");

  const DeviationScan scan = bisector_deviation_scan(n, search.angles, search.t_max, search.p_samples, search.threads);
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < scan.deviations.size(); ++k)
    if (scan.deviations[k] > kStraightTolerance) order.push_back(k);
  if (order.empty()) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "deviation <= 1e-9 for all angles (max " << scan.max_deviation() << ")";
    throw SearchFailure(msg.str());
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scan.deviations[a] > scan.deviations[b]; });

  double best_independence = 0.0;
  for (const std::size_t k : order) {
    const BisectorTrace& tr = scan.traces[k];
    const Vec2 x0 = tr.x;
    const double radius = lambda * n(x0);

    std::vector<std::size_t> walk(tr.offsets.size());
    for (std::size_t i = 0; i < walk.size(); ++i) walk[i] = i;
    std::stable_sort(walk.begin(), walk.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(tr.offsets[a]) < std::abs(tr.offsets[b]);
    });
    for (const std::size_t i : walk) {
      const Vec2 p = tr.roots[i].midpoint(x0);
      if (!(n(p) > kNonzeroRadius * n(x0))) continue;
      if (std::abs(iso_residual(n, lambda * x0, p)) <= kWitnessTolerance) continue;
      for (const auto& sol : find_iso_orthogonal(n, p, radius)) {
        const double indep = std::abs(det(x0, sol.y));
        best_independence = std::max(best_independence, indep);
        if (indep < search.min_independence) continue;
        try {
          return make_witness(n, x0, sol.y, p);
        } catch (const std::logic_error&) {
          continue;
        }
      }
    }
  }
  std::ostringstream msg;
  msg.precision(3);
  msg << "search budget exhausted (max deviation " << scan.max_deviation() << ", best independence "
      << best_independence << ")";
  throw SearchFailure(msg.str());
}

// ---------------------------------------------------------------------------
// Sampling helpers

/// Seeded mt19937_64 with a platform-independent conversion to [0, 1).
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

/// The deterministic pair grid used by verify_prop_strict: x walks [0, π)
/// uniformly, the opening angle to y follows a golden-ratio sequence over
/// [π/40, 39π/40], and the seed rotates the whole grid.
inline std::pair<double, double> prop_pair_angles(int i, int pairs, std::uint64_t seed) {
  const double shift = std::numbers::pi * std::fmod(static_cast<double>(seed) * kGoldenFraction, 1.0);
  const double tx = shift + std::numbers::pi * i / pairs;
  const double frac = std::fmod((i + 1) * kGoldenFraction, 1.0);
  const double open = std::numbers::pi * (1.0 / 40.0 + (38.0 / 40.0) * frac);
  return {tx, tx + open};
}

struct PropReport {
  int pairs_checked = 0;
  std::vector<Witness> violations;
};

/// Looks for nonzero common points of B(−x, x) and B(−y, y) over a grid of
/// independent unit pairs. Strictly convex norms must produce none.
inline PropReport verify_prop_strict(const Norm& n, int pairs, double t_max = 8.0, int count = 201,
                                     std::uint64_t seed = 0, unsigned threads = 0) {
  if (pairs < 1) throw std::invalid_argument("verify_prop_strict: pairs must be positive");
  std::vector<std::optional<Witness>> found(static_cast<std::size_t>(pairs));
  parallel_for(
      found.size(),
      [&](std::size_t i) {
        const auto [tx, ty] = prop_pair_angles(static_cast<int>(i), pairs, seed);
        const Vec2 x = sphere_point(n, tx);
        const Vec2 y = sphere_point(n, ty);
        const auto pts = intersect_symmetric(n, x, y, {t_max, count});
        if (!pts.empty()) found[i] = make_witness(n, x, y, pts.front());
      },
      threads);
  PropReport rep;
  rep.pairs_checked = pairs;
  for (auto& f : found)
    if (f) rep.violations.push_back(*f);
  return rep;
}

// ---------------------------------------------------------------------------
// Chord frames

/// Coordinates in the basis {z, (a − a')/2}, where a + a' = αz and ‖z‖ = 1.
/// The chord midpoint (a + a')/2 sits at abscissa α/2 (`mid_a()`); r⁺ and r⁻ are
/// the lines through d, a and d', a'; c is their common point.
struct LemmaFrame {
  Vec2 basis_e1;
  Vec2 basis_e2;
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  Vec2 a, a_prime, b, b_prime, c, d, d_prime;
  double r_plus_slope = 0.0;
  double r_minus_slope = 0.0;

  double mid_a() const { return 0.5 * alpha; }
  double mid_b() const { return 0.5 * beta; }
  double r_plus(double s) const { return delta + r_plus_slope * s; }
  double r_minus(double s) const { return -delta + r_minus_slope * s; }
  double c_abscissa() const { return delta * mid_a() / (delta - 1.0); }

  Vec2 to_world(const Vec2& f) const { return f.u * basis_e1 + f.w * basis_e2; }
  Vec2 to_frame(const Vec2& v) const {
    const double dd = det(basis_e1, basis_e2);
    return {det(v, basis_e2) / dd, det(basis_e1, v) / dd};
  }
};

inline LemmaFrame build_lemma_frame(const Norm& n, double z_dir, double alpha, double beta,
                                    const ChordOptions& chord = {}) {
  if (convexity_class(n) != Convexity::StrictlyConvex)
    throw std::invalid_argument("build_lemma_frame: norm is not strictly convex");
  if (!(alpha > 0.0) || !(alpha <= beta)) throw std::invalid_argument("build_lemma_frame: need 0 < alpha <= beta");
  if (!(beta < 2.0)) throw std::invalid_argument("build_lemma_frame: beta*z/2 must be interior");
  LemmaFrame f;
  f.alpha = alpha;
  f.beta = beta;
  const Vec2 z = sphere_point(n, z_dir);
  const ChordPair ca = chord_midpoint_pair(n, 0.5 * alpha * z, chord);
  const ChordPair cb = chord_midpoint_pair(n, 0.5 * beta * z, chord);
  f.a = ca.x;
  f.a_prime = ca.x_prime;
  f.b = cb.x;
  f.b_prime = cb.x_prime;
  f.basis_e1 = z;
  f.basis_e2 = 0.5 * (f.a - f.a_prime);
  f.delta = 2.0 / n(f.a - f.a_prime);
  f.d = f.delta * f.basis_e2;
  f.d_prime = -f.d;
  f.r_plus_slope = (1.0 - f.delta) / f.mid_a();
  f.r_minus_slope = (f.delta - 1.0) / f.mid_a();
  f.c = f.c_abscissa() * z;
  return f;
}

struct InclusionCheck {
  InclusionCheck() = default;
  explicit InclusionCheck(std::string label) : name(std::move(label)) {}

  std::string name;
  int checked = 0;
  std::vector<Vec2> violations;  // frame coordinates
  double min_margin = std::numeric_limits<double>::infinity();

  void record(double margin, const Vec2& at, double required = kInteriorMargin) {
    ++checked;
    min_margin = std::min(min_margin, margin);
    if (!(margin >= required)) violations.push_back(at);
  }
  static constexpr double kInteriorMargin = 1e-8;
};

struct LemmaReport {
  int frames = 0;
  InclusionCheck hull_inside_ball{"conv{d,d',c} left of a is interior"};
  InclusionCheck ball_inside_hull{"ball right of a is inside conv{d,d',c}"};
  InclusionCheck ball_inside_small{"ball right of a is inside (alpha,0)+B/delta"};
  InclusionCheck small_inside_ball{"(alpha,0)+B/delta left of a is interior"};
  InclusionCheck same_chord{"alpha = beta gives the same chord"};
  std::vector<double> width_margins;  // ‖a − a'‖ − ‖b − b'‖ for β > α
  int width_violations = 0;

  std::size_t total_violations() const {
    return hull_inside_ball.violations.size() + ball_inside_hull.violations.size() +
           ball_inside_small.violations.size() + small_inside_ball.violations.size() +
           same_chord.violations.size() + static_cast<std::size_t>(width_violations);
  }
  double min_width_margin() const {
    return width_margins.empty() ? 0.0 : *std::min_element(width_margins.begin(), width_margins.end());
  }
};

namespace detail {

/// Extent [lo, hi] in the second frame coordinate of the unit ball on the
/// vertical frame line at abscissa s (which must cross the open ball).
inline std::pair<double, double> vertical_chord(const Norm& n, const LemmaFrame& f, double s) {
  auto at = [&](double t) { return n(f.to_world({s, t})); };
  // Convex in t: golden-section search for the minimiser, then bisect both sides.
  double lo = -4.0 * f.delta, hi = 4.0 * f.delta;
  while (at(lo) < 1.0) lo *= 2.0;
  while (at(hi) < 1.0) hi *= 2.0;
  double a = lo, b = hi;
  for (int i = 0; i < 200 && b - a > 1e-14 * (1.0 + std::abs(a)); ++i) {
    const double m1 = a + (b - a) * 0.381966011250105;
    const double m2 = b - (b - a) * 0.381966011250105;
    if (at(m1) < at(m2))
      b = m2;
    else
      a = m1;
  }
  const double mid = 0.5 * (a + b);
  if (!(at(mid) < 1.0)) throw std::logic_error("vertical_chord: line misses the ball");
  const auto top = roots::bisect_predicate([&](double t) { return at(t) < 1.0; }, mid, hi);
  const auto bottom = roots::bisect_predicate([&](double t) { return at(-t) < 1.0; }, -mid, -lo);
  return {-bottom.lo, top.lo};
}

/// Largest first frame coordinate of a point of the unit ball.
inline double frame_support(const Norm& n, const LemmaFrame& f) {
  double best = 0.0;
  double best_t = 0.0;
  constexpr int kSamples = 2048;
  for (int k = 0; k < kSamples; ++k) {
    const double t = 2.0 * std::numbers::pi * k / kSamples;
    const double s = f.to_frame(sphere_point(n, t)).u;
    if (s > best) {
      best = s;
      best_t = t;
    }
  }
  const double step = 2.0 * std::numbers::pi / kSamples;
  double a = best_t - step, b = best_t + step;
  for (int i = 0; i < 100; ++i) {
    const double m1 = a + (b - a) * 0.381966011250105;
    const double m2 = b - (b - a) * 0.381966011250105;
    if (f.to_frame(sphere_point(n, m1)).u > f.to_frame(sphere_point(n, m2)).u)
      b = m2;
    else
      a = m1;
  }
  return std::max(best, f.to_frame(sphere_point(n, 0.5 * (a + b))).u);
}

inline void check_frame(const Norm& n, const LemmaFrame& f, int samples, Sampler& rng, LemmaReport& rep) {
  const double m = f.mid_a();
  const double band = 0.01 * m;

  // conv{d, d', c} between the d-axis and a: strictly inside the ball.
  for (int i = 0; i < samples; ++i) {
    const double s = m * rng.uniform(0.005, 0.995);
    const double t = f.r_minus(s) + (f.r_plus(s) - f.r_minus(s)) * rng.uniform();
    rep.hull_inside_ball.record(1.0 - n(f.to_world({s, t})), {s, t});
  }

  // Points of the ball beyond a: every other sample on the sphere itself.
  const double s_max = frame_support(n, f);
  for (int i = 0; i < samples; ++i) {
    const double s = m + band + (s_max - m - band) * rng.uniform(0.0, 0.999);
    const auto [lo, hi] = vertical_chord(n, f, s);
    double t;
    if (i % 2 == 0)
      t = (i % 4 == 0) ? hi : lo;
    else
      t = lo + (hi - lo) * rng.uniform();
    rep.ball_inside_hull.record(std::min({f.r_plus(s) - t, t - f.r_minus(s), f.c_abscissa() - s}), {s, t});
    const Vec2 shifted = f.delta * (f.to_world({s, t}) - m * f.basis_e1);
    rep.ball_inside_small.record(1.0 - n(shifted), {s, t});
  }

  // The shrunken ball about (α/2, 0) left of a: strictly inside the ball.
  int drawn = 0;
  for (int tries = 0; drawn < samples && tries < 50 * samples; ++tries) {
    const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double rho = (tries % 2 == 0) ? 1.0 : std::sqrt(rng.uniform());
    const Vec2 q = m * f.basis_e1 + (rho / f.delta) * sphere_point(n, theta);
    const Vec2 fq = f.to_frame(q);
    if (!(fq.u < m - band)) continue;
    ++drawn;
    rep.small_inside_ball.record(1.0 - n(q), fq);
  }

  if (f.beta > f.alpha) {
    const double margin = n(f.a - f.a_prime) - n(f.b - f.b_prime);
    rep.width_margins.push_back(margin);
    if (!(margin > 0.0)) ++rep.width_violations;
  } else {
    const Vec2 da = f.a - f.a_prime;
    const Vec2 db = f.b - f.b_prime;
    // Margin: 1e-9 minus the sine of the angle between the two chords.
    const double sine = std::abs(det(da, db)) / (coord_length(da) * coord_length(db));
    rep.same_chord.record(1e-9 - sine, {f.alpha, f.beta}, 0.0);
  }
}

}  // namespace detail

/// Random frame parameters for lemma_suite: every fifth frame has α = β.
struct FrameParams {
  double z_dir;
  double alpha;
  double beta;
};

inline std::vector<FrameParams> lemma_frame_params(int frames, std::uint64_t seed) {
  Sampler rng(seed);
  std::vector<FrameParams> out;
  for (int f = 0; f < frames; ++f) {
    FrameParams p{};
    p.z_dir = rng.uniform(0.0, 2.0 * std::numbers::pi);
    p.alpha = rng.uniform(0.1, 1.7);
    p.beta = (f % 5 == 4) ? p.alpha : rng.uniform(p.alpha + 0.05, 1.9);
    out.push_back(p);
  }
  return out;
}

/// Samples the chord-frame inclusions and the chord-width monotonicity over
/// `frames` random frames.
inline LemmaReport lemma_suite(const Norm& n, int frames, int samples_per_frame, std::uint64_t seed = 0,
                               unsigned threads = 0) {
  if (convexity_class(n) != Convexity::StrictlyConvex)
    throw std::invalid_argument("lemma_suite: norm is not strictly convex");
  if (frames < 1 || samples_per_frame < 1) throw std::invalid_argument("lemma_suite: counts must be positive");
  const auto params = lemma_frame_params(frames, seed);
  std::vector<LemmaReport> partial(params.size());
  parallel_for(
      params.size(),
      [&](std::size_t i) {
        const auto& p = params[i];
        const LemmaFrame f = build_lemma_frame(n, p.z_dir, p.alpha, p.beta);
        Sampler rng(seed * 0x9E3779B97F4A7C15ull + i + 1);
        detail::check_frame(n, f, samples_per_frame, rng, partial[i]);
      },
      threads);

  LemmaReport rep;
  rep.frames = frames;
  auto merge = [](InclusionCheck& into, const InclusionCheck& from) {
    into.checked += from.checked;
    into.min_margin = std::min(into.min_margin, from.min_margin);
    into.violations.insert(into.violations.end(), from.violations.begin(), from.violations.end());
  };
  for (const auto& p : partial) {
    merge(rep.hull_inside_ball, p.hull_inside_ball);
    merge(rep.ball_inside_hull, p.ball_inside_hull);
    merge(rep.ball_inside_small, p.ball_inside_small);
    merge(rep.small_inside_ball, p.small_inside_ball);
    merge(rep.same_chord, p.same_chord);
    rep.width_margins.insert(rep.width_margins.end(), p.width_margins.begin(), p.width_margins.end());
    rep.width_violations += p.width_violations;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Classification

enum class NormClass { Euclidean, StrictlyConvexNonEuclidean, NotStrictlyConvex };

inline const char* to_string(NormClass c) {
  switch (c) {
    case NormClass::Euclidean: return "Euclidean";
    case NormClass::StrictlyConvexNonEuclidean: return "StrictlyConvexNonEuclidean";
    case NormClass::NotStrictlyConvex: return "NotStrictlyConvex";
  }
  return "?";
}

struct Classification {
  NormClass label = NormClass::Euclidean;
  double parallelogram_residual = 0.0;
  std::optional<FlatSegment> segment;
};

inline Classification classify(const Norm& n, int samples = 1000) {
  Classification out;
  out.parallelogram_residual = is_euclidean(n, samples).residual;
  const auto convex = is_strictly_convex(n);
  if (!convex.strictly_convex) {
    out.label = NormClass::NotStrictlyConvex;
    out.segment = convex.segment;
  } else if (out.parallelogram_residual <= kEuclideanTolerance) {
    out.label = NormClass::Euclidean;
  } else {
    out.label = NormClass::StrictlyConvexNonEuclidean;
  }
  return out;
}

}  // namespace normlab
