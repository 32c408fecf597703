#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "normlab/norm.hpp"
#include "support.hpp"

using namespace normlab;
using normlab::test::all_norms;

TEST(Gauge, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(gauge(Norm::pnorm(kInfinity), {1, 0.5}), 1.0);
  EXPECT_DOUBLE_EQ(gauge(Norm::euclidean(), {3, 4}), 5.0);
  // Brute-force max over the square's edge functionals (tests/oracles).
  const Norm square = Norm::polygon({{1, -1}, {1, 1}, {-1, 1}, {-1, -1}});
  EXPECT_DOUBLE_EQ(gauge(square, {0.5, -1}), 1.0);
  EXPECT_DOUBLE_EQ(gauge(Norm::pnorm(1), {-2, 3}), 5.0);
  EXPECT_DOUBLE_EQ(gauge(Norm::linear_image(Norm::pnorm(kInfinity), {2, 0, 0, 1}), {1, 1}), 2.0);
}

TEST(Gauge, ZeroOnlyAtOrigin) {
  for (const auto& [name, n] : all_norms()) {
    EXPECT_EQ(gauge(n, {0, 0}), 0.0) << name;
    EXPECT_GT(gauge(n, {1e-300, 0}), 0.0) << name;
  }
}

TEST(Gauge, RejectsNonFinite) {
  EXPECT_THROW(gauge(Norm::euclidean(), {NAN, 0}), std::invalid_argument);
  EXPECT_THROW(gauge(Norm::pnorm(4), {INFINITY, 1}), std::invalid_argument);
}

TEST(Gauge, LargePDoesNotOverflow) {
  EXPECT_NEAR(gauge(Norm::pnorm(400), {1e200, 1e200}), 1e200 * std::pow(2.0, 1.0 / 400), 1e186);
}

TEST(NormConstruction, RejectsInvalidDescriptions) {
  EXPECT_THROW(Norm::quadratic({1, 2, 2, 1}), std::invalid_argument);    // indefinite
  EXPECT_THROW(Norm::quadratic({1, 0.1, 0, 1}), std::invalid_argument);  // asymmetric
  EXPECT_THROW(Norm::pnorm(0.5), std::invalid_argument);
  EXPECT_THROW(Norm::pnorm(NAN), std::invalid_argument);
  EXPECT_THROW(Norm::linear_image(Norm::euclidean(), {1, 2, 2, 4}), std::invalid_argument);
  // Not symmetric, wrong orientation, too few vertices, non-convex, vertex at origin.
  EXPECT_THROW(Norm::polygon({{1, 0}, {0, 1}, {-1, 0.1}, {0, -1}}), std::invalid_argument);
  EXPECT_THROW(Norm::polygon({{1, 0}, {0, -1}, {-1, 0}, {0, 1}}), std::invalid_argument);
  EXPECT_THROW(Norm::polygon({{1, 0}, {-1, 0}}), std::invalid_argument);
  EXPECT_THROW(Norm::polygon({{1, 0}, {0.1, 0.1}, {0, 1}, {-1, 0}, {-0.1, -0.1}, {0, -1}}), std::invalid_argument);
  EXPECT_THROW(Norm::polygon({{0, 0}, {1, 1}, {0, 0}, {-1, -1}}), std::invalid_argument);
}

TEST(SpherePoint, Examples) {
  const Vec2 e = sphere_point(Norm::euclidean(), 0.0);
  EXPECT_DOUBLE_EQ(e.u, 1.0);
  EXPECT_DOUBLE_EQ(e.w, 0.0);
  const Vec2 c = sphere_point(Norm::pnorm(kInfinity), std::numbers::pi / 4);
  EXPECT_NEAR(c.u, 1.0, 1e-15);
  EXPECT_NEAR(c.w, 1.0, 1e-15);
  // 2λ⁴ = 1 (tests/oracles): 0.84089641525371454.
  const Vec2 q = sphere_point(Norm::pnorm(4), std::numbers::pi / 4);
  EXPECT_NEAR(q.u, 0.84089641525371454, 1e-15);
  EXPECT_NEAR(q.w, 0.84089641525371454, 1e-15);
  EXPECT_THROW(sphere_point(Norm::euclidean(), 0.0, 0.0), std::invalid_argument);
}

// Property: homogeneity, triangle inequality, central symmetry, sphere round trip.
TEST(GaugeProperties, HomogeneityAndTriangleInequality) {
  Sampler rng(7);
  for (const auto& [name, n] : all_norms()) {
    for (int i = 0; i < 1000; ++i) {
      const Vec2 v = test::random_vec(rng, 5.0);
      const double t = rng.uniform(-10.0, 10.0);
      EXPECT_LE(std::abs(gauge(n, t * v) - std::abs(t) * gauge(n, v)), 1e-12 * std::max(1.0, gauge(n, v)) * std::max(1.0, std::abs(t)))
          << name;
      const Vec2 w = test::random_vec(rng, 5.0);
      EXPECT_LE(gauge(n, v + w), gauge(n, v) + gauge(n, w) + 1e-12) << name;
    }
  }
}

TEST(GaugeProperties, CentralSymmetry) {
  Sampler rng(11);
  for (const auto& [name, n] : all_norms()) {
    const bool polygon = std::holds_alternative<Polygon>(n.kind());
    for (int i = 0; i < 500; ++i) {
      const Vec2 v = test::random_vec(rng, 3.0);
      if (polygon)
        EXPECT_EQ(gauge(n, v), gauge(n, -v)) << name;
      else
        EXPECT_NEAR(gauge(n, v), gauge(n, -v), 1e-14) << name;
    }
  }
}

TEST(GaugeProperties, SpherePointRoundTrip) {
  for (const auto& [name, n] : all_norms())
    for (const double r : {0.25, 1.0, 7.5})
      for (int k = 0; k < 720; ++k) {
        const Vec2 p = sphere_point(n, 2.0 * std::numbers::pi * k / 720, r);
        EXPECT_LE(std::abs(gauge(n, p) - r), 1e-12 * r) << name;
      }
}

TEST(GaugeProperties, SquarePolygonMatchesMaxNorm) {
  const Norm square = Norm::polygon({{1, -1}, {1, 1}, {-1, 1}, {-1, -1}});
  const Norm linf = Norm::pnorm(kInfinity);
  for (int k = 0; k < 720; ++k) {
    const Vec2 d = direction(2.0 * std::numbers::pi * k / 720);
    EXPECT_NEAR(gauge(square, d), gauge(linf, d), 1e-14);
  }
}

TEST(FlatSegments, SquareEdgesAreExact) {
  const Norm square = Norm::polygon({{1, -1}, {1, 1}, {-1, 1}, {-1, -1}});
  const auto segs = detect_flat_segments(square, 1024);
  ASSERT_EQ(segs.size(), 4u);
  EXPECT_EQ(segs[0].c, (Vec2{1, -1}));
  EXPECT_EQ(segs[0].c_prime, (Vec2{1, 1}));
  for (const auto& s : segs) {
    EXPECT_TRUE(s.certified);
    EXPECT_EQ(gauge(square, 0.5 * (s.c + s.c_prime)), 1.0);
  }
}

TEST(FlatSegments, L1Diamond) {
  const auto segs = detect_flat_segments(Norm::pnorm(1), 1024);
  ASSERT_EQ(segs.size(), 4u);
  EXPECT_EQ(segs[0].c, (Vec2{1, 0}));
  EXPECT_EQ(segs[0].c_prime, (Vec2{0, 1}));
}

TEST(FlatSegments, LinearImageMapsEdgesBack) {
  const Mat2 shear{1, 1, 0, 1};
  const Norm n = Norm::linear_image(Norm::pnorm(kInfinity), shear);
  const auto segs = detect_flat_segments(n, 1024);
  ASSERT_EQ(segs.size(), 4u);
  for (const auto& s : segs) {
    EXPECT_NEAR(gauge(n, s.c), 1.0, 1e-14);
    EXPECT_NEAR(gauge(n, s.c_prime), 1.0, 1e-14);
    EXPECT_NEAR(gauge(n, 0.5 * (s.c + s.c_prime)), 1.0, 1e-14);
  }
  // A reflection keeps the vertex cycle counterclockwise.
  const auto refl = sphere_vertices(Norm::linear_image(Norm::pnorm(1), {1, 0, 0, -1}));
  for (std::size_t i = 0; i < refl.size(); ++i) EXPECT_GT(det(refl[i], refl[(i + 1) % refl.size()]), 0.0);
}

TEST(FlatSegments, StrictlyConvexKindsAreEmpty) {
  EXPECT_TRUE(detect_flat_segments(Norm::pnorm(4), 1024).empty());
  EXPECT_TRUE(detect_flat_segments(Norm::quadratic({2, 1, 1, 2}), 1024).empty());
  EXPECT_THROW(detect_flat_segments(Norm::pnorm(4), 32), std::invalid_argument);
}

TEST(FlatSegments, MidpointScanAgrees) {
  // The resolution-limited scan is an independent route to the same verdicts.
  EXPECT_TRUE(scan_flat_segments(Norm::pnorm(4), 1024).empty());
  EXPECT_TRUE(scan_flat_segments(test::sheared_l3(), 1024).empty());
  EXPECT_TRUE(scan_flat_segments(Norm::quadratic({2, 1, 1, 2}), 1024).empty());
  const Norm hexagon = Norm::regular_polygon(6);
  const auto segs = scan_flat_segments(hexagon, 1024);
  EXPECT_EQ(segs.size(), 6u);
  for (const auto& s : segs) {
    EXPECT_FALSE(s.certified);
    EXPECT_LE(1.0 - gauge(hexagon, 0.5 * (s.c + s.c_prime)), kFlatnessTolerance);
  }
  // Corners on and off the sample grid.
  EXPECT_EQ(scan_flat_segments(Norm::pnorm(kInfinity), 1024).size(), 4u);
  EXPECT_EQ(scan_flat_segments(Norm::pnorm(1), 1024).size(), 4u);
  EXPECT_EQ(scan_flat_segments(Norm::pnorm(1), 1000).size(), 4u);
  EXPECT_EQ(scan_flat_segments(Norm::linear_image(Norm::pnorm(kInfinity), {0.8, -0.6, 0.6, 0.8}), 1024).size(), 4u);
  EXPECT_EQ(scan_flat_segments(Norm::regular_polygon(8), 1000).size(), 8u);
}

TEST(StrictConvexity, Verdicts) {
  const auto linf = is_strictly_convex(Norm::pnorm(kInfinity));
  EXPECT_FALSE(linf.strictly_convex);
  ASSERT_TRUE(linf.segment.has_value());
  EXPECT_TRUE(is_strictly_convex(Norm::quadratic({5, -2, -2, 1})).strictly_convex);
  EXPECT_TRUE(is_strictly_convex(Norm::linear_image(Norm::pnorm(3), {1, 1, 0, 1})).strictly_convex);
  EXPECT_FALSE(is_strictly_convex(Norm::regular_polygon(8)).strictly_convex);
}

TEST(Euclidean, ParallelogramProbe) {
  const auto q = is_euclidean(Norm::quadratic({2, 1, 1, 2}), 1000);
  EXPECT_TRUE(q.euclidean);
  EXPECT_LE(q.residual, 1e-12);
  // Grid values from tests/oracles (same probe grid, 50-digit arithmetic).
  const auto linf = is_euclidean(Norm::pnorm(kInfinity), 1000);
  EXPECT_FALSE(linf.euclidean);
  EXPECT_NEAR(linf.residual, 3.3896805094232822, 1e-12);
  const auto l4 = is_euclidean(Norm::pnorm(4), 1000);
  EXPECT_FALSE(l4.euclidean);
  EXPECT_NEAR(l4.residual, 1.6337607577839237, 1e-12);
  // Never above the dense brute-force supremum.
  EXPECT_LE(l4.residual, 1.6568542494923802 + 1e-12);
  EXPECT_LE(linf.residual, 4.0 + 1e-12);
  EXPECT_THROW(is_euclidean(Norm::pnorm(4), 50), std::invalid_argument);
}
