// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "normlab/normlab.hpp"

using namespace normlab;
using io::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

bool near_sign(const Norm& n, const Vec2& p, const Vec2& z, double tol) {
  return gauge(n, p - z) <= tol || gauge(n, p + z) <= tol;
}

const Norm kL4 = Norm::pnorm(4);
const Norm kL15 = Norm::pnorm(1.5);
const Norm kShearedL3 = Norm::linear_image(Norm::pnorm(3), Mat2{1, 0.5, 0, 1});
const Norm kLinf = Norm::pnorm(kInfinity);

// Reports from criteria 2, 5 and 7, compared against a second run by criterion 10.
std::vector<std::string> g_reports;

std::string prop_report(const Norm& n) {
  json j = io::report_skeleton(n, classify(n));
  j["suites"].push_back(io::suite_json(verify_prop_strict(n, 200, 8.0, 201, 0)));
  return j.dump(2);
}

std::string witness_report(const Norm& n, double lambda) {
  json j = io::report_skeleton(n, classify(n));
  j["witnesses"].push_back(io::to_json(witness_strictconvex_theorem(n, lambda)));
  return j.dump(2);
}

std::string lemma_report(const Norm& n) {
  json j = io::report_skeleton(n, classify(n));
  j["suites"] = io::suites_json(lemma_suite(n, 10, 500, 0));
  return j.dump(2);
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  const Witness w = witness_nonstrict_prop(kLinf, FlatSegment{{1, 1}, {1, -1}, true});
  const double dt = seconds_since(t0);
  o.require(w.z == Vec2{0, 0.5} && w.x == Vec2{1, 0} && w.y == Vec2{1, 0.5}, "construction values differ");
  const double e1 = std::abs(gauge(kLinf, w.z - w.x) - 1.0);
  const double e2 = std::abs(gauge(kLinf, w.z + w.x) - 1.0);
  const double e3 = std::abs(gauge(kLinf, w.z - w.y) - 1.0);
  const double e4 = std::abs(gauge(kLinf, w.z + w.y) - 1.0);
  o.require(std::max({e1, e2, e3, e4}) <= 1e-12, "norm equalities off");
  o.require(dt < 0.1, "runtime " + fmt(dt) + " s");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("runtime ") + fmt(dt) + " s";
  return o;
}

Outcome criterion2() {
  Outcome o;
  const std::pair<const char*, const Norm*> norms[] = {{"l4", &kL4}, {"l1.5", &kL15}, {"sheared_l3", &kShearedL3}};
  for (const auto& [name, n] : norms) {
    const auto t0 = Clock::now();
    const PropReport rep = verify_prop_strict(*n, 200, 8.0, 201, 0);
    const double dt = seconds_since(t0);
    o.require(rep.pairs_checked == 200, std::string(name) + " checked " + std::to_string(rep.pairs_checked));
    o.require(rep.violations.empty(), std::string(name) + " " + std::to_string(rep.violations.size()) + " violations");
    o.require(dt < 30.0, std::string(name) + " runtime " + fmt(dt) + " s");
    o.detail += (o.detail.empty() ? "" : "; ") + std::string(name) + " 0/200 in " + fmt(dt) + " s";
  }
  g_reports.push_back(prop_report(kL4));
  return o;
}

Outcome criterion3() {
  Outcome o;
  const std::pair<const char*, Norm> norms[] = {
      {"linf", kLinf}, {"l1", Norm::pnorm(1)}, {"hexagon", Norm::regular_polygon(6)}};
  for (const auto& [name, n] : norms) {
    const auto t0 = Clock::now();
    const Witness w = witness_nonstrict_prop(n);
    const auto pts = intersect_symmetric(n, w.x, w.y);
    const double dt = seconds_since(t0);
    bool refound = false;
    for (const auto& p : pts) refound = refound || near_sign(n, p, w.z, 1e-6);
    o.require(refound, std::string(name) + " witness point not re-found");
    o.require(dt < 5.0, std::string(name) + " runtime " + fmt(dt) + " s");
    o.detail += (o.detail.empty() ? "" : "; ") + std::string(name) + " " + fmt(dt) + " s";
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (const double lambda : {0.5, 3.0}) {
    const Witness w = witness_nonstrict_theorem(kLinf, lambda);
    const std::string tag = "lambda=" + fmt(lambda);
    o.require(w.residual_x <= 1e-12 && w.residual_y <= 1e-12, tag + " residuals");
    o.require(std::abs(gauge(kLinf, w.y) - lambda * gauge(kLinf, w.x)) <= 1e-12, tag + " norm ratio");
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  const std::pair<const char*, const Norm*> norms[] = {{"l4", &kL4}, {"l1.5", &kL15}};
  double worst = 0.0;
  for (const auto& [name, n] : norms)
    for (const double lambda : {0.5, 2.0, 4.0}) {
      const std::string tag = std::string(name) + " lambda=" + fmt(lambda);
      const auto t0 = Clock::now();
      try {
        const Witness w = witness_strictconvex_theorem(*n, lambda);
        const double dt = seconds_since(t0);
        worst = std::max(worst, dt);
        o.require(w.residual_x <= 1e-8 && w.residual_y <= 1e-8, tag + " residuals");
        o.require(w.independence > 1e-3, tag + " independence " + fmt(w.independence));
        o.require(std::abs(w.lambda - lambda) <= 1e-8, tag + " ratio");
        o.require(dt < 10.0, tag + " runtime " + fmt(dt) + " s");
      } catch (const std::exception& e) {
        o.require(false, tag + " " + e.what());
      }
    }
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("slowest ") + fmt(worst) + " s";
  g_reports.push_back(witness_report(kL4, 2.0));
  g_reports.push_back(witness_report(kL15, 0.5));
  return o;
}

Outcome criterion6() {
  Outcome o;
  const Norm q = Norm::quadratic({2, 1, 1, 2});
  const DeviationScan scan = bisector_deviation_scan(q, 360, 8.0, 201);
  o.require(scan.max_deviation() <= 1e-9, "max deviation " + fmt(scan.max_deviation()));
  Sampler rng(2024);
  int nonempty = 0;
  for (int i = 0; i < 100; ++i) {
    const double tx = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double ty = tx + rng.uniform(0.05, std::numbers::pi - 0.05);
    if (!intersect_symmetric(q, sphere_point(q, tx), sphere_point(q, ty)).empty()) ++nonempty;
  }
  o.require(nonempty == 0, std::to_string(nonempty) + " pairs intersect");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("max deviation ") + fmt(scan.max_deviation());
  return o;
}

Outcome criterion7() {
  Outcome o;
  const std::pair<const char*, const Norm*> norms[] = {{"l4", &kL4}, {"l1.5", &kL15}};
  for (const auto& [name, n] : norms) {
    const LemmaReport rep = lemma_suite(*n, 10, 500, 0);
    const std::size_t inclusion = rep.hull_inside_ball.violations.size() + rep.ball_inside_hull.violations.size() +
                                  rep.ball_inside_small.violations.size() + rep.small_inside_ball.violations.size();
    o.require(inclusion == 0, std::string(name) + " " + std::to_string(inclusion) + " inclusion violations");
    o.require(rep.same_chord.violations.empty(), std::string(name) + " equal-midpoint chords differ");
    o.require(!rep.width_margins.empty() && rep.width_violations == 0 && rep.min_width_margin() > 0.0,
              std::string(name) + " width margin " + fmt(rep.min_width_margin()));
    o.detail += (o.detail.empty() ? "" : "; ") + std::string(name) + " min width margin " + fmt(rep.min_width_margin());
  }
  g_reports.push_back(lemma_report(kL4));
  g_reports.push_back(lemma_report(kL15));
  return o;
}

Outcome criterion8() {
  Outcome o;
  const std::pair<const char*, Norm> norms[] = {{"euclid", Norm::euclidean()},
                                                {"quad2112", Norm::quadratic({2, 1, 1, 2})},
                                                {"l1.5", kL15},
                                                {"l4", kL4},
                                                {"sheared_l3", kShearedL3}};
  Sampler rng(99);
  double worst = 0.0;
  for (const auto& [name, n] : norms)
    for (int i = 0; i < 100; ++i) {
      const Vec2 z = sphere_point(n, rng.uniform(0.0, 2.0 * std::numbers::pi), rng.uniform(0.02, 0.98));
      const ChordPair a = chord_midpoint_pair(n, z, {256, 0.0});
      const ChordPair b = chord_midpoint_pair(n, z, {256, 0.5 * std::numbers::pi / 256});
      const double same = std::max(gauge(n, a.x - b.x), gauge(n, a.x_prime - b.x_prime));
      const double swapped = std::max(gauge(n, a.x - b.x_prime), gauge(n, a.x_prime - b.x));
      worst = std::max(worst, std::min(same, swapped));
    }
  o.require(worst <= 1e-9, "restarts disagree by " + fmt(worst));
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("max disagreement ") + fmt(worst);
  return o;
}

Outcome criterion9() {
  Outcome o;
  for (const auto& A : {Mat2{2, 1, 1, 2}, Mat2{1, 0, 0, 1}, Mat2{5, -2, -2, 1}}) {
    const Classification c = classify(Norm::quadratic(A));
    o.require(c.label == NormClass::Euclidean, "quadratic not Euclidean");
    o.require(c.parallelogram_residual <= 1e-12, "quadratic residual " + fmt(c.parallelogram_residual));
  }
  // Grid values from the independent high-precision oracle in tests/oracles.
  const std::pair<double, double> expected[] = {{1.0, 3.5296522592516865},
                                                {1.5, 1.0041261266189861},
                                                {3.0, 1.0287906619960305},
                                                {4.0, 1.6337607577839237},
                                                {kInfinity, 3.3896805094232822}};
  for (const auto& [p, value] : expected) {
    const Classification c = classify(Norm::pnorm(p));
    const std::string tag = "p=" + fmt(p);
    o.require(c.label != NormClass::Euclidean, tag + " labelled Euclidean");
    o.require(c.parallelogram_residual > 1e-2, tag + " residual " + fmt(c.parallelogram_residual));
    o.require(std::abs(c.parallelogram_residual - value) <= 1e-12, tag + " regression value " + fmt(c.parallelogram_residual));
    const NormClass want = (p == 1.0 || std::isinf(p)) ? NormClass::NotStrictlyConvex : NormClass::StrictlyConvexNonEuclidean;
    o.require(c.label == want, tag + " label " + to_string(c.label));
  }
  return o;
}

Outcome criterion10() {
  Outcome o;
  std::vector<std::string> again;
  again.push_back(prop_report(kL4));
  again.push_back(witness_report(kL4, 2.0));
  again.push_back(witness_report(kL15, 0.5));
  again.push_back(lemma_report(kL4));
  again.push_back(lemma_report(kL15));
  o.require(g_reports.size() == again.size(), "criteria 2, 5, 7 did not record reports");
  for (std::size_t i = 0; i < std::min(g_reports.size(), again.size()); ++i)
    o.require(g_reports[i] == again[i], "report " + std::to_string(i) + " differs");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(again.size()) + " reports compared";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"flat-segment witness reproduction (max norm)", criterion1},
      {"no nonzero bisector intersections (strictly convex)", criterion2},
      {"flat-segment witness re-found by intersection search", criterion3},
      {"norm-ratio witness, flat branch", criterion4},
      {"norm-ratio witness, strictly convex branch", criterion5},
      {"Euclidean negative control", criterion6},
      {"chord-frame inclusions and width monotonicity", criterion7},
      {"chord-midpoint uniqueness under restarts", criterion8},
      {"classification and parallelogram regression values", criterion9},
      {"byte-identical reports across runs", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double dt = seconds_since(t0);
    std::printf("%s %2zu %s (%.2f s) %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, dt, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
