#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bisector.hpp"
#include "norm.hpp"
#include "theorems.hpp"

namespace normlab::io {

using json = nlohmann::json;

/// Malformed input; the message names the offending field.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Norm definitions

namespace detail {

inline double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw InputError("field '" + field + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError("field '" + field + "' must be finite");
  return v;
}

inline Vec2 vec(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw InputError("field '" + field + "' must be a pair [u, w]");
  return {number(j[0], field), number(j[1], field)};
}

inline Mat2 mat(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw InputError("field '" + field + "' must be a 2x2 array");
  const Vec2 r0 = vec(j[0], field);
  const Vec2 r1 = vec(j[1], field);
  return {r0.u, r0.w, r1.u, r1.w};
}

inline void only_fields(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw InputError("unknown field '" + key + "' in " + where);
  }
  for (const char* a : allowed)
    if (!j.contains(a)) throw InputError("missing field '" + std::string(a) + "' in " + where);
}

inline json vec_json(const Vec2& v) { return json::array({v.u, v.w}); }

inline json mat_json(const Mat2& m) { return json::array({json::array({m.m00, m.m01}), json::array({m.m10, m.m11})}); }

}  // namespace detail

inline Norm norm_from_json(const json& j, const std::string& where = "norm") {
  if (!j.is_object()) throw InputError(where + " must be a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string()) throw InputError("field 'kind' missing or not a string in " + where);
  const std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "quadratic") {
      detail::only_fields(j, {"kind", "form"}, where);
      return Norm::quadratic(detail::mat(j["form"], "form"));
    }
    if (kind == "pnorm") {
      detail::only_fields(j, {"kind", "p"}, where);
      const json& p = j["p"];
      if (p.is_string()) {
        if (p.get<std::string>() != "inf") throw InputError("field 'p' must be a number >= 1 or \"inf\"");
        return Norm::pnorm(kInfinity);
      }
      return Norm::pnorm(detail::number(p, "p"));
    }
    if (kind == "polygon") {
      detail::only_fields(j, {"kind", "vertices"}, where);
      const json& vs = j["vertices"];
      if (!vs.is_array()) throw InputError("field 'vertices' must be an array");
      std::vector<Vec2> v;
      for (const auto& e : vs) v.push_back(detail::vec(e, "vertices"));
      return Norm::polygon(std::move(v));
    }
    if (kind == "linear_image") {
      detail::only_fields(j, {"kind", "inner", "map"}, where);
      const Norm inner = norm_from_json(j["inner"], "inner");
      return Norm::linear_image(inner, detail::mat(j["map"], "map"));
    }
  } catch (const InputError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("invalid ") + kind + " norm: " + e.what());
  }
  throw InputError("field 'kind' must be one of quadratic, pnorm, polygon, linear_image (got '" + kind + "')");
}

inline json norm_to_json(const Norm& n) {
  return std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Quadratic>) {
          return {{"kind", "quadratic"}, {"form", detail::mat_json(k.form)}};
        } else if constexpr (std::is_same_v<K, PNorm>) {
          return {{"kind", "pnorm"}, {"p", std::isinf(k.p) ? json("inf") : json(k.p)}};
        } else if constexpr (std::is_same_v<K, Polygon>) {
          json vs = json::array();
          for (const auto& v : k.vertices()) vs.push_back(detail::vec_json(v));
          return {{"kind", "polygon"}, {"vertices", vs}};
        } else {
          return {{"kind", "linear_image"}, {"inner", norm_to_json(*k.inner)}, {"map", detail::mat_json(k.map)}};
        }
      },
      n.kind());
}

inline Norm load_norm(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open norm file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("norm file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return norm_from_json(j);
}

// ---------------------------------------------------------------------------
// Report pieces

inline json to_json(const Witness& w) {
  return {{"x", detail::vec_json(w.x)},
          {"y", detail::vec_json(w.y)},
          {"z", detail::vec_json(w.z)},
          {"lambda", w.lambda},
          {"residuals", {{"x", w.residual_x}, {"y", w.residual_y}}},
          {"independence", w.independence}};
}

/// Rebuilds a witness from its JSON form, re-checking every invariant.
inline Witness witness_from_json(const Norm& n, const json& j) {
  for (const char* f : {"x", "y", "z"})
    if (!j.contains(f)) throw InputError(std::string("witness is missing field '") + f + "'");
  return make_witness(n, detail::vec(j["x"], "x"), detail::vec(j["y"], "y"), detail::vec(j["z"], "z"));
}

inline json to_json(const FlatSegment& s) {
  return {{"c", detail::vec_json(s.c)}, {"c_prime", detail::vec_json(s.c_prime)}, {"certified", s.certified}};
}

inline json to_json(const Classification& c) {
  json evidence = {{"parallelogram_residual", c.parallelogram_residual}};
  evidence["flat_segment"] = c.segment ? to_json(*c.segment) : json(nullptr);
  return evidence;
}

/// Skeleton of a verification report: {norm, classification, suites, witnesses}.
inline json report_skeleton(const Norm& n, const Classification& c) {
  return {{"norm", norm_to_json(n)},
          {"classification", to_string(c.label)},
          {"evidence", to_json(c)},
          {"suites", json::array()},
          {"witnesses", json::array()}};
}

inline json suite_json(const PropReport& r) {
  json violations = json::array();
  for (const auto& w : r.violations) violations.push_back(to_json(w));
  return {{"name", "bisector_intersections"}, {"checked", r.pairs_checked}, {"violations", violations},
          {"margins", json::object()}};
}

inline json suite_json(const InclusionCheck& c) {
  json violations = json::array();
  for (const auto& v : c.violations) violations.push_back(detail::vec_json(v));
  json margins = json::object();
  if (c.checked > 0) margins["min"] = c.min_margin;
  return {{"name", c.name}, {"checked", c.checked}, {"violations", violations}, {"margins", margins}};
}

inline json suites_json(const LemmaReport& r) {
  json out = json::array();
  for (const auto* c : {&r.hull_inside_ball, &r.ball_inside_hull, &r.ball_inside_small, &r.small_inside_ball,
                        &r.same_chord})
    out.push_back(suite_json(*c));
  json margins = json::object();
  if (!r.width_margins.empty()) margins["min"] = r.min_width_margin();
  json violations = json::array();
  for (int i = 0; i < r.width_violations; ++i) violations.push_back(nullptr);
  out.push_back({{"name", "chord width decreases with beta"},
                 {"checked", static_cast<int>(r.width_margins.size())},
                 {"violations", violations},
                 {"margins", margins}});
  return out;
}

// ---------------------------------------------------------------------------
// Files

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string trace_csv(const BisectorTrace& tr) {
  std::string out = "offset,s_lo,s_hi,z_lo_u,z_lo_w,z_hi_u,z_hi_w\n";
  for (std::size_t k = 0; k < tr.roots.size(); ++k) {
    const LineRoot& r = tr.roots[k];
    const Vec2 lo = r.at(tr.x, r.s_lo);
    const Vec2 hi = r.at(tr.x, r.s_hi);
    for (const double v : {tr.offsets[k], r.s_lo, r.s_hi, lo.u, lo.w, hi.u, hi.w}) {
      out += format_double(v);
      out += ',';
    }
    out.back() = '\n';
  }
  return out;
}

/// Unit sphere (720-point polyline) and the traced bisectors on a fixed
/// 1000×1000 view box centred at the origin.
inline std::string render_svg(const Norm& n, const std::vector<BisectorTrace>& traces) {
  constexpr int kSphereSamples = 720;
  std::vector<Vec2> sphere(kSphereSamples);
  double extent = 0.0;
  for (int i = 0; i < kSphereSamples; ++i) {
    sphere[i] = sphere_point(n, 2.0 * std::numbers::pi * i / kSphereSamples);
    extent = std::max({extent, std::abs(sphere[i].u), std::abs(sphere[i].w)});
  }
  for (const auto& tr : traces)
    for (const auto& r : tr.roots)
      for (const Vec2& p : {r.at(tr.x, r.s_lo), r.at(tr.x, r.s_hi)})
        extent = std::max({extent, std::abs(p.u), std::abs(p.w)});
  extent *= 1.05;
  auto screen = [&](const Vec2& p) { return Vec2{500.0 + 480.0 * p.u / extent, 500.0 - 480.0 * p.w / extent}; };
  auto px = [&](const Vec2& p) {
    const Vec2 s = screen(p);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f,%.3f", s.u, s.w);
    return std::string(buf);
  };
  auto attrs = [&](const Vec2& p, const char* xa, const char* ya) {
    const Vec2 s = screen(p);
    char buf[96];
    std::snprintf(buf, sizeof buf, " %s=\"%.3f\" %s=\"%.3f\"", xa, s.u, ya, s.w);
    return std::string(buf);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" width=\"1000\" height=\"1000\">\n";
  svg << "<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n";
  svg << "<line x1=\"20\" y1=\"500\" x2=\"980\" y2=\"500\" stroke=\"#ccc\"/>\n";
  svg << "<line x1=\"500\" y1=\"20\" x2=\"500\" y2=\"980\" stroke=\"#ccc\"/>\n";
  svg << "<polygon fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
  for (const auto& p : sphere) svg << px(p) << ' ';
  svg << "\"/>\n";
  for (const auto& tr : traces) {
    svg << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" points=\"";
    for (const auto& m : tr.midpoints()) svg << px(m) << ' ';
    svg << "\"/>\n";
    for (const auto& r : tr.roots)
      if (r.width() > 1e-9)
        svg << "<line stroke=\"#e59866\" stroke-width=\"1\"" << attrs(r.at(tr.x, r.s_lo), "x1", "y1")
            << attrs(r.at(tr.x, r.s_hi), "x2", "y2") << "/>\n";
    for (const Vec2& site : {tr.x, -tr.x})
      svg << "<circle r=\"4\" fill=\"#2471a3\"" << attrs(site, "cx", "cy") << "/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

/// Writes `contents` to a sibling temporary file and renames it into place.
inline void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << contents;
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace normlab::io
