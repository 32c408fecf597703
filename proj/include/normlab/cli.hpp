#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "io.hpp"
#include "theorems.hpp"

namespace normlab::cli {

enum class Command { Trace, Witness, Verify, Props, Classify };

enum ExitStatus : int { kOk = 0, kInputError = 1, kViolation = 2, kSearchFailure = 3 };

struct RunConfig {
  std::filesystem::path norm_file;
  Command command = Command::Classify;
  std::optional<double> lambda;
  double t_max = 8.0;
  int count = 201;
  int pairs = 200;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = ".";
  double angle = 0.0;  // trace: x = sphere_point(angle)
  int frames = 10;     // props
  int samples = 500;   // props, per frame
};

inline std::optional<Command> parse_command(const std::string& s) {
  if (s == "trace") return Command::Trace;
  if (s == "witness") return Command::Witness;
  if (s == "verify") return Command::Verify;
  if (s == "props") return Command::Props;
  if (s == "classify") return Command::Classify;
  return std::nullopt;
}

inline void validate(const RunConfig& c) {
  using io::InputError;
  if (c.command == Command::Witness) {
    if (!c.lambda) throw InputError("--lambda is required for witness");
    if (!(*c.lambda > 0.0) || !std::isfinite(*c.lambda)) throw InputError("lambda must be positive");
    if (*c.lambda == 1.0) throw InputError("lambda must differ from 1");
  } else if (c.lambda) {
    throw InputError("--lambda is only accepted by witness");
  }
  if (c.count < 3 || c.count % 2 == 0) throw InputError("--count must be odd and >= 3");
  if (!(c.t_max > 0.0) || !std::isfinite(c.t_max)) throw InputError("--t-max must be positive");
  if (c.pairs < 1) throw InputError("--pairs must be positive");
  if (c.frames < 1 || c.samples < 1) throw InputError("--frames and --samples must be positive");
}

namespace detail {

inline std::string dump(const io::json& j) { return j.dump(2) + "\n"; }

inline int emit_report(const RunConfig& c, const std::string& name, const io::json& report, std::ostream& out) {
  const std::string text = dump(report);
  io::write_atomically(c.out_dir / name, text);
  out << text;
  return kOk;
}

}  // namespace detail

/// Executes one command. Reports go to out_dir and are echoed to `out`;
/// diagnostics go to `err`. Returns the process exit status.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    validate(c);
    const Norm norm = io::load_norm(c.norm_file);

    switch (c.command) {
      case Command::Classify: {
        const Classification cls = classify(norm);
        return detail::emit_report(c, "classify.json", io::report_skeleton(norm, cls), out);
      }

      case Command::Trace: {
        const Vec2 x = sphere_point(norm, c.angle);
        const BisectorTrace tr = trace_symmetric(norm, x, c.t_max, c.count);
        io::write_atomically(c.out_dir / "trace.csv", io::trace_csv(tr));
        io::write_atomically(c.out_dir / "trace.svg", io::render_svg(norm, {tr}));
        out << "x = (" << io::format_double(x.u) << ", " << io::format_double(x.w) << ")\n"
            << "deviation_from_line = " << io::format_double(deviation_from_line(tr)) << "\n"
            << "wrote " << (c.out_dir / "trace.csv").string() << " and " << (c.out_dir / "trace.svg").string()
            << "\n";
        return kOk;
      }

      case Command::Witness: {
        const Classification cls = classify(norm);
        io::json report = io::report_skeleton(norm, cls);
        Witness w;
        if (cls.label == NormClass::NotStrictlyConvex) {
          w = witness_nonstrict_theorem(norm, *c.lambda, cls.segment);
        } else {
          StrictSearch search;
          search.t_max = c.t_max;
          search.p_samples = c.count;
          w = witness_strictconvex_theorem(norm, *c.lambda, search);
        }
        report["witnesses"].push_back(io::to_json(w));
        return detail::emit_report(c, "witness.json", report, out);
      }

      case Command::Verify: {
        const Classification cls = classify(norm);
        io::json report = io::report_skeleton(norm, cls);
        if (cls.label == NormClass::NotStrictlyConvex) {
          const Witness w = witness_nonstrict_prop(norm, cls.segment);
          report["suites"].push_back({{"name", "flat_segment_witness"},
                                      {"checked", 1},
                                      {"violations", io::json::array()},
                                      {"margins", io::json::object()}});
          report["witnesses"].push_back(io::to_json(w));
          return detail::emit_report(c, "verify.json", report, out);
        }
        const PropReport rep = verify_prop_strict(norm, c.pairs, c.t_max, c.count, c.seed);
        report["suites"].push_back(io::suite_json(rep));
        for (const auto& w : rep.violations) report["witnesses"].push_back(io::to_json(w));
        detail::emit_report(c, "verify.json", report, out);
        if (!rep.violations.empty()) {
          err << "verification failed: " << rep.violations.size() << " nonzero bisector intersections\n";
          return kViolation;
        }
        return kOk;
      }

      case Command::Props: {
        if (convexity_class(norm) != Convexity::StrictlyConvex)
          throw io::InputError("props requires a strictly convex norm");
        const Classification cls = classify(norm);
        io::json report = io::report_skeleton(norm, cls);
        const LemmaReport rep = lemma_suite(norm, c.frames, c.samples, c.seed);
        report["suites"] = io::suites_json(rep);
        detail::emit_report(c, "props.json", report, out);
        if (rep.total_violations() > 0) {
          err << "verification failed: " << rep.total_violations() << " violations\n";
          return kViolation;
        }
        return kOk;
      }
    }
    return kOk;
  } catch (const SearchFailure& e) {
    err << "search failed: " << e.what() << "\n";
    return kSearchFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace normlab::cli
