#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "normlab/cli.hpp"

int main(int argc, char** argv) {
  using normlab::cli::RunConfig;
  CLI::App app{"norm-lab: bisectors and isosceles orthogonality in normed planes"};
  app.name("norm-lab");

  RunConfig cfg;
  std::string command;
  double lambda = 0.0;
  app.add_option("command", command, "trace | witness | verify | props | classify")
      ->required()
      ->check(CLI::IsMember({"trace", "witness", "verify", "props", "classify"}));
  app.add_option("--norm", cfg.norm_file, "Norm definition (JSON)")->required();
  auto* lambda_opt = app.add_option("--lambda", lambda, "Norm ratio ||y|| / ||x|| for witness");
  app.add_option("--t-max", cfg.t_max, "Half-width of the traced offset range")->capture_default_str();
  app.add_option("--count", cfg.count, "Number of trace lines (odd)")->capture_default_str();
  app.add_option("--pairs", cfg.pairs, "Unit pairs checked by verify")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for sampled suites")->capture_default_str();
  app.add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
  app.add_option("--angle", cfg.angle, "trace: polar angle of x on the unit sphere")->capture_default_str();
  app.add_option("--frames", cfg.frames, "props: number of chord frames")->capture_default_str();
  app.add_option("--samples", cfg.samples, "props: samples per frame and check")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return normlab::cli::kInputError;
  }
  cfg.command = *normlab::cli::parse_command(command);
  if (*lambda_opt) cfg.lambda = lambda;
  return normlab::cli::run(cfg, std::cout, std::cerr);
}
