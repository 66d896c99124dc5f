#include "flatbody/app/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace flatbody::app;

int main(int argc, char** argv) {
  CLI::App app{"Dynamics of a flat affinely-rigid body with oscillating thickness"};
  app.require_subcommand(1);

  CommandOptions opts;
  std::string config;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool quiet = false;
  double perturb_eom = 0.0;
  std::vector<std::string> matrix;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_flag("--quiet", quiet, "Suppress stdout reports");
  };

  auto* simulate = app.add_subcommand("simulate", "Integrate a configured motion");
  simulate->add_option("--config", config, "JSON run configuration")->required();
  add_common(simulate);

  auto* stationary = app.add_subcommand("stationary", "Solve for a stationary ellipse");
  stationary->add_option("--config", config, "JSON run configuration")->required();
  add_common(stationary);

  auto* check = app.add_subcommand("check", "Run the built-in invariant suite");
  auto* seed_opt = check->add_option("--seed", seed, "Seed for the randomized checks");
  check->add_option("--perturb-eom", perturb_eom)->group("");
  add_common(check);

  auto* decompose = app.add_subcommand("decompose", "Two-polar decomposition of a placement");
  decompose->add_option("matrix", matrix, "Nine numbers, row-major")->expected(9)->required();
  add_common(decompose);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  opts.config_path = config;
  opts.out_dir = out_dir;
  opts.quiet = quiet;
  if (*seed_opt) opts.seed = seed;

  if (*simulate) return cmd_simulate(opts, std::cout, std::cerr);
  if (*stationary) return cmd_stationary(opts, std::cout, std::cerr);
  if (*check) return cmd_check(opts, std::cout, std::cerr, perturb_eom);
  return cmd_decompose(matrix, opts, std::cout, std::cerr);
}
