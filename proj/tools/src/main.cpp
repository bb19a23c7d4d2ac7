#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "blowup/cli/runner.hpp"

int main(int argc, char** argv) {
  using blowup::cli::Command;
  CLI::App app{"Blow-up criteria and moment diagnostics for compressible Euler flows"};
  app.require_subcommand(1);

  const std::map<std::string, std::pair<Command, std::string>> commands{
      {"moments", {Command::Moments, "Initial MomentSet to moments.csv"}},
      {"criteria", {Command::Criteria, "Evaluate the [criteria] tags on the initial state"}},
      {"affine", {Command::Affine, "Integrate the affine ODE system (optionally search the sharp threshold)"}},
      {"vortex", {Command::Vortex, "Stationary vortex residual and optional solver drift"}},
      {"simulate", {Command::Simulate, "Full scenario: moments, criteria, solver run, events"}},
      {"sweep", {Command::Sweep, "Run the scenario once per [sweep] value"}},
  };

  std::string scenario, out;
  int grid = 0;
  std::uint64_t seed = 0;
  for (const auto& [name, entry] : commands) {
    auto* sub = app.add_subcommand(name, entry.second);
    sub->add_option("--scenario", scenario, "Scenario file")->required();
    sub->add_option("--out", out, "Output directory")->required();
    sub->add_option("--grid", grid, "Cells per axis, overriding [grid] cells");
    sub->add_option("--seed", seed, "Seed for the initial-data noise");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : blowup::cli::kExitConfig;
  }

  blowup::cli::RunOptions opt;
  opt.out_dir = out;
  opt.seed = seed;
  if (grid > 0) opt.grid = grid;
  for (const auto& [name, entry] : commands) {
    if (app.got_subcommand(name)) return blowup::cli::run_command(entry.first, scenario, opt, std::cerr);
  }
  return blowup::cli::kExitConfig;
}
