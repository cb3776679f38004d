#include <iostream>

#include <CLI11.hpp>

#include "formation/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Multi-UAV close formation flight simulator"};
  app.require_subcommand(1);

  formation::RunRequest req;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "Simulate a scenario and write log.csv, metrics.json, scenario.cfg");
  run->add_option("--scenario", req.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", req.out_dir, "Output directory")->capture_default_str();
  run->add_option("--set", req.overrides, "Override one key, e.g. controller.Kp.x=0.5 (repeatable)");
  run->add_option("--decimate", req.decimate, "Log every N-th step")->capture_default_str();
  auto* seed_opt = run->add_option("--seed", seed, "Seed for stochastic disturbance kinds");

  std::string suite;
  std::uint64_t check_seed = 1;
  auto* check = app.add_subcommand("check", "Run a property suite: graph, filter, ude, conversions, closedloop, all");
  check->add_option("suite", suite, "Suite name")->required();
  check->add_option("--seed", check_seed, "Seed for the random draws")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return formation::kExitValidation;
  }

  if (*run) {
    if (*seed_opt) req.seed = seed;
    return formation::cmd_run(req, std::cout, std::cerr);
  }
  return formation::cmd_check(suite, check_seed, std::cout, std::cerr);
}
