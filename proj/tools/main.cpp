// Scenario runner: parses a config, executes the pipeline and emits
// report.json plus CSVs.  Exit codes: 0 pass, 1 check failure, 2 usage or
// config error.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gdo/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"generalized driven oscillator toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  double tol_scale = 1.0;
  auto* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", config_path, "path to the scenario JSON")->required();
  run->add_option("--out", out_dir, "output directory (overrides the config)");
  run->add_option("--tol-scale", tol_scale, "multiply every check tolerance");

  auto* list = app.add_subcommand("list-presets", "show the stock scenario presets");
  auto* version = app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      const gdo::ScenarioConfig cfg = gdo::load_config(config_path);
      return gdo::run_scenario(cfg, out_dir, tol_scale);
    }
    if (list->parsed()) {
      std::cout << gdo::list_presets_table();
      return 0;
    }
    if (version->parsed()) {
      std::cout << "gdo 0.1.0\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
