#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gdo/defs.hpp"
#include "gdo/schedule.hpp"

namespace gdo {

enum class Task { states, residuals, moments, cis, berry, oracle, sweep };

Task task_from_string(const std::string& name);
std::string to_string(Task t);

// Parsed scenario configuration; see README for the JSON schema.  Unknown
// keys anywhere in the file are errors.
struct ScenarioConfig {
  std::string name = "scenario";

  // Schedule: either a preset with constants or sampled tables.
  std::optional<Preset> preset;
  std::map<std::string, double> constants;
  struct Tables {
    std::vector<double> t, M, Y, omega_sq, F, G;
  };
  std::optional<Tables> tables;
  double t0 = 0.0;
  std::optional<double> period;
  std::array<double, 2> window{0.0, 0.0};
  std::optional<std::pair<int, int>> rational;  // exact integers r, r_e (preset C)
  bool irrational = false;                      // override omega_e := sqrt(2) omega

  std::optional<std::array<double, 3>> c_constants;  // nullopt = default rule
  enum class Beta0Mode { zero, comoving, value };
  Beta0Mode beta0_mode = Beta0Mode::zero;
  Complex beta0_value;

  double solver_tol = 1e-12;
  std::size_t solver_n_dense = 4096;

  std::vector<int> quantum_numbers{0};
  std::vector<double> sample_times;

  std::size_t grid_points = 2048;
  double grid_span_sigmas = 8.0;

  std::set<Task> tasks;
  std::optional<double> tau;        // cis/berry period; default from rational/period
  std::optional<bool> expect_cis;   // when set, the verdict becomes a check

  std::size_t oracle_points = 4096;
  double oracle_span_sigmas = 12.0;
  int oracle_dt_divisor = 2000;
  std::vector<double> oracle_dt_list;  // sweep; default tau_char / {250,500,1000,2000}

  std::map<std::string, double> tolerances;  // overrides of named defaults
  std::string output_dir = "out";
};

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& text, const std::string& origin);

// Runs the configured pipeline, writes report.json plus per-task CSVs into
// the output directory, and returns the process exit code: 0 when every
// enabled check passed, 1 when any failed.
int run_scenario(const ScenarioConfig& config, const std::string& output_dir_override = "",
                 double tol_scale = 1.0);

// Plain-text table of the available presets and their constants.
std::string list_presets_table();

}  // namespace gdo
