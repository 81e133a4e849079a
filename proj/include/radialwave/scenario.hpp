#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "radialwave/density.hpp"
#include "radialwave/io.hpp"

namespace radialwave {

/// A validated scenario. Every key of the flat config is listed in the README; unknown
/// keys are rejected so typos never silently fall back to defaults.
struct Scenario {
  std::string name;
  Config config;

  // model
  std::string model_kind = "jacobi";
  double alpha = 0.5, beta = -0.5, scale = 1.0;
  std::filesystem::path table_path;
  double table_sphere_const = 1.0;

  // data
  std::string data_kind = "bump";  // bump | bandlimited
  std::string data_field = "f";    // f | g | both
  double radius = 1.0;
  double amplitude = 1.0;
  double sharpness = 1.0;
  double band = 2.0;        // spectral edge of band-limited data
  double band_edge = 0.01;  // erfc width of that edge

  // grids
  double dr = 1e-4;
  double r_max = 0.0;
  double out_dr = 0.005;
  std::vector<double> times;

  std::vector<std::string> solvers;
  std::vector<std::string> diagnostics;

  double fdtd_dr = 1e-3;
  double fdtd_dt = 9e-4;
  double series_radius = 0.0;
  int series_modes = 0;
  std::vector<double> dalembert_distances;

  double huygens_distance = 2.0;
  std::vector<double> huygens_times;
  std::vector<double> equipartition_times;
  std::vector<int> pw_n;
  std::vector<double> pw_tau;
  double pw_lambda_max = 0.0;
  int pw_j_max = 40;

  std::filesystem::path out_dir;

  /// Parses and validates; throws ConfigError, CFLError or DomainError before any
  /// computation or output.
  static Scenario from_config(const Config& config);
  DensityModel model() const;
  bool uses(const std::string& solver) const;
  bool checks(const std::string& diagnostic) const;
  double max_time() const;
};

enum class RunMode { run, spectrum, check };

struct RunOptions {
  RunMode mode = RunMode::run;
  std::filesystem::path out_dir;  // overrides output.dir when non-empty
  std::function<void(const std::string&)> log;
};

struct RunResult {
  bool pass = true;
  std::filesystem::path out_dir;
  std::vector<std::string> files;  // relative to out_dir, in write order
  std::vector<std::string> failures;
};

/// Runs a scenario and writes its artifact bundle (manifest.json, CSVs, diagnostic JSONs,
/// SVG plots in run mode).
RunResult run_scenario(const std::filesystem::path& config_path, const RunOptions& options = {});
RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

/// Renders SVG plots from the CSVs of a bundle into `<bundle>/plots`. Returns the files
/// written (relative to the bundle); `warnings` receives notes about skipped plots.
std::vector<std::string> emit_plots(const std::filesystem::path& bundle, std::vector<std::string>* warnings = nullptr);

}  // namespace radialwave
