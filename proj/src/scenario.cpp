#include "radialwave/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <set>

#include "json.hpp"
#include "radialwave/analysis.hpp"
#include "radialwave/errors.hpp"
#include "radialwave/parallel.hpp"
#include "radialwave/svg.hpp"
#include "radialwave/transforms.hpp"
#include "radialwave/wave.hpp"

#ifndef RADIALWAVE_VERSION
#define RADIALWAVE_VERSION "unknown"
#endif

namespace radialwave {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::set<std::string> kKeys = {
    "scenario.name", "output.dir",
    "model.kind", "model.alpha", "model.beta", "model.scale", "model.path", "model.sphere_const",
    "data.kind", "data.field", "data.radius", "data.amplitude", "data.sharpness", "data.band", "data.band_edge",
    "grid.dr", "grid.r_max", "grid.out_dr", "grid.times",
    "solvers", "diagnostics",
    "fdtd.dr", "fdtd.dt",
    "series.domain_radius", "series.modes",
    "dalembert.distances",
    "huygens.distance", "huygens.t_start", "huygens.t_stop", "huygens.t_step",
    "equipartition.t_start", "equipartition.t_stop", "equipartition.t_step",
    "paley_wiener.n", "paley_wiener.tau", "paley_wiener.lambda_max",
    "pw_radius.j_max"};
const std::set<std::string> kSolvers = {"spectral", "series", "dalembert", "fdtd"};
const std::set<std::string> kDiagnostics = {"energy",       "huygens",   "equipartition", "light_cone",
                                            "agreement",    "paley_wiener", "pw_radius",  "energy_bound"};

[[noreturn]] void config_error(const std::string& what) { throw ConfigError("cli", what); }

std::vector<double> time_range(const Config& cfg, const std::string& prefix, double start, double stop,
                               double step) {
  start = cfg.num(prefix + ".t_start", start);
  stop = cfg.num(prefix + ".t_stop", stop);
  step = cfg.num(prefix + ".t_step", step);
  if (!(step > 0.0) || !(stop >= start)) config_error(prefix + ": need t_step > 0 and t_stop >= t_start");
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = start + step * static_cast<double>(i);
  return t;
}

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  return buf;
}

double sup_diff(const RadialFunction& a, const RadialFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

json diagnostic_entry(const std::string& claim, const std::string& region, double measured, double threshold,
                      bool pass, bool asserted) {
  json j;
  j["claim"] = claim;
  j["region"] = region;
  j["measured"] = std::isfinite(measured) ? json(measured) : json(nullptr);
  j["threshold"] = std::isfinite(threshold) ? json(threshold) : json(nullptr);
  j["pass"] = pass;
  j["asserted"] = asserted;
  return j;
}

json decay_json(const DecayReport& r) {
  json j;
  j["claim"] = r.claim;
  j["exact_claim"] = r.exact_claim;
  j["threshold_start"] = r.threshold_start;
  j["threshold"] = r.exact_claim ? json(r.threshold) : json(nullptr);
  j["measured"] = std::isfinite(r.measured) ? json(r.measured) : json(nullptr);
  j["rate"] = std::isfinite(r.rate) ? json(r.rate) : json(nullptr);
  j["fit_residual"] = std::isfinite(r.fit_residual) ? json(r.fit_residual) : json(nullptr);
  j["pass"] = r.pass;
  return j;
}

// Band-limited spectrum amplitude * erfc((lambda - band) / edge) / 2 on a lambda grid
// resolving both the given exponential type and the width of the edge.
SpectralFunction band_spectrum(const DensityModel& model, const Scenario& s, double type) {
  const double step = std::min(spectral_step(model, type), 0.25 * s.band_edge);
  const auto grid = UniformGrid::spanning(0.0, s.band + 8.0 * s.band_edge, step);
  SpectralFunction F{grid, std::vector<cd>(grid.size), plancherel_density(model, grid.points())};
  for (std::size_t k = 0; k < grid.size; ++k) {
    F.values[k] = s.amplitude * 0.5 * std::erfc((grid[k] - s.band) / s.band_edge);
  }
  return F;
}

// the log-linear fit of a non-exact claim starts two length units past the threshold
std::string decay_region(const DecayReport& r, const DensityModel& model) {
  return "t >= " + time_tag(r.exact_claim ? r.threshold_start : r.threshold_start + 2.0 * model.length_unit());
}

class Bundle {
 public:
  Bundle(fs::path dir, std::function<void(const std::string&)> log) : dir_(std::move(dir)), log_(std::move(log)) {}
  const fs::path& dir() const { return dir_; }
  fs::path path(const std::string& rel) {
    const fs::path p = dir_ / rel;
    fs::create_directories(p.parent_path());
    files_.push_back(rel);
    if (log_) log_("writing " + rel);
    return p;
  }
  std::vector<std::string>& files() { return files_; }

 private:
  fs::path dir_;
  std::function<void(const std::string&)> log_;
  std::vector<std::string> files_;
};

}  // namespace

Scenario Scenario::from_config(const Config& cfg) {
  for (const auto& [key, value] : cfg.values()) {
    if (!kKeys.count(key)) config_error(cfg.origin() + ": unknown key '" + key + "'");
  }
  Scenario s;
  s.config = cfg;
  s.name = cfg.str("scenario.name", fs::path(cfg.origin()).stem().string());
  s.model_kind = cfg.str("model.kind", "jacobi");
  if (s.model_kind == "jacobi") {
    s.alpha = cfg.num("model.alpha", s.alpha);
    s.beta = cfg.num("model.beta", s.beta);
    s.scale = cfg.num("model.scale", s.scale);
  } else if (s.model_kind == "table") {
    s.table_path = cfg.str("model.path");
    if (s.table_path.is_relative()) s.table_path = cfg.base_dir() / s.table_path;
    s.table_sphere_const = cfg.num("model.sphere_const", 1.0);
  } else {
    config_error("model.kind must be jacobi or table");
  }

  s.data_kind = cfg.str("data.kind", "bump");
  s.data_field = cfg.str("data.field", "f");
  s.radius = cfg.num("data.radius", s.radius);
  s.amplitude = cfg.num("data.amplitude", s.amplitude);
  s.sharpness = cfg.num("data.sharpness", s.sharpness);
  s.band = cfg.num("data.band", s.band);
  s.band_edge = cfg.num("data.band_edge", s.band_edge);
  if (s.data_kind != "bump" && s.data_kind != "bandlimited") config_error("data.kind must be bump or bandlimited");
  if (s.data_field != "f" && s.data_field != "g" && s.data_field != "both") {
    config_error("data.field must be f, g or both");
  }
  if (!(s.radius > 0.0) || !(s.sharpness > 0.0)) config_error("data.radius and data.sharpness must be positive");
  if (!(s.band > 0.0) || !(s.band_edge > 0.0)) config_error("data.band and data.band_edge must be positive");

  s.dr = cfg.num("grid.dr", s.dr);
  s.out_dr = cfg.num("grid.out_dr", s.out_dr);
  s.times = cfg.has("grid.times") ? cfg.nums("grid.times") : std::vector<double>{0.0};
  if (!(s.dr > 0.0) || !(s.out_dr > 0.0)) config_error("grid.dr and grid.out_dr must be positive");
  if (s.times.empty()) config_error("grid.times must list at least one time");
  const double default_r_max = s.radius + s.max_time() + 1.0 / s.scale;
  s.r_max = cfg.num("grid.r_max", default_r_max);
  if (s.data_kind == "bump" && s.r_max < default_r_max * (1.0 - 1e-12)) {
    config_error("grid.r_max must be at least R0 + max|t| + 1 = " + format_double(default_r_max));
  }

  s.solvers = cfg.has("solvers") ? cfg.words("solvers") : std::vector<std::string>{"spectral"};
  s.diagnostics = cfg.words("diagnostics");
  for (const auto& x : s.solvers) {
    if (!kSolvers.count(x)) config_error("unknown solver '" + x + "'");
  }
  for (const auto& x : s.diagnostics) {
    if (!kDiagnostics.count(x)) config_error("unknown diagnostic '" + x + "'");
  }

  s.fdtd_dr = cfg.num("fdtd.dr", s.fdtd_dr);
  s.fdtd_dt = cfg.num("fdtd.dt", 0.9 * s.fdtd_dr);
  s.series_radius = cfg.num("series.domain_radius", s.radius + s.max_time() + 1.0 / s.scale);
  s.series_modes = static_cast<int>(cfg.integer("series.modes", 0));
  s.dalembert_distances = cfg.has("dalembert.distances") ? cfg.nums("dalembert.distances") : std::vector<double>{};

  s.huygens_distance = cfg.num("huygens.distance", s.huygens_distance);
  s.huygens_times = time_range(cfg, "huygens", 0.0, s.huygens_distance + s.radius + 4.0 / s.scale, 0.05 / s.scale);
  s.equipartition_times = time_range(cfg, "equipartition", 0.0, s.radius + 6.0 / s.scale, 0.05 / s.scale);
  for (double n : cfg.has("paley_wiener.n") ? cfg.nums("paley_wiener.n") : std::vector<double>{0, 3, 6}) {
    if (n != std::floor(n) || n < 0) config_error("paley_wiener.n must list non-negative integers");
    s.pw_n.push_back(static_cast<int>(n));
  }
  s.pw_tau = cfg.has("paley_wiener.tau") ? cfg.nums("paley_wiener.tau") : std::vector<double>{0.0};
  s.pw_lambda_max = cfg.num("paley_wiener.lambda_max", 0.0);
  s.pw_j_max = static_cast<int>(cfg.integer("pw_radius.j_max", 40));
  s.out_dir = cfg.str("output.dir", s.name + "_out");

  // module guards, checked before anything is computed or written
  const DensityModel model = s.model();
  if (s.r_max > model.max_radius()) config_error("grid.r_max beyond the density table");
  if (s.data_kind == "bandlimited") {
    for (const auto& x : s.solvers) {
      if (x != "spectral") config_error("band-limited data support only the spectral solver");
    }
    for (const auto& x : s.diagnostics) {
      if (x != "pw_radius" && x != "energy_bound") {
        config_error("diagnostic '" + x + "' needs compactly supported data");
      }
    }
  } else if (s.checks("energy_bound")) {
    config_error("energy_bound needs band-limited data");
  }
  if (s.uses("fdtd")) {
    if (!(s.fdtd_dr > 0.0) || !(s.fdtd_dt > 0.0)) config_error("fdtd.dr and fdtd.dt must be positive");
    if (s.fdtd_dt > 0.9 * s.fdtd_dr * (1.0 + 1e-12)) {
      throw CFLError("fdtd", "fdtd.dt = " + format_double(s.fdtd_dt) + " exceeds 0.9 fdtd.dr = " +
                                format_double(0.9 * s.fdtd_dr));
    }
    for (std::size_t i = 0; i < s.times.size(); ++i) {
      if (s.times[i] < 0.0 || (i > 0 && s.times[i] < s.times[i - 1])) {
        config_error("the fdtd solver needs non-negative increasing grid.times");
      }
    }
  }
  if (s.uses("series")) {
    if (s.series_modes < 1) config_error("series.modes must be set to a positive count");
    if (!(s.radius + s.max_time() < s.series_radius)) config_error("series.domain_radius must exceed R0 + max|t|");
    if (s.r_max > s.series_radius) config_error("grid.r_max must not exceed series.domain_radius");
  }
  if (s.uses("dalembert") && s.dalembert_distances.empty()) config_error("dalembert.distances is empty");
  for (double d : s.dalembert_distances) {
    if (d < 0.0) config_error("dalembert.distances must be non-negative");
  }
  if (s.checks("huygens") && s.huygens_times.back() <= s.huygens_distance + s.radius) {
    config_error("huygens times must extend beyond distance + R0");
  }
  if (s.checks("light_cone") && !s.uses("spectral") && !s.uses("series") && !s.uses("fdtd")) {
    config_error("light_cone needs a grid solver");
  }
  if (s.checks("agreement") && (!s.uses("spectral") || s.solvers.size() < 2)) {
    config_error("agreement needs the spectral solver and at least one other");
  }
  if (s.pw_j_max < 3) config_error("pw_radius.j_max must be at least 3");
  return s;
}

DensityModel Scenario::model() const {
  if (model_kind == "jacobi") return DensityModel::jacobi(alpha, beta, scale);
  auto cols = read_table_csv(table_path);
  if (cols.size() < 2) throw ConfigError("cli", "table CSV needs two columns (r, A)");
  return DensityModel::table(std::move(cols[0]), std::move(cols[1]), table_sphere_const);
}

bool Scenario::uses(const std::string& solver) const {
  return std::find(solvers.begin(), solvers.end(), solver) != solvers.end();
}

bool Scenario::checks(const std::string& diagnostic) const {
  return std::find(diagnostics.begin(), diagnostics.end(), diagnostic) != diagnostics.end();
}

double Scenario::max_time() const {
  double m = 0.0;
  for (double t : times) m = std::max(m, std::abs(t));
  return m;
}

RunResult run_scenario(const fs::path& config_path, const RunOptions& options) {
  return run_scenario(Scenario::from_config(Config::load(config_path)), options);
}

RunResult run_scenario(const Scenario& s, const RunOptions& options) {
  auto log = [&](const std::string& m) {
    if (options.log) options.log(m);
  };
  const DensityModel model = s.model();
  const double R0 = s.radius;
  const bool compact = s.data_kind == "bump";

  // Cauchy data
  CauchyData data;
  CauchySpectrum spectrum;
  const double extent = s.max_time() + s.r_max;
  if (compact) {
    const auto grid = UniformGrid::spanning(0.0, R0 + 16.0 * s.dr, s.dr);
    auto bump = make_bump(grid, R0, s.amplitude, s.sharpness);
    auto f = s.data_field == "g" ? RadialFunction::zeros(grid, R0) : bump;
    auto g = s.data_field == "f" ? RadialFunction::zeros(grid, R0) : bump;
    data = CauchyData::make(std::move(f), std::move(g), R0);
    log("transforming the Cauchy data");
    spectrum = cauchy_spectrum(model, data, extent);
  } else {
    const auto grid = UniformGrid::spanning(0.0, s.r_max, s.dr);
    const auto F = band_spectrum(model, s, s.r_max + extent);
    auto values = inverse_radial_fourier(model, F, grid);
    values.support_radius = grid.back();
    const auto zero = RadialFunction::zeros(grid, grid.back());
    SpectralFunction Z{F.grid, std::vector<cd>(F.grid.size, 0.0), F.weight};
    const bool in_f = s.data_field != "g", in_g = s.data_field != "f";
    data = CauchyData{in_f ? values : zero, in_g ? values : zero, grid.back()};
    spectrum = CauchySpectrum{in_f ? F : Z, in_g ? F : Z, grid.back(), extent};
  }

  const auto& cal = calibrate(model);
  json manifest;
  manifest["name"] = s.name;
  manifest["mode"] = options.mode == RunMode::run ? "run" : options.mode == RunMode::spectrum ? "spectrum" : "check";
  manifest["scenario"] = s.config.values();
  manifest["model"] = {{"kind", s.model_kind},          {"alpha", model.alpha()}, {"beta", model.beta()},
                       {"scale", model.scale()},         {"rho", model.rho()},     {"dim", model.dim()},
                       {"sphere_const", model.sphere_const()}};
  manifest["calibration"] = {{"c0", cal.c0}, {"spread", cal.spread}, {"jacobi_reference", cal.jacobi_reference}};
  manifest["versions"] = {{"radialwave", RADIALWAVE_VERSION}, {"json", "nlohmann " + std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR)}};

  RunResult result;
  result.out_dir = options.out_dir.empty() ? s.out_dir : options.out_dir;
  Bundle bundle(result.out_dir, options.log);

  if (options.mode == RunMode::spectrum) {
    write_csv(bundle.path("spectrum_f.csv"), spectrum.f_hat);
    write_csv(bundle.path("spectrum_g.csv"), spectrum.g_hat);
    write_table_csv(bundle.path("plancherel.csv"), {"lambda", "weight"},
                    {spectrum.f_hat.grid.points(), spectrum.f_hat.weight});
    manifest["lambda_max"] = spectrum.f_hat.grid.empty() ? 0.0 : spectrum.f_hat.grid.back();
    manifest["lambda_step"] = spectrum.f_hat.grid.step;
    manifest["files"] = bundle.files();
    manifest["pass"] = true;
    write_text(bundle.path("manifest.json"), manifest.dump(2) + "\n");
    result.files = bundle.files();
    return result;
  }

  const bool write_snapshots = options.mode == RunMode::run;
  const auto out_grid = UniformGrid::spanning(0.0, s.r_max, s.out_dr);
  json snapshots = json::array();
  json diagnostics = json::array();
  auto record = [&](json entry) {
    if (entry["asserted"].get<bool>() && !entry["pass"].get<bool>()) {
      result.pass = false;
      result.failures.push_back(entry["claim"].get<std::string>());
    }
    diagnostics.push_back(std::move(entry));
  };

  // solvers: independent legs run as concurrent tasks
  std::vector<WaveState> spectral, series, fdtd;
  std::vector<std::vector<cd>> dalembert, dalembert_ref;
  std::vector<std::function<void()>> legs;
  std::mutex log_mutex;
  auto task_log = [&](const std::string& m) {
    std::lock_guard lock(log_mutex);
    log(m);
  };
  if (s.uses("spectral") || s.checks("energy") || s.checks("agreement")) {
    legs.push_back([&] {
      task_log("spectral solver");
      spectral = spectral_trajectory(model, spectrum, s.times, out_grid);
    });
  }
  if (s.uses("series")) {
    legs.push_back([&] {
      task_log("series solver (" + std::to_string(s.series_modes) + " modes)");
      const auto expansion = series_expansion(model, data, s.series_radius, s.series_modes);
      for (double t : s.times) series.push_back(propagate_series(expansion, t, out_grid));
    });
  }
  if (s.uses("fdtd")) {
    legs.push_back([&] {
      task_log("finite-difference solver");
      FdtdOptions opt;
      opt.r_max = s.r_max;
      fdtd = fdtd_trajectory(model, data, s.times, s.fdtd_dr, s.fdtd_dt, opt);
    });
  }
  if (s.uses("dalembert")) {
    legs.push_back([&] {
      task_log("spherical-mean solver");
      for (double d : s.dalembert_distances) {
        std::vector<cd> ref;
        const auto at_d = spectral_trajectory(model, spectrum, s.times, UniformGrid{d, 1.0, 1});
        for (const auto& st : at_d) ref.push_back(st.u.values[0]);
        dalembert.push_back(propagate_dalembert(model, data, d, s.times));
        dalembert_ref.push_back(std::move(ref));
      }
    });
  }
  parallel_for(legs.size(), [&](std::size_t i) { legs[i](); });

  if (write_snapshots) {
    auto emit = [&](const std::string& solver, const std::vector<WaveState>& states) {
      for (const auto& st : states) {
        const std::string rel = "snapshots/" + solver + "_t" + time_tag(st.t) + ".csv";
        write_csv(bundle.path(rel), st);
        snapshots.push_back({{"solver", solver}, {"t", st.t}, {"file", rel}});
      }
    };
    if (s.uses("spectral")) emit("spectral", spectral);
    if (s.uses("series")) emit("series", series);
    if (s.uses("fdtd")) emit("fdtd", fdtd);
    if (s.uses("dalembert")) {
      std::vector<std::vector<double>> cols(6);
      for (std::size_t i = 0; i < s.dalembert_distances.size(); ++i) {
        for (std::size_t j = 0; j < s.times.size(); ++j) {
          cols[0].push_back(s.dalembert_distances[i]);
          cols[1].push_back(s.times[j]);
          cols[2].push_back(dalembert[i][j].real());
          cols[3].push_back(dalembert[i][j].imag());
          cols[4].push_back(dalembert_ref[i][j].real());
          cols[5].push_back(dalembert_ref[i][j].imag());
        }
      }
      write_table_csv(bundle.path("dalembert.csv"), {"d", "t", "re_u", "im_u", "re_spectral", "im_spectral"}, cols);
    }
  }

  // diagnostics
  json energy_rows = json::array();
  if (s.checks("energy")) {
    log("energy diagnostics");
    std::vector<std::vector<double>> cols(4);
    double e0 = kNaN, drift = 0.0;
    for (const auto& st : spectral) {
      const auto e = energy(model, st, &spectrum);
      cols[0].push_back(st.t);
      cols[1].push_back(e.kinetic);
      cols[2].push_back(e.potential);
      cols[3].push_back(e.total);
      energy_rows.push_back({{"t", st.t}, {"K", e.kinetic}, {"P", e.potential}, {"E", e.total}});
      if (std::isnan(e0)) e0 = e.total;
      drift = std::max(drift, std::abs(e.total - e0) / std::abs(e0));
    }
    write_table_csv(bundle.path("energy.csv"), {"t", "K", "P", "E"}, cols);
    record(diagnostic_entry("energy_conservation", "t in grid.times (spectral solver)", drift, 1e-6,
                            drift <= 1e-6, true));
    // 2E = ||g||^2 + ||grad f||^2 - rho^2 ||f||^2 evaluated on the data grid
    WaveState initial{0.0, data.f, data.g, std::nullopt};
    initial.u.support_radius = std::numeric_limits<double>::infinity();
    const auto e_phys = energy(model, initial);
    const double two_e = spectral_total_energy2(model, spectrum);
    const double rel = std::abs(2.0 * e_phys.total - two_e) / std::abs(two_e);
    record(diagnostic_entry("energy_identity", "t = 0", rel, 1e-6, rel <= 1e-6, true));
  }
  double huygens_rate = kNaN;
  if (s.checks("huygens")) {
    log("Huygens profile");
    const auto rep = huygens_profile(model, data, s.huygens_distance, s.huygens_times);
    huygens_rate = rep.rate;
    write_table_csv(bundle.path("diagnostics/huygens.csv"), {"t", "abs_u", "threshold_start"},
                    {rep.abscissa, rep.values, std::vector<double>(rep.abscissa.size(), rep.threshold_start)});
    auto j = decay_json(rep);
    j["distance"] = s.huygens_distance;
    write_text(bundle.path("diagnostics/huygens.json"), j.dump(2) + "\n");
    record(diagnostic_entry("huygens", decay_region(rep, model), rep.measured, rep.exact_claim ? rep.threshold : 0.0,
                            rep.pass, true));
  }
  if (s.checks("equipartition")) {
    log("equipartition profile");
    const auto rep = equipartition_profile(model, data, s.equipartition_times, huygens_rate);
    write_table_csv(bundle.path("diagnostics/equipartition.csv"), {"t", "abs_k_minus_p_over_e", "threshold_start"},
                    {rep.abscissa, rep.values, std::vector<double>(rep.abscissa.size(), rep.threshold_start)});
    write_text(bundle.path("diagnostics/equipartition.json"), decay_json(rep).dump(2) + "\n");
    // a fitted claim measures a decay rate, bounded below by 0 or by 1.8 times the Huygens rate
    const double floor_rate = std::isfinite(huygens_rate) ? 2.0 * 0.9 * huygens_rate : 0.0;
    record(diagnostic_entry("equipartition", decay_region(rep, model), rep.measured,
                            rep.exact_claim ? rep.threshold : floor_rate, rep.pass, true));
  }
  if (s.checks("light_cone")) {
    log("light-cone leakage");
    auto check = [&](const std::string& solver, const std::vector<WaveState>& states, double threshold) {
      if (states.empty() || !s.uses(solver)) return;
      const double leak = light_cone_leakage(model, states, R0);
      record(diagnostic_entry("light_cone_" + solver, "r > R0 + |t| + 3 dr", leak, threshold, leak <= threshold,
                              true));
    };
    check("spectral", spectral, 1e-8);
    check("series", series, 1e-8);
    check("fdtd", fdtd, 1e-4);
  }
  if (s.checks("agreement")) {
    log("cross-solver agreement");
    std::vector<std::vector<double>> cols(4, std::vector<double>(s.times.size(), kNaN));
    json table = json::array();
    double worst_series = 0.0, worst_fdtd = 0.0, worst_dal = 0.0;
    for (std::size_t j = 0; j < s.times.size(); ++j) {
      cols[0][j] = s.times[j];
      if (!series.empty()) {
        cols[1][j] = sup_diff(series[j].u, spectral[j].u);
        worst_series = std::max(worst_series, cols[1][j]);
      }
      if (!fdtd.empty()) {
        double m = 0.0;
        for (std::size_t i = 0; i < out_grid.size; ++i) {
          const cd v = interpolate(fdtd[j].u.grid, fdtd[j].u.values, out_grid[i], Parity::even);
          m = std::max(m, std::abs(v - spectral[j].u.values[i]));
        }
        cols[2][j] = m;
        worst_fdtd = std::max(worst_fdtd, m);
      }
      if (!dalembert.empty()) {
        double m = 0.0;
        for (std::size_t i = 0; i < dalembert.size(); ++i) m = std::max(m, std::abs(dalembert[i][j] - dalembert_ref[i][j]));
        cols[3][j] = m;
        worst_dal = std::max(worst_dal, m);
      }
      table.push_back({{"t", s.times[j]},
                       {"series", std::isnan(cols[1][j]) ? json(nullptr) : json(cols[1][j])},
                       {"fdtd", std::isnan(cols[2][j]) ? json(nullptr) : json(cols[2][j])},
                       {"dalembert", std::isnan(cols[3][j]) ? json(nullptr) : json(cols[3][j])}});
    }
    write_table_csv(bundle.path("diagnostics/agreement.csv"), {"t", "series", "fdtd", "dalembert"}, cols);
    write_text(bundle.path("diagnostics/agreement.json"), table.dump(2) + "\n");
    if (!series.empty()) record(diagnostic_entry("agreement_series", "sup over r and t", worst_series, 1e-5, worst_series <= 1e-5, true));
    if (!fdtd.empty()) record(diagnostic_entry("agreement_fdtd", "sup over r and t", worst_fdtd, 1e-4, worst_fdtd <= 1e-4, true));
    if (!dalembert.empty()) record(diagnostic_entry("agreement_dalembert", "sample points", worst_dal, 1e-4, worst_dal <= 1e-4, true));
  }
  if (s.checks("paley_wiener")) {
    log("Paley-Wiener report");
    const auto& f = s.data_field == "g" ? data.g : data.f;
    const auto rep = paley_wiener_report(model, f, s.pw_n, s.pw_tau, s.pw_lambda_max);
    std::vector<std::vector<double>> cols(6);
    bool all = true;
    json rows = json::array();
    for (const auto& r : rep.rows) {
      cols[0].push_back(r.n);
      cols[1].push_back(r.tau);
      cols[2].push_back(r.sup);
      cols[3].push_back(r.sup_half);
      cols[4].push_back(r.argmax);
      cols[5].push_back(r.plateau ? 1.0 : 0.0);
      all = all && r.plateau;
      rows.push_back({{"n", r.n}, {"tau", r.tau}, {"sup", r.sup}, {"sup_half", r.sup_half}, {"argmax", r.argmax},
                      {"plateau", r.plateau}});
    }
    write_table_csv(bundle.path("diagnostics/paley_wiener.csv"), {"n", "tau", "sup", "sup_half", "argmax", "plateau"},
                    cols);
    write_text(bundle.path("diagnostics/paley_wiener.json"),
               json{{"support_radius", rep.support_radius}, {"lambda_max", rep.lambda_max}, {"rows", rows}}.dump(2) +
                   "\n");
    record(diagnostic_entry("paley_wiener", "lambda in [0, " + format_double(rep.lambda_max) + "]", all ? 1.0 : 0.0,
                            1.0, all, true));
  }
  if (s.checks("pw_radius")) {
    log("Paley-Wiener radius");
    const auto& F = s.data_field == "g" ? spectrum.g_hat : spectrum.f_hat;
    const auto rep = pw_radius(model, F, s.pw_j_max);
    std::vector<double> j_index(rep.moments.size());
    for (std::size_t j = 0; j < j_index.size(); ++j) j_index[j] = static_cast<double>(j + 1);
    write_table_csv(bundle.path("diagnostics/pw_radius.csv"), {"j", "m_j"}, {j_index, rep.moments});
    write_text(bundle.path("diagnostics/pw_radius.json"),
               json{{"value", rep.value}, {"last_moment", rep.last_moment}, {"j_max", s.pw_j_max}}.dump(2) + "\n");
    if (compact) {
      // compactly supported data have unbounded spectral support: report only
      record(diagnostic_entry("pw_radius", "j <= " + std::to_string(s.pw_j_max), rep.value, kNaN, true, false));
    } else {
      const double rel = std::abs(rep.value - s.band) / s.band;
      record(diagnostic_entry("pw_radius", "j = " + std::to_string(s.pw_j_max), rep.value, s.band, rel <= 0.02, true));
    }
  }
  if (s.checks("energy_bound")) {
    log("energy bound");
    const double lam = s.band + 6.0 * s.band_edge;
    // band-limited data decay too slowly in r for grid norms; use the Plancherel side
    const double bound =
        lam * lam * spectral_norm2(model, spectrum.f_hat) + spectral_norm2(model, spectrum.g_hat) + 1e-6;
    const double two_e = spectral_total_energy2(model, spectrum);
    record(diagnostic_entry("energy_bound", "Lambda = " + format_double(lam), two_e, bound, two_e <= bound, true));
  }

  manifest["snapshots"] = snapshots;
  manifest["energy"] = energy_rows;
  manifest["diagnostics"] = diagnostics;
  if (options.mode == RunMode::run) {
    std::vector<std::string> warnings;
    const auto plots = emit_plots(result.out_dir, &warnings);
    for (const auto& p : plots) bundle.files().push_back(p);
    for (const auto& w : warnings) log("warning: " + w);
  }
  manifest["pass"] = result.pass;
  manifest["files"] = bundle.files();
  write_text(bundle.path("manifest.json"), manifest.dump(2) + "\n");
  result.files = bundle.files();
  return result;
}

std::vector<std::string> emit_plots(const fs::path& bundle, std::vector<std::string>* warnings) {
  std::vector<std::string> written;
  auto warn = [&](const std::string& w) {
    if (warnings) warnings->push_back(w);
  };
  auto save = [&](const std::string& rel, const std::string& svg) {
    fs::create_directories((bundle / rel).parent_path());
    write_text(bundle / rel, svg);
    written.push_back(rel);
  };

  // snapshots/<solver>_t<time>.csv, one plot per solver
  std::vector<std::string> names;
  if (fs::is_directory(bundle / "snapshots")) {
    for (const auto& e : fs::directory_iterator(bundle / "snapshots")) {
      if (e.path().extension() == ".csv") names.push_back(e.path().filename().string());
    }
  }
  std::sort(names.begin(), names.end());
  if (names.empty()) warn("no snapshots; snapshot plots skipped");
  std::map<std::string, std::vector<std::pair<double, std::string>>> by_solver;
  for (const auto& n : names) {
    const auto cut = n.rfind("_t");
    if (cut == std::string::npos) continue;
    const std::string stem = n.substr(0, n.size() - 4);
    by_solver[n.substr(0, cut)].push_back({std::stod(stem.substr(cut + 2)), n});
  }
  for (auto& [solver, files] : by_solver) {
    std::sort(files.begin(), files.end());
    std::vector<PlotSeries> series;
    for (const auto& [t, file] : files) {
      const auto cols = read_table_csv(bundle / "snapshots" / file);
      if (cols.size() < 2) continue;
      series.push_back({"t = " + time_tag(t), cols[0], cols[1]});
    }
    save("plots/snapshots_" + solver + ".svg",
         line_plot_svg(series, {"u(r, t), " + solver + " solver", "r", "Re u", false, std::nullopt, ""}));
  }

  if (fs::exists(bundle / "energy.csv")) {
    const auto cols = read_table_csv(bundle / "energy.csv");
    if (cols.size() == 4 && !cols[0].empty()) {
      save("plots/energy.svg", line_plot_svg({{"K", cols[0], cols[1]}, {"P", cols[0], cols[2]}, {"E", cols[0], cols[3]}},
                                             {"Energies", "t", "energy", false, std::nullopt, ""}));
    } else {
      warn("empty energy table; energy plot skipped");
    }
  }
  for (const std::string name : {"huygens", "equipartition"}) {
    const fs::path csv = bundle / "diagnostics" / (name + ".csv");
    if (!fs::exists(csv)) continue;
    const auto cols = read_table_csv(csv);
    if (cols.size() < 3 || cols[0].empty()) {
      warn("empty " + name + " report; plot skipped");
      continue;
    }
    const std::string ylabel = name == "huygens" ? "|u(d, t)|" : "|K - P| / E";
    save("plots/" + name + ".svg", line_plot_svg({{name, cols[0], cols[1]}},
                                                 {name == "huygens" ? "Huygens decay" : "Equipartition", "t", ylabel,
                                                  true, cols[2].front(), "t = " + time_tag(cols[2].front())}));
  }
  return written;
}

}  // namespace radialwave
