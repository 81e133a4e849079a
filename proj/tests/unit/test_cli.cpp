#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "radialwave/errors.hpp"
#include "radialwave/io.hpp"
#include "radialwave/scenario.hpp"
#include "radialwave/svg.hpp"

using namespace radialwave;
namespace fs = std::filesystem;

namespace {

const std::string small_h3 = R"(
scenario.name = small
model.kind = jacobi
model.alpha = 0.5
model.beta = -0.5
data.radius = 0.5
grid.dr = 1e-4
grid.out_dr = 0.005
grid.times = 0, 0.5, 1
solvers = spectral
diagnostics = energy, light_cone
)";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("radialwave_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

/// small_h3 with some keys replaced or added.
std::string with(const std::string& overrides) {
  auto values = Config::parse(small_h3).values();
  const auto extra = Config::parse(overrides);
  for (const auto& [k, v] : extra.values()) values[k] = v;
  std::string text;
  for (const auto& [k, v] : values) text += k + " = " + v + "\n";
  return text;
}

Scenario parse(const std::string& text) { return Scenario::from_config(Config::parse(text)); }

}  // namespace

TEST_CASE("config parsing") {
  const auto c = Config::parse("# comment\n\na.b = 1.5\nlist = 1, 2 3\nname = x y\nflag = true\n");
  CHECK(c.num("a.b") == 1.5);
  CHECK(c.nums("list") == std::vector<double>{1, 2, 3});
  CHECK(c.str("name") == "x y");
  CHECK(c.flag("flag", false));
  CHECK(c.num("missing", 7.0) == 7.0);
  CHECK_THROWS_AS(c.num("missing"), ConfigError);
  CHECK_THROWS_AS(c.num("name"), ConfigError);
  CHECK_THROWS_AS(Config::parse("no equals sign\n"), ConfigError);
}

TEST_CASE("scenario validation rejects bad configs before computing") {
  CHECK_NOTHROW(parse(small_h3));
  CHECK_THROWS_AS(parse(with("grid.dx = 1\n")), ConfigError);
  CHECK_THROWS_AS(parse(with("grid.r_max = 0.6\n")), ConfigError);
  CHECK_THROWS_AS(parse(with("diagnostics = telepathy\n")), ConfigError);
  CHECK_THROWS_AS(parse(with("solvers = spectral, fdtd\nfdtd.dr = 1e-3\nfdtd.dt = 2e-3\n")), CFLError);
  CHECK_THROWS_AS(parse(with("solvers = spectral, series\nseries.domain_radius = 1\nseries.modes = 100\n")),
                  ConfigError);
  CHECK_THROWS_AS(parse(with("diagnostics = agreement\n")), ConfigError);
  CHECK_THROWS_AS(parse(with("model.alpha = -1\n")), DomainError);

  const auto s = parse(small_h3);
  CHECK(s.r_max == doctest::Approx(0.5 + 1.0 + 1.0));
  CHECK(s.out_dir == fs::path("small_out"));
}

TEST_CASE("failed validation leaves no output behind") {
  const auto dir = scratch("cfl");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.cfg") << with("solvers = spectral, fdtd\nfdtd.dr = 1e-3\nfdtd.dt = 2e-3\n");
  RunOptions opt;
  opt.out_dir = dir / "out";
  CHECK_THROWS_AS(run_scenario(dir / "bad.cfg", opt), CFLError);
  CHECK_FALSE(fs::exists(dir / "out"));
  fs::remove_all(dir);
}

TEST_CASE("run mode writes a complete, deterministic bundle") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  RunOptions opt;
  opt.out_dir = a;
  const auto ra = run_scenario(parse(small_h3), opt);
  opt.out_dir = b;
  const auto rb = run_scenario(parse(small_h3), opt);
  CHECK(ra.pass);
  CHECK(ra.failures.empty());
  REQUIRE(ra.files == rb.files);
  for (const auto& f : {"manifest.json", "energy.csv", "snapshots/spectral_t0.5.csv", "plots/energy.svg",
                        "plots/snapshots_spectral.svg"}) {
    CHECK(fs::exists(a / f));
  }
  for (const auto& f : ra.files) CHECK(slurp(a / f) == slurp(b / f));
  const auto manifest = slurp(a / "manifest.json");
  CHECK(manifest.find("\"c0\"") != std::string::npos);
  CHECK(manifest.find("\"pass\": true") != std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("spectrum and check modes") {
  const auto dir = scratch("modes");
  RunOptions opt;
  opt.out_dir = dir / "spectrum";
  opt.mode = RunMode::spectrum;
  run_scenario(parse(small_h3), opt);
  CHECK(fs::exists(dir / "spectrum" / "spectrum_f.csv"));
  CHECK(fs::exists(dir / "spectrum" / "plancherel.csv"));
  CHECK_FALSE(fs::exists(dir / "spectrum" / "snapshots"));

  opt.out_dir = dir / "check";
  opt.mode = RunMode::check;
  const auto r = run_scenario(parse(small_h3), opt);
  CHECK(r.pass);
  CHECK_FALSE(fs::exists(dir / "check" / "plots"));
  fs::remove_all(dir);
}

TEST_CASE("plots from an empty bundle are skipped with a warning") {
  const auto dir = scratch("empty");
  fs::create_directories(dir);
  std::vector<std::string> warnings;
  const auto files = emit_plots(dir, &warnings);
  CHECK(files.empty());
  REQUIRE_FALSE(warnings.empty());
  CHECK(warnings.front().find("no snapshots") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "plots"));
  fs::remove_all(dir);
}

TEST_CASE("energy and decay plots") {
  const auto dir = scratch("plots");
  fs::create_directories(dir / "diagnostics");
  write_table_csv(dir / "energy.csv", {"t", "K", "P", "E"}, {{0, 1, 2}, {0, 0.4, 0.5}, {1, 0.6, 0.5}, {1, 1, 1}});
  write_table_csv(dir / "diagnostics" / "huygens.csv", {"t", "abs_u", "threshold_start"},
                  {{0, 1, 2, 3}, {1e-3, 0.5, 1e-20, 1e-22}, {2.5, 2.5, 2.5, 2.5}});
  std::vector<std::string> warnings;
  const auto files = emit_plots(dir, &warnings);
  CHECK(std::find(files.begin(), files.end(), "plots/energy.svg") != files.end());
  const auto energy = slurp(dir / "plots" / "energy.svg");
  for (const char* name : {">K<", ">P<", ">E<"}) CHECK(energy.find(name) != std::string::npos);
  const auto huygens = slurp(dir / "plots" / "huygens.svg");
  CHECK(huygens.find("stroke-dasharray") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("svg output depends only on its inputs") {
  PlotSeries s{"u", {0, 1, 2}, {1, -1, 0.5}};
  PlotOptions o{"title & more", "x", "y", false, 1.0, "mark"};
  const auto a = line_plot_svg({s}, o);
  CHECK(a == line_plot_svg({s}, o));
  CHECK(a.rfind("<svg", 0) == 0);
  CHECK(a.find("title &amp; more") != std::string::npos);
  o.log_y = true;
  CHECK_NOTHROW(line_plot_svg({s}, o));
}
