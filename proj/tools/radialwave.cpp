// radialwave: config-driven runner for the radial wave scenarios.
//
//   radialwave run <config>        solvers, diagnostics, snapshots and plots
//   radialwave spectrum <config>   spectra of the Cauchy data and the Plancherel weight
//   radialwave check <config>      diagnostics only
//
// Exit codes: 0 all asserted diagnostics pass, 1 error, 2 diagnostic failure.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "radialwave/parallel.hpp"
#include "radialwave/scenario.hpp"

int main(int argc, char** argv) {
  using namespace radialwave;

  CLI::App app{"Radial wave equation on harmonic manifolds"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;
  unsigned threads = 1;
  bool verbose = false;
  app.add_option("--out", out, "Output directory (overrides output.dir)");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

  std::string config;
  RunMode mode = RunMode::run;
  const std::pair<const char*, RunMode> commands[] = {
      {"run", RunMode::run}, {"spectrum", RunMode::spectrum}, {"check", RunMode::check}};
  const char* help[] = {"Run solvers and diagnostics, write snapshots and plots",
                        "Write the spectra of the Cauchy data", "Run the diagnostics only"};
  for (std::size_t i = 0; i < 3; ++i) {
    auto* sub = app.add_subcommand(commands[i].first, help[i]);
    sub->add_option("config", config, "Scenario config file")->required()->check(CLI::ExistingFile);
    sub->callback([&mode, m = commands[i].second] { mode = m; });
  }
  CLI11_PARSE(app, argc, argv);

  set_thread_count(threads);
  RunOptions options;
  options.mode = mode;
  options.out_dir = out;
  const auto start = std::chrono::steady_clock::now();
  if (verbose) {
    options.log = [start](const std::string& m) {
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::fprintf(stderr, "[%8.2fs] %s\n", s, m.c_str());
    };
  }

  try {
    const auto result = run_scenario(config, options);
    for (const auto& f : result.failures) std::cerr << "FAIL " << f << "\n";
    std::cout << (result.pass ? "pass" : "fail") << " " << result.out_dir.string() << "\n";
    return result.pass ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
