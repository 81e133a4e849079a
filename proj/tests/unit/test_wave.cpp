#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "radialwave/errors.hpp"
#include "radialwave/io.hpp"
#include "radialwave/wave.hpp"

using namespace radialwave;

namespace {

const DensityModel h3 = DensityModel::jacobi(0.5, -0.5, 1.0);
const DensityModel h4 = DensityModel::jacobi(1.0, -0.5, 1.0);

const double R0 = 0.5;
const UniformGrid data_grid = UniformGrid::spanning(0.0, 1.0, 1e-4);

double f_exact(double r) { return oracle::bump(r, R0); }
double g_exact(double r) { return 0.5 * oracle::bump(r, R0, 2.0); }

CauchyData h3_data() { return CauchyData::make(make_bump(data_grid, R0), make_bump(data_grid, R0, 0.5, 2.0), R0); }

double sup_vs_exact(const WaveState& s) {
  double e = 0.0;
  for (std::size_t i = 0; i < s.u.grid.size; ++i) {
    e = std::max(e, std::abs(s.u.values[i] - oracle::h3_wave(f_exact, g_exact, s.u.grid[i], s.t)));
  }
  return e;
}

}  // namespace

TEST_CASE("Cauchy data must vanish beyond the support") {
  auto f = make_bump(data_grid, 0.8);
  CHECK_THROWS_AS(CauchyData::make(f, RadialFunction::zeros(data_grid), 0.5), DomainError);
  const auto d = CauchyData::bump(data_grid, 0.5, 1.0, true);
  CHECK(d.f.max_abs() == 0.0);
  CHECK(d.g.max_abs() > 0.0);
}

TEST_CASE("spectral solver reproduces the exact H3 solution") {
  const auto data = h3_data();
  const auto r = UniformGrid::spanning(0.0, 5.0, 0.02);
  for (double t : {0.0, 0.3, 1.0, 2.5, -1.0}) {
    const auto s = propagate_spectral(h3, data, t, r);
    CHECK(sup_vs_exact(s) < 1e-8);
  }
}

TEST_CASE("series solver reproduces the exact H3 solution") {
  const auto data = h3_data();
  const auto r = UniformGrid::spanning(0.0, 3.0, 0.02);
  const auto series = series_expansion(h3, data, 3.2, 2000);
  for (double t : {0.0, 1.0, 2.5}) CHECK(sup_vs_exact(propagate_series(series, t, r)) < 1e-8);
  CHECK_THROWS_AS(propagate_series(series, 2.8, r), DomainError);
}

TEST_CASE("too few series modes leave a visible tail") {
  CHECK_THROWS_AS(series_expansion(h3, h3_data(), 3.2, 40), TailError);
}

TEST_CASE("a single Dirichlet mode is a standing wave") {
  // on the ball of radius pi in H3 the modes are sin(k r) / (k sinh r) with frequency k
  const auto basis = dirichlet_spectrum(h3, oracle::pi, 4, 0.01);
  const auto r = UniformGrid::spanning(0.0, 3.0, 0.05);
  for (int k = 1; k <= 4; ++k) {
    std::vector<cd> a(4, 0.0), b(4, 0.0);
    a[k - 1] = 1.0;
    b[k - 1] = 0.5;
    const auto s = SeriesExpansion::from_coefficients(h3, basis, a, b);
    const double t = 1.3;
    const auto u = propagate_series(s, t, r);
    for (std::size_t i = 0; i < r.size; ++i) {
      const double ref = oracle::h3_phi(k, r[i]).real() * (std::cos(k * t) + 0.5 * std::sin(k * t) / k);
      CHECK(std::abs(u.u.values[i] - ref) < 1e-9);
    }
  }
}

TEST_CASE("d'Alembert representation reproduces the exact H3 solution") {
  const auto data = h3_data();
  const std::vector<double> times{0.0, 0.4, 1.3, 2.2, -0.7};
  for (double d : {0.0, 0.3, 1.5}) {
    const auto u = propagate_dalembert(h3, data, d, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      CHECK(std::abs(u[i] - oracle::h3_wave(f_exact, g_exact, d, times[i])) < 1e-6);
    }
  }
}

TEST_CASE("FDTD approximates the exact H3 solution at second order") {
  const auto data = h3_data();
  FdtdOptions opt;
  opt.r_max = 3.0;
  double err[2];
  const double drs[2] = {4e-3, 2e-3};
  for (int k = 0; k < 2; ++k) {
    const auto s = propagate_fdtd(h3, data, 1.0, drs[k], 0.9 * drs[k], opt);
    err[k] = sup_vs_exact(s);
  }
  CHECK(err[1] < 2e-3);
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("FDTD guards") {
  const auto data = h3_data();
  CHECK_THROWS_AS(propagate_fdtd(h3, data, 1.0, 1e-3, 2e-3), CFLError);
  FdtdOptions tight;
  tight.r_max = 1.0;
  CHECK_THROWS_AS(propagate_fdtd(h3, data, 2.0, 5e-3, 4e-3, tight), BoundaryTouchError);
}

TEST_CASE("time reversal and linearity of the spectral solver") {
  const auto grid = UniformGrid::spanning(0.0, 1.0, 1e-4);
  const auto f = make_bump(grid, 1.0);
  const auto g = make_bump(grid, 0.7, 0.3);
  const auto r = UniformGrid::spanning(0.0, 4.0, 0.02);
  const auto fg = propagate_spectral(h4, CauchyData::make(f, g), 1.7, r);
  const auto f_only = propagate_spectral(h4, CauchyData::make(f, RadialFunction::zeros(grid)), 1.7, r);
  const auto g_only = propagate_spectral(h4, CauchyData::make(RadialFunction::zeros(grid), g), 1.7, r);
  const auto back = propagate_spectral(h4, CauchyData::make(f, RadialFunction::zeros(grid)), -1.7, r);
  for (std::size_t i = 0; i < r.size; ++i) {
    CHECK(std::abs(fg.u.values[i] - f_only.u.values[i] - g_only.u.values[i]) < 1e-12);
    // with g = 0 the solution is even in t
    CHECK(std::abs(back.u.values[i] - f_only.u.values[i]) < 1e-12);
  }
}

TEST_CASE("energy is conserved and K, P follow the spectral identity") {
  const auto grid = UniformGrid::spanning(0.0, 1.0, 1e-4);
  const auto data = CauchyData::make(make_bump(grid, 1.0), make_bump(grid, 1.0, 0.5), 1.0);
  const auto spec = cauchy_spectrum(h4, data, 22.0);
  const auto r = UniformGrid::spanning(0.0, 12.0, 0.01);
  const std::vector<double> times{0.0, 2.0, 5.0, 10.0};
  const auto traj = spectral_trajectory(h4, spec, times, r);
  const double e2 = spectral_total_energy2(h4, spec);
  for (const auto& s : traj) {
    const auto e = energy(h4, s, &spec);
    CHECK(std::abs(2 * e.total - e2) < 1e-6 * e2);
    CHECK(e.kinetic >= 0.0);
  }
}

TEST_CASE("snapshot CSV round trip") {
  const auto data = h3_data();
  const auto s = propagate_spectral(h3, data, 0.5, UniformGrid::spanning(0.0, 2.0, 0.1));
  const auto path = std::filesystem::temp_directory_path() / "radialwave_wave_snapshot.csv";
  write_csv(path, s);
  const auto cols = read_table_csv(path);
  REQUIRE(cols.size() == 5);
  for (std::size_t i = 0; i < s.u.grid.size; ++i) {
    CHECK(cols[0][i] == s.u.grid[i]);
    CHECK(cols[1][i] == s.u.values[i].real());
  }
  std::filesystem::remove(path);
}
