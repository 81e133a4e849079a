#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "radialwave/analysis.hpp"
#include "radialwave/errors.hpp"

using namespace radialwave;

namespace {

const DensityModel h3 = DensityModel::jacobi(0.5, -0.5, 1.0);
const DensityModel h4 = DensityModel::jacobi(1.0, -0.5, 1.0);

std::vector<double> range(double a, double b, double step) {
  std::vector<double> t;
  for (int i = 0; a + i * step <= b + 1e-12; ++i) t.push_back(a + i * step);
  return t;
}

}  // namespace

TEST_CASE("decay fit recovers an exponential rate") {
  DecayReport rep;
  for (double x = 0.0; x <= 10.0; x += 0.1) {
    rep.abscissa.push_back(x);
    rep.values.push_back(3.0 * std::exp(-1.7 * x));
  }
  fit_decay(rep, 2.0);
  CHECK(rep.rate == doctest::Approx(1.7).epsilon(1e-10));
  CHECK(rep.fit_residual < 1e-10);

  DecayReport noisy;
  for (int i = 0; i < 50; ++i) {
    noisy.abscissa.push_back(i);
    noisy.values.push_back(i % 2 ? 1.0 : 1e-3);
  }
  fit_decay(noisy, 0.0);
  CHECK(std::isnan(noisy.rate));
}

TEST_CASE("strong Huygens principle in H3") {
  const double R0 = 0.5, d = 2.0, dr = 1e-4;
  const auto data = CauchyData::bump(UniformGrid::spanning(0.0, R0, dr), R0);
  const auto t = range(0.0, 6.0, 0.05);
  const auto rep = huygens_profile(h3, data, d, t);
  CHECK(rep.exact_claim);
  CHECK(rep.threshold_start == doctest::Approx(d + R0 + 2 * dr));
  CHECK(rep.pass);
  // the signal is present before the back of the light cone and agrees with the exact solution
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double ref = std::abs(oracle::h3_wave([&](double r) { return oracle::bump(r, R0); }, [](double) { return 0.0; }, d, t[j]));
    CHECK(std::abs(rep.values[j] - ref) < 1e-9);
  }
}

TEST_CASE("H4 has only asymptotic Huygens behaviour") {
  const double R0 = 1.0;
  const auto data = CauchyData::bump(UniformGrid::spanning(0.0, R0, 1e-4), R0);
  const auto rep = huygens_profile(h4, data, 1.0, range(0.0, 10.0, 0.05));
  CHECK_FALSE(rep.exact_claim);
  CHECK(rep.pass);
  CHECK(rep.rate > 0.5);
  // the solution behind the light cone is small but does not vanish
  CHECK(rep.values.back() > 1e-12);
}

TEST_CASE("equipartition is exact in H3 and asymptotic in H4") {
  const auto d3 = CauchyData::bump(UniformGrid::spanning(0.0, 0.5, 1e-4), 0.5);
  const auto e3 = equipartition_profile(h3, d3, range(0.0, 4.0, 0.05));
  CHECK(e3.exact_claim);
  CHECK(e3.pass);
  CHECK(e3.values.front() == doctest::Approx(1.0).epsilon(1e-8));  // all energy potential at t = 0

  const auto d4 = CauchyData::bump(UniformGrid::spanning(0.0, 1.0, 1e-4), 1.0);
  const auto e4 = equipartition_profile(h4, d4, range(0.0, 8.0, 0.05));
  CHECK_FALSE(e4.exact_claim);
  CHECK(e4.pass);
  CHECK(e4.fit_residual < 0.1);
}

TEST_CASE("Paley-Wiener bounds plateau for compactly supported data") {
  const auto f = make_bump(UniformGrid::spanning(0.0, 1.0, 1e-4), 1.0);
  const std::vector<int> n{0, 3, 6};
  const std::vector<double> tau{0.0, 0.5};
  const auto rep = paley_wiener_report(h3, f, n, tau, 400.0);
  REQUIRE(rep.rows.size() == 6);
  for (const auto& row : rep.rows) CHECK(row.plateau);
  CHECK(rep.support_radius == 1.0);

  const auto zero = RadialFunction::zeros(UniformGrid::spanning(0.0, 1.0, 1e-3), 1.0);
  for (const auto& row : paley_wiener_report(h3, zero, n, tau, 50.0).rows) CHECK(row.sup == 0.0);
}

TEST_CASE("moment radius of a flat spectrum") {
  // H3 weight lambda^2: M_j = C0 int_0^L lambda^(2j+2) dlambda = C0 L^(2j+3) / (2j+3)
  const double L = 2.0;
  const auto grid = UniformGrid::spanning(0.0, L, 1e-4);
  SpectralFunction F{grid, std::vector<cd>(grid.size, 1.0), {}};
  for (std::size_t k = 0; k < grid.size; ++k) F.weight.push_back(grid[k] * grid[k]);
  const auto pw = pw_radius(h3, F, 40);
  const double c0 = 1.0 / (2 * oracle::pi * oracle::pi);
  for (int j : {1, 10, 40}) {
    const double ref = std::pow(c0 * std::pow(L, 2 * j + 3) / (2 * j + 3), 1.0 / (2 * j));
    CHECK(pw.moments[j - 1] == doctest::Approx(ref).epsilon(1e-6));
  }
  CHECK(pw.value == doctest::Approx(L).epsilon(1e-3));
  CHECK(pw.last_moment < L);

  SpectralFunction zero{grid, std::vector<cd>(grid.size, 0.0), F.weight};
  CHECK(pw_radius(h3, zero, 10).value == 0.0);
  CHECK_THROWS_AS(pw_radius(h3, F, 0), DomainError);
}

TEST_CASE("support radius") {
  const auto grid = UniformGrid::spanning(0.0, 2.0, 0.01);
  const auto f = make_bump(grid, 1.3);
  CHECK(support_radius(f, 0.0) == doctest::Approx(1.29));
  CHECK(support_radius(f, 1e-3) < 1.29);
  CHECK(support_radius(RadialFunction::zeros(grid), 0.0) == 0.0);
}

TEST_CASE("light cone leakage") {
  const double R0 = 0.5;
  const auto data = CauchyData::bump(UniformGrid::spanning(0.0, R0, 1e-4), R0);
  const auto spec = cauchy_spectrum(h4, data, 12.0);
  const std::vector<double> t{0.0, 1.0, 3.0, 5.0};
  const auto traj = spectral_trajectory(h4, spec, t, UniformGrid::spanning(0.0, 6.0, 0.005));
  CHECK(light_cone_leakage(h4, traj, R0) < 1e-8);
  // claiming a smaller support exposes the energy outside
  CHECK(light_cone_leakage(h4, traj, 0.1) > 1e-3);

  WaveState zero{0.0, RadialFunction::zeros(UniformGrid::spanning(0.0, 1.0, 0.01)),
                 RadialFunction::zeros(UniformGrid::spanning(0.0, 1.0, 0.01)), std::nullopt};
  CHECK(light_cone_leakage(h4, std::span(&zero, 1), 0.5) == 0.0);
}

TEST_CASE("moments agree with Plancherel norms of the powered spectral multiplier") {
  // ||(Delta + rho^2)^(j/2) f||^2 = C0 int lambda^(2j) |F|^2 weight = m_j^(2j)
  const auto grid = UniformGrid::spanning(0.0, 2.08, 0.0025);
  SpectralFunction F{grid, std::vector<cd>(grid.size), plancherel_density(h4, grid.points())};
  for (std::size_t k = 0; k < grid.size; ++k) F.values[k] = 0.5 * std::erfc((grid[k] - 2.0) / 0.01);
  const auto pw = pw_radius(h4, F, 12);
  for (int j : {1, 5, 12}) {
    SpectralFunction G = F;
    for (std::size_t k = 0; k < grid.size; ++k) G.values[k] *= std::pow(grid[k], j);
    const double norm = spectral_norm2(h4, G);
    CHECK(std::pow(pw.moments[j - 1], 2.0 * j) == doctest::Approx(norm).epsilon(1e-8));
  }
}
