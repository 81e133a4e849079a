#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "radialwave/errors.hpp"
#include "radialwave/transforms.hpp"

using namespace radialwave;

namespace {

const DensityModel h3 = DensityModel::jacobi(0.5, -0.5, 1.0);
const DensityModel h4 = DensityModel::jacobi(1.0, -0.5, 1.0);

double sup_diff(const std::vector<cd>& a, const std::vector<cd>& b, std::size_t stride_b = 1) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i * stride_b]));
  return e;
}

}  // namespace

TEST_CASE("bump samples") {
  const auto grid = UniformGrid::spanning(0.0, 2.0, 0.01);
  const auto f = make_bump(grid, 1.5, 2.0, 0.5);
  CHECK(f.support_radius == 1.5);
  for (std::size_t i = 0; i < grid.size; ++i) CHECK(f.values[i].real() == doctest::Approx(2.0 * oracle::bump(grid[i], 1.5, 0.5)));
  CHECK_THROWS_AS(make_bump(grid, -1.0), DomainError);
  CHECK_THROWS_AS(make_bump(UniformGrid{0.5, 0.1, 10}, 1.0), DomainError);
}

TEST_CASE("inversion constant in H3 is 1 / (2 pi^2)") {
  const auto& cal = calibrate(h3);
  CHECK(cal.c0 == doctest::Approx(1.0 / (2 * oracle::pi * oracle::pi)).epsilon(1e-10));
  CHECK(cal.spread < 1e-8);
  CHECK(calibrate(h4).c0 == doctest::Approx(calibrate(h4).jacobi_reference).epsilon(1e-6));
}

TEST_CASE("forward transform of a bump matches quadrature of the closed form in H3") {
  const auto grid = UniformGrid::spanning(0.0, 1.0, 1e-4);
  const auto f = make_bump(grid, 1.0);
  const UniformGrid lambdas{0.0, 0.5, 20};
  const auto F = forward_radial_fourier(h3, f, lambdas);
  for (std::size_t k = 0; k < lambdas.size; ++k) {
    const double l = lambdas[k];
    auto integrand = [l](double r) { return oracle::bump(r, 1.0) * oracle::h3_phi(l, r).real() * 4 * std::sinh(r) * std::sinh(r); };
    const double ref = oracle::pi * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 15, 1e-14);
    CHECK(std::abs(F.values[k] - ref) < 1e-10);
  }
}

TEST_CASE("round trip and Plancherel for three bump shapes") {
  for (const auto* m : {&h3, &h4}) {
    for (auto [R, k] : {std::pair{1.0, 1.0}, std::pair{0.5, 1.0}, std::pair{1.5, 0.5}}) {
      const double dr = 1e-4;
      const auto grid = UniformGrid::spanning(0.0, R, dr);
      const auto f = make_bump(grid, R, 1.0, k);
      SpectralGridOptions opt;
      opt.extent = R;
      const auto F = forward_radial_fourier_auto(*m, f, opt);
      const auto out = UniformGrid{0.0, 100 * dr, grid.size / 100 + 1};
      const auto back = inverse_radial_fourier(*m, F, out);
      CHECK(sup_diff(back.values, f.values, 100) < 1e-6);
      const double n2 = radial_norm2(*m, f);
      CHECK(std::abs(n2 - spectral_norm2(*m, F)) <= 1e-6 * n2);
    }
  }
}

TEST_CASE("truncated spectra are rejected") {
  const auto grid = UniformGrid::spanning(0.0, 1.0, 1e-3);
  const auto f = make_bump(grid, 1.0);
  const auto F = forward_radial_fourier(h3, f, UniformGrid{0.0, 0.5, 10});
  CHECK_THROWS_AS(inverse_radial_fourier(h3, F, grid), TruncationError);
}

TEST_CASE("Abel transform in H3 equals the horospherical closed form") {
  const auto grid = UniformGrid::spanning(0.0, 1.5, 1e-4);
  const auto f = make_bump(grid, 1.0);
  const auto s_grid = UniformGrid{0.0, 0.01, 151};
  const auto a = abel(h3, f, s_grid);
  for (std::size_t i = 0; i < s_grid.size; ++i) {
    const double ref = oracle::h3_abel([](double r) { return oracle::bump(r, 1.0); }, s_grid[i], 1.0);
    CHECK(std::abs(a.values[i] - ref) < 1e-8);
  }
}

TEST_CASE("Abel transform is supported in the support of f and its line transform is f^") {
  const double dr = 1e-4, R = 1.0;
  const auto grid = UniformGrid::spanning(0.0, 2.0, dr);
  const auto f = make_bump(grid, R);
  const auto a = abel(h4, f);
  const double peak = a.max_abs();
  double tail = 0.0;
  for (std::size_t i = 0; i < a.grid.size; ++i) {
    if (a.grid[i] > R + 2 * dr) tail = std::max(tail, std::abs(a.values[i]));
  }
  CHECK(tail <= 1e-8 * peak);
  const UniformGrid lambdas{0.0, 0.25, 81};
  const auto lf = line_fourier(a, lambdas);
  const auto F = forward_radial_fourier(h4, f, lambdas);
  CHECK(sup_diff(lf.values, F.values) < 1e-6 * F.max_abs());
}

TEST_CASE("line Fourier transform of a Gaussian") {
  const auto t = UniformGrid::spanning(0.0, 40.0, 0.01);
  EvenLineFunction u{t, std::vector<cd>(t.size)};
  for (std::size_t i = 0; i < t.size; ++i) u.values[i] = std::exp(-0.5 * t[i] * t[i]);
  const UniformGrid lambdas{0.0, 0.1, 80};
  const auto F = line_fourier(u, lambdas);
  for (std::size_t k = 0; k < lambdas.size; ++k) {
    const double ref = std::sqrt(2 * oracle::pi) * std::exp(-0.5 * lambdas[k] * lambdas[k]);
    CHECK(std::abs(F.values[k] - ref) < 1e-12);
  }
  const auto back = inverse_line_fourier(line_fourier(u, UniformGrid{0.0, 0.01, 1201}), UniformGrid{0.0, 0.1, 40});
  for (std::size_t i = 0; i < 40; ++i) CHECK(std::abs(back.values[i] - u.values[10 * i]) < 1e-10);
}

TEST_CASE("dual Abel transform maps cosines to spherical functions") {
  // a(cos(lambda0 t) w(t)) agrees with phi_lambda0 where the window is flat
  const double lambda0 = 1.5, flat = 6.0, width = 0.25;
  const auto t = UniformGrid::spanning(0.0, flat + 14 * width, 0.005);
  EvenLineFunction u{t, std::vector<cd>(t.size)};
  for (std::size_t i = 0; i < t.size; ++i) u.values[i] = std::cos(lambda0 * t[i]) * plateau(t[i], flat, width);
  const auto r = UniformGrid::spanning(0.0, 3.0, 0.05);
  const auto phi = dual_abel(h3, u, r);
  for (std::size_t i = 0; i < r.size; ++i) CHECK(std::abs(phi.values[i] - oracle::h3_phi(lambda0, r[i])) < 1e-6);
}

TEST_CASE("inverse dual Abel undoes the dual Abel transform") {
  for (const auto* m : {&h3, &h4}) {
    const auto grid = UniformGrid::spanning(0.0, 1.0, 1e-4);
    const auto g = make_bump(grid, 1.0);
    const auto u = inverse_dual_abel(*m, g);
    const auto out = UniformGrid{0.0, 0.01, 101};
    const auto back = dual_abel(*m, u, out);
    CHECK(sup_diff(back.values, g.values, 100) < 1e-6);
  }
}

TEST_CASE("inverse dual Abel is compactly supported only for polynomial densities") {
  const auto grid = UniformGrid::spanning(0.0, 1.0, 1e-4);
  const auto g = make_bump(grid, 1.0);
  const auto t = UniformGrid::spanning(0.0, 4.0, 0.01);
  const auto u3 = inverse_dual_abel(h3, g, t);
  const auto u4 = inverse_dual_abel(h4, g, t);
  double tail3 = 0.0, tail4 = 0.0;
  for (std::size_t i = 0; i < t.size; ++i) {
    if (t[i] > 1.5) {
      tail3 = std::max(tail3, std::abs(u3.values[i]));
      tail4 = std::max(tail4, std::abs(u4.values[i]));
    }
  }
  CHECK(tail3 < 1e-10 * u3.max_abs());
  CHECK(tail4 > 1e-6 * u4.max_abs());
}

TEST_CASE("spectral step and origin correction") {
  CHECK(spectral_step(h3, 10.0) < 2 * oracle::pi / 10.0);
  CHECK_THROWS_AS(spectral_step(h3, -1.0), DomainError);
  // r^2 is smooth at the origin, r^3 is not
  CHECK(origin_correction(h3, 0.01, 1.0, 0.0) == cd(0.0));
  CHECK(origin_correction(h4, 0.01, 1.0, 0.0) != cd(0.0));
  CHECK(origin_density_coefficient(h3) == doctest::Approx(4.0));
}
