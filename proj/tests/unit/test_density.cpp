#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "radialwave/density.hpp"
#include "radialwave/errors.hpp"

using namespace radialwave;

TEST_CASE("jacobi model constants") {
  const auto h3 = DensityModel::jacobi(0.5, -0.5, 1.0);
  CHECK(h3.rho() == doctest::Approx(1.0));
  CHECK(h3.dim() == 3);
  CHECK(h3.polynomial_plancherel());
  CHECK(h3.sphere_const() == doctest::Approx(oracle::pi));

  const auto h4 = DensityModel::jacobi(1.0, -0.5, 1.0);
  CHECK(h4.rho() == doctest::Approx(1.5));
  CHECK(h4.dim() == 4);
  CHECK_FALSE(h4.polynomial_plancherel());

  const auto scaled = DensityModel::jacobi(0.5, -0.5, 2.0);
  CHECK(scaled.rho() == doctest::Approx(2.0));
  CHECK(scaled.length_unit() == doctest::Approx(0.5));
}

TEST_CASE("density matches the closed form") {
  const auto h3 = DensityModel::jacobi(0.5, -0.5, 1.0);
  for (double r : {0.01, 0.3, 1.0, 4.0, 30.0}) {
    const double A = 4.0 * std::sinh(r) * std::sinh(r);
    CHECK(h3.eval(r).A == doctest::Approx(A).epsilon(1e-13));
    CHECK(h3.logderiv(r) == doctest::Approx(2.0 / std::tanh(r)).epsilon(1e-13));
  }
  CHECK(h3.eval(1.0).A == doctest::Approx(5.524391382167263).epsilon(1e-12));

  const double a = 2.5, b = 1.5;
  const auto dr = DensityModel::jacobi(a, b, 1.0);
  for (double r : {0.05, 0.7, 3.0, 12.0}) {
    const double logA = (2 * a + 1) * std::log(2 * std::sinh(r)) + (2 * b + 1) * std::log(2 * std::cosh(r));
    CHECK(dr.log_density(r) == doctest::Approx(logA).epsilon(1e-13));
    CHECK(dr.logderiv(r) == doctest::Approx(oracle::jacobi_logderiv(a, b, r)).epsilon(1e-12));
  }
}

TEST_CASE("log-derivative tends to 2 rho and the origin is special") {
  const auto h3 = DensityModel::jacobi(0.5, -0.5, 1.0);
  CHECK(h3.logderiv(50.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(h3.eval(0.0).A == 0.0);
  CHECK(std::isinf(h3.eval(0.0).logderiv));
  CHECK(h3.pole_strength() == doctest::Approx(2.0));
  CHECK_THROWS_AS(h3.eval(-1.0), DomainError);
  CHECK(std::isinf(h3.logderiv(0.0)));
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(DensityModel::jacobi(-0.6, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(DensityModel::jacobi(0.5, -1.6, 1.0), DomainError);
  CHECK_THROWS_AS(DensityModel::jacobi(0.5, -0.5, 0.0), DomainError);
  CHECK_THROWS_AS(DensityModel::table({0.0, 1.0, 0.5, 2.0, 3.0}, {0.0, 1.0, 2.0, 3.0, 4.0}), DomainError);
  CHECK_THROWS_AS(DensityModel::table({0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}), DomainError);
}

TEST_CASE("log-derivative series agrees with the closed form near the origin") {
  for (auto [a, b] : {std::pair{0.5, -0.5}, std::pair{1.0, -0.5}, std::pair{2.5, 1.5}}) {
    const auto m = DensityModel::jacobi(a, b, 1.0);
    const auto& q = m.logderiv_series();
    REQUIRE_FALSE(q.empty());
    const double r = 0.5 * m.series_radius();
    double s = m.pole_strength() / r;
    for (std::size_t j = 0; j < q.size(); ++j) s += q[j] * std::pow(r, 2.0 * (j + 1) - 1.0);
    CHECK(s == doctest::Approx(oracle::jacobi_logderiv(a, b, r)).epsilon(1e-12));
  }
}

TEST_CASE("logderiv slope agrees with finite differences") {
  const auto m = DensityModel::jacobi(1.0, -0.5, 1.0);
  for (double r : {0.2, 1.0, 3.0}) {
    const double h = 1e-5;
    const double fd = (m.logderiv(r + h) - m.logderiv(r - h)) / (2 * h);
    CHECK(m.logderiv_slope(r) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("Liouville potential vanishes in H3 and decays elsewhere") {
  const auto h3 = DensityModel::jacobi(0.5, -0.5, 1.0);
  for (double r : {0.1, 1.0, 5.0}) CHECK(std::abs(h3.liouville_potential(r)) < 1e-12);
  const auto h4 = DensityModel::jacobi(1.0, -0.5, 1.0);
  // (A'/A)^2/4 + (A'/A)'/2 - rho^2 for A'/A = 3 coth r: G = 3/(4 sinh^2 r)
  for (double r : {0.5, 2.0, 6.0}) {
    const double G = 0.75 / (std::sinh(r) * std::sinh(r));
    CHECK(h4.liouville_potential(r) == doctest::Approx(G).epsilon(1e-10));
  }
}

TEST_CASE("density conditions hold for Jacobi models") {
  for (auto [a, b] : {std::pair{0.5, -0.5}, std::pair{1.0, -0.5}, std::pair{2.5, 1.5}, std::pair{0.5, 0.5}}) {
    const auto m = DensityModel::jacobi(a, b, 1.0);
    const auto rep = validate_conditions(m, 20.0, 400);
    CHECK(rep.all());
    CHECK(rep.fitted_exponent == doctest::Approx(2 * a + 1).epsilon(1e-3));
    CHECK(rep.rho_estimate == doctest::Approx(a + b + 1).epsilon(1e-6));
  }
}

TEST_CASE("a table built from samples reproduces the Jacobi model") {
  const auto h4 = DensityModel::jacobi(1.0, -0.5, 1.0);
  std::vector<double> r, A;
  for (int i = 0; i <= 4000; ++i) {
    const double x = 0.005 * i;
    r.push_back(x);
    A.push_back(x == 0.0 ? 0.0 : h4.eval(x).A);
  }
  const auto t = DensityModel::table(r, A, h4.sphere_const());
  CHECK(t.kind() == DensityKind::table);
  CHECK(t.rho() == doctest::Approx(1.5).epsilon(1e-3));
  for (double x : {0.77, 5.4321, 15.0}) {
    CHECK(t.log_density(x) == doctest::Approx(h4.log_density(x)).epsilon(1e-6));
  }
  // log A ~ 3 log r bends sharply between the first nodes
  CHECK(std::abs(t.log_density(0.0123) - h4.log_density(0.0123)) < 1e-2);
  CHECK_THROWS_AS(t.eval(25.0), InterpolationError);
  CHECK(validate_conditions(t, 19.0, 200).all());
}

TEST_CASE("model files") {
  const auto dir = std::filesystem::temp_directory_path() / "radialwave_density_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "h4.cfg") << "# real hyperbolic 4-space\nmodel = jacobi\nalpha = 1\nbeta = -0.5\n";
  }
  const auto m = load_model_file((dir / "h4.cfg").string());
  CHECK(m.rho() == doctest::Approx(1.5));
  {
    std::ofstream(dir / "bad.cfg") << "model = sphere\n";
  }
  CHECK_THROWS_AS(load_model_file((dir / "bad.cfg").string()), ConfigError);
  std::filesystem::remove_all(dir);
}
