#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "radialwave/eigen.hpp"
#include "radialwave/errors.hpp"
#include "radialwave/sweep.hpp"

using namespace radialwave;

namespace {

const DensityModel h3 = DensityModel::jacobi(0.5, -0.5, 1.0);
const DensityModel h4 = DensityModel::jacobi(1.0, -0.5, 1.0);
const DensityModel damek = DensityModel::jacobi(2.5, 1.5, 1.0);

}  // namespace

TEST_CASE("phi matches sin(lambda r) / (lambda sinh r) in H3") {
  const auto grid = UniformGrid::spanning(0.0, 20.0, 0.01);
  for (double lambda : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    const auto phi = eval_phi(h3, lambda, grid);
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size; ++i) err = std::max(err, std::abs(phi.values[i] - oracle::h3_phi(lambda, grid[i])));
    CHECK(err < 1e-8);
    CHECK(phi.values[0] == cd(1.0));
  }
}

TEST_CASE("phi agrees with an independent ODE integration") {
  const auto grid = UniformGrid::spanning(0.0, 8.0, 0.25);
  for (const auto* m : {&h4, &damek}) {
    for (double lambda : {0.0, 1.0, 3.0}) {
      const auto phi = eval_phi(*m, lambda, grid);
      for (std::size_t i = 1; i < grid.size; ++i) {
        const auto [ref, dref] = oracle::jacobi_phi(m->alpha(), m->beta(), lambda, grid[i]);
        CHECK(std::abs(phi.values[i].real() - ref) < 1e-9);
        CHECK(std::abs(phi.derivs[i].real() - dref) < 1e-8);
      }
    }
  }
}

TEST_CASE("phi is even in lambda and real for real lambda") {
  const auto grid = UniformGrid::spanning(0.0, 5.0, 0.05);
  const auto plus = eval_phi(h4, cd(1.3, 0.2), grid);
  const auto minus = eval_phi(h4, cd(-1.3, -0.2), grid);
  const auto real = eval_phi(h4, 1.3, grid);
  for (std::size_t i = 0; i < grid.size; ++i) {
    CHECK(std::abs(plus.values[i] - minus.values[i]) < 1e-10);
    CHECK(std::abs(real.values[i].imag()) < 1e-14);
  }
}

TEST_CASE("phi solves the eigen-equation") {
  // residual of phi'' + (A'/A) phi' + (lambda^2 + rho^2) phi by differencing phi'
  const double h = 1e-3;
  for (const auto* m : {&h3, &h4, &damek}) {
    for (double lambda : {0.0, 0.5, 1.0, 2.0, 5.0}) {
      const auto grid = UniformGrid::spanning(0.0, 10.0, h);
      const auto phi = eval_phi(*m, lambda, grid);
      const double mu = lambda * lambda + m->rho() * m->rho();
      double worst = 0.0;
      for (std::size_t i = 100; i + 1 < grid.size; i += 7) {
        const double d2 = (phi.derivs[i + 1] - phi.derivs[i - 1]).real() / (2 * h);
        const double res = d2 + m->logderiv(grid[i]) * phi.derivs[i].real() + mu * phi.values[i].real();
        worst = std::max(worst, std::abs(res));
      }
      // the central difference of phi' contributes O(h^2 mu^2) to the residual
      CHECK(worst < 1e-6 * (1 + mu * mu));
    }
  }
}

TEST_CASE("Jost solution and c-function in H3") {
  // seeding far out keeps the exp(-2 r_start) admixture of Phi_-lambda below rounding
  const auto grid = UniformGrid::spanning(0.0, 20.0, 0.05);
  for (double lambda : {0.5, 2.0}) {
    const auto jost = eval_phi_asymptotic(h3, lambda, grid, 20.0);
    CHECK(jost.warnings.empty());
    for (std::size_t i = 0; i < jost.r.size(); ++i) {
      const cd ref = oracle::h3_jost(lambda, jost.r[i]);
      CHECK(std::abs(jost.values[i] - ref) < 1e-9 * std::abs(ref));
    }
    const auto c = compute_c(h3, lambda, default_match_radius(h3));
    CHECK(std::abs(c.c - oracle::h3_c(lambda)) < 1e-9);
    CHECK(std::abs(c.c_minus - std::conj(c.c)) < 1e-9);
  }
  CHECK(std::abs(compute_c(h3, 2.0, 3.0).c - cd(0.0, -0.5)) < 1e-9);
}

TEST_CASE("Plancherel density of H3 is proportional to lambda^2") {
  std::vector<double> lambdas;
  for (double l = 0.5; l <= 10.0; l += 0.25) lambdas.push_back(l);
  const auto w = plancherel_density(h3, lambdas);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    CHECK(w[i] / (lambdas[i] * lambdas[i]) == doctest::Approx(1.0).epsilon(1e-6));
  }
  const double zero = 0.0;
  CHECK(std::abs(plancherel_density(h3, std::span(&zero, 1))[0]) < 1e-8);
}

TEST_CASE("Plancherel density of H4 has the tanh shape") {
  std::vector<double> lambdas{0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  const auto w = plancherel_density(h4, lambdas);
  const double k = w[2] / oracle::h4_plancherel_shape(1.0);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    CHECK(w[i] / oracle::h4_plancherel_shape(lambdas[i]) == doctest::Approx(k).epsilon(1e-6));
  }
}

TEST_CASE("Dirichlet spectrum of the ball of radius pi in H3 is 1..K") {
  const auto basis = dirichlet_spectrum(h3, oracle::pi, 12);
  REQUIRE(basis.lambdas.size() == 12);
  for (int k = 0; k < 12; ++k) CHECK(std::abs(basis.lambdas[k] - (k + 1)) < 1e-9);
  const auto mu = basis.eigenvalues();
  CHECK(mu[0] == doctest::Approx(2.0).epsilon(1e-9));
  // int_0^pi phi_k^2 A dr = int sin^2(k r) / (k^2 sinh^2 r) 4 sinh^2 r dr = 2 pi / k^2
  for (int k = 0; k < 12; ++k) {
    CHECK(basis.norms[k] == doctest::Approx(2 * oracle::pi / ((k + 1.0) * (k + 1.0))).epsilon(1e-8));
  }
}

TEST_CASE("Dirichlet spectrum of H4 agrees with a finite-difference matrix") {
  // Liouville form: -v'' + G v = (lambda^2) v with G = 3/(4 sinh^2 r), v(0) = v(R) = 0
  const double R = 2.0;
  const int n = 2000;
  const double h = R / n;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n - 1, n - 1);
  for (int i = 0; i < n - 1; ++i) {
    const double r = (i + 1) * h;
    M(i, i) = 2.0 / (h * h) + 0.75 / (std::sinh(r) * std::sinh(r));
    if (i > 0) M(i, i - 1) = M(i - 1, i) = -1.0 / (h * h);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M, Eigen::EigenvaluesOnly);
  const auto basis = dirichlet_spectrum(h4, R, 5);
  for (int k = 0; k < 5; ++k) {
    const double ref = std::sqrt(solver.eigenvalues()(k));
    CHECK(basis.lambdas[k] == doctest::Approx(ref).epsilon(1e-4));
  }
  // basis functions vanish at the wall
  for (const auto& f : basis.basis) CHECK(std::abs(f.values.back()) < 1e-9);
}

TEST_CASE("Dirichlet eigenfunctions are orthogonal") {
  const auto basis = dirichlet_spectrum(h4, 3.0, 6, 1e-3);
  const auto& r = basis.basis[0].r;
  const double h = r[1] - r[0];
  for (int j = 0; j < 6; ++j) {
    for (int k = j + 1; k < 6; ++k) {
      double s = 0.0;
      for (std::size_t i = 1; i < r.size(); ++i) {
        const double w = i + 1 == r.size() ? 0.5 : 1.0;
        s += w * (basis.basis[j].values[i] * basis.basis[k].values[i]).real() * h4.eval(r[i]).A;
      }
      CHECK(std::abs(s * h) < 1e-6 * std::sqrt(basis.norms[j] * basis.norms[k]));
    }
  }
}

TEST_CASE("strip estimate") {
  const auto s3 = estimate_strip(h3);
  CHECK(s3.unbounded);
  const auto s4 = estimate_strip(h4);
  CHECK_FALSE(s4.unbounded);
  // tanh(pi lambda) has its first pole at Im lambda = 1/2
  CHECK(s4.lower_bound > 0.0);
  CHECK(s4.lower_bound <= 0.5 + 1e-9);
}

TEST_CASE("radial sweep shares one mesh across lambdas") {
  std::vector<double> targets{0.0, 0.5, 1.0, 2.0, 4.0};
  RadialSweep sweep(h3, targets, 4.0, 10.0);
  CHECK(sweep.size() == targets.size());
  std::vector<double> phi(targets.size()), dphi(targets.size());
  for (double lambda : {0.3, 7.0}) {
    sweep.regular_phi(lambda, phi.data(), dphi.data());
    for (std::size_t i = 0; i < targets.size(); ++i) {
      CHECK(std::abs(phi[i] - oracle::h3_phi(lambda, targets[i]).real()) < 1e-10);
    }
  }
}
