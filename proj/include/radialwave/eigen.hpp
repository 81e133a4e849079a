#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "radialwave/density.hpp"
#include "radialwave/quadrature.hpp"

namespace radialwave {

/// Samples of a radial eigenfunction (or Jost solution) and its r-derivative.
struct EigenFunction {
  cd lambda;
  std::vector<double> r;
  std::vector<cd> values;
  std::vector<cd> derivs;
  std::vector<std::string> warnings;
};

/// Regular eigenfunction phi_lambda (phi(0) = 1) on a uniform grid starting at 0.
EigenFunction eval_phi(const DensityModel& model, cd lambda, const UniformGrid& grid);

/// Jost solution Phi_lambda seeded with exp((i lambda - rho) r) at r_start and
/// integrated backward. Samples are returned on the grid nodes in [step, min(r_start, grid end)].
EigenFunction eval_phi_asymptotic(const DensityModel& model, cd lambda, const UniformGrid& grid, double r_start);

struct CFunctionValue {
  cd lambda;
  cd c;                       // c(lambda)
  cd c_minus;                 // c(-lambda)
  cd eta;                     // 1 / (c(lambda) c(-lambda))
  double plancherel_weight;   // |c(lambda)|^-2 for real lambda, |eta| otherwise
};

/// c-function by the Wronskian of phi_lambda with the Jost solutions at r_match.
CFunctionValue compute_c(const DensityModel& model, cd lambda, double r_match);

/// Matching radius used for cached Plancherel weights.
double default_match_radius(const DensityModel& model);

/// |c(lambda)|^-2 on non-negative lambda nodes; lambda = 0 by even quadratic
/// extrapolation. Results are cached per model.
std::vector<double> plancherel_density(const DensityModel& model, std::span<const double> lambdas);
double plancherel_weight(const DensityModel& model, double lambda);
void clear_plancherel_cache();

struct DirichletBasis {
  double radius = 0.0;
  double rho = 0.0;
  std::vector<double> lambdas;       // lambda_k, strictly increasing
  std::vector<double> norms;         // int_0^R phi_k^2 A dr
  std::vector<EigenFunction> basis;  // phi_k on the sample grid over [0, R]
  std::vector<double> eigenvalues() const;  // mu_k = lambda_k^2 + rho^2
};

/// First K radial Dirichlet eigenfunctions on the ball of radius R (roots of
/// lambda -> phi_lambda(R)). `sample_step` sets the spacing of the stored basis samples
/// (0 selects R/1000).
DirichletBasis dirichlet_spectrum(const DensityModel& model, double radius, int count, double sample_step = 0.0);

/// Lower bound for the width of the strip where the Plancherel density extends
/// holomorphically, estimated by probing eta on horizontal lines.
struct StripEstimate {
  double lower_bound = 0.0;
  bool unbounded = false;      // polynomial density: no finite pole exists
  double probed_to = 0.0;      // largest Im lambda where the probe is numerically reliable
  std::vector<double> taus;    // probed lines
  std::vector<double> line_max;  // max |eta| along each line
};
StripEstimate estimate_strip(const DensityModel& model);

}  // namespace radialwave
