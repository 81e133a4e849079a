#pragma once

#include <span>
#include <vector>

#include "radialwave/density.hpp"
#include "radialwave/transforms.hpp"

namespace radialwave {

/// Mean of a sigma-radial function over the sphere of radius r about a point at distance
/// d from sigma, from the product formula
///   M f(r) = C0 int f^(lambda) phi_lambda(d) phi_lambda(r) weight(lambda) dlambda.
RadialFunction spherical_mean(const DensityModel& model, const RadialFunction& f, double d, const UniformGrid& r_grid);
/// Same from a precomputed spectrum (its lambda grid must resolve the type d + r_max + R).
RadialFunction spherical_mean(const DensityModel& model, const SpectralFunction& F, double d, const UniformGrid& r_grid);

/// Table M f(r_j) for several centre distances d_i at arbitrary radii; rows follow `distances`.
std::vector<std::vector<cd>> spherical_mean_table(const DensityModel& model, const SpectralFunction& F,
                                                  std::span<const double> distances, std::span<const double> radii);

/// Defect of the two-sphere mean-value symmetry M^r_x M^s_y u = M^s_x M^r_y u for the
/// separable solution u(x, y) = phi_lambda(d(sigma, x)) phi_lambda(d(q, y)) of
/// Delta_x u = Delta_y u, with d(sigma, x) = d1 and d(q, y) = d2. Every mean is computed
/// with the spectral product formula applied to a smoothly windowed phi_lambda.
double asgeirsson_residual(const DensityModel& model, double lambda, double d1, double d2, double r, double s);

}  // namespace radialwave
