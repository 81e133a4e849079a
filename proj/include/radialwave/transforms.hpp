#pragma once

#include <filesystem>
#include <limits>
#include <span>
#include <vector>

#include "radialwave/density.hpp"
#include "radialwave/quadrature.hpp"

namespace radialwave {

/// Samples of a radial function on a uniform grid starting at 0.
struct RadialFunction {
  UniformGrid grid;
  std::vector<cd> values;
  double support_radius = std::numeric_limits<double>::infinity();

  static RadialFunction zeros(const UniformGrid& grid, double support = 0.0);
  double max_abs() const;
};

/// Transform samples on a uniform lambda grid starting at 0 with the Plancherel weight.
struct SpectralFunction {
  UniformGrid grid;
  std::vector<cd> values;
  std::vector<double> weight;

  double max_abs() const;
};

/// Samples of an even function on [0, S] (the negative half is implied).
struct EvenLineFunction {
  UniformGrid grid;
  std::vector<cd> values;

  double max_abs() const;
};

/// exp(-k / (1 - (r/R)^2)) scaled by `amplitude` for r < R, 0 beyond; k = `sharpness`
/// (k = 1 is the classical mollifier).
RadialFunction make_bump(const UniformGrid& grid, double radius, double amplitude = 1.0, double sharpness = 1.0);

/// Smooth plateau: 1 on [0, flat], falling like erfc to below 1e-17 by flat + 12 width.
double plateau(double x, double flat, double width);

/// Lambda grid controls for the automatic transforms.
struct SpectralGridOptions {
  double tolerance = 1e-13;  // stop when |F| * weight falls below tolerance * peak
  double extent = 0.0;       // largest output radius / time the spectrum will be synthesized at
  double lambda_cap = 0.0;   // 0: limited only by the resolution guard
  double step = 0.0;         // 0: chosen from the support radius, extent and the model
};

/// Spacing of the lambda grid that keeps trapezoid aliasing below double precision
/// for an integrand of exponential type `type` (support radius plus output extent).
double spectral_step(const DensityModel& model, double type);

/// Length by which the Plancherel density widens the exponential type of a spectral
/// integrand: exp(-eps * margin) ~ 1e-14, with eps the measured distance of its nearest
/// singularity from the real axis (a small constant for polynomial densities).
double aliasing_margin(const DensityModel& model);

/// f^(lambda) = sphere_const * int f phi_lambda A dr on the given lambda grid.
SpectralFunction forward_radial_fourier(const DensityModel& model, const RadialFunction& f, const UniformGrid& lambdas);
/// Same with Lambda_max chosen adaptively from the decay of |f^| * weight.
SpectralFunction forward_radial_fourier_auto(const DensityModel& model, const RadialFunction& f,
                                             const SpectralGridOptions& options = {});
/// Forward transform at arbitrary (complex) lambda values.
std::vector<cd> forward_radial_fourier_at(const DensityModel& model, const RadialFunction& f,
                                          std::span<const cd> lambdas);

/// u(r) = C0 int F phi_lambda weight dlambda.
RadialFunction inverse_radial_fourier(const DensityModel& model, const SpectralFunction& F, const UniformGrid& r_grid);

/// Shared-sweep synthesis: out[j](r) = scale * int coef_j(lambda) weight(lambda) phi_lambda(r) dlambda
/// (trapezoid in lambda) for several coefficient vectors on one lambda grid. `derivs`
/// receives the r-derivatives when non-null.
std::vector<RadialFunction> synthesize(const DensityModel& model, const UniformGrid& lambdas,
                                       std::span<const double> weight, const std::vector<std::vector<cd>>& coefs,
                                       const UniformGrid& r_grid, double scale,
                                       std::vector<RadialFunction>* derivs = nullptr);

/// Throws TruncationError when |values| * weight has not decayed below 1e-10 of its peak
/// at the end of the grid (an empty weight counts as 1).
void check_spectral_truncation(std::span<const cd> values, std::span<const double> weight, const char* what);

/// Trapezoid-rule correction for int_0 r^a psi(r) dr when r^a is not smooth at 0
/// (a = 2 alpha + 1 not an even integer): subtract from the plain sum. `psi0` and
/// `psi2` are psi(0) and psi''(0).
cd origin_correction(const DensityModel& model, double step, cd psi0, cd psi2);
/// lim A(r) / r^(2 alpha + 1) as r -> 0.
double origin_density_coefficient(const DensityModel& model);

/// Abel transform A(f)(s) = (1/pi) int f^ cos(lambda s) dlambda on an s grid (default: f's grid).
EvenLineFunction abel(const DensityModel& model, const RadialFunction& f);
EvenLineFunction abel(const DensityModel& model, const RadialFunction& f, const UniformGrid& s_grid);

/// Dual Abel transform a(u)(r) = (1/pi) int u_check(lambda) phi_lambda(r) dlambda with
/// u_check = 2 int_0^inf u(t) cos(lambda t) dt; a(cos(lambda0 .)) = phi_lambda0.
RadialFunction dual_abel(const DensityModel& model, const EvenLineFunction& u, const UniformGrid& r_grid,
                         double tolerance = 1e-14);
/// Inverse dual Abel transform a^-1(g)(t) = C0 int g^ weight cos(lambda t) dlambda. The default
/// t grid extends past supp g far enough to hold the tail that non-polynomial densities produce.
EvenLineFunction inverse_dual_abel(const DensityModel& model, const RadialFunction& g);
EvenLineFunction inverse_dual_abel(const DensityModel& model, const RadialFunction& g, const UniformGrid& t_grid);

/// Euclidean Fourier transform of an even function, 2 int_0^S u(t) cos(lambda t) dt.
SpectralFunction line_fourier(const EvenLineFunction& u, const UniformGrid& lambdas);
std::vector<cd> line_fourier_at(const EvenLineFunction& u, std::span<const cd> lambdas);
/// Inverse: (1/pi) int_0^Lambda F cos(lambda t) dlambda.
EvenLineFunction inverse_line_fourier(const SpectralFunction& F, const UniformGrid& t_grid);

/// Result of the C0 calibration.
struct Calibration {
  double c0 = 0.0;
  double spread = 0.0;           // max relative deviation across the check functions
  double jacobi_reference = 0.0; // scale^(2 alpha + 1) / (2 pi sphere_const) for Jacobi models
  std::vector<double> estimates;
};
/// Least-squares round trip calibration of the inversion constant; cached per model.
const Calibration& calibrate(const DensityModel& model);
double transform_constant(const DensityModel& model);

/// sphere_const * int |f|^2 A dr by the trapezoid rule on f's grid.
double radial_norm2(const DensityModel& model, const RadialFunction& f);
/// C0 int |F|^2 weight dlambda.
double spectral_norm2(const DensityModel& model, const SpectralFunction& F);

/// CSV export with header `x,re,im` and 17 significant digits.
void write_csv(const std::filesystem::path& path, const RadialFunction& f);
void write_csv(const std::filesystem::path& path, const SpectralFunction& F);
void write_csv(const std::filesystem::path& path, const EvenLineFunction& u);

}  // namespace radialwave
