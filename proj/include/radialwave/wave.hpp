#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "radialwave/density.hpp"
#include "radialwave/eigen.hpp"
#include "radialwave/transforms.hpp"

namespace radialwave {

/// Radial initial data u(., 0) = f, u_t(., 0) = g, both supported in [0, R0].
struct CauchyData {
  RadialFunction f;
  RadialFunction g;
  double support_radius = 0.0;

  /// Checks that f and g share a grid and vanish beyond R0; R0 defaults to the larger
  /// declared support.
  static CauchyData make(RadialFunction f, RadialFunction g, double support_radius = 0.0);
  /// f = bump, g = 0 (or the reverse when `velocity` is set).
  static CauchyData bump(const UniformGrid& grid, double radius, double amplitude = 1.0, bool velocity = false);
};

/// Solution snapshot. `ur` holds the radial derivative when the solver provides it.
struct WaveState {
  double t = 0.0;
  RadialFunction u;
  RadialFunction ut;
  std::optional<RadialFunction> ur;
};

/// Spectra of the Cauchy data on a common lambda grid.
struct CauchySpectrum {
  SpectralFunction f_hat;
  SpectralFunction g_hat;
  double support_radius = 0.0;
  double extent = 0.0;  // largest r + |t| the lambda spacing resolves
};

/// Transforms f and g; `extent` is the largest r + |t| that will be synthesized.
CauchySpectrum cauchy_spectrum(const DensityModel& model, const CauchyData& data, double extent);

/// u^(lambda, t) = f^ cos(lambda t) + g^ sin(lambda t) / lambda, synthesized on r_grid
/// (default: [0, R0 + |t| + 1] at a step resolving the spectrum).
WaveState propagate_spectral(const DensityModel& model, const CauchyData& data, double t);
WaveState propagate_spectral(const DensityModel& model, const CauchyData& data, double t, const UniformGrid& r_grid);
WaveState propagate_spectral(const DensityModel& model, const CauchySpectrum& spectrum, double t,
                             const UniformGrid& r_grid);
/// Several times from one spectrum.
std::vector<WaveState> spectral_trajectory(const DensityModel& model, const CauchySpectrum& spectrum,
                                           std::span<const double> times, const UniformGrid& r_grid);

/// Output grid used by the spectral solver when none is given.
UniformGrid default_wave_grid(const CauchySpectrum& spectrum, double r_max);

/// Dirichlet eigen-expansion of Cauchy data on the ball of radius R_dom.
struct SeriesExpansion {
  DensityModel model;
  std::vector<double> lambdas;
  std::vector<double> norms;
  std::vector<cd> a;  // coefficients of f
  std::vector<cd> b;  // coefficients of g
  double domain_radius = 0.0;
  double support_radius = 0.0;

  /// Expansion with prescribed coefficients (no tail check).
  static SeriesExpansion from_coefficients(const DensityModel& model, const DirichletBasis& basis,
                                           std::vector<cd> a, std::vector<cd> b, double support_radius = 0.0);
};

/// a_k, b_k = <f or g, phi_k>_A / ||phi_k||^2 for the first K Dirichlet modes.
/// Throws TailError when the last coefficients (and b_k / lambda_k) exceed 1e-10 of the largest.
SeriesExpansion series_expansion(const DensityModel& model, const CauchyData& data, double domain_radius, int modes);

/// u(r, t) = sum a_k phi_k(r) cos(lambda_k t) + b_k phi_k(r) sin(lambda_k t) / lambda_k.
/// Throws DomainError unless R0 + |t| < R_dom.
WaveState propagate_series(const SeriesExpansion& series, double t, const UniformGrid& r_grid);
WaveState propagate_series(const DensityModel& model, const CauchyData& data, double domain_radius, int modes,
                           double t, const UniformGrid& r_grid);

/// Solution value at distance d from sigma from the spherical-mean representation
///   u(d, t) = a^-1(M_d f)(|t|) + int_0^t a^-1(M_d g)(s) ds,
/// with the spherical means, their transforms and the inverse dual Abel transform all
/// computed numerically and the time integral by Gauss-Legendre panels.
cd propagate_dalembert(const DensityModel& model, const CauchyData& data, double d, double t);
/// Same at several times; the spherical mean of the data is computed once.
std::vector<cd> propagate_dalembert(const DensityModel& model, const CauchyData& data, double d,
                                    std::span<const double> times);

/// Finite-volume leapfrog on [0, R_max] with a Dirichlet wall at R_max.
struct FdtdOptions {
  double r_max = 0.0;         // 0: R0 + max|t| + 1
  double wall_tolerance = 1e-10;  // BoundaryTouchError when |u| near the wall exceeds this times the data scale
};
WaveState propagate_fdtd(const DensityModel& model, const CauchyData& data, double t, double dr, double dt,
                         const FdtdOptions& options = {});
/// Snapshots at increasing non-negative times from one run.
std::vector<WaveState> fdtd_trajectory(const DensityModel& model, const CauchyData& data,
                                       std::span<const double> times, double dr, double dt,
                                       const FdtdOptions& options = {});

/// Kinetic, potential and total energy. `kinetic` and `potential_physical` are
/// physical-space integrals (sphere_const * int ... A dr); `potential` uses the spectral
/// formula when a spectrum is supplied and the physical surrogate otherwise.
struct Energy {
  double kinetic = 0.0;
  double potential = 0.0;
  double total = 0.0;
  double potential_physical = 0.0;
  double potential_spectral = 0.0;  // NaN without a spectrum
};
Energy energy(const DensityModel& model, const WaveState& state, const CauchySpectrum* spectrum = nullptr);
/// 2 E from the spectra: C0 int (lambda^2 |f^|^2 + |g^|^2) weight dlambda.
double spectral_total_energy2(const DensityModel& model, const CauchySpectrum& spectrum);
/// Radial derivative of the state (its `ur` when present, else by differences).
RadialFunction radial_derivative(const WaveState& state);

/// Snapshot CSV with header `r,re_u,im_u,re_ut,im_ut`.
void write_csv(const std::filesystem::path& path, const WaveState& state);

}  // namespace radialwave
