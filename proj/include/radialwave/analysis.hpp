#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "radialwave/density.hpp"
#include "radialwave/transforms.hpp"
#include "radialwave/wave.hpp"

namespace radialwave {

/// Measured decay of a quantity along t (or lambda).
struct DecayReport {
  std::string claim;
  std::vector<double> abscissa;
  std::vector<double> values;
  double threshold_start = 0.0;  // first abscissa where the claim applies
  double threshold = 0.0;        // bound asserted on values (exact-vanishing claims)
  double measured = 0.0;         // largest value inside the asserted region
  double rate = std::numeric_limits<double>::quiet_NaN();          // fitted exponential decay rate
  double fit_residual = std::numeric_limits<double>::quiet_NaN();  // RMS of the log-linear fit
  bool exact_claim = false;      // true: values must vanish; false: a decay rate is measured
  bool pass = false;
};

/// Fits log(values) = a - rate * x over the points with x >= x_start and values > 0. The
/// rate is kept only when the RMS residual is below 0.1.
void fit_decay(DecayReport& report, double x_start);

/// |u(d, t)| on t_grid from the spectral solver. With a polynomial Plancherel density the
/// values past t = d + R0 + 2 dr must stay below 1e-6 of the peak; otherwise the decay
/// rate past d + R0 is fitted and must be positive.
DecayReport huygens_profile(const DensityModel& model, const CauchyData& data, double d,
                            std::span<const double> t_grid);

/// |K - P| / E on t_grid (spectral energies). With a polynomial Plancherel density the
/// ratio must stay below 1e-6 for t >= R0 + 2 dr; otherwise the log-linear fit past R0 must
/// decay, and faster than 2 * 0.9 * `huygens_rate` when that rate is given.
DecayReport equipartition_profile(const DensityModel& model, const CauchyData& data, std::span<const double> t_grid,
                                  double huygens_rate = std::numeric_limits<double>::quiet_NaN());

/// sup over lambda of exp(-R tau) (1 + |lambda + i tau|)^N |f^(lambda + i tau)| for each pair.
struct PaleyWienerRow {
  int n = 0;
  double tau = 0.0;
  double sup_half = 0.0;   // over lambda in [0, Lambda / 2]
  double sup = 0.0;        // over lambda in [0, Lambda]
  double argmax = 0.0;
  bool plateau = false;    // the sup no longer grows as the lambda range doubles
};
struct PaleyWienerReport {
  double support_radius = 0.0;
  double lambda_max = 0.0;
  std::vector<double> lambdas;
  std::vector<PaleyWienerRow> rows;
};
/// `lambda_max` = 0 selects min(0.2 / dr, 1000 / R).
PaleyWienerReport paley_wiener_report(const DensityModel& model, const RadialFunction& f, std::span<const int> n_list,
                                      std::span<const double> tau_list, double lambda_max = 0.0);

/// m_j = (C0 int lambda^(2j) |F|^2 weight dlambda)^(1/(2j)), j = 1 .. j_max, in log space.
/// m_j approaches the spectral radius only like R (1 - O(log j / j)) and depends on the
/// amplitude of F, so `value` is the limit estimated from the ratios
/// M_j / M_(j-1) -> R^2 of the moments M_j = m_j^(2j), extrapolated linearly in 1/j.
struct PwRadius {
  double value = 0.0;           // extrapolated limit of the moment sequence
  double last_moment = 0.0;     // m_{j_max}
  std::vector<double> moments;  // m_1 .. m_{j_max}
};
PwRadius pw_radius(const DensityModel& model, const SpectralFunction& F, int j_max);

/// Largest fraction, over the snapshots, of the energy density (|u_t|^2 + |u_r|^2) A found
/// beyond R0 + |t| + 3 dr.
double light_cone_leakage(const DensityModel& model, std::span<const WaveState> trajectory, double R0);

/// Largest grid point where |f| exceeds tol * max|f| (0 for the zero function).
double support_radius(const RadialFunction& f, double tol);
double support_radius(const EvenLineFunction& u, double tol);

}  // namespace radialwave
