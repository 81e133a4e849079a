#pragma once

#include <memory>
#include <string>
#include <vector>

namespace radialwave {

enum class DensityKind { jacobi, table };

/// A(r) and A'(r)/A(r). At r = 0 the density is 0 and the log-derivative is
/// reported as +infinity; the pole strength is available separately.
struct DensitySample {
  double A = 0.0;
  double logderiv = 0.0;
};

/// Outcome of the numerical checks of the four density conditions.
struct ConditionReport {
  bool increasing = false;               // A strictly increasing, unbounded growth
  double min_log_increment = 0.0;        // min over samples of log A(r_{i+1}) - log A(r_i)

  bool logderiv_decreasing = false;      // A'/A non-increasing with a positive limit
  double max_logderiv_increase = 0.0;    // largest upward step of A'/A between samples
  double rho_estimate = 0.0;             // half of A'/A at r_max

  bool small_r_power = false;            // A ~ r^(2 alpha + 1) near 0
  double fitted_exponent = 0.0;
  double expected_exponent = 0.0;

  bool potential_integrable = false;     // int r |G| dr finite on [0.1, r_max]
  double potential_integral = 0.0;
  double potential_tail = 0.0;           // contribution of the outer half of the range

  bool all() const { return increasing && logderiv_decreasing && small_r_power && potential_integrable; }
};

/// Radial density of a rank-one harmonic manifold surrogate.
///
/// Jacobi models use A(r) = (2 sinh(s r)/s)^(2a+1) (2 cosh(s r))^(2b+1), and tables
/// interpolate log A monotonically between samples with a power law below the
/// first positive node. Physical integrals over the manifold use sphere_const() * A.
/// Instances are immutable.
class DensityModel {
 public:
  static DensityModel jacobi(double alpha, double beta, double scale);
  /// r must start at 0 (with A = 0) or at a positive radius, be strictly
  /// increasing, and contain at least 4 positive nodes with A > 0.
  static DensityModel table(std::vector<double> r, std::vector<double> A, double sphere_const = 1.0);

  DensityKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double scale() const { return scale_; }
  double rho() const { return rho_; }
  int dim() const { return dim_; }
  /// True when 2 alpha + 2 is not an integer (dim() is then only a rounded label).
  bool non_integer_dim() const { return non_integer_dim_; }
  double sphere_const() const { return sphere_const_; }
  /// Residue of A'/A at r = 0, i.e. 2 alpha + 1.
  double pole_strength() const { return 2.0 * alpha_ + 1.0; }

  DensitySample eval(double r) const;
  double log_density(double r) const;
  double logderiv(double r) const;
  /// Derivative of A'/A.
  double logderiv_slope(double r) const;
  /// G = (A'/A)^2/4 + (A'/A)'/2 - rho^2.
  double liouville_potential(double r) const;

  /// Coefficients q_j with A'/A = (2 alpha + 1)/r + sum_j q_j r^(2j-1) for r < series_radius().
  const std::vector<double>& logderiv_series() const { return series_; }
  double series_radius() const { return series_radius_; }
  /// Radius beyond which |G| is below 1e-18 (the equation is then free to double precision).
  double free_radius() const { return free_radius_; }
  /// Default start radius for the asymptotic (Jost) solutions.
  double asymptotic_radius() const { return asymptotic_radius_; }
  /// Largest radius where the density can be evaluated (infinite for Jacobi models).
  double max_radius() const { return max_radius_; }
  /// Natural length 1/scale.
  double length_unit() const { return 1.0 / scale_; }

  /// True when the Plancherel density is a polynomial in lambda (Jacobi models whose
  /// c-function gamma factors cancel completely); such models obey the strong Huygens
  /// principle.
  bool polynomial_plancherel() const { return polynomial_plancherel_; }
  /// Stable identifier used for caching.
  std::string key() const { return key_; }

 private:
  DensityModel() = default;
  void finish_jacobi();

  DensityKind kind_ = DensityKind::jacobi;
  double alpha_ = 0.0, beta_ = 0.0, scale_ = 1.0, rho_ = 0.0;
  int dim_ = 0;
  bool non_integer_dim_ = false;
  double sphere_const_ = 1.0;
  std::vector<double> series_;
  double series_radius_ = 0.0;
  double free_radius_ = 0.0;
  double asymptotic_radius_ = 0.0;
  double max_radius_ = 0.0;
  bool polynomial_plancherel_ = false;
  std::string key_;

  struct Table;
  std::shared_ptr<const Table> table_;
};

ConditionReport validate_conditions(const DensityModel& model, double r_max, int n_samples);

/// Reads a model catalog file (key = value lines; `model = jacobi` with alpha, beta,
/// scale or `model = table` with `path` naming a two-column CSV of r, A). Keys may
/// carry a `model.` prefix.
DensityModel load_model_file(const std::string& path);

}  // namespace radialwave
