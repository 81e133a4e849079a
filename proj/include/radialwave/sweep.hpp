#pragma once

#include <cstddef>
#include <vector>

#include "radialwave/density.hpp"
#include "radialwave/quadrature.hpp"

namespace radialwave {

/// Mesh controls for the radial integrator (lengths in units of 1/scale).
struct SweepOptions {
  double geometric_ratio = 0.0025; // step/r near the origin
  double far_step = 0.02;         // uniform step where the potential is not negligible
};

/// Integrates the radial eigen-equation u'' + (A'/A) u' + (lambda^2 + rho^2) u = 0
/// on a fixed set of target radii.
///
/// The equation is solved in Liouville form v = sqrt(A) u, v'' = -(lambda^2 - G) v,
/// with a fourth-order Magnus integrator on a mesh that contains every target. The
/// mesh and the potential samples do not depend on lambda, so one instance serves a
/// whole lambda sweep and may be shared between threads. Where the potential is
/// negligible the Magnus step is an exact rotation, which makes H^3 exact.
class RadialSweep {
 public:
  /// `targets` must be sorted ascending and non-negative. The mesh extends to
  /// max(targets.back(), top). `lambda_hint` is the largest |lambda| expected; larger
  /// values still work but pay for a few extra launch steps.
  RadialSweep(const DensityModel& model, std::vector<double> targets, double top = 0.0, double lambda_hint = 0.0,
              SweepOptions options = {});

  const DensityModel& model() const { return model_; }
  const std::vector<double>& targets() const { return targets_; }
  std::size_t size() const { return targets_.size(); }
  double top() const { return nodes_.empty() ? 0.0 : nodes_.back(); }
  std::size_t mesh_size() const { return nodes_.size(); }

  /// exp(log A / 2) at the targets (0 at r = 0).
  const std::vector<double>& sqrt_density() const { return sqrtA_; }
  /// exp(-log A / 2) at the targets (+inf at r = 0).
  const std::vector<double>& inv_sqrt_density() const { return inv_sqrtA_; }
  /// Half of A'/A at the targets (0 placeholder at r = 0).
  const std::vector<double>& half_logderiv() const { return half_p_; }
  /// log A / 2 at the targets (-inf at r = 0).
  const std::vector<double>& half_log_density() const { return half_logA_; }

  /// Ratio step/r used near the origin.
  double geometric_ratio() const;
  /// Radius where the series start hands over to the integrator.
  double launch_radius(cd lambda) const;

  /// Regular solution (u(0) = 1) for real lambda, in Liouville variables v, v'.
  void regular(double lambda, double* v, double* dv) const;
  /// Regular solution and its r-derivative for real lambda.
  void regular_phi(double lambda, double* phi, double* dphi) const;
  /// Regular solution and its r-derivative for complex lambda.
  void regular_phi(cd lambda, cd* phi, cd* dphi) const;
  /// Regular solution for complex lambda in Liouville variables.
  void regular(cd lambda, cd* v, cd* dv) const;

  /// Solution seeded at top() with the Liouville data of exp((i lambda - rho) r),
  /// divided by exp(L) where L = log A(top)/2 + (i lambda - rho) top; integrated
  /// backward to the targets (Liouville variables). The seed is v = 1,
  /// v' = i lambda - rho + A'/A(top)/2.
  void jost(cd lambda, cd* v, cd* dv) const;
  /// The factor L above.
  cd jost_log_factor(cd lambda) const;

  /// Series value of the regular solution and its derivative at a small radius.
  std::pair<cd, cd> series_phi(cd lambda, double r) const;

 private:
  template <class T>
  void run_regular(T lambda, T* v, T* dv) const;

  DensityModel model_;
  SweepOptions options_;
  std::vector<double> targets_;
  std::vector<double> sqrtA_, inv_sqrtA_, half_p_, half_logA_;

  std::vector<double> nodes_;
  std::vector<std::ptrdiff_t> node_target_;  // target index at node or -1
  std::vector<double> step_h_, step_g_, step_d_;
  std::vector<std::size_t> target_node_;     // node index of each target (targets > 0)
};

}  // namespace radialwave
