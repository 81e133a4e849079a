#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace radialwave {

using cd = std::complex<double>;

/// Uniform grid `start + i * step`, i = 0 .. size-1.
struct UniformGrid {
  double start = 0.0;
  double step = 0.0;
  std::size_t size = 0;

  double operator[](std::size_t i) const { return start + step * static_cast<double>(i); }
  double back() const { return (*this)[size == 0 ? 0 : size - 1]; }
  bool empty() const { return size == 0; }
  std::vector<double> points() const;

  /// Grid on [start, stop] with step no larger than `max_step` that hits `stop` exactly.
  static UniformGrid spanning(double start, double stop, double max_step);
  /// Grid on [start, start + (n-1) step].
  static UniformGrid with_step(double start, double step, std::size_t n) { return {start, step, n}; }
};

/// Trapezoid weights with half weight on both end nodes.
std::vector<double> trapezoid_weights(const UniformGrid& grid);

/// Composite Gauss-Legendre rule (16-point panels) on [a, b].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre_panels(double a, double b, std::size_t panels);

/// How samples are continued to the left of the first node.
enum class Parity { even, odd, none };

/// First derivative of samples on a uniform grid by 8th-order central differences.
/// Samples are reflected about the first node according to `parity`; beyond the
/// last node they are continued by zero.
std::vector<cd> differentiate(std::span<const cd> values, double step, Parity parity);

/// Local Lagrange interpolation (8 nodes) of uniform samples at x.
cd interpolate(const UniformGrid& grid, std::span<const cd> values, double x, Parity parity);

/// Least squares fit y = a + b x; returns {a, b, rms residual}.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rms_residual = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace radialwave
