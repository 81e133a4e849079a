#include "radialwave/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>

#include "radialwave/errors.hpp"

namespace radialwave {

std::vector<double> UniformGrid::points() const {
  std::vector<double> out(size);
  for (std::size_t i = 0; i < size; ++i) out[i] = (*this)[i];
  return out;
}

UniformGrid UniformGrid::spanning(double start, double stop, double max_step) {
  if (!(stop > start) || !(max_step > 0.0)) {
    throw DomainError("grid", "invalid span for uniform grid");
  }
  const auto intervals = static_cast<std::size_t>(std::ceil((stop - start) / max_step - 1e-9));
  const std::size_t n = std::max<std::size_t>(intervals, 1);
  return {start, (stop - start) / static_cast<double>(n), n + 1};
}

std::vector<double> trapezoid_weights(const UniformGrid& grid) {
  std::vector<double> w(grid.size, grid.step);
  if (!w.empty()) {
    w.front() *= 0.5;
    w.back() *= 0.5;
  }
  return w;
}

QuadratureRule gauss_legendre_panels(double a, double b, std::size_t panels) {
  using rule = boost::math::quadrature::gauss<double, 16>;
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  QuadratureRule out;
  out.nodes.reserve(16 * panels);
  out.weights.reserve(16 * panels);
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * width;
    const double half = 0.5 * width;
    // boost stores the positive half of the (even order, zero-free) rule
    for (std::size_t i = x.size(); i-- > 0;) {
      out.nodes.push_back(mid - half * x[i]);
      out.weights.push_back(half * w[i]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      out.nodes.push_back(mid + half * x[i]);
      out.weights.push_back(half * w[i]);
    }
  }
  return out;
}

namespace {

// 8th-order central difference coefficients for offsets 1..4
constexpr std::array<double, 4> kCentral8 = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};

cd sample(std::span<const cd> v, std::ptrdiff_t i, Parity parity) {
  const auto n = static_cast<std::ptrdiff_t>(v.size());
  double sign = 1.0;
  if (i < 0) {
    if (parity == Parity::none) return {};
    if (parity == Parity::odd) sign = -1.0;
    i = -i;
  }
  if (i >= n) return {};
  return sign * v[static_cast<std::size_t>(i)];
}

}  // namespace

std::vector<cd> differentiate(std::span<const cd> values, double step, Parity parity) {
  std::vector<cd> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto k = static_cast<std::ptrdiff_t>(i);
    cd acc{};
    for (std::ptrdiff_t m = 1; m <= 4; ++m) {
      acc += kCentral8[static_cast<std::size_t>(m - 1)] *
             (sample(values, k + m, parity) - sample(values, k - m, parity));
    }
    out[i] = acc / step;
  }
  return out;
}

cd interpolate(const UniformGrid& grid, std::span<const cd> values, double x, Parity parity) {
  const double s = (x - grid.start) / grid.step;
  const auto base = static_cast<std::ptrdiff_t>(std::floor(s)) - 3;
  cd acc{};
  for (std::ptrdiff_t j = 0; j < 8; ++j) {
    const double xj = static_cast<double>(base + j);
    double l = 1.0;
    for (std::ptrdiff_t m = 0; m < 8; ++m) {
      if (m == j) continue;
      l *= (s - static_cast<double>(base + m)) / (xj - static_cast<double>(base + m));
    }
    acc += l * sample(values, base + j, parity);
  }
  return acc;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += e * e;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace radialwave
