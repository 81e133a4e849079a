#include "radialwave/meanvalue.hpp"

#include <algorithm>
#include <cmath>

#include "radialwave/errors.hpp"
#include "radialwave/parallel.hpp"
#include "radialwave/sweep.hpp"

namespace radialwave {

namespace {

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::size_t index_of(const std::vector<double>& v, double x) {
  return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
}

}  // namespace

RadialFunction spherical_mean(const DensityModel& model, const RadialFunction& f, double d, const UniformGrid& r_grid) {
  if (!(d >= 0.0)) throw DomainError("meanvalue", "distance must be non-negative");
  SpectralGridOptions opt;
  opt.extent = d + r_grid.back();
  return spherical_mean(model, forward_radial_fourier_auto(model, f, opt), d, r_grid);
}

RadialFunction spherical_mean(const DensityModel& model, const SpectralFunction& F, double d, const UniformGrid& r_grid) {
  if (!(d >= 0.0)) throw DomainError("meanvalue", "distance must be non-negative");
  check_spectral_truncation(F.values, F.weight, "spectrum");
  if (F.grid.empty()) return RadialFunction::zeros(r_grid);
  // phi_lambda(d) on the lambda grid
  std::vector<cd> coef(F.grid.size);
  if (d == 0.0) {
    coef = F.values;
  } else {
    RadialSweep sweep(model, {d}, 0.0, F.grid.back());
    parallel_for(F.grid.size, [&](std::size_t k) {
      double phi, dphi;
      sweep.regular_phi(F.grid[k], &phi, &dphi);
      coef[k] = F.values[k] * phi;
    });
  }
  auto out = synthesize(model, F.grid, F.weight, {coef}, r_grid, transform_constant(model))[0];
  return out;
}

std::vector<std::vector<cd>> spherical_mean_table(const DensityModel& model, const SpectralFunction& F,
                                                  std::span<const double> distances, std::span<const double> radii) {
  for (double x : distances) {
    if (!(x >= 0.0)) throw DomainError("meanvalue", "distance must be non-negative");
  }
  for (double x : radii) {
    if (!(x >= 0.0)) throw DomainError("meanvalue", "radius must be non-negative");
  }
  check_spectral_truncation(F.values, F.weight, "spectrum");
  std::vector<double> pts(distances.begin(), distances.end());
  pts.insert(pts.end(), radii.begin(), radii.end());
  pts = sorted_unique(std::move(pts));
  const double c0 = transform_constant(model);
  const auto q = trapezoid_weights(F.grid);
  RadialSweep sweep(model, pts, 0.0, F.grid.empty() ? 0.0 : F.grid.back());
  const std::size_t nd = distances.size(), nr = radii.size();
  std::vector<std::vector<cd>> acc(kWorkChunks);
  parallel_chunks(F.grid.size, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto& a = acc[chunk];
    a.assign(nd * nr, 0.0);
    std::vector<double> phi(pts.size()), dphi(pts.size());
    for (std::size_t k = begin; k < end; ++k) {
      const cd c = c0 * q[k] * F.weight[k] * F.values[k];
      if (c == 0.0) continue;
      sweep.regular_phi(F.grid[k], phi.data(), dphi.data());
      for (std::size_t i = 0; i < nd; ++i) {
        const cd ci = c * phi[index_of(pts, distances[i])];
        for (std::size_t j = 0; j < nr; ++j) a[i * nr + j] += ci * phi[index_of(pts, radii[j])];
      }
    }
  });
  std::vector<std::vector<cd>> out(nd, std::vector<cd>(nr, 0.0));
  for (const auto& a : acc) {
    if (a.empty()) continue;
    for (std::size_t i = 0; i < nd; ++i) {
      for (std::size_t j = 0; j < nr; ++j) out[i][j] += a[i * nr + j];
    }
  }
  return out;
}

double asgeirsson_residual(const DensityModel& model, double lambda, double d1, double d2, double r, double s) {
  if (!(d1 >= 0.0 && d2 >= 0.0 && r >= 0.0 && s >= 0.0)) {
    throw DomainError("meanvalue", "distances and radii must be non-negative");
  }
  // phi_lambda with a smooth cut-off well outside every sphere involved; the means are
  // local, so the window is invisible to them.
  const double unit = model.length_unit();
  const double width = 0.25 * unit;
  const double flat = std::max(d1, d2) + std::max(r, s) + unit;
  const double support = flat + 12.0 * width;
  const double lambda_max = std::abs(lambda) + 60.0 / width;
  const auto grid = UniformGrid::spanning(0.0, support, 0.2 / lambda_max);
  RadialSweep sweep(model, grid.points(), 0.0, std::abs(lambda));
  std::vector<double> phi(grid.size), dphi(grid.size);
  sweep.regular_phi(lambda, phi.data(), dphi.data());
  RadialFunction f = RadialFunction::zeros(grid, support);
  for (std::size_t i = 0; i < grid.size; ++i) f.values[i] = phi[i] * plateau(grid[i], flat, width);

  SpectralGridOptions opt;
  opt.extent = std::max(d1, d2) + std::max(r, s);
  const auto F = forward_radial_fourier_auto(model, f, opt);
  const double dist[2] = {d1, d2};
  const double rad[2] = {r, s};
  const auto m = spherical_mean_table(model, F, dist, rad);
  // M^r_x M^s_y u = M^r[phi](d1) M^s[phi](d2) against the swapped radii
  const cd left = m[0][0] * m[1][1];
  const cd right = m[0][1] * m[1][0];
  return std::abs(left - right);
}

}  // namespace radialwave
