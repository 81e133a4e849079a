#include <algorithm>
#include <cmath>
#include <limits>

#include "radialwave/errors.hpp"
#include "radialwave/io.hpp"
#include "radialwave/wave.hpp"

namespace radialwave {

namespace {

// Conservative discretization of u'' + (A'/A) u' + rho^2 u on the nodes r_i = i h:
//   (L u)_i = up_i (u_{i+1} - u_i) - down_i (u_i - u_{i-1}) + rho^2 u_i,
// with up_i = A(r_i + h/2) / (h W_i), down_i = A(r_i - h/2) / (h W_i) and W_i the integral of
// A over the cell [r_i - h/2, r_i + h/2] (over [0, h/2] for i = 0). At the origin the row
// becomes 2 (2 alpha + 2) (u_1 - u_0) / h^2 + rho^2 u_0 to leading order.
struct FiniteVolume {
  std::vector<double> up, down;
  double rho2 = 0.0;

  FiniteVolume(const DensityModel& model, double h, std::size_t n_cells) : up(n_cells), down(n_cells) {
    rho2 = model.rho() * model.rho();
    const auto cell = gauss_legendre_panels(-0.5, 0.5, 1);
    for (std::size_t i = 0; i < n_cells; ++i) {
      const double r = h * static_cast<double>(i);
      double log_w;
      if (i == 0) {
        // A ~ r^(2 alpha + 1) near 0: geometric panels towards the origin
        const double ref = model.log_density(0.5 * h);
        double w = 0.0;
        double hi = 0.5 * h;
        for (int j = 0; j < 60; ++j) {
          const double lo = 0.5 * hi;
          const auto rule = gauss_legendre_panels(lo, hi, 1);
          for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            w += rule.weights[k] * std::exp(model.log_density(rule.nodes[k]) - ref);
          }
          hi = lo;
        }
        log_w = ref + std::log(w);
      } else {
        const double ref = model.log_density(r);
        double w = 0.0;
        for (std::size_t k = 0; k < cell.nodes.size(); ++k) {
          w += cell.weights[k] * h * std::exp(model.log_density(r + h * cell.nodes[k]) - ref);
        }
        log_w = ref + std::log(w);
      }
      up[i] = std::exp(model.log_density(r + 0.5 * h) - log_w) / h;
      down[i] = i == 0 ? 0.0 : std::exp(model.log_density(r - 0.5 * h) - log_w) / h;
    }
  }

  // out = L u for nodes 0 .. n-1; u[n] (the wall) is 0
  void apply(const std::vector<cd>& u, std::vector<cd>& out) const {
    const std::size_t n = up.size();
    for (std::size_t i = 0; i < n; ++i) {
      const cd right = (i + 1 < n ? u[i + 1] : cd(0.0)) - u[i];
      const cd left = i == 0 ? cd(0.0) : u[i] - u[i - 1];
      out[i] = up[i] * right - down[i] * left + rho2 * u[i];
    }
  }

  // Largest eigenvalue of -L. The operator is symmetric in the cell-weighted inner product,
  // so the symmetrized tridiagonal has diagonal up_i + down_i - rho^2 and off-diagonal
  // -sqrt(up_i down_(i+1)); bisection on the Sturm count (Gershgorin gives the bracket).
  double spectral_radius() const {
    const std::size_t n = up.size();
    std::vector<double> diag(n), off2(n, 0.0);
    double hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diag[i] = up[i] + down[i] - rho2;
      if (i + 1 < n) off2[i] = up[i] * down[i + 1];
      hi = std::max(hi, 2.0 * (up[i] + down[i]) + rho2);
    }
    // number of eigenvalues below x
    auto count_below = [&](double x) {
      std::size_t c = 0;
      double q = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        q = diag[i] - x - (i == 0 ? 0.0 : off2[i - 1] / q);
        if (q == 0.0) q = -1e-300;
        if (q < 0.0) ++c;
      }
      return c;
    };
    double lo = 0.0;
    for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (count_below(mid) < n ? lo : hi) = mid;
    }
    return hi;
  }
};

cd sample(const RadialFunction& f, double r) {
  if (r > f.grid.back() + 1e-12 * f.grid.step) return 0.0;
  const double x = r / f.grid.step;
  const double k = std::round(x);
  if (std::abs(x - k) < 1e-9) return f.values[static_cast<std::size_t>(k)];
  return interpolate(f.grid, f.values, r, Parity::even);
}

std::vector<WaveState> run(const DensityModel& model, const CauchyData& data, std::span<const double> times,
                           double dr, double dt, const FdtdOptions& options) {
  if (!(dr > 0.0) || !(dt > 0.0)) throw DomainError("fdtd", "dr and dt must be positive");
  if (dt > 0.9 * dr * (1.0 + 1e-12)) {
    throw CFLError("fdtd", "dt = " + format_double(dt) + " exceeds 0.9 dr = " + format_double(0.9 * dr));
  }
  double t_max = 0.0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (!(times[j] >= 0.0) || (j > 0 && times[j] < times[j - 1])) {
      throw DomainError("fdtd", "snapshot times must be non-negative and increasing");
    }
    t_max = std::max(t_max, times[j]);
  }
  const double r_max = options.r_max > 0.0 ? options.r_max : data.support_radius + t_max + model.length_unit();
  const auto n_cells = static_cast<std::size_t>(std::ceil(r_max / dr - 1e-9));
  if (n_cells < 8 || r_max > model.max_radius()) throw DomainError("fdtd", "R_max out of range");
  if (data.support_radius > dr * static_cast<double>(n_cells - 4)) {
    throw BoundaryTouchError("fdtd", "initial data reach the wall at R_max");
  }
  const UniformGrid grid{0.0, dr, n_cells + 1};  // last node is the wall

  FiniteVolume L(model, dr, n_cells);
  std::vector<cd> u(n_cells + 1, 0.0), v(n_cells + 1, 0.0), Lu(n_cells + 1, 0.0);
  for (std::size_t i = 0; i < n_cells; ++i) {
    u[i] = sample(data.f, grid[i]);
    v[i] = sample(data.g, grid[i]);
  }
  const double scale = std::max(data.f.max_abs(), data.g.max_abs());
  // kick-drift-kick leapfrog is stable for dt^2 * spectral_radius < 4; the step is split
  // when the requested dt exceeds that margin
  const double substep_max = 1.9 / std::sqrt(L.spectral_radius());

  std::vector<WaveState> out;
  double t = 0.0;
  L.apply(u, Lu);
  for (double target : times) {
    const double span = target - t;
    const auto n_steps = static_cast<std::size_t>(std::ceil(span / std::min(dt, substep_max) - 1e-9));
    const double h = n_steps == 0 ? 0.0 : span / static_cast<double>(n_steps);
    for (std::size_t s = 0; s < n_steps; ++s) {
      for (std::size_t i = 0; i < n_cells; ++i) v[i] += 0.5 * h * Lu[i];
      for (std::size_t i = 0; i < n_cells; ++i) u[i] += h * v[i];
      L.apply(u, Lu);
      for (std::size_t i = 0; i < n_cells; ++i) v[i] += 0.5 * h * Lu[i];
      if (std::abs(u[n_cells - 2]) > options.wall_tolerance * scale) {
        throw BoundaryTouchError("fdtd", "solution reached R_max - 2 dr at t = " +
                                             format_double(t + h * static_cast<double>(s + 1)));
      }
    }
    t = target;
    WaveState state{target, {grid, u, std::numeric_limits<double>::infinity()},
                    {grid, v, std::numeric_limits<double>::infinity()}, std::nullopt};
    out.push_back(std::move(state));
  }
  return out;
}

}  // namespace

std::vector<WaveState> fdtd_trajectory(const DensityModel& model, const CauchyData& data,
                                       std::span<const double> times, double dr, double dt,
                                       const FdtdOptions& options) {
  return run(model, data, times, dr, dt, options);
}

WaveState propagate_fdtd(const DensityModel& model, const CauchyData& data, double t, double dr, double dt,
                         const FdtdOptions& options) {
  const double times[1] = {std::abs(t)};
  if (t >= 0.0) {
    auto states = run(model, data, times, dr, dt, options);
    return states.front();
  }
  // u(., -t) solves the equation with data (f, -g)
  CauchyData reversed = data;
  for (auto& x : reversed.g.values) x = -x;
  auto states = run(model, reversed, times, dr, dt, options);
  states.front().t = t;
  for (auto& x : states.front().ut.values) x = -x;
  return states.front();
}

}  // namespace radialwave
