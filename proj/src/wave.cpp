#include "radialwave/wave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "radialwave/errors.hpp"
#include "radialwave/io.hpp"
#include "radialwave/meanvalue.hpp"
#include "radialwave/parallel.hpp"
#include "radialwave/sweep.hpp"

namespace radialwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// sin(lambda t) / lambda, equal to t at lambda = 0
double sinc_multiplier(double lambda, double t) {
  if (std::abs(lambda) < 1e-6) {
    const double x = lambda * t;
    return t * (1.0 - x * x / 6.0);
  }
  return std::sin(lambda * t) / lambda;
}

void pad_spectrum(const DensityModel& model, SpectralFunction& F, std::size_t n) {
  if (F.grid.size >= n) return;
  std::vector<double> nodes;
  for (std::size_t k = F.grid.size; k < n; ++k) nodes.push_back(F.grid.step * static_cast<double>(k));
  const auto w = plancherel_density(model, nodes);
  F.values.resize(n, 0.0);
  F.weight.insert(F.weight.end(), w.begin(), w.end());
  F.grid.size = n;
}

void check_extent(const CauchySpectrum& spectrum, double t, double r_max) {
  if (std::abs(t) + r_max > spectrum.extent * (1.0 + 1e-12) + 1e-12) {
    throw DomainError("wave", "|t| + r_max = " + format_double(std::abs(t) + r_max) +
                                  " exceeds the extent the spectrum was sampled for (" +
                                  format_double(spectrum.extent) + ")");
  }
}

}  // namespace

CauchyData CauchyData::make(RadialFunction f, RadialFunction g, double support_radius) {
  if (f.grid.size != g.grid.size || f.grid.step != g.grid.step || f.grid.start != g.grid.start) {
    throw DomainError("wave", "f and g must share a grid");
  }
  if (f.grid.empty() || f.grid.start != 0.0) throw DomainError("wave", "Cauchy data grid must start at 0");
  double R = support_radius;
  if (R <= 0.0) {
    R = std::max(std::isfinite(f.support_radius) ? f.support_radius : 0.0,
                 std::isfinite(g.support_radius) ? g.support_radius : 0.0);
  }
  if (!(R > 0.0) || R > f.grid.back()) throw DomainError("wave", "support radius must lie inside the data grid");
  const double scale = std::max(f.max_abs(), g.max_abs());
  for (std::size_t i = 0; i < f.grid.size; ++i) {
    if (f.grid[i] > R + 2.0 * f.grid.step &&
        (std::abs(f.values[i]) > 1e-12 * scale || std::abs(g.values[i]) > 1e-12 * scale)) {
      throw DomainError("wave", "Cauchy data do not vanish beyond R0 = " + format_double(R));
    }
  }
  f.support_radius = R;
  g.support_radius = R;
  return {std::move(f), std::move(g), R};
}

CauchyData CauchyData::bump(const UniformGrid& grid, double radius, double amplitude, bool velocity) {
  auto b = make_bump(grid, radius, amplitude);
  auto z = RadialFunction::zeros(grid, radius);
  return velocity ? make(std::move(z), std::move(b), radius) : make(std::move(b), std::move(z), radius);
}

CauchySpectrum cauchy_spectrum(const DensityModel& model, const CauchyData& data, double extent) {
  if (!(extent >= 0.0)) throw DomainError("wave", "extent must be non-negative");
  SpectralGridOptions opt;
  opt.extent = extent;
  opt.step = spectral_step(model, data.support_radius + extent);
  CauchySpectrum s;
  s.f_hat = forward_radial_fourier_auto(model, data.f, opt);
  s.g_hat = forward_radial_fourier_auto(model, data.g, opt);
  const std::size_t n = std::max(s.f_hat.grid.size, s.g_hat.grid.size);
  pad_spectrum(model, s.f_hat, n);
  pad_spectrum(model, s.g_hat, n);
  s.support_radius = data.support_radius;
  s.extent = extent;
  return s;
}

UniformGrid default_wave_grid(const CauchySpectrum& spectrum, double r_max) {
  const double lmax = spectrum.f_hat.grid.empty() ? 0.0 : spectrum.f_hat.grid.back();
  const double step = lmax > 0.0 ? std::min(0.01, 0.5 / lmax) : 0.01;
  return UniformGrid::spanning(0.0, r_max, step);
}

std::vector<WaveState> spectral_trajectory(const DensityModel& model, const CauchySpectrum& spectrum,
                                           std::span<const double> times, const UniformGrid& r_grid) {
  const auto& F = spectrum.f_hat;
  const auto& G = spectrum.g_hat;
  for (double t : times) check_extent(spectrum, t, r_grid.back());
  check_spectral_truncation(F.values, F.weight, "spectrum of f");
  check_spectral_truncation(G.values, G.weight, "spectrum of g");
  std::vector<WaveState> out;
  if (F.grid.empty()) {
    for (double t : times) {
      out.push_back({t, RadialFunction::zeros(r_grid, 0.0), RadialFunction::zeros(r_grid, 0.0),
                     RadialFunction::zeros(r_grid, 0.0)});
    }
    return out;
  }
  // two coefficient rows per time: u and u_t
  std::vector<std::vector<cd>> coefs;
  for (double t : times) {
    std::vector<cd> u(F.grid.size), ut(F.grid.size);
    for (std::size_t k = 0; k < F.grid.size; ++k) {
      const double l = F.grid[k];
      const double c = std::cos(l * t), s = std::sin(l * t);
      u[k] = F.values[k] * c + G.values[k] * sinc_multiplier(l, t);
      ut[k] = -l * F.values[k] * s + G.values[k] * c;
    }
    coefs.push_back(std::move(u));
    coefs.push_back(std::move(ut));
  }
  std::vector<RadialFunction> derivs;
  auto fields = synthesize(model, F.grid, F.weight, coefs, r_grid, transform_constant(model), &derivs);
  for (std::size_t j = 0; j < times.size(); ++j) {
    WaveState s{times[j], std::move(fields[2 * j]), std::move(fields[2 * j + 1]), std::move(derivs[2 * j])};
    out.push_back(std::move(s));
  }
  return out;
}

WaveState propagate_spectral(const DensityModel& model, const CauchySpectrum& spectrum, double t,
                             const UniformGrid& r_grid) {
  const double times[1] = {t};
  return std::move(spectral_trajectory(model, spectrum, times, r_grid)[0]);
}

WaveState propagate_spectral(const DensityModel& model, const CauchyData& data, double t, const UniformGrid& r_grid) {
  const auto spectrum = cauchy_spectrum(model, data, std::abs(t) + r_grid.back());
  return propagate_spectral(model, spectrum, t, r_grid);
}

WaveState propagate_spectral(const DensityModel& model, const CauchyData& data, double t) {
  const double r_max = data.support_radius + std::abs(t) + model.length_unit();
  const auto spectrum = cauchy_spectrum(model, data, std::abs(t) + r_max);
  return propagate_spectral(model, spectrum, t, default_wave_grid(spectrum, r_max));
}

SeriesExpansion SeriesExpansion::from_coefficients(const DensityModel& model, const DirichletBasis& basis,
                                                   std::vector<cd> a, std::vector<cd> b, double support_radius) {
  if (a.size() != basis.lambdas.size() || b.size() != basis.lambdas.size()) {
    throw DomainError("wave", "coefficient count differs from the number of modes");
  }
  SeriesExpansion s{model, basis.lambdas, basis.norms, std::move(a), std::move(b), basis.radius, support_radius};
  return s;
}

SeriesExpansion series_expansion(const DensityModel& model, const CauchyData& data, double domain_radius, int modes) {
  if (!(data.support_radius < domain_radius)) throw DomainError("wave", "R0 must be smaller than R_dom");
  const auto basis = dirichlet_spectrum(model, domain_radius, modes, domain_radius / 16.0);
  std::vector<cd> lambdas(basis.lambdas.begin(), basis.lambdas.end());
  const auto fa = forward_radial_fourier_at(model, data.f, lambdas);
  const auto gb = forward_radial_fourier_at(model, data.g, lambdas);
  const double sc = model.sphere_const();
  std::vector<cd> a(lambdas.size()), b(lambdas.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    a[k] = fa[k] / (sc * basis.norms[k]);
    b[k] = gb[k] / (sc * basis.norms[k]);
  }
  // the sup-norm contribution of mode k is bounded by |a_k| + |b_k| / lambda_k
  double peak = 0.0, tail = 0.0;
  const std::size_t n = a.size();
  const std::size_t n_tail = std::min(n, std::max<std::size_t>(3, n / 50));
  for (std::size_t k = 0; k < n; ++k) {
    const double m = std::max(std::abs(a[k]), std::abs(b[k]) / std::max(basis.lambdas[k], 1e-300));
    peak = std::max(peak, m);
    if (k + n_tail >= n) tail = std::max(tail, m);
  }
  if (peak > 0.0 && tail > 1e-10 * peak) {
    throw TailError("wave", "series coefficients have not decayed after " + std::to_string(modes) +
                                " modes (tail/peak = " + format_double(tail / peak) + ")");
  }
  return SeriesExpansion::from_coefficients(model, basis, std::move(a), std::move(b), data.support_radius);
}

WaveState propagate_series(const SeriesExpansion& series, double t, const UniformGrid& r_grid) {
  if (!(series.support_radius + std::abs(t) < series.domain_radius)) {
    throw DomainError("wave", "R0 + |t| must stay below R_dom for the series solution to be valid");
  }
  if (r_grid.empty() || r_grid.start != 0.0 || r_grid.back() > series.domain_radius * (1.0 + 1e-12)) {
    throw DomainError("wave", "series output grid must lie in [0, R_dom] and start at 0");
  }
  const std::size_t nr = r_grid.size;
  const std::size_t nk = series.lambdas.size();
  RadialSweep sweep(series.model, r_grid.points(), 0.0, nk == 0 ? 0.0 : series.lambdas.back());
  std::vector<std::vector<cd>> acc(kWorkChunks);
  parallel_chunks(nk, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto& a = acc[chunk];
    a.assign(3 * nr, 0.0);
    std::vector<double> phi(nr), dphi(nr);
    for (std::size_t k = begin; k < end; ++k) {
      const double l = series.lambdas[k];
      const double c = std::cos(l * t), s = std::sin(l * t);
      const cd cu = series.a[k] * c + series.b[k] * sinc_multiplier(l, t);
      const cd cut = -l * series.a[k] * s + series.b[k] * c;
      if (cu == 0.0 && cut == 0.0) continue;
      sweep.regular_phi(l, phi.data(), dphi.data());
      for (std::size_t i = 0; i < nr; ++i) {
        a[i] += cu * phi[i];
        a[nr + i] += cut * phi[i];
        a[2 * nr + i] += cu * dphi[i];
      }
    }
  });
  WaveState state{t, RadialFunction::zeros(r_grid, kInf), RadialFunction::zeros(r_grid, kInf),
                  RadialFunction::zeros(r_grid, kInf)};
  for (const auto& a : acc) {
    if (a.empty()) continue;
    for (std::size_t i = 0; i < nr; ++i) {
      state.u.values[i] += a[i];
      state.ut.values[i] += a[nr + i];
      state.ur->values[i] += a[2 * nr + i];
    }
  }
  return state;
}

WaveState propagate_series(const DensityModel& model, const CauchyData& data, double domain_radius, int modes,
                           double t, const UniformGrid& r_grid) {
  return propagate_series(series_expansion(model, data, domain_radius, modes), t, r_grid);
}

namespace {

// Cosine expansion of a^-1(M_d h) on [0, tau_max], where M_d h is the spherical mean of h
// about a point at distance d, seen as a function of the radius.
struct MeanProfile {
  UniformGrid lambdas;
  std::vector<cd> coef;

  cd at(double s) const {
    cd sum = 0.0;
    for (std::size_t k = 0; k < coef.size(); ++k) sum += coef[k] * std::cos(lambdas[k] * s);
    return sum;
  }
  cd integral(double tau) const {
    if (tau == 0.0 || coef.empty()) return 0.0;
    const auto panels = static_cast<std::size_t>(std::ceil(tau * lambdas.back() / 10.0)) + 1;
    const auto rule = gauss_legendre_panels(0.0, tau, panels);
    std::vector<cd> parts(rule.nodes.size());
    parallel_for(rule.nodes.size(), [&](std::size_t i) { parts[i] = rule.weights[i] * at(rule.nodes[i]); });
    cd sum = 0.0;
    for (const cd& p : parts) sum += p;
    return sum;
  }
};

MeanProfile mean_profile(const DensityModel& model, const RadialFunction& h, double R0, double d, double tau_max) {
  if (h.max_abs() == 0.0) return {};
  const double top = d + R0;
  const double step = h.grid.step;
  SpectralGridOptions opt;
  opt.extent = d + top;
  const auto H = forward_radial_fourier_auto(model, h, opt);
  auto mean = spherical_mean(model, H, d, UniformGrid::spanning(0.0, top + 4.0 * step, step));
  mean.support_radius = std::min(mean.grid.back(), top);
  SpectralGridOptions opt2;
  opt2.extent = tau_max;
  const auto M = forward_radial_fourier_auto(model, mean, opt2);
  check_spectral_truncation(M.values, M.weight, "spectrum of the spherical mean");
  if (M.grid.empty()) return {};
  const double c0 = transform_constant(model);
  const auto q = trapezoid_weights(M.grid);
  MeanProfile p{M.grid, std::vector<cd>(M.grid.size)};
  for (std::size_t k = 0; k < p.coef.size(); ++k) p.coef[k] = c0 * q[k] * M.weight[k] * M.values[k];
  return p;
}

}  // namespace

cd propagate_dalembert(const DensityModel& model, const CauchyData& data, double d, double t) {
  const double times[1] = {t};
  return propagate_dalembert(model, data, d, times)[0];
}

std::vector<cd> propagate_dalembert(const DensityModel& model, const CauchyData& data, double d,
                                    std::span<const double> times) {
  if (!(d >= 0.0)) throw DomainError("wave", "distance must be non-negative");
  double tau_max = 0.0;
  for (double t : times) tau_max = std::max(tau_max, std::abs(t));
  const double R0 = data.support_radius;
  const auto pf = mean_profile(model, data.f, R0, d, tau_max);
  const auto pg = mean_profile(model, data.g, R0, d, tau_max);
  std::vector<cd> out;
  for (double t : times) {
    const double sign = t < 0.0 ? -1.0 : 1.0;
    out.push_back(pf.at(std::abs(t)) + sign * pg.integral(std::abs(t)));
  }
  return out;
}

RadialFunction radial_derivative(const WaveState& state) {
  if (state.ur) return *state.ur;
  RadialFunction d{state.u.grid, differentiate(state.u.values, state.u.grid.step, Parity::even), kInf};
  return d;
}

double spectral_total_energy2(const DensityModel& model, const CauchySpectrum& spectrum) {
  const auto& F = spectrum.f_hat;
  const auto& G = spectrum.g_hat;
  if (F.grid.empty()) return 0.0;
  const auto q = trapezoid_weights(F.grid);
  double sum = 0.0;
  for (std::size_t k = 0; k < F.grid.size; ++k) {
    const double l = F.grid[k];
    sum += q[k] * F.weight[k] * (l * l * std::norm(F.values[k]) + std::norm(G.values[k]));
  }
  return transform_constant(model) * sum;
}

Energy energy(const DensityModel& model, const WaveState& state, const CauchySpectrum* spectrum) {
  Energy e;
  auto ut = state.ut;
  ut.support_radius = kInf;
  auto u = state.u;
  u.support_radius = kInf;
  auto ur = radial_derivative(state);
  const double rho2 = model.rho() * model.rho();
  e.kinetic = 0.5 * radial_norm2(model, ut);
  e.potential_physical = 0.5 * (radial_norm2(model, ur) - rho2 * radial_norm2(model, u));
  e.potential_spectral = std::numeric_limits<double>::quiet_NaN();
  if (spectrum != nullptr && !spectrum->f_hat.grid.empty()) {
    const auto& F = spectrum->f_hat;
    const auto& G = spectrum->g_hat;
    const auto q = trapezoid_weights(F.grid);
    const double t = state.t;
    double sum = 0.0;
    for (std::size_t k = 0; k < F.grid.size; ++k) {
      const double l = F.grid[k];
      sum += q[k] * F.weight[k] * std::norm(l * F.values[k] * std::cos(l * t) + G.values[k] * std::sin(l * t));
    }
    e.potential_spectral = 0.5 * transform_constant(model) * sum;
  } else if (spectrum != nullptr) {
    e.potential_spectral = 0.0;
  }
  e.potential = spectrum != nullptr ? e.potential_spectral : e.potential_physical;
  e.total = e.kinetic + e.potential;
  return e;
}

void write_csv(const std::filesystem::path& path, const WaveState& state) {
  const std::size_t n = state.u.grid.size;
  std::vector<std::vector<double>> cols(5, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    cols[0][i] = state.u.grid[i];
    cols[1][i] = state.u.values[i].real();
    cols[2][i] = state.u.values[i].imag();
    cols[3][i] = state.ut.values[i].real();
    cols[4][i] = state.ut.values[i].imag();
  }
  write_table_csv(path, {"r", "re_u", "im_u", "re_ut", "im_ut"}, cols);
}

}  // namespace radialwave
