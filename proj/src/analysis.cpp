#include "radialwave/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "radialwave/errors.hpp"

namespace radialwave {

namespace {

double max_time(std::span<const double> t_grid) {
  double m = 0.0;
  for (double t : t_grid) m = std::max(m, std::abs(t));
  return m;
}

template <class V>
double support_of(const UniformGrid& grid, const V& values, double tol) {
  double peak = 0.0;
  for (const auto& v : values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  for (std::size_t i = values.size(); i-- > 0;) {
    if (std::abs(values[i]) > tol * peak) return grid[i];
  }
  return 0.0;
}

}  // namespace

void fit_decay(DecayReport& report, double x_start) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < report.abscissa.size(); ++i) {
    if (report.abscissa[i] >= x_start && report.values[i] > 0.0) {
      x.push_back(report.abscissa[i]);
      y.push_back(std::log(report.values[i]));
    }
  }
  report.rate = std::numeric_limits<double>::quiet_NaN();
  report.fit_residual = std::numeric_limits<double>::quiet_NaN();
  if (x.size() < 3) return;
  const auto fit = fit_line(x, y);
  report.fit_residual = fit.rms_residual;
  if (fit.rms_residual < 0.1) report.rate = -fit.slope;
}

DecayReport huygens_profile(const DensityModel& model, const CauchyData& data, double d,
                            std::span<const double> t_grid) {
  if (!(d >= 0.0)) throw DomainError("analysis", "distance must be non-negative");
  DecayReport rep;
  rep.claim = "huygens";
  const double R0 = data.support_radius;
  const double dr = data.f.grid.step;
  const auto spectrum = cauchy_spectrum(model, data, max_time(t_grid) + d);
  const UniformGrid point{d, 1.0, 1};
  const auto states = spectral_trajectory(model, spectrum, t_grid, point);
  double peak = 0.0;
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    rep.abscissa.push_back(t_grid[j]);
    rep.values.push_back(std::abs(states[j].u.values[0]));
    peak = std::max(peak, rep.values.back());
  }
  rep.exact_claim = model.polynomial_plancherel();
  if (rep.exact_claim) {
    rep.threshold_start = d + R0 + 2.0 * dr;
    rep.threshold = 1e-6 * peak;
    rep.measured = 0.0;
    bool any = false;
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
      if (std::abs(t_grid[j]) >= rep.threshold_start) {
        rep.measured = std::max(rep.measured, rep.values[j]);
        any = true;
      }
    }
    rep.pass = any && rep.measured <= rep.threshold;
  } else {
    // the bound is asymptotic: the fit starts two length units past the threshold, after the
    // wavefront and its algebraic transient
    rep.threshold_start = d + R0;
    fit_decay(rep, rep.threshold_start + 2.0 * model.length_unit());
    rep.measured = rep.rate;
    rep.pass = std::isfinite(rep.rate) && rep.rate > 0.0;
  }
  return rep;
}

DecayReport equipartition_profile(const DensityModel& model, const CauchyData& data, std::span<const double> t_grid,
                                  double huygens_rate) {
  DecayReport rep;
  rep.claim = "equipartition";
  const double R0 = data.support_radius;
  const double dr = data.f.grid.step;
  // K - P oscillates like cos(2 lambda t) against an autocorrelation of width 2 R0
  const auto spectrum = cauchy_spectrum(model, data, R0 + 2.0 * max_time(t_grid));
  const auto& F = spectrum.f_hat;
  const auto& G = spectrum.g_hat;
  const double c0 = transform_constant(model);
  const double total = 0.5 * spectral_total_energy2(model, spectrum);
  const auto q = F.grid.empty() ? std::vector<double>{} : trapezoid_weights(F.grid);
  for (double t : t_grid) {
    double k = 0.0, p = 0.0;
    for (std::size_t i = 0; i < F.grid.size; ++i) {
      const double l = F.grid[i];
      const double c = std::cos(l * t), s = std::sin(l * t);
      k += q[i] * F.weight[i] * std::norm(-l * F.values[i] * s + G.values[i] * c);
      p += q[i] * F.weight[i] * std::norm(l * F.values[i] * c + G.values[i] * s);
    }
    rep.abscissa.push_back(t);
    rep.values.push_back(total > 0.0 ? 0.5 * c0 * std::abs(k - p) / total : 0.0);
  }
  rep.exact_claim = model.polynomial_plancherel();
  if (rep.exact_claim) {
    rep.threshold_start = R0 + 2.0 * dr;
    rep.threshold = 1e-6;
    bool any = false;
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
      if (std::abs(t_grid[j]) >= rep.threshold_start) {
        rep.measured = std::max(rep.measured, rep.values[j]);
        any = true;
      }
    }
    rep.pass = any && rep.measured <= rep.threshold;
  } else {
    rep.threshold_start = R0;
    fit_decay(rep, rep.threshold_start + 2.0 * model.length_unit());
    rep.measured = rep.rate;
    rep.pass = std::isfinite(rep.rate) && rep.rate > 0.0;
    if (rep.pass && std::isfinite(huygens_rate)) rep.pass = rep.rate >= 2.0 * huygens_rate * 0.9;
  }
  return rep;
}

PaleyWienerReport paley_wiener_report(const DensityModel& model, const RadialFunction& f, std::span<const int> n_list,
                                      std::span<const double> tau_list, double lambda_max) {
  PaleyWienerReport rep;
  const double R = std::isfinite(f.support_radius) ? f.support_radius : support_radius(f, 1e-14);
  rep.support_radius = R;
  const double radius = std::max(R, f.grid.step);
  rep.lambda_max = lambda_max > 0.0 ? lambda_max : std::min(0.2 / f.grid.step, 1000.0 / radius);
  const double step = std::min(0.1, 0.25 / radius);
  const auto grid = UniformGrid::spanning(0.0, rep.lambda_max, step);
  rep.lambdas = grid.points();
  for (double tau : tau_list) {
    std::vector<cd> z(grid.size);
    for (std::size_t k = 0; k < grid.size; ++k) z[k] = cd(grid[k], tau);
    const auto values = forward_radial_fourier_at(model, f, z);
    for (int n : n_list) {
      PaleyWienerRow row;
      row.n = n;
      row.tau = tau;
      for (std::size_t k = 0; k < grid.size; ++k) {
        const double v = std::exp(-R * tau) * std::pow(1.0 + std::abs(z[k]), n) * std::abs(values[k]);
        if (v > row.sup) {
          row.sup = v;
          row.argmax = grid[k];
        }
        if (grid[k] <= 0.5 * rep.lambda_max) row.sup_half = std::max(row.sup_half, v);
      }
      row.plateau = row.sup - row.sup_half <= 1e-3 * row.sup;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

PwRadius pw_radius(const DensityModel& model, const SpectralFunction& F, int j_max) {
  if (j_max < 1) throw DomainError("analysis", "j_max must be at least 1");
  PwRadius out;
  out.moments.assign(static_cast<std::size_t>(j_max), 0.0);
  if (F.grid.empty() || F.max_abs() == 0.0) return out;
  const double log_c0 = std::log(transform_constant(model));
  const auto q = trapezoid_weights(F.grid);
  std::vector<double> log_base, log_lambda;
  for (std::size_t k = 0; k < F.grid.size; ++k) {
    const double m = q[k] * F.weight[k] * std::norm(F.values[k]);
    if (m > 0.0 && F.grid[k] > 0.0) {
      log_base.push_back(std::log(m));
      log_lambda.push_back(std::log(F.grid[k]));
    }
  }
  std::vector<double> log_moments;
  for (int j = 1; j <= j_max; ++j) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < log_base.size(); ++k) top = std::max(top, log_base[k] + 2.0 * j * log_lambda[k]);
    double sum = 0.0;
    for (std::size_t k = 0; k < log_base.size(); ++k) sum += std::exp(log_base[k] + 2.0 * j * log_lambda[k] - top);
    const double log_moment = log_c0 + top + std::log(sum);
    log_moments.push_back(log_moment);
    out.moments[static_cast<std::size_t>(j - 1)] = std::exp(log_moment / (2.0 * j));
  }
  out.last_moment = out.moments.back();
  if (j_max < 3) {
    out.value = out.last_moment;
    return out;
  }
  // ratio radii e_j = sqrt(M_j / M_(j-1)) = R (1 - c / j + ...); eliminate the 1/j term
  auto ratio = [&](int j) {
    return std::exp(0.5 * (log_moments[static_cast<std::size_t>(j - 1)] - log_moments[static_cast<std::size_t>(j - 2)]));
  };
  const double j = j_max;
  out.value = j * ratio(j_max) - (j - 1.0) * ratio(j_max - 1);
  return out;
}

double light_cone_leakage(const DensityModel& model, std::span<const WaveState> trajectory, double R0) {
  double worst = 0.0;
  for (const auto& state : trajectory) {
    const auto& grid = state.u.grid;
    const auto ur = radial_derivative(state);
    const double edge = R0 + std::abs(state.t) + 3.0 * grid.step;
    const auto w = trapezoid_weights(grid);
    double inside = 0.0, outside = 0.0;
    for (std::size_t i = 1; i < grid.size; ++i) {
      const double e =
          w[i] * (std::norm(state.ut.values[i]) + std::norm(ur.values[i])) * std::exp(model.log_density(grid[i]));
      (grid[i] > edge ? outside : inside) += e;
    }
    const double total = inside + outside;
    if (total > 0.0) worst = std::max(worst, outside / total);
  }
  return worst;
}

double support_radius(const RadialFunction& f, double tol) { return support_of(f.grid, f.values, tol); }
double support_radius(const EvenLineFunction& u, double tol) { return support_of(u.grid, u.values, tol); }

}  // namespace radialwave
