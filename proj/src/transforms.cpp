#include "radialwave/transforms.hpp"

#include <boost/math/special_functions/zeta.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "radialwave/eigen.hpp"
#include "radialwave/errors.hpp"
#include "radialwave/io.hpp"
#include "radialwave/parallel.hpp"
#include "radialwave/sweep.hpp"

namespace radialwave {

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs_of(std::span<const cd> v) {
  double m = 0.0;
  for (const cd& x : v) m = std::max(m, std::abs(x));
  return m;
}

void check_grid_origin(const UniformGrid& grid, const char* what) {
  if (grid.empty() || grid.start != 0.0 || !(grid.step > 0.0)) {
    throw DomainError("transforms", std::string(what) + " grid must start at 0 with a positive step");
  }
}

// Nodes of f's grid that carry the support (values beyond are zero).
std::size_t support_nodes(const RadialFunction& f) {
  if (f.values.size() != f.grid.size) throw DomainError("transforms", "grid and value sizes differ");
  if (!std::isfinite(f.support_radius)) return f.grid.size;
  if (f.support_radius > f.grid.back() + 1e-12 * f.grid.step) {
    throw DomainError("transforms", "support radius exceeds the grid");
  }
  const auto n = static_cast<std::size_t>(std::floor(f.support_radius / f.grid.step + 1e-9)) + 1;
  return std::min(n, f.grid.size);
}

// Second derivative at 0 of an even function from its first samples.
cd even_second_derivative(std::span<const cd> v, double h) {
  if (v.size() < 4) return 0.0;
  // 6th order: f'' = (-49/18 f0 + 3 f1 - 3/10 f2 + 1/45 f3) * 2 / h^2 with f(-x) = f(x)
  return (-49.0 / 18.0 * v[0] + 3.0 * v[1] - 0.3 * v[2] + v[3] / 45.0) / (h * h);
}

void resolution_guard(const RadialFunction& f, double lambda_max) {
  if (lambda_max * f.grid.step > 0.2 * (1.0 + 1e-12)) {
    throw ResolutionError("transforms", "Lambda_max * dr = " + format_double(lambda_max * f.grid.step) +
                                            " exceeds 0.2; refine the radial grid");
  }
}

// Transform of f at real nodes lambdas[begin, end) into out.
void forward_block(const DensityModel& model, const RadialSweep& sweep, const RadialFunction& f, std::size_t n_support,
                   const std::vector<double>& tw, cd psi0, cd f2, std::span<const double> lambdas, cd* out) {
  const double sc = model.sphere_const();
  const auto& sa = sweep.sqrt_density();
  const double a = model.pole_strength();
  const double d = model.logderiv_series().empty() ? 0.0 : 0.5 * model.logderiv_series()[0];
  const double rho2 = model.rho() * model.rho();
  parallel_chunks(lambdas.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<double> v(n_support), dv(n_support);
    for (std::size_t k = begin; k < end; ++k) {
      sweep.regular(lambdas[k], v.data(), dv.data());
      cd sum = 0.0;
      for (std::size_t i = 0; i < n_support; ++i) sum += tw[i] * f.values[i] * (sa[i] * v[i]);
      const double mu = lambdas[k] * lambdas[k] + rho2;
      const cd psi2 = psi0 * (2.0 * d - mu / (a + 1.0)) + sc * origin_density_coefficient(model) * f2;
      out[k] = sc * sum - origin_correction(model, f.grid.step, psi0, psi2);
    }
  });
}

struct ForwardSetup {
  std::size_t n_support;
  std::vector<double> tw;
  std::vector<double> targets;
  cd psi0;
  cd f2;
};

ForwardSetup forward_setup(const DensityModel& model, const RadialFunction& f) {
  check_grid_origin(f.grid, "radial");
  ForwardSetup s;
  s.n_support = support_nodes(f);
  s.targets.resize(s.n_support);
  for (std::size_t i = 0; i < s.n_support; ++i) s.targets[i] = f.grid[i];
  s.tw.assign(s.n_support, f.grid.step);
  s.tw[0] *= 0.5;
  if (s.n_support == f.grid.size) s.tw.back() *= 0.5;
  s.psi0 = model.sphere_const() * origin_density_coefficient(model) * f.values[0];
  s.f2 = even_second_derivative(std::span<const cd>(f.values).first(std::min<std::size_t>(4, f.values.size())),
                                f.grid.step);
  return s;
}

// Trapezoid sum of weight(lambda) exp(-(lambda/L)^2) with spacing 2 pi / x.
double gaussian_weight_sum(const DensityModel& model, double x, double L) {
  const double step = 2.0 * kPi / x;
  const auto n = static_cast<std::size_t>(std::floor(6.0 * L / step)) + 1;
  std::vector<double> l(n);
  for (std::size_t k = 0; k < n; ++k) l[k] = step * static_cast<double>(k);
  const auto w = plancherel_density(model, l);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += (k == 0 ? 0.5 : 1.0) * w[k] * std::exp(-(l[k] / L) * (l[k] / L));
  return sum * step;
}

// Extra lambda-extent (beyond the exponential type of the data) that keeps trapezoid
// aliasing of the Plancherel density below ~1e-14. The aliasing error at spacing
// 2 pi / x decays like exp(-eps x), where eps is the distance of the nearest
// singularity of the density from the real axis; eps is measured on a Gaussian test
// integrand. Cached per model.
}  // namespace

double aliasing_margin(const DensityModel& model) {
  static std::mutex mutex;
  static std::map<std::string, double> cache;
  {
    std::lock_guard lock(mutex);
    const auto it = cache.find(model.key());
    if (it != cache.end()) return it->second;
  }
  const double s = model.scale();
  double margin = 2.0 / s;
  if (!model.polynomial_plancherel()) {
    const double L = 4.0 * s;
    const double ref = gaussian_weight_sum(model, 80.0 / s, L);
    std::vector<double> xs, errs;
    double floor = 1.0;
    for (double x = 4.0; x <= 40.0; x += 2.0) {
      const double e = std::abs(gaussian_weight_sum(model, x / s, L) / ref - 1.0);
      xs.push_back(x / s);
      errs.push_back(e);
      floor = std::min(floor, e);
    }
    floor = std::max(floor, 1e-16);
    std::vector<double> fx, fy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (errs[i] > 1e3 * floor) {
        fx.push_back(xs[i]);
        fy.push_back(std::log(errs[i]));
      }
    }
    double eps = std::numeric_limits<double>::infinity();
    if (fx.size() >= 2) eps = -fit_line(fx, fy).slope;
    if (!(eps > 0.0)) eps = 0.25 * s;
    margin = std::clamp(32.0 / eps, 2.0 / s, 120.0 / s);
  }
  std::lock_guard lock(mutex);
  cache[model.key()] = margin;
  return margin;
}

namespace {

// sum_k coef[k] * cos(lambda_k t_j) for all j, coef already includes quadrature weights.
std::vector<cd> cosine_sum(const UniformGrid& lambdas, std::span<const cd> coef, const UniformGrid& t) {
  std::vector<std::vector<cd>> acc(kWorkChunks);
  parallel_chunks(lambdas.size, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto& out = acc[chunk];
    out.assign(t.size, 0.0);
    for (std::size_t k = begin; k < end; ++k) {
      if (coef[k] == 0.0) continue;
      const double l = lambdas[k];
      const cd rot = std::polar(1.0, l * t.step);
      cd z;
      for (std::size_t j = 0; j < t.size; ++j) {
        if (j % 128 == 0) z = std::polar(1.0, l * t[j]);
        out[j] += coef[k] * z.real();
        z *= rot;
      }
    }
  });
  std::vector<cd> total(t.size, 0.0);
  for (const auto& a : acc) {
    if (a.empty()) continue;
    for (std::size_t j = 0; j < t.size; ++j) total[j] += a[j];
  }
  return total;
}

std::vector<double> lambda_trapezoid(const UniformGrid& lambdas) { return trapezoid_weights(lambdas); }

}  // namespace

RadialFunction RadialFunction::zeros(const UniformGrid& grid, double support) {
  return {grid, std::vector<cd>(grid.size, 0.0), support};
}

double RadialFunction::max_abs() const { return max_abs_of(values); }
double SpectralFunction::max_abs() const { return max_abs_of(values); }
double EvenLineFunction::max_abs() const { return max_abs_of(values); }

RadialFunction make_bump(const UniformGrid& grid, double radius, double amplitude, double sharpness) {
  check_grid_origin(grid, "radial");
  if (!(radius > 0.0) || !(sharpness > 0.0)) throw DomainError("transforms", "bump radius and sharpness must be positive");
  RadialFunction f{grid, std::vector<cd>(grid.size, 0.0), radius};
  for (std::size_t i = 0; i < grid.size; ++i) {
    const double x = grid[i] / radius;
    if (x < 1.0) f.values[i] = amplitude * std::exp(-sharpness / (1.0 - x * x));
  }
  return f;
}

double plateau(double x, double flat, double width) { return 0.5 * std::erfc((x - flat - 6.0 * width) / width); }

double origin_density_coefficient(const DensityModel& model) {
  if (model.kind() == DensityKind::jacobi) {
    return std::exp2(model.pole_strength() + 2.0 * model.beta() + 1.0);
  }
  const double r = 1e-3 * model.series_radius();
  return std::exp(model.log_density(r) - model.pole_strength() * std::log(r));
}

cd origin_correction(const DensityModel& model, double step, cd psi0, cd psi2) {
  const double a = model.pole_strength();
  const double nearest = std::round(a);
  if (std::abs(a - nearest) < 1e-12 && std::fmod(nearest, 2.0) == 0.0) return 0.0;
  const double z0 = boost::math::zeta(-a);
  const double z2 = boost::math::zeta(-a - 2.0);
  return z0 * std::pow(step, a + 1.0) * psi0 + 0.5 * z2 * std::pow(step, a + 3.0) * psi2;
}

double spectral_step(const DensityModel& model, double type) {
  if (!(type >= 0.0)) throw DomainError("transforms", "exponential type must be non-negative");
  return 2.0 * kPi / (type + aliasing_margin(model));
}

SpectralFunction forward_radial_fourier(const DensityModel& model, const RadialFunction& f, const UniformGrid& lambdas) {
  if (!lambdas.empty() && (lambdas.start != 0.0 || !(lambdas.step > 0.0))) {
    throw DomainError("transforms", "lambda grid must start at 0 with a positive step");
  }
  SpectralFunction F{lambdas, std::vector<cd>(lambdas.size, 0.0), {}};
  if (lambdas.empty()) return F;
  resolution_guard(f, lambdas.back());
  const auto setup = forward_setup(model, f);
  const auto nodes = lambdas.points();
  F.weight = plancherel_density(model, nodes);
  RadialSweep sweep(model, setup.targets, 0.0, lambdas.back());
  forward_block(model, sweep, f, setup.n_support, setup.tw, setup.psi0, setup.f2, nodes, F.values.data());
  return F;
}

SpectralFunction forward_radial_fourier_auto(const DensityModel& model, const RadialFunction& f,
                                             const SpectralGridOptions& options) {
  const auto setup = forward_setup(model, f);
  const double support = f.grid[setup.n_support - 1];
  const double step = options.step > 0.0 ? options.step : spectral_step(model, support + options.extent);
  double cap = 0.2 / f.grid.step;
  if (options.lambda_cap > 0.0) cap = std::min(cap, options.lambda_cap);
  const auto n_cap = static_cast<std::size_t>(std::floor(cap / step)) + 1;

  RadialSweep sweep(model, setup.targets, 0.0, cap);
  std::vector<cd> values;
  std::vector<double> weight;
  // |F| * weight is tracked on groups of 8 nodes; once it stops decaying at a level far
  // below the peak (rounding floor amplified by the weight), the grid ends at the
  // quietest group.
  const std::size_t block = 64;
  // a group spans a few oscillations of F (period ~ pi / support in lambda)
  const auto group = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(4.0 * kPi / (support * step))));
  double peak = 0.0;
  std::vector<double> envelope;
  std::size_t best_group = 0;
  for (std::size_t start = 0; start < n_cap; start += block) {
    const std::size_t n = std::min(block, n_cap - start);
    std::vector<double> nodes(n);
    for (std::size_t k = 0; k < n; ++k) nodes[k] = step * static_cast<double>(start + k);
    const auto w = plancherel_density(model, nodes);
    std::vector<cd> out(n);
    forward_block(model, sweep, f, setup.n_support, setup.tw, setup.psi0, setup.f2, nodes, out.data());
    values.insert(values.end(), out.begin(), out.end());
    weight.insert(weight.end(), w.begin(), w.end());
    for (std::size_t k = start; k < values.size(); ++k) peak = std::max(peak, std::abs(values[k]) * weight[k]);
    if (peak == 0.0) break;  // zero data
    bool stop = false;
    for (std::size_t g0 = envelope.size() * group; g0 + group <= values.size(); g0 += group) {
      double m = 0.0;
      for (std::size_t k = g0; k < g0 + group; ++k) m = std::max(m, std::abs(values[k]) * weight[k]);
      envelope.push_back(m);
      const std::size_t g = envelope.size() - 1;
      if (m < envelope[best_group]) best_group = g;
      const bool floor_reached =
          envelope[best_group] < 1e-9 * peak && (m > 1e3 * envelope[best_group] || g > best_group + 4 + g / 4);
      if (m <= options.tolerance * peak || floor_reached) {
        stop = true;
        break;
      }
    }
    if (stop) break;
  }
  if (!envelope.empty() && envelope.back() > envelope[best_group]) {
    const std::size_t keep = (best_group + 1) * group;
    values.resize(keep);
    weight.resize(keep);
  }
  return SpectralFunction{UniformGrid{0.0, step, values.size()}, std::move(values), std::move(weight)};
}

std::vector<cd> forward_radial_fourier_at(const DensityModel& model, const RadialFunction& f,
                                          std::span<const cd> lambdas) {
  const auto setup = forward_setup(model, f);
  double lmax = 0.0;
  for (const cd& l : lambdas) lmax = std::max(lmax, std::abs(l));
  resolution_guard(f, lmax);
  RadialSweep sweep(model, setup.targets, 0.0, lmax);
  const double sc = model.sphere_const();
  const double a = model.pole_strength();
  const double d = model.logderiv_series().empty() ? 0.0 : 0.5 * model.logderiv_series()[0];
  const double rho2 = model.rho() * model.rho();
  const auto& sa = sweep.sqrt_density();
  std::vector<cd> out(lambdas.size());
  parallel_chunks(lambdas.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<cd> v(setup.n_support), dv(setup.n_support);
    for (std::size_t k = begin; k < end; ++k) {
      sweep.regular(lambdas[k], v.data(), dv.data());
      cd sum = 0.0;
      for (std::size_t i = 0; i < setup.n_support; ++i) sum += setup.tw[i] * f.values[i] * (sa[i] * v[i]);
      const cd mu = lambdas[k] * lambdas[k] + rho2;
      const cd psi2 = setup.psi0 * (2.0 * d - mu / (a + 1.0)) + sc * origin_density_coefficient(model) * setup.f2;
      out[k] = sc * sum - origin_correction(model, f.grid.step, setup.psi0, psi2);
    }
  });
  return out;
}

void check_spectral_truncation(std::span<const cd> values, std::span<const double> weight, const char* what) {
  if (values.empty()) return;
  const std::size_t tail = std::max<std::size_t>(3, values.size() / 100);
  const std::size_t first_tail = values.size() - std::min(tail, values.size());
  auto ratio = [&](auto mag) {
    double peak = 0.0, end_max = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
      peak = std::max(peak, mag(k));
      if (k >= first_tail) end_max = std::max(end_max, mag(k));
    }
    return peak == 0.0 ? 0.0 : end_max / peak;
  };
  const double plain = ratio([&](std::size_t k) { return std::abs(values[k]); });
  const double weighted =
      weight.empty() ? 0.0 : ratio([&](std::size_t k) { return std::abs(values[k]) * weight[k]; });
  if (plain > 1e-10 || weighted > 1e-8) {
    throw TruncationError("transforms", std::string(what) + " has not decayed at Lambda_max (tail/peak = " +
                                            format_double(plain) + ", weighted " + format_double(weighted) + ")");
  }
}

std::vector<RadialFunction> synthesize(const DensityModel& model, const UniformGrid& lambdas,
                                       std::span<const double> weight, const std::vector<std::vector<cd>>& coefs,
                                       const UniformGrid& r_grid, double scale, std::vector<RadialFunction>* derivs) {
  if (r_grid.empty()) throw DomainError("transforms", "empty output grid");
  const std::size_t nr = r_grid.size;
  const std::size_t nj = coefs.size();
  for (const auto& c : coefs) {
    if (c.size() != lambdas.size) throw DomainError("transforms", "coefficient size differs from the lambda grid");
  }
  if (weight.size() != lambdas.size) throw DomainError("transforms", "weight size differs from the lambda grid");
  const auto q = lambda_trapezoid(lambdas);
  std::vector<double> targets = r_grid.points();
  if (targets.front() < 0.0) throw DomainError("transforms", "output radii must be non-negative");
  RadialSweep sweep(model, targets, 0.0, lambdas.empty() ? 0.0 : lambdas.back());
  const bool want_d = derivs != nullptr;

  // chunk-local accumulators, reduced in chunk order for reproducibility
  std::vector<std::vector<cd>> acc(kWorkChunks), dacc(kWorkChunks);
  parallel_chunks(lambdas.size, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto& a = acc[chunk];
    auto& da = dacc[chunk];
    a.assign(nj * nr, 0.0);
    if (want_d) da.assign(nj * nr, 0.0);
    std::vector<double> phi(nr), dphi(nr);
    std::vector<cd> c(nj);
    for (std::size_t k = begin; k < end; ++k) {
      bool any = false;
      for (std::size_t j = 0; j < nj; ++j) {
        c[j] = scale * q[k] * weight[k] * coefs[j][k];
        any = any || c[j] != 0.0;
      }
      if (!any) continue;
      sweep.regular_phi(lambdas[k], phi.data(), dphi.data());
      for (std::size_t j = 0; j < nj; ++j) {
        const cd cj = c[j];
        cd* row = a.data() + j * nr;
        for (std::size_t i = 0; i < nr; ++i) row[i] += cj * phi[i];
        if (want_d) {
          cd* drow = da.data() + j * nr;
          for (std::size_t i = 0; i < nr; ++i) drow[i] += cj * dphi[i];
        }
      }
    }
  });
  std::vector<RadialFunction> out(nj, RadialFunction::zeros(r_grid, std::numeric_limits<double>::infinity()));
  if (want_d) derivs->assign(nj, RadialFunction::zeros(r_grid, std::numeric_limits<double>::infinity()));
  for (std::size_t chunk = 0; chunk < kWorkChunks; ++chunk) {
    if (acc[chunk].empty()) continue;
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t i = 0; i < nr; ++i) {
        out[j].values[i] += acc[chunk][j * nr + i];
        if (want_d) (*derivs)[j].values[i] += dacc[chunk][j * nr + i];
      }
    }
  }
  return out;
}

RadialFunction inverse_radial_fourier(const DensityModel& model, const SpectralFunction& F, const UniformGrid& r_grid) {
  check_spectral_truncation(F.values, F.weight, "spectrum");
  if (F.grid.empty()) return RadialFunction::zeros(r_grid);
  return synthesize(model, F.grid, F.weight, {F.values}, r_grid, transform_constant(model))[0];
}

EvenLineFunction abel(const DensityModel& model, const RadialFunction& f) { return abel(model, f, f.grid); }

EvenLineFunction abel(const DensityModel& model, const RadialFunction& f, const UniformGrid& s_grid) {
  check_grid_origin(s_grid, "line");
  SpectralGridOptions opt;
  opt.extent = s_grid.back();
  const auto F = forward_radial_fourier_auto(model, f, opt);
  check_spectral_truncation(F.values, {}, "transform");
  auto coef = F.values;
  const auto q = lambda_trapezoid(F.grid);
  for (std::size_t k = 0; k < coef.size(); ++k) coef[k] *= q[k] / kPi;
  return {s_grid, cosine_sum(F.grid, coef, s_grid)};
}

SpectralFunction line_fourier(const EvenLineFunction& u, const UniformGrid& lambdas) {
  check_grid_origin(u.grid, "line");
  if (u.values.size() != u.grid.size) throw DomainError("transforms", "grid and value sizes differ");
  std::vector<cd> l(lambdas.size);
  for (std::size_t k = 0; k < lambdas.size; ++k) l[k] = lambdas[k];
  return {lambdas, line_fourier_at(u, l), {}};
}

std::vector<cd> line_fourier_at(const EvenLineFunction& u, std::span<const cd> lambdas) {
  const auto tw = trapezoid_weights(u.grid);
  std::vector<cd> out(lambdas.size());
  parallel_chunks(lambdas.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      cd sum = 0.0;
      if (lambdas[k].imag() == 0.0) {
        const double l = lambdas[k].real();
        const cd rot = std::polar(1.0, l * u.grid.step);
        cd z;
        for (std::size_t i = 0; i < u.grid.size; ++i) {
          if (i % 128 == 0) z = std::polar(1.0, l * u.grid[i]);
          sum += tw[i] * u.values[i] * z.real();
          z *= rot;
        }
      } else {
        for (std::size_t i = 0; i < u.grid.size; ++i) sum += tw[i] * u.values[i] * std::cos(lambdas[k] * u.grid[i]);
      }
      out[k] = 2.0 * sum;
    }
  });
  return out;
}

EvenLineFunction inverse_line_fourier(const SpectralFunction& F, const UniformGrid& t_grid) {
  check_grid_origin(t_grid, "line");
  if (F.grid.empty()) return {t_grid, std::vector<cd>(t_grid.size, 0.0)};
  auto coef = F.values;
  const auto q = lambda_trapezoid(F.grid);
  for (std::size_t k = 0; k < coef.size(); ++k) coef[k] *= q[k] / kPi;
  return {t_grid, cosine_sum(F.grid, coef, t_grid)};
}

RadialFunction dual_abel(const DensityModel& model, const EvenLineFunction& u, const UniformGrid& r_grid,
                         double tolerance) {
  check_grid_origin(u.grid, "line");
  const double S = u.grid.back();
  const double step = 2.0 * kPi / (S + r_grid.back() + 2.0 / model.scale());
  const double cap = kPi / u.grid.step;
  const auto n_cap = static_cast<std::size_t>(std::floor(cap / step)) + 1;
  // cosine transform in blocks until it has decayed
  std::vector<cd> uc;
  double peak = 0.0;
  const std::size_t block = 256;
  for (std::size_t start = 0; start < n_cap; start += block) {
    const std::size_t n = std::min(block, n_cap - start);
    std::vector<cd> l(n);
    for (std::size_t k = 0; k < n; ++k) l[k] = step * static_cast<double>(start + k);
    const auto part = line_fourier_at(u, l);
    double block_max = 0.0;
    for (const cd& x : part) block_max = std::max(block_max, std::abs(x));
    uc.insert(uc.end(), part.begin(), part.end());
    peak = std::max(peak, block_max);
    if (peak == 0.0 || block_max <= tolerance * peak) break;
  }
  const UniformGrid lambdas{0.0, step, uc.size()};
  check_spectral_truncation(uc, {}, "cosine transform");
  const std::vector<double> ones(uc.size(), 1.0);
  return synthesize(model, lambdas, ones, {uc}, r_grid, 1.0 / kPi)[0];
}

namespace {

EvenLineFunction inverse_dual_abel_of(const DensityModel& model, const SpectralFunction& G, const UniformGrid& t_grid) {
  check_spectral_truncation(G.values, G.weight, "spectrum");
  const double c0 = transform_constant(model);
  const auto q = lambda_trapezoid(G.grid);
  std::vector<cd> coef(G.values.size());
  for (std::size_t k = 0; k < coef.size(); ++k) coef[k] = c0 * q[k] * G.weight[k] * G.values[k];
  return {t_grid, cosine_sum(G.grid, coef, t_grid)};
}

}  // namespace

EvenLineFunction inverse_dual_abel(const DensityModel& model, const RadialFunction& g) {
  // a^-1(g) is supported in [0, R] only for polynomial Plancherel densities; otherwise it
  // carries an exponential tail, which the default grid covers.
  const double R = g.grid[support_nodes(g) - 1];
  const double end =
      model.polynomial_plancherel() ? g.grid.back() : std::max(g.grid.back(), R + aliasing_margin(model));
  SpectralGridOptions opt;
  opt.extent = end;
  const auto G = forward_radial_fourier_auto(model, g, opt);
  const double step = G.grid.empty() ? g.grid.step : std::max(g.grid.step, 0.5 / G.grid.back());
  return inverse_dual_abel_of(model, G, UniformGrid::spanning(0.0, end, step));
}

EvenLineFunction inverse_dual_abel(const DensityModel& model, const RadialFunction& g, const UniformGrid& t_grid) {
  check_grid_origin(t_grid, "line");
  SpectralGridOptions opt;
  opt.extent = t_grid.back();
  return inverse_dual_abel_of(model, forward_radial_fourier_auto(model, g, opt), t_grid);
}

double radial_norm2(const DensityModel& model, const RadialFunction& f) {
  const auto setup = forward_setup(model, f);
  const auto n = setup.n_support;
  std::vector<cd> sq(std::min<std::size_t>(4, n));
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = std::norm(f.values[i]);
  double sum = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    sum += setup.tw[i] * std::norm(f.values[i]) * std::exp(model.log_density(f.grid[i]));
  }
  const double sc = model.sphere_const();
  const double kappa = origin_density_coefficient(model);
  const double d = model.logderiv_series().empty() ? 0.0 : 0.5 * model.logderiv_series()[0];
  const cd psi0 = sc * kappa * sq[0];
  const cd psi2 = psi0 * 2.0 * d + sc * kappa * even_second_derivative(sq, f.grid.step);
  return sc * sum - origin_correction(model, f.grid.step, psi0, psi2).real();
}

double spectral_norm2(const DensityModel& model, const SpectralFunction& F) {
  if (F.grid.empty()) return 0.0;
  const auto q = lambda_trapezoid(F.grid);
  double sum = 0.0;
  for (std::size_t k = 0; k < F.values.size(); ++k) sum += q[k] * F.weight[k] * std::norm(F.values[k]);
  return transform_constant(model) * sum;
}

const Calibration& calibrate(const DensityModel& model) {
  static std::mutex mutex;
  static std::map<std::string, Calibration> cache;
  {
    std::lock_guard lock(mutex);
    const auto it = cache.find(model.key());
    if (it != cache.end()) return it->second;
  }
  // Smoothly truncated Gaussians (and one skewed variant); the round trip with C0 = 1
  // is fitted to the input in least squares on the bulk of the support.
  const double s = model.scale();
  struct Shape {
    double sigma;
    double quad;
  };
  const Shape shapes[] = {{0.3 / s, 0.0}, {0.4 / s, 0.0}, {0.35 / s, 2.0 * s * s}};
  Calibration cal;
  for (const auto& sh : shapes) {
    const double end = 11.0 * sh.sigma;
    const auto grid = UniformGrid::spanning(0.0, end, 0.002 / s);
    RadialFunction f = RadialFunction::zeros(grid, end);
    for (std::size_t i = 0; i < grid.size; ++i) {
      const double r = grid[i];
      f.values[i] = (1.0 + sh.quad * r * r) * std::exp(-r * r / (2.0 * sh.sigma * sh.sigma)) *
                    plateau(r, 5.0 * sh.sigma, 0.5 * sh.sigma);
    }
    SpectralGridOptions opt;
    opt.extent = 3.0 * sh.sigma;
    const auto F = forward_radial_fourier_auto(model, f, opt);
    check_spectral_truncation(F.values, F.weight, "calibration spectrum");
    const auto out_grid = UniformGrid::spanning(0.0, 3.0 * sh.sigma, 0.01 / s);
    const auto u = synthesize(model, F.grid, F.weight, {F.values}, out_grid, 1.0)[0];
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < out_grid.size; ++i) {
      const double r = out_grid[i];
      const cd fi = (1.0 + sh.quad * r * r) * std::exp(-r * r / (2.0 * sh.sigma * sh.sigma));
      num += (std::conj(u.values[i]) * fi).real();
      den += std::norm(u.values[i]);
    }
    if (!(den > 0.0)) throw ConvergenceError("transforms", "calibration synthesis vanished");
    cal.estimates.push_back(num / den);
  }
  cal.c0 = cal.estimates.front();
  for (double e : cal.estimates) cal.spread = std::max(cal.spread, std::abs(e / cal.c0 - 1.0));
  if (model.kind() == DensityKind::jacobi) {
    cal.jacobi_reference = std::pow(s, model.pole_strength()) / (2.0 * kPi * model.sphere_const());
  }
  if (cal.spread > 1e-6) {
    throw ConvergenceError("transforms", "C0 calibration unstable (spread " + format_double(cal.spread) + ")");
  }
  std::lock_guard lock(mutex);
  return cache.emplace(model.key(), std::move(cal)).first->second;
}

double transform_constant(const DensityModel& model) { return calibrate(model).c0; }

void write_csv(const std::filesystem::path& path, const RadialFunction& f) {
  write_complex_csv(path, "r,re,im", f.grid.points(), f.values);
}

void write_csv(const std::filesystem::path& path, const SpectralFunction& F) {
  write_complex_csv(path, "lambda,re,im", F.grid.points(), F.values);
}

void write_csv(const std::filesystem::path& path, const EvenLineFunction& u) {
  write_complex_csv(path, "s,re,im", u.grid.points(), u.values);
}

}  // namespace radialwave
