#include "radialwave/eigen.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <unordered_map>

#include "radialwave/errors.hpp"
#include "radialwave/parallel.hpp"
#include "radialwave/sweep.hpp"

namespace radialwave {

namespace {

constexpr cd kI{0.0, 1.0};

bool is_real(cd z) { return z.imag() == 0.0; }

void check_strip(const DensityModel& model, cd lambda) {
  if (std::abs(lambda.imag()) > model.rho() + 10.0 * model.scale()) {
    throw DomainError("eigen", "|Im lambda| exceeds rho + 10 (unsupported strip)");
  }
}

// c(lambda), c(-lambda) from Liouville data at one radius of a sweep whose top is
// the Jost seed radius.
CFunctionValue c_from_sweep(const RadialSweep& sweep, cd lambda, std::size_t index) {
  CFunctionValue out;
  out.lambda = lambda;
  cd vphi, dvphi;
  if (is_real(lambda)) {
    std::vector<double> v(sweep.size()), dv(sweep.size());
    sweep.regular(lambda.real(), v.data(), dv.data());
    vphi = v[index];
    dvphi = dv[index];
  } else {
    std::vector<cd> v(sweep.size()), dv(sweep.size());
    sweep.regular(lambda, v.data(), dv.data());
    vphi = v[index];
    dvphi = dv[index];
  }
  std::vector<cd> jp(sweep.size()), djp(sweep.size()), jm(sweep.size()), djm(sweep.size());
  sweep.jost(lambda, jp.data(), djp.data());
  cd Lp = sweep.jost_log_factor(lambda);
  cd Lm;
  if (is_real(lambda)) {
    for (std::size_t i = 0; i < jp.size(); ++i) {
      jm[i] = std::conj(jp[i]);
      djm[i] = std::conj(djp[i]);
    }
    Lm = std::conj(Lp);
  } else {
    sweep.jost(-lambda, jm.data(), djm.data());
    Lm = sweep.jost_log_factor(-lambda);
  }
  auto wr = [](cd a, cd da, cd b, cd db) { return a * db - da * b; };
  const cd w_pm = wr(jp[index], djp[index], jm[index], djm[index]);
  out.c = wr(vphi, dvphi, jm[index], djm[index]) / w_pm * std::exp(-Lp);
  out.c_minus = wr(vphi, dvphi, jp[index], djp[index]) / (-w_pm) * std::exp(-Lm);
  out.eta = 1.0 / (out.c * out.c_minus);
  out.plancherel_weight = is_real(lambda) ? 1.0 / std::norm(out.c) : std::abs(out.eta);
  if (!std::isfinite(out.c.real()) || !std::isfinite(out.c.imag())) {
    throw ConvergenceError("eigen", "non-finite c-function value");
  }
  return out;
}

struct WeightCache {
  std::shared_mutex mutex;
  std::unordered_map<std::string, std::unordered_map<std::uint64_t, double>> data;
};

WeightCache& weight_cache() {
  static WeightCache cache;
  return cache;
}

}  // namespace

EigenFunction eval_phi(const DensityModel& model, cd lambda, const UniformGrid& grid) {
  if (grid.empty() || grid.start != 0.0 || !(grid.step > 0.0)) {
    throw DomainError("eigen", "eigenfunction grid must be uniform and start at 0");
  }
  if (grid.back() > 100.0 / model.scale() * (1.0 + 1e-12)) {
    throw DomainError("eigen", "grid extends beyond 100/scale");
  }
  check_strip(model, lambda);
  EigenFunction out;
  out.lambda = lambda;
  out.r = grid.points();
  RadialSweep sweep(model, out.r, 0.0, std::abs(lambda));
  out.values.resize(out.r.size());
  out.derivs.resize(out.r.size());
  if (is_real(lambda)) {
    std::vector<double> phi(out.r.size()), dphi(out.r.size());
    sweep.regular_phi(lambda.real(), phi.data(), dphi.data());
    for (std::size_t i = 0; i < phi.size(); ++i) {
      out.values[i] = phi[i];
      out.derivs[i] = dphi[i];
    }
  } else {
    sweep.regular_phi(lambda, out.values.data(), out.derivs.data());
  }
  for (const cd& z : out.values) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw ConvergenceError("eigen", "non-finite eigenfunction samples");
    }
  }
  return out;
}

EigenFunction eval_phi_asymptotic(const DensityModel& model, cd lambda, const UniformGrid& grid, double r_start) {
  if (lambda == cd(0.0)) throw DomainError("eigen", "Jost solutions need lambda != 0");
  if (!(r_start > 0.0) || grid.empty() || !(grid.step > 0.0)) throw DomainError("eigen", "invalid Jost request");
  check_strip(model, lambda);
  EigenFunction out;
  out.lambda = lambda;
  if (std::exp(-2.0 * model.scale() * r_start) > 1e-10) {
    out.warnings.push_back("r_start may be outside the asymptotic regime (exp(-2 scale r_start) > 1e-10)");
  }
  const double r_min = grid.step;
  for (std::size_t i = 0; i < grid.size; ++i) {
    const double r = grid[i];
    if (r >= r_min * (1.0 - 1e-12) && r <= r_start * (1.0 + 1e-12)) out.r.push_back(std::min(r, r_start));
  }
  RadialSweep sweep(model, out.r, r_start, std::abs(lambda));
  std::vector<cd> v(out.r.size()), dv(out.r.size());
  sweep.jost(lambda, v.data(), dv.data());
  const cd L = sweep.jost_log_factor(lambda);
  out.values.resize(out.r.size());
  out.derivs.resize(out.r.size());
  for (std::size_t i = 0; i < out.r.size(); ++i) {
    const cd f = std::exp(L - sweep.half_log_density()[i]);
    out.values[i] = f * v[i];
    out.derivs[i] = f * (dv[i] - sweep.half_logderiv()[i] * v[i]);
  }
  return out;
}

CFunctionValue compute_c(const DensityModel& model, cd lambda, double r_match) {
  if (std::abs(lambda) < 1e-8 * model.scale()) {
    throw SingularError("eigen", "c-function is singular at lambda = 0; use the extrapolated Plancherel weight");
  }
  if (!(r_match > 0.0)) throw DomainError("eigen", "matching radius must be positive");
  check_strip(model, lambda);
  const double r_start = std::max(r_match, model.asymptotic_radius());
  RadialSweep sweep(model, {r_match}, r_start, std::abs(lambda));
  return c_from_sweep(sweep, lambda, 0);
}

double default_match_radius(const DensityModel& model) {
  if (model.kind() == DensityKind::table) return model.max_radius();
  return std::max(model.free_radius(), 20.0 / model.scale());
}

void clear_plancherel_cache() {
  auto& cache = weight_cache();
  std::unique_lock lock(cache.mutex);
  cache.data.clear();
}

std::vector<double> plancherel_density(const DensityModel& model, std::span<const double> lambdas) {
  std::vector<double> out(lambdas.size(), 0.0);
  std::vector<double> wanted;  // distinct |lambda| > 0 plus extrapolation nodes
  bool need_zero = false;
  for (double l : lambdas) {
    if (!std::isfinite(l)) throw DomainError("eigen", "non-finite lambda");
    if (l == 0.0) need_zero = true;
    else wanted.push_back(std::abs(l));
  }
  // lambda = 0: fit a + b l^2 + c l^4 through three small nodes
  const double delta = 0.05 * model.scale();
  if (need_zero) {
    for (int k = 1; k <= 3; ++k) wanted.push_back(k * delta);
  }
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

  auto& cache = weight_cache();
  const std::string key = model.key();
  std::vector<double> missing;
  std::unordered_map<std::uint64_t, double> found;
  {
    std::shared_lock lock(cache.mutex);
    const auto it = cache.data.find(key);
    for (double l : wanted) {
      const auto bits = std::bit_cast<std::uint64_t>(l);
      if (it != cache.data.end()) {
        const auto hit = it->second.find(bits);
        if (hit != it->second.end()) {
          found[bits] = hit->second;
          continue;
        }
      }
      missing.push_back(l);
    }
  }
  if (!missing.empty()) {
    const double r_match = default_match_radius(model);
    const double r_start = std::max(r_match, model.asymptotic_radius());
    RadialSweep sweep(model, {r_match}, r_start, missing.back());
    std::vector<double> w(missing.size());
    parallel_for(missing.size(), [&](std::size_t i) { w[i] = c_from_sweep(sweep, missing[i], 0).plancherel_weight; });
    std::unique_lock lock(cache.mutex);
    auto& slot = cache.data[key];
    for (std::size_t i = 0; i < missing.size(); ++i) {
      const auto bits = std::bit_cast<std::uint64_t>(missing[i]);
      slot[bits] = w[i];
      found[bits] = w[i];
    }
  }
  double w0 = 0.0;
  if (need_zero) {
    const double y1 = found.at(std::bit_cast<std::uint64_t>(1 * delta));
    const double y2 = found.at(std::bit_cast<std::uint64_t>(2 * delta));
    const double y3 = found.at(std::bit_cast<std::uint64_t>(3 * delta));
    // Lagrange extrapolation in x = l^2 through x = 1, 4, 9 (units delta^2)
    w0 = y1 * (4.0 * 9.0) / ((1.0 - 4.0) * (1.0 - 9.0)) + y2 * (1.0 * 9.0) / ((4.0 - 1.0) * (4.0 - 9.0)) +
         y3 * (1.0 * 4.0) / ((9.0 - 1.0) * (9.0 - 4.0));
    w0 = std::max(w0, 0.0);
  }
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    out[i] = lambdas[i] == 0.0 ? w0 : found.at(std::bit_cast<std::uint64_t>(std::abs(lambdas[i])));
  }
  return out;
}

double plancherel_weight(const DensityModel& model, double lambda) {
  const double l[1] = {lambda};
  return plancherel_density(model, l)[0];
}

std::vector<double> DirichletBasis::eigenvalues() const {
  std::vector<double> mu;
  mu.reserve(lambdas.size());
  for (double l : lambdas) mu.push_back(l * l + rho * rho);
  return mu;
}

DirichletBasis dirichlet_spectrum(const DensityModel& model, double radius, int count, double sample_step) {
  if (!(radius > 0.0) || count < 1) throw DomainError("eigen", "need R_dom > 0 and K >= 1");
  if (radius > model.max_radius()) throw InterpolationError("eigen", "ball radius beyond the density table");
  const double pi = std::numbers::pi;
  const double hint = (count + 1) * pi / radius + 2.0;
  RadialSweep end_sweep(model, {radius}, 0.0, hint);
  auto f = [&](double lambda) {
    double v = 0.0, dv = 0.0;
    end_sweep.regular(lambda, &v, &dv);
    return v;
  };

  DirichletBasis basis;
  basis.radius = radius;
  basis.rho = model.rho();
  double prev = 0.0;
  double f_prev_root = f(0.0);
  for (int k = 1; k <= count; ++k) {
    const double window_hi = (k + 1) * pi / radius + 2.0;
    double step = std::min(pi / (8.0 * radius), 0.25 * model.scale());
    bool found = false;
    double lo = 0.0, hi = 0.0;
    for (int halving = 0; halving <= 6 && !found; ++halving, step *= 0.5) {
      double a = prev;
      double fa = (k == 1) ? f_prev_root : f(a + 0.25 * step);
      if (k > 1) a += 0.25 * step;
      while (a < window_hi) {
        const double b = a + step;
        const double fb = f(b);
        if (fa == 0.0 || (fa < 0.0) != (fb < 0.0)) {
          lo = a;
          hi = b;
          found = true;
          break;
        }
        a = b;
        fa = fb;
      }
    }
    if (!found) {
      throw RootError("eigen", "no sign change bracket for Dirichlet eigenvalue " + std::to_string(k));
    }
    std::uintmax_t iters = 200;
    const auto root = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52),
                                                        iters);
    prev = 0.5 * (root.first + root.second);
    basis.lambdas.push_back(prev);
  }

  // Sturm check: phi_k has k-1 interior zeros
  {
    const std::size_t n = static_cast<std::size_t>(64 * (count + 4));
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = radius * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    RadialSweep sweep(model, r, radius, hint);
    std::vector<double> v(n), dv(n);
    for (int k = 1; k <= count; ++k) {
      sweep.regular(basis.lambdas[static_cast<std::size_t>(k - 1)], v.data(), dv.data());
      double vmax = 0.0;
      for (double x : v) vmax = std::max(vmax, std::abs(x));
      int zeros = 0;
      int sign = 0;
      for (std::size_t i = 0; i + 2 < n; ++i) {
        if (std::abs(v[i]) < 1e-9 * vmax) continue;
        const int s = v[i] > 0 ? 1 : -1;
        if (sign != 0 && s != sign) ++zeros;
        sign = s;
      }
      if (zeros != k - 1) {
        throw RootError("eigen", "Sturm count mismatch for Dirichlet eigenvalue " + std::to_string(k));
      }
    }
  }

  // norms int phi^2 A dr = int v^2 dr (Liouville form)
  {
    const auto rule = gauss_legendre_panels(0.0, radius, static_cast<std::size_t>(std::max(8, 2 * count)));
    RadialSweep sweep(model, rule.nodes, radius, hint);
    std::vector<double> v(rule.nodes.size()), dv(rule.nodes.size());
    for (double lambda : basis.lambdas) {
      sweep.regular(lambda, v.data(), dv.data());
      double acc = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) acc += rule.weights[i] * v[i] * v[i];
      basis.norms.push_back(acc);
    }
  }

  // stored samples
  {
    const double h = sample_step > 0.0 ? sample_step : radius / 1000.0;
    const UniformGrid grid = UniformGrid::spanning(0.0, radius, h);
    const auto pts = grid.points();
    RadialSweep sweep(model, pts, 0.0, hint);
    std::vector<double> phi(pts.size()), dphi(pts.size());
    for (double lambda : basis.lambdas) {
      sweep.regular_phi(lambda, phi.data(), dphi.data());
      EigenFunction ef;
      ef.lambda = lambda;
      ef.r = pts;
      ef.values.assign(phi.begin(), phi.end());
      ef.derivs.assign(dphi.begin(), dphi.end());
      basis.basis.push_back(std::move(ef));
    }
  }
  return basis;
}

StripEstimate estimate_strip(const DensityModel& model) {
  StripEstimate est;
  if (model.polynomial_plancherel()) {
    est.unbounded = true;
    est.lower_bound = std::numeric_limits<double>::infinity();
    est.probed_to = std::numeric_limits<double>::infinity();
    return est;
  }
  // With Im lambda = tau the recessive part of phi is smaller than the dominant one
  // by exp(-2 tau r_match); beyond ~1e-8 the Wronskian extraction loses its digits.
  const double r_match = default_match_radius(model);
  const double s = model.scale();
  const double tau_cap = std::min(model.rho() + 10.0 * s, 0.5 * std::log(1e8) / r_match);
  est.probed_to = tau_cap;
  const double r_start = std::max(r_match, model.asymptotic_radius());
  const int n_lambda = 24;
  RadialSweep sweep(model, {r_match}, r_start, 6.0 * s + tau_cap);
  double prev_max = 0.0;
  est.lower_bound = tau_cap;
  for (int j = 0;; ++j) {
    const double tau = std::min(tau_cap, 0.05 * s * j);
    double line_max = 0.0;
    for (int i = 1; i <= n_lambda; ++i) {
      const cd lambda(6.0 * s * i / n_lambda, tau);
      const double m = std::abs(c_from_sweep(sweep, lambda, 0).eta);
      line_max = std::max(line_max, std::isfinite(m) ? m : std::numeric_limits<double>::infinity());
    }
    est.taus.push_back(tau);
    est.line_max.push_back(line_max);
    if (j > 0 && (!std::isfinite(line_max) || line_max > 1e3 * prev_max)) {
      est.lower_bound = est.taus[est.taus.size() - 2];
      break;
    }
    prev_max = line_max;
    if (tau >= tau_cap) break;
  }
  return est;
}

}  // namespace radialwave
