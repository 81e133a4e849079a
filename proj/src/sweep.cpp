#include "radialwave/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "radialwave/errors.hpp"

namespace radialwave {

namespace {

constexpr double kGauss1 = 0.5 - 0.28867513459481288225;  // 1/2 - sqrt(3)/6
constexpr double kGauss2 = 0.5 + 0.28867513459481288225;
constexpr double kSqrt3Over12 = 0.14433756729740644113;
constexpr int kSeriesTerms = 40;

// cos(theta) and sin(theta)/theta as functions of theta^2
void rotation(double th2, double& c, double& s) {
  if (std::abs(th2) < 1e-8) {
    c = 1.0 - th2 / 2.0 + th2 * th2 / 24.0;
    s = 1.0 - th2 / 6.0 + th2 * th2 / 120.0;
  } else if (th2 > 0.0) {
    const double th = std::sqrt(th2);
    c = std::cos(th);
    s = std::sin(th) / th;
  } else {
    const double th = std::sqrt(-th2);
    c = std::cosh(th);
    s = std::sinh(th) / th;
  }
}

void rotation(cd th2, cd& c, cd& s) {
  if (std::abs(th2) < 1e-8) {
    c = 1.0 - th2 / 2.0 + th2 * th2 / 24.0;
    s = 1.0 - th2 / 6.0 + th2 * th2 / 120.0;
  } else {
    const cd th = std::sqrt(th2);
    c = std::cos(th);
    s = std::sin(th) / th;
  }
}

// One fourth-order Magnus step of v'' = -(lambda^2 - G) v over a step of length h
// (negative direction when `backward`). gbar is the Gauss-point mean of G and
// delta = sqrt(3) h^2 (G1 - G2) / 12.
template <class T>
struct Stepper {
  T lam2;
  double last_h = std::numeric_limits<double>::quiet_NaN();
  double last_g = 0.0, last_d = 0.0;
  T c{}, s{}, k2{};

  void prepare(double h, double g, double d) {
    if (h == last_h && g == last_g && d == last_d) return;
    last_h = h;
    last_g = g;
    last_d = d;
    k2 = lam2 - g;
    rotation(T(h * h) * k2 - T(d * d), c, s);
  }
  void forward(T& v, T& dv) const {
    const double h = last_h, d = last_d;
    const T nv = (c + s * d) * v + s * h * dv;
    const T ndv = -(s * h) * k2 * v + (c - s * d) * dv;
    v = nv;
    dv = ndv;
  }
  void backward(T& v, T& dv) const {
    const double h = last_h, d = last_d;
    const T nv = (c - s * d) * v - s * h * dv;
    const T ndv = (s * h) * k2 * v + (c + s * d) * dv;
    v = nv;
    dv = ndv;
  }
};

}  // namespace

RadialSweep::RadialSweep(const DensityModel& model, std::vector<double> targets, double top, double lambda_hint,
                         SweepOptions options)
    : model_(model), options_(options), targets_(std::move(targets)) {
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    if (!(targets_[i] >= 0.0) || (i > 0 && targets_[i] < targets_[i - 1])) {
      throw DomainError("eigen", "target radii must be non-negative and sorted");
    }
  }
  const double s = model_.scale();
  const double r_top = std::max(top, targets_.empty() ? 0.0 : targets_.back());
  if (r_top > model_.max_radius()) throw InterpolationError("eigen", "radius beyond the density table");

  const std::size_t n = targets_.size();
  sqrtA_.resize(n);
  inv_sqrtA_.resize(n);
  half_p_.resize(n);
  half_logA_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = targets_[i];
    if (r == 0.0) {
      sqrtA_[i] = 0.0;
      inv_sqrtA_[i] = std::numeric_limits<double>::infinity();
      half_p_[i] = 0.0;
      half_logA_[i] = -std::numeric_limits<double>::infinity();
    } else {
      half_logA_[i] = 0.5 * model_.log_density(r);
      sqrtA_[i] = std::exp(half_logA_[i]);
      inv_sqrtA_[i] = std::exp(-half_logA_[i]);
      half_p_[i] = 0.5 * model_.logderiv(r);
    }
  }
  if (r_top <= 0.0) return;

  // base mesh: geometric near the origin, uniform up to the free radius
  const double gamma = geometric_ratio();
  const double h_far = options_.far_step / s;
  const double free_r = std::min(model_.free_radius(), r_top);
  std::vector<double> base;
  if (free_r > 0.0) {
    const double floor_r = std::min(launch_radius(cd(lambda_hint)), free_r);
    const double geo_end = std::min(h_far / gamma, free_r);
    for (double r = floor_r; r < geo_end; r *= 1.0 + gamma) base.push_back(r);
    const double start = std::max(geo_end, floor_r);
    const auto steps = static_cast<std::size_t>(std::ceil((free_r - start) / h_far));
    for (std::size_t k = 0; k <= steps; ++k) {
      base.push_back(steps == 0 ? start : start + (free_r - start) * static_cast<double>(k) / steps);
    }
  }
  std::vector<double> all;
  all.reserve(base.size() + n + 1);
  for (double r : base)
    if (r > 0.0 && r < r_top) all.push_back(r);
  for (double r : targets_)
    if (r > 0.0) all.push_back(r);
  all.push_back(r_top);
  std::sort(all.begin(), all.end());
  // merge near-coincident nodes, preferring exact target values
  std::vector<char> is_target(all.size(), 0);
  {
    std::vector<double> tpos;
    for (double r : targets_)
      if (r > 0.0) tpos.push_back(r);
    tpos.push_back(r_top);
    for (std::size_t i = 0; i < all.size(); ++i) {
      is_target[i] = std::binary_search(tpos.begin(), tpos.end(), all[i]) ? 1 : 0;
    }
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    const double r = all[i];
    if (!nodes_.empty()) {
      const double tol = 1e-9 * std::min(r, h_far);
      if (r - nodes_.back() <= tol) {
        if (is_target[i]) nodes_.back() = r;
        continue;
      }
    }
    nodes_.push_back(r);
  }

  const std::size_t m = nodes_.size();
  step_h_.resize(m > 0 ? m - 1 : 0);
  step_g_.resize(step_h_.size());
  step_d_.resize(step_h_.size());
  const double free_full = model_.free_radius();
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const double a = nodes_[j], h = nodes_[j + 1] - a;
    step_h_[j] = h;
    if (a >= free_full) {
      step_g_[j] = 0.0;
      step_d_[j] = 0.0;
    } else {
      const double g1 = model_.liouville_potential(a + kGauss1 * h);
      const double g2 = model_.liouville_potential(a + kGauss2 * h);
      step_g_[j] = 0.5 * (g1 + g2);
      step_d_[j] = kSqrt3Over12 * h * h * (g1 - g2);
    }
  }
  target_node_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (targets_[i] == 0.0) continue;
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), targets_[i] * (1.0 - 1e-15));
    target_node_[i] = static_cast<std::size_t>(it - nodes_.begin());
  }
}

double RadialSweep::geometric_ratio() const {
  // the potential behaves like c / r^2 at the origin; stronger poles need finer steps
  const double a = model_.pole_strength();
  const double c = std::abs(a * (a - 2.0)) / 4.0;
  return options_.geometric_ratio / std::max(1.0, std::sqrt(c));
}

double RadialSweep::launch_radius(cd lambda) const {
  const double s = model_.scale();
  const double rho = model_.rho();
  const double mu = std::abs(lambda * lambda + rho * rho);
  double r0 = std::min(0.1 / s, model_.series_radius());
  if (mu > 0.0) r0 = std::min(r0, 2.0 / std::sqrt(mu));
  return r0;
}

std::pair<cd, cd> RadialSweep::series_phi(cd lambda, double r) const {
  const cd mu = lambda * lambda + model_.rho() * model_.rho();
  const auto& q = model_.logderiv_series();
  const double two_alpha = 2.0 * model_.alpha();
  cd coef[kSeriesTerms + 1];
  coef[0] = 1.0;
  cd phi = 1.0, dphi = 0.0;
  const double r2 = r * r;
  double rpow = 1.0;  // r^(2m)
  for (int m = 1; m <= kSeriesTerms; ++m) {
    cd acc = mu * coef[m - 1];
    for (int j = 1; j < m && j <= static_cast<int>(q.size()); ++j) {
      acc += q[static_cast<std::size_t>(j - 1)] * (2.0 * (m - j)) * coef[m - j];
    }
    coef[m] = -acc / (2.0 * m * (2.0 * m + two_alpha));
    dphi += (2.0 * m) * coef[m] * (rpow * r);
    rpow *= r2;
    const cd term = coef[m] * rpow;
    phi += term;
    if (std::abs(term) < 1e-18 * std::abs(phi) && m > 2) break;
  }
  return {phi, dphi};
}

template <class T>
void RadialSweep::run_regular(T lambda, T* v, T* dv) const {
  const std::size_t n = targets_.size();
  const double r0 = launch_radius(cd(lambda));
  // targets inside the launch radius come from the series
  std::size_t k = 0;
  for (; k < n && targets_[k] < r0; ++k) {
    if (targets_[k] == 0.0) {
      v[k] = T(0.0);
      dv[k] = T(0.0);
      continue;
    }
    const auto [phi, dphi] = series_phi(cd(lambda), targets_[k]);
    if constexpr (std::is_same_v<T, double>) {
      v[k] = sqrtA_[k] * phi.real();
      dv[k] = sqrtA_[k] * (dphi.real() + half_p_[k] * phi.real());
    } else {
      v[k] = sqrtA_[k] * phi;
      dv[k] = sqrtA_[k] * (dphi + half_p_[k] * phi);
    }
  }
  if (k == n) return;

  // launch at r0
  const auto [phi0, dphi0] = series_phi(cd(lambda), r0);
  const double sq0 = std::exp(0.5 * model_.log_density(r0));
  const double hp0 = 0.5 * model_.logderiv(r0);
  T y, dy;
  if constexpr (std::is_same_v<T, double>) {
    y = sq0 * phi0.real();
    dy = sq0 * (dphi0.real() + hp0 * phi0.real());
  } else {
    y = sq0 * phi0;
    dy = sq0 * (dphi0 + hp0 * phi0);
  }
  Stepper<T> stepper{lambda * lambda};

  // catch up to the first mesh node beyond r0 with on-the-fly geometric steps
  std::size_t j = static_cast<std::size_t>(std::lower_bound(nodes_.begin(), nodes_.end(), r0) - nodes_.begin());
  {
    const double gamma = geometric_ratio();
    const double goal = nodes_[j];
    double r = r0;
    while (r < goal) {
      const double next =
          r >= model_.free_radius() ? goal : std::min(goal, std::max(r * (1.0 + gamma), r + 1e-14));
      const double h = next - r;
      double g = 0.0, d = 0.0;
      if (r < model_.free_radius()) {
        const double g1 = model_.liouville_potential(r + kGauss1 * h);
        const double g2 = model_.liouville_potential(r + kGauss2 * h);
        g = 0.5 * (g1 + g2);
        d = kSqrt3Over12 * h * h * (g1 - g2);
      }
      stepper.prepare(h, g, d);
      stepper.forward(y, dy);
      r = next;
    }
  }
  const std::size_t m = nodes_.size();
  for (; j < m; ++j) {
    while (k < n && target_node_[k] == j) {
      v[k] = y;
      dv[k] = dy;
      ++k;
    }
    if (k == n) break;
    if (j + 1 < m) {
      stepper.prepare(step_h_[j], step_g_[j], step_d_[j]);
      stepper.forward(y, dy);
    }
  }
}

void RadialSweep::regular(double lambda, double* v, double* dv) const { run_regular<double>(lambda, v, dv); }

void RadialSweep::regular(cd lambda, cd* v, cd* dv) const {
  if (std::abs(lambda.imag()) > model_.rho() + 10.0 * model_.scale()) {
    throw DomainError("eigen", "|Im lambda| exceeds rho + 10 (unsupported strip)");
  }
  if (std::abs(lambda.imag()) * top() > 600.0) {
    throw DomainError("eigen", "|Im lambda| * r_max too large for double range");
  }
  run_regular<cd>(lambda, v, dv);
}

void RadialSweep::regular_phi(double lambda, double* phi, double* dphi) const {
  regular(lambda, phi, dphi);
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    if (targets_[i] == 0.0) {
      phi[i] = 1.0;
      dphi[i] = 0.0;
      continue;
    }
    const double u = phi[i] * inv_sqrtA_[i];
    dphi[i] = dphi[i] * inv_sqrtA_[i] - half_p_[i] * u;
    phi[i] = u;
  }
}

void RadialSweep::regular_phi(cd lambda, cd* phi, cd* dphi) const {
  regular(lambda, phi, dphi);
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    if (targets_[i] == 0.0) {
      phi[i] = 1.0;
      dphi[i] = 0.0;
      continue;
    }
    const cd u = phi[i] * inv_sqrtA_[i];
    dphi[i] = dphi[i] * inv_sqrtA_[i] - half_p_[i] * u;
    phi[i] = u;
  }
}

cd RadialSweep::jost_log_factor(cd lambda) const {
  const double R = top();
  return 0.5 * model_.log_density(R) + (cd(0.0, 1.0) * lambda - model_.rho()) * R;
}

void RadialSweep::jost(cd lambda, cd* v, cd* dv) const {
  if (std::abs(lambda.imag()) > model_.rho() + 10.0 * model_.scale()) {
    throw DomainError("eigen", "|Im lambda| exceeds rho + 10 (unsupported strip)");
  }
  const std::size_t n = targets_.size();
  const std::size_t m = nodes_.size();
  if (m == 0) return;
  const double R = top();
  cd y = 1.0;
  cd dy = cd(0.0, 1.0) * lambda - model_.rho() + 0.5 * model_.logderiv(R);
  Stepper<cd> stepper{lambda * lambda};
  std::ptrdiff_t k = static_cast<std::ptrdiff_t>(n) - 1;
  for (std::size_t jj = m; jj-- > 0;) {
    while (k >= 0 && targets_[static_cast<std::size_t>(k)] > 0.0 && target_node_[static_cast<std::size_t>(k)] == jj) {
      v[k] = y;
      dv[k] = dy;
      --k;
    }
    if (k < 0 || targets_[static_cast<std::size_t>(k)] == 0.0) break;
    if (jj > 0) {
      stepper.prepare(step_h_[jj - 1], step_g_[jj - 1], step_d_[jj - 1]);
      stepper.backward(y, dy);
    }
  }
  // the Jost solution is singular at the origin
  for (; k >= 0; --k) {
    v[k] = std::numeric_limits<double>::quiet_NaN();
    dv[k] = std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace radialwave
