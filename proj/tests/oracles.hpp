#pragma once

// Independent reference values used by the tests. Nothing here calls into the library's
// numerical code: closed forms for real hyperbolic 3-space and adaptive quadrature or
// ODE integration from Boost.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

/// exp(-k / (1 - (r/R)^2)) for r < R, else 0.
inline double bump(double r, double R, double k = 1.0) {
  const double x = r / R;
  return x < 1.0 ? std::exp(-k / (1.0 - x * x)) : 0.0;
}

/// d/dr of the bump.
inline double bump_deriv(double r, double R, double k = 1.0) {
  const double x = r / R;
  if (x >= 1.0) return 0.0;
  const double q = 1.0 - x * x;
  return bump(r, R, k) * (-2.0 * k * x / (q * q * R));
}

// ---- real hyperbolic 3-space: A = 4 sinh^2 r, rho = 1, sphere_const = pi ----

inline cd h3_phi(cd lambda, double r) {
  if (r == 0.0) return 1.0;
  if (std::abs(lambda) < 1e-12) return r / std::sinh(r);
  return std::sin(lambda * r) / (lambda * std::sinh(r));
}

/// Jost solution with the seeding convention Phi(r) ~ exp((i lambda - 1) r).
inline cd h3_jost(cd lambda, double r) {
  return std::exp((cd(0, 1) * lambda - 1.0) * r) / (1.0 - std::exp(-2.0 * r));
}

/// c(lambda) for the Jost normalization above: 1 / (i lambda).
inline cd h3_c(cd lambda) { return 1.0 / (cd(0, 1) * lambda); }

/// Exact solution of u_tt = Delta u + u in H^3 with u(., 0) = f, u_t(., 0) = g, both
/// radial: sinh(r) u solves the flat 1-D wave equation with odd data.
template <class F, class G>
double h3_wave(F f, G g, double r, double t) {
  auto F1 = [&](double s) { return std::sinh(s) * f(std::abs(s)); };
  auto G1 = [&](double s) { return std::sinh(s) * g(std::abs(s)); };
  auto integral = [&](double a, double b) {
    if (a == b) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(G1, a, b, 15, 1e-14);
  };
  if (r < 1e-9) {
    // limit r -> 0: d/ds [F1(s)] at s = t plus G1(t)
    const double h = 1e-5;
    const double dF = (F1(t + h) - F1(t - h)) / (2.0 * h);
    return dF + G1(t);
  }
  const double w = 0.5 * (F1(r + t) + F1(r - t)) + 0.5 * integral(r - t, r + t);
  return w / std::sinh(r);
}

/// Spherical mean in H^3 of a function f radial about sigma, over the sphere of radius r
/// about a point at distance d from sigma (hyperbolic law of cosines).
template <class F>
double h3_mean(F f, double d, double r) {
  if (d == 0.0) return f(r);
  if (r == 0.0) return f(d);
  auto integrand = [&](double s) { return f(s) * std::sinh(s); };
  const double a = std::abs(d - r), b = d + r;
  const double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, a, b, 15, 1e-14);
  return I / (2.0 * std::sinh(d) * std::sinh(r));
}

/// Abel transform in H^3 with the library's constants: 2 pi int_{|s|}^inf f(r) sinh r dr.
template <class F>
double h3_abel(F f, double s, double R) {
  s = std::abs(s);
  if (s >= R) return 0.0;
  auto integrand = [&](double r) { return f(r) * std::sinh(r); };
  return 2.0 * pi * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, s, R, 15, 1e-14);
}

// ---- Jacobi models through an independent ODE integration ----

/// log-derivative of A = (2 sinh r)^(2a+1) (2 cosh r)^(2b+1) (scale 1).
inline double jacobi_logderiv(double a, double b, double r) {
  return (2 * a + 1) / std::tanh(r) + (2 * b + 1) * std::tanh(r);
}

/// phi_lambda(r) for a Jacobi model (scale 1) by Boost odeint (Runge-Kutta-Fehlberg 7(8))
/// from a two-term series start at r0.
inline std::pair<double, double> jacobi_phi(double a, double b, double lambda, double r) {
  const double rho = a + b + 1.0;
  const double mu = lambda * lambda + rho * rho;
  const double n = 2 * a + 2;
  const double r0 = 1e-4;
  if (r <= r0) return {1.0 - mu * r * r / (2 * n), -mu * r / n};
  using state = std::array<double, 2>;
  state y{1.0 - mu * r0 * r0 / (2 * n), -mu * r0 / n};
  auto rhs = [&](const state& s, state& ds, double x) {
    ds[0] = s[1];
    ds[1] = -jacobi_logderiv(a, b, x) * s[1] - mu * s[0];
  };
  namespace ode = boost::numeric::odeint;
  ode::integrate_adaptive(ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_fehlberg78<state>()), rhs, y, r0, r,
                          1e-4);
  return {y[0], y[1]};
}

/// Plancherel density of real hyperbolic 4-space (alpha = 1, beta = -1/2) up to a constant.
inline double h4_plancherel_shape(double lambda) {
  return pi * lambda * std::tanh(pi * lambda) * (lambda * lambda + 0.25);
}

}  // namespace oracle
