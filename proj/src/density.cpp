#include "radialwave/density.hpp"

#include <cmath>
// boost 1.74 pchip calls isnan unqualified
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "radialwave/errors.hpp"
#include "radialwave/io.hpp"
#include "radialwave/quadrature.hpp"

namespace radialwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kSeriesTerms = 40;

// log(2 sinh x) and log(2 cosh x) without overflow or cancellation
double log_2sinh(double x) { return x + std::log(-std::expm1(-2.0 * x)); }
double log_2cosh(double x) { return x + std::log1p(std::exp(-2.0 * x)); }

bool near_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

}  // namespace

struct DensityModel::Table {
  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
  double r_first = 0.0;       // first positive node
  double logA_first = 0.0;
  double power = 0.0;         // exponent used below r_first
  double r_last = 0.0;
  std::unique_ptr<Pchip> spline;
};

DensityModel DensityModel::jacobi(double alpha, double beta, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("density", "scale must be positive");
  if (!(alpha > -0.5)) throw DomainError("density", "alpha must exceed -1/2");
  if (!(alpha + beta + 1.0 > 0.0)) throw DomainError("density", "rho = scale*(alpha+beta+1) must be positive");
  DensityModel m;
  m.kind_ = DensityKind::jacobi;
  m.alpha_ = alpha;
  m.beta_ = beta;
  m.scale_ = scale;
  m.rho_ = scale * (alpha + beta + 1.0);
  m.finish_jacobi();
  return m;
}

void DensityModel::finish_jacobi() {
  const double n = 2.0 * alpha_ + 2.0;
  dim_ = static_cast<int>(std::lround(n));
  non_integer_dim_ = !near_integer(n);
  const double a = 2.0 * alpha_ + 1.0;
  const double b = 2.0 * beta_ + 1.0;
  // Jacobi A behaves like 2^(a+b) r^a at the origin; the sphere of radius r in
  // dimension n has area omega_{n-1} r^(n-1).
  const double omega = 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
  sphere_const_ = omega / std::pow(2.0, a + b);

  series_.clear();
  for (int j = 1; j <= kSeriesTerms; ++j) {
    const double b2j = boost::math::bernoulli_b2n<double>(j);
    const double p2 = std::pow(2.0, 2 * j);
    const double coef = p2 * b2j / boost::math::factorial<double>(2 * j) * (a + b * (p2 - 1.0));
    series_.push_back(coef * std::pow(scale_, 2 * j));
  }
  // singularities of coth at i pi / s, of tanh at i pi / (2 s)
  series_radius_ = (b == 0.0 ? std::numbers::pi : std::numbers::pi / 2.0) / scale_;

  free_radius_ = 0.0;
  if (a * (a - 2.0) != 0.0 || b * (b - 2.0) != 0.0) {
    double x = 0.25;
    while (std::abs(liouville_potential(x / scale_)) >= 1e-18 * scale_ * scale_) x += 0.25;
    free_radius_ = x / scale_;
  }
  asymptotic_radius_ = 40.0 / scale_;
  max_radius_ = kInf;

  // The Plancherel density is a product of gamma-function ratios; it reduces to a
  // polynomial exactly when one of (alpha+beta+1)/2, (alpha-beta+1)/2 is a positive
  // integer and the other a positive half-integer.
  const double g1 = (alpha_ + beta_ + 1.0) / 2.0;
  const double g2 = (alpha_ - beta_ + 1.0) / 2.0;
  auto integer_ge1 = [](double x) { return near_integer(x) && x > 0.5; };
  auto half_integer = [](double x) { return near_integer(x - 0.5) && x > 0.0; };
  polynomial_plancherel_ = (integer_ge1(g1) && half_integer(g2)) || (integer_ge1(g2) && half_integer(g1));

  std::ostringstream k;
  k.precision(17);
  k << "jacobi:" << alpha_ << ":" << beta_ << ":" << scale_;
  key_ = k.str();
}

DensityModel DensityModel::table(std::vector<double> r, std::vector<double> A, double sphere_const) {
  if (r.size() != A.size()) throw DomainError("density", "table columns differ in length");
  if (!(sphere_const > 0.0)) throw DomainError("density", "sphere constant must be positive");
  std::vector<double> rp, la;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i > 0 && !(r[i] > r[i - 1])) throw DomainError("density", "table radii must increase strictly");
    if (r[i] < 0.0) throw DomainError("density", "table radii must be non-negative");
    if (r[i] == 0.0) {
      if (A[i] != 0.0) throw DomainError("density", "table density must vanish at r = 0");
      continue;
    }
    if (!(A[i] > 0.0)) throw DomainError("density", "table density must be positive for r > 0");
    rp.push_back(r[i]);
    la.push_back(std::log(A[i]));
  }
  if (rp.size() < 4) throw DomainError("density", "table needs at least 4 positive nodes");

  auto t = std::make_shared<Table>();
  t->r_first = rp.front();
  t->logA_first = la.front();
  t->power = (la[1] - la[0]) / (std::log(rp[1]) - std::log(rp[0]));
  t->r_last = rp.back();
  t->spline = std::make_unique<Table::Pchip>(std::vector<double>(rp), std::vector<double>(la));

  DensityModel m;
  m.kind_ = DensityKind::table;
  m.table_ = t;
  m.scale_ = 1.0;
  m.alpha_ = (t->power - 1.0) / 2.0;
  m.rho_ = 0.5 * t->spline->prime(t->r_last);
  m.beta_ = m.rho_ - m.alpha_ - 1.0;
  const double n = 2.0 * m.alpha_ + 2.0;
  m.dim_ = static_cast<int>(std::lround(n));
  m.non_integer_dim_ = !near_integer(n);
  m.sphere_const_ = sphere_const;
  m.series_radius_ = t->r_first;  // pure power law below the first node: A'/A = a/r exactly
  m.free_radius_ = t->r_last;
  m.asymptotic_radius_ = t->r_last;
  m.max_radius_ = t->r_last;
  m.polynomial_plancherel_ = false;
  std::ostringstream k;
  k.precision(17);
  k << "table:" << rp.size() << ":" << rp.front() << ":" << rp.back() << ":" << la.front() << ":" << la.back() << ":"
    << sphere_const;
  for (std::size_t i = 0; i < la.size(); i += std::max<std::size_t>(1, la.size() / 16)) k << ":" << la[i];
  m.key_ = k.str();
  return m;
}

double DensityModel::log_density(double r) const {
  if (!(r >= 0.0)) throw DomainError("density", "radius must be non-negative");
  if (r == 0.0) return -kInf;
  if (kind_ == DensityKind::jacobi) {
    const double x = scale_ * r;
    const double a = 2.0 * alpha_ + 1.0;
    const double b = 2.0 * beta_ + 1.0;
    return a * (log_2sinh(x) - std::log(scale_)) + b * log_2cosh(x);
  }
  if (r > table_->r_last) throw InterpolationError("density", "radius beyond the table");
  if (r < table_->r_first) return table_->logA_first + table_->power * std::log(r / table_->r_first);
  return (*table_->spline)(r);
}

double DensityModel::logderiv(double r) const {
  if (!(r >= 0.0)) throw DomainError("density", "radius must be non-negative");
  if (r == 0.0) return kInf;
  if (kind_ == DensityKind::jacobi) {
    const double x = scale_ * r;
    const double a = 2.0 * alpha_ + 1.0;
    const double b = 2.0 * beta_ + 1.0;
    return scale_ * (a / std::tanh(x) + b * std::tanh(x));
  }
  if (r > table_->r_last) throw InterpolationError("density", "radius beyond the table");
  if (r < table_->r_first) return table_->power / r;
  return table_->spline->prime(r);
}

double DensityModel::logderiv_slope(double r) const {
  if (!(r > 0.0)) throw DomainError("density", "radius must be positive");
  if (kind_ == DensityKind::jacobi) {
    const double x = scale_ * r;
    const double a = 2.0 * alpha_ + 1.0;
    const double b = 2.0 * beta_ + 1.0;
    const double sh = std::sinh(x), ch = std::cosh(x);
    return scale_ * scale_ * (-a / (sh * sh) + b / (ch * ch));
  }
  if (r > table_->r_last) throw InterpolationError("density", "radius beyond the table");
  if (r < table_->r_first) return -table_->power / (r * r);
  const double h = 1e-6 * std::max(r, table_->r_first);
  const double lo = std::max(table_->r_first, r - h);
  const double hi = std::min(table_->r_last, r + h);
  return (table_->spline->prime(hi) - table_->spline->prime(lo)) / (hi - lo);
}

double DensityModel::liouville_potential(double r) const {
  if (!(r > 0.0)) throw DomainError("density", "radius must be positive");
  if (kind_ == DensityKind::jacobi) {
    // With a = 2 alpha + 1, b = 2 beta + 1 the potential has the closed form
    // s^2 [a(a-2)/4 csch^2(s r) - b(b-2)/4 sech^2(s r)], free of cancellation.
    const double x = scale_ * r;
    const double a = 2.0 * alpha_ + 1.0;
    const double b = 2.0 * beta_ + 1.0;
    const double sh = std::sinh(x), ch = std::cosh(x);
    return scale_ * scale_ * (a * (a - 2.0) / (4.0 * sh * sh) - b * (b - 2.0) / (4.0 * ch * ch));
  }
  const double p = logderiv(r);
  return 0.25 * p * p + 0.5 * logderiv_slope(r) - rho_ * rho_;
}

DensitySample DensityModel::eval(double r) const {
  if (!(r >= 0.0)) throw DomainError("density", "radius must be non-negative");
  if (r == 0.0) return {0.0, kInf};
  return {std::exp(log_density(r)), logderiv(r)};
}

ConditionReport validate_conditions(const DensityModel& model, double r_max, int n_samples) {
  if (!(r_max > 0.0) || n_samples < 16) throw DomainError("density", "need r_max > 0 and at least 16 samples");
  ConditionReport rep;
  const double r_top = std::min(r_max, model.max_radius());
  const double r_lo = r_top / static_cast<double>(n_samples);
  std::vector<double> r(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) r[static_cast<std::size_t>(i)] = r_lo + (r_top - r_lo) * i / (n_samples - 1.0);

  // increasing density
  rep.min_log_increment = kInf;
  double prev = model.log_density(r[0]);
  for (std::size_t i = 1; i < r.size(); ++i) {
    const double cur = model.log_density(r[i]);
    rep.min_log_increment = std::min(rep.min_log_increment, cur - prev);
    prev = cur;
  }
  rep.increasing = rep.min_log_increment > 0.0;

  // decreasing log-derivative with positive limit
  rep.max_logderiv_increase = -kInf;
  double p_prev = model.logderiv(r[0]);
  for (std::size_t i = 1; i < r.size(); ++i) {
    const double p = model.logderiv(r[i]);
    rep.max_logderiv_increase = std::max(rep.max_logderiv_increase, p - p_prev);
    p_prev = p;
  }
  rep.rho_estimate = 0.5 * model.logderiv(r_top);
  const double slack = 1e-12 * std::max(1.0, std::abs(model.logderiv(r[0])));
  rep.logderiv_decreasing = rep.max_logderiv_increase <= slack && rep.rho_estimate > 0.0;

  // small-r power law: fit log A = e log r + c + d r^2 over a log-spaced window
  // below the series radius
  {
    const double hi = std::min(1e-2 * model.length_unit(), 0.5 * model.series_radius());
    const double lo = 1e-2 * hi;
    const int m = 41;
    double S[3][3] = {}, T[3] = {};
    for (int i = 0; i < m; ++i) {
      const double rr = lo * std::pow(hi / lo, i / (m - 1.0));
      const double basis[3] = {std::log(rr), 1.0, rr * rr};
      const double y = model.log_density(rr);
      for (int p = 0; p < 3; ++p) {
        T[p] += basis[p] * y;
        for (int q = 0; q < 3; ++q) S[p][q] += basis[p] * basis[q];
      }
    }
    auto det3 = [](double M[3][3]) {
      return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
             M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
    };
    double N[3][3];
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) N[p][q] = (q == 0) ? T[p] : S[p][q];
    rep.fitted_exponent = det3(N) / det3(S);
    rep.expected_exponent = model.pole_strength();
    rep.small_r_power = std::abs(rep.fitted_exponent - rep.expected_exponent) < 1e-4 && rep.fitted_exponent > 0.0;
  }

  // integrability of r |G| on [0.1, r_max]
  {
    const double r1 = 0.1;
    if (r_top > r1) {
      const double mid = 0.5 * (r1 + r_top);
      auto integrate = [&](double a, double b) {
        const auto rule = gauss_legendre_panels(a, b, static_cast<std::size_t>(std::max(4, n_samples / 16)));
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          acc += rule.weights[i] * rule.nodes[i] * std::abs(model.liouville_potential(rule.nodes[i]));
        }
        return acc;
      };
      const double inner = integrate(r1, mid);
      rep.potential_tail = integrate(mid, r_top);
      rep.potential_integral = inner + rep.potential_tail;
      // finite: the outer half carries a vanishing share (or the potential vanishes)
      rep.potential_integrable = std::isfinite(rep.potential_integral) &&
                                 rep.potential_tail <= 1e-3 * std::max(rep.potential_integral, 1e-300) + 1e-14;
    }
  }
  return rep;
}

DensityModel load_model_file(const std::string& path) {
  const Config cfg = Config::load(path);
  auto key = [&](const std::string& k) { return cfg.has("model." + k) ? "model." + k : k; };
  const std::string kind = cfg.has("model") ? cfg.str("model") : cfg.str("model.kind");
  if (kind == "jacobi") {
    return DensityModel::jacobi(cfg.num(key("alpha")), cfg.num(key("beta")), cfg.num(key("scale"), 1.0));
  }
  if (kind == "table") {
    std::filesystem::path p = cfg.str(key("path"));
    if (p.is_relative()) p = cfg.base_dir() / p;
    auto cols = read_table_csv(p);
    if (cols.size() < 2) throw ConfigError("density", "table CSV needs two columns (r, A)");
    return DensityModel::table(std::move(cols[0]), std::move(cols[1]), cfg.num(key("sphere_const"), 1.0));
  }
  throw ConfigError("density", "unknown model kind '" + kind + "'");
}

}  // namespace radialwave
