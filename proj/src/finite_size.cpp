#include "dlpad/finite_size.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dlpad {

namespace detail {

void check_critical_args(double nu, int L, int r, int n) {
  if (!(nu >= 0.0 && nu < 1.0)) throw std::invalid_argument("critical quantities need nu in [0, 1)");
  require_even_size(L);
  if (r < 0 || r > L / 2 - 1) throw std::out_of_range("mode index r outside [0, L/2 - 1]");
  if (n < 1 || n > kMaxCumulantOrder)
    throw std::out_of_range("derivative order must be in [1, " + std::to_string(kMaxCumulantOrder) +
                            "], got " + std::to_string(n));
}

}  // namespace detail

namespace {

void check_order_list(double nu, int L, int n_max) {
  detail::check_critical_args(nu, L, 0, n_max);
}

// All orders 1..n_max of one mode, sharing the sqrt derivatives.
template <class Real>
void accumulate_mode(const Real& nu, int L, int r, int n_lo, int n_hi, std::vector<Real>& out) {
  const CriticalQuadratic<Real> q = critical_quadratic<Real>(nu, L, r);
  std::vector<Real> scaled(n_hi + 1);  // nu^j d^j sqrt(f)
  Real nu_power = 1;
  for (int j = 1; j <= n_hi; ++j) {
    nu_power *= nu;
    scaled[j] = nu_power * sqrt_derivative<Real>(j, q.f, q.f1, q.f2);
  }
  for (int n = n_lo; n <= n_hi; ++n) {
    Real acc = 0;
    for (int j = 1; j <= n; ++j) acc += int128_to<Real>(stirling2(n, j)) * scaled[j];
    out[n] = acc / 2;
  }
}

template <class Real>
void cumulant_pass(double nu, int L, int n_lo, int n_hi, std::vector<double>& result) {
  std::vector<CompensatedSum<Real>> sums(n_hi + 1);
  std::vector<Real> mode(n_hi + 1);
  const Real nu_r(nu);
  for (int r = 0; r < L / 2; ++r) {
    accumulate_mode<Real>(nu_r, L, r, n_lo, n_hi, mode);
    for (int n = n_lo; n <= n_hi; ++n) sums[n] += mode[n];
  }
  for (int n = n_lo; n <= n_hi; ++n)
    result[n - 1] = static_cast<double>(Real(2) * sums[n].value() / Real(L));
}

}  // namespace

double cgf(const ModelParams& p, double s, int L, Sector sector) {
  require_even_size(L);
  CompensatedSum<double> acc;
  for (int r = 0; r < L / 2; ++r) acc += detail::dispersion_impl<double>(p.w(), p.mu(), s, L, r, sector);
  return -(p.w() + p.mu()) + 2.0 * acc.value() / L;
}

double mean_activity(const ModelParams& p, double s, int L, Sector sector) {
  require_even_size(L);
  const double w = p.w();
  const double mu = p.mu();
  const double ws = w * std::exp(s);
  const double J = ws + mu;
  CompensatedSum<double> acc;
  for (int r = 0; r < L / 2; ++r) {
    if (sector == Sector::odd && r == 0) {
      acc += ws;  // zero mode: d J_s / ds
      continue;
    }
    const double theta = sector == Sector::even ? std::numbers::pi * (2 * r + 1) / L
                                                : 2.0 * std::numbers::pi * r / L;
    const double C = std::cos(theta);
    const double S = std::sin(theta);
    const double a = w - J * C;
    const double lambda = std::sqrt(a * a + (2.0 * ws + mu) * mu * S * S);
    acc += ws * (mu * S * S - a * C) / lambda;
  }
  return 2.0 * acc.value() / L;
}

double lambda_derivative(double nu, int L, int r, int n) {
  detail::check_critical_args(nu, L, r, n);
  if (n <= kDoublePrecisionMaxOrder) return lambda_derivative_t<double>(nu, L, r, n);
  return static_cast<double>(lambda_derivative_t<Real50>(Real50(nu), L, r, n));
}

double critical_mode_shift(double nu, int L, int r, double v) {
  detail::check_critical_args(nu, L, r, 1);
  const CriticalQuadratic<double> q = critical_quadratic<double>(nu, L, r);
  const double delta = nu * std::expm1(v);
  const double df = delta * (q.f1 + 0.5 * q.f2 * delta);
  const double f_new = std::max(q.f + df, 0.0);
  return df / (2.0 * (std::sqrt(f_new) + std::sqrt(q.f)));
}

DispersionPoint dispersion_point(double nu, int L, int r, int n_max) {
  detail::check_critical_args(nu, L, r, n_max);
  DispersionPoint pt;
  pt.L = L;
  pt.r = r;
  pt.lambda0 = critical_dispersion(nu, L, r);
  pt.lambda_n.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) pt.lambda_n.push_back(lambda_derivative(nu, L, r, n));
  return pt;
}

double critical_cumulant(double nu, int L, int n) {
  detail::check_critical_args(nu, L, 0, n);
  std::vector<double> out(n);
  if (n <= kDoublePrecisionMaxOrder)
    cumulant_pass<double>(nu, L, n, n, out);
  else
    cumulant_pass<Real50>(nu, L, n, n, out);
  return out[n - 1];
}

std::vector<double> critical_cumulants(double nu, int L, int n_max) {
  check_order_list(nu, L, n_max);
  std::vector<double> out(n_max);
  cumulant_pass<double>(nu, L, 1, std::min(n_max, kDoublePrecisionMaxOrder), out);
  if (n_max > kDoublePrecisionMaxOrder)
    cumulant_pass<Real50>(nu, L, kDoublePrecisionMaxOrder + 1, n_max, out);
  return out;
}

double expansion_radius(double nu, int L) {
  detail::check_critical_args(nu, L, 0, 1);
  if (nu == 0.0) return std::numeric_limits<double>::infinity();
  using Complex = std::complex<double>;
  double radius = std::numeric_limits<double>::infinity();
  for (int r = 0; r < L / 2; ++r) {
    // zeros of f(nu + d) = f + f1 d + (f2/2) d^2, then x = log(1 + d/nu)
    const CriticalQuadratic<double> q = critical_quadratic<double>(nu, L, r);
    const double a = 0.5 * q.f2;
    std::vector<Complex> roots;
    if (std::abs(a) < 1e-300) {
      if (q.f1 != 0.0) roots.emplace_back(-q.f / q.f1, 0.0);
    } else {
      const Complex disc = std::sqrt(Complex(q.f1 * q.f1 - 4.0 * a * q.f, 0.0));
      // numerically stable pair
      const Complex big = -0.5 * (q.f1 + (q.f1 >= 0 ? disc : -disc));
      roots.push_back(big / a);
      if (std::abs(big) > 0) roots.push_back(q.f / big);
    }
    for (const Complex& d : roots) {
      const Complex ratio = 1.0 + d / nu;
      if (std::abs(ratio) == 0.0) continue;
      radius = std::min(radius, std::abs(std::log(ratio)));
    }
  }
  return radius;
}

double critical_cgf_expansion(double nu, int L, double x, int n_max) {
  check_order_list(nu, L, n_max);
  const double radius = expansion_radius(nu, L);
  if (!(std::abs(x) < radius))
    throw std::domain_error("critical_cgf_expansion: |x| = " + std::to_string(std::abs(x)) +
                            " outside the radius of convergence " + std::to_string(radius));
  const std::vector<double> kappa = critical_cumulants(nu, L, n_max);
  double term_scale = 1.0;  // x^n / n!
  CompensatedSum<double> acc;
  for (int n = 1; n <= n_max; ++n) {
    term_scale *= x / n;
    acc += kappa[n - 1] * term_scale;
  }
  return acc.value();
}

}  // namespace dlpad
