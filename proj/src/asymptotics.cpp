#include "dlpad/asymptotics.hpp"

#include "dlpad/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dlpad {
namespace {

constexpr double kPi = std::numbers::pi;

void require_nu_closed(double nu, const char* what) {
  if (!(nu >= 0.0 && nu <= 1.0)) throw std::invalid_argument(std::string(what) + ": nu outside [0, 1]");
}

void require_nu_half_open(double nu, const char* what) {
  if (!(nu >= 0.0 && nu < 1.0)) throw std::invalid_argument(std::string(what) + ": nu outside [0, 1)");
}

void require_nu_open(double nu, const char* what) {
  if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument(std::string(what) + ": nu outside (0, 1)");
}

// asin(nu)/nu with its removable singularity filled in.
double asin_ratio(double nu) {
  if (std::abs(nu) < 1e-4) {
    const double n2 = nu * nu;
    return 1.0 + n2 / 6.0 + 3.0 * n2 * n2 / 40.0;
  }
  return std::asin(nu) / nu;
}

double factorial(int n) {
  double out = 1.0;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

// sum_{r >= R} (2r+1)^-3 by Euler-Maclaurin; R >= 16 keeps it at 1e-16 relative.
double odd_cube_tail(long R) {
  const double x = 2.0 * static_cast<double>(R) + 1.0;
  const double x2 = x * x;
  return 1.0 / (4.0 * x2) + 1.0 / (2.0 * x2 * x) + 1.0 / (2.0 * x2 * x2) - 2.0 / (3.0 * x2 * x2 * x2);
}

// (1 + y)^(-1/2) - 1 + y/2
double inv_sqrt_remainder(double y) {
  if (std::abs(y) >= 0.1) return 1.0 / std::sqrt(1.0 + y) - 1.0 + 0.5 * y;
  double term = 0.375 * y * y;
  double sum = 0.0;
  for (int k = 2; k < 60 && term != 0.0; ++k) {
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    term *= -(2.0 * k + 1.0) / (2.0 * k + 2.0) * y;
  }
  return sum;
}

template <class Truncated>
double doubling_limit(Truncated&& eval, double tol, const char* what) {
  if (!(tol > 0.0)) throw std::invalid_argument(std::string(what) + ": tol must be > 0");
  long r_max = 64;
  double prev = eval(r_max);
  for (int iter = 0; iter < 20; ++iter) {
    r_max *= 2;
    const double next = eval(r_max);
    if (std::abs(next - prev) < tol) return next;
    prev = next;
  }
  throw std::runtime_error(std::string(what) + ": no convergence to tol within r_max = " +
                           std::to_string(r_max));
}

}  // namespace

double kappa0_star(double nu) {
  require_nu_closed(nu, "kappa0_star");
  return 0.5 * nu - 1.0 + (asin_ratio(nu) + std::sqrt(1.0 - nu * nu)) / kPi;
}

double sound_velocity(double nu) {
  require_nu_half_open(nu, "sound_velocity");
  return 1.0 / std::sqrt(1.0 - nu * nu);
}

double kappa1_star(double nu) {
  require_nu_closed(nu, "kappa1_star");
  return (std::sqrt(1.0 - nu * nu) - (1.0 - nu) * asin_ratio(nu)) / kPi;
}

double mean_activity_correction(double nu) {
  require_nu_half_open(nu, "mean_activity_correction");
  return nu * (1.0 - 2.0 * nu) * kPi / (24.0 * std::sqrt(1.0 - nu * nu));
}

double variance_slope(double nu) {
  require_nu_half_open(nu, "variance_slope");
  return nu * nu / (2.0 * kPi * std::sqrt(1.0 - nu * nu));
}

double skewness_asymptotic(double nu, int L) {
  require_nu_open(nu, "skewness_asymptotic");
  if (L < 2) throw std::invalid_argument("skewness_asymptotic: L must be >= 2");
  return 3.0 * (2.0 - nu) / (nu * std::pow(1.0 - nu * nu, 0.75)) *
         std::sqrt(kPi / (2.0 * std::log(static_cast<double>(L))));
}

double alpha(int n) {
  if (n < 1) throw std::out_of_range("alpha: n must be >= 1");
  if (n == 1) return 1.0 / (2.0 * kPi);
  return (1.0 - std::ldexp(1.0, 1 - 2 * n)) * zeta_odd(n) / std::pow(kPi, 2 * n - 1);
}

double beta(int n, double nu) {
  require_nu_half_open(nu, "beta");
  if (n < 0) throw std::out_of_range("beta: n must be >= 0");
  const double d2 = 1.0 - nu * nu;
  const int m = n / 2;
  const double nu_2m = std::pow(nu, 2 * m);
  if (n % 2 == 0) {
    return nu_2m * half_binomial(HalfOrder::plus_half, m).to_double() /
           (2.0 * std::pow(d2, m - 0.5));
  }
  const double lower = m >= 1 ? half_binomial(HalfOrder::minus_half, m - 1).to_double() : 0.0;
  const double bracket =
      nu * (1.0 - 2.0 * nu) * half_binomial(HalfOrder::minus_half, m).to_double() + d2 * lower;
  return nu_2m * bracket / (4.0 * std::pow(d2, m + 0.5));
}

double kappa_star_bare(int n, double nu) {
  if (n < 2) throw std::out_of_range("kappa_star_bare: n must be >= 2");
  if (n > kMaxCumulantOrder) throw std::out_of_range("kappa_star_bare: n too large");
  return factorial(n) * alpha(n / 2) * beta(n, nu);
}

double kappa_star(int n, double nu) {
  if (n == 0) return kappa0_star(nu);
  if (n == 1) return kappa1_star(nu);
  return kCumulantNormalization * kappa_star_bare(n, nu);
}

double normalization_estimate(int n, double nu, int L) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("normalization_estimate: needs even n >= 4");
  const double bare = kappa_star_bare(n, nu);
  if (bare == 0.0) throw std::domain_error("normalization_estimate: bare coefficient vanishes");
  return critical_cumulant(nu, L, n) / (bare * std::pow(static_cast<double>(L), n - 2));
}

LinearFit variance_log_fit(double nu, std::span<const int> sizes) {
  if (sizes.size() < 2) throw std::invalid_argument("variance_log_fit: need at least two sizes");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int L : sizes) {
    const double x = std::log(static_cast<double>(L));
    const double y = critical_cumulant(nu, L, 2);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(sizes.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("variance_log_fit: sizes must differ");
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

UniversalCoeffs universal_coeffs(double nu, int n_max) {
  require_nu_open(nu, "universal_coeffs");
  if (n_max < 2 || n_max > kMaxCumulantOrder) throw std::out_of_range("universal_coeffs: n_max outside [2, 20]");
  UniversalCoeffs u;
  u.nu = nu;
  u.xi = sound_velocity(nu);
  u.kappa0_star = kappa0_star(nu);
  u.kappa1_star = kappa1_star(nu);
  for (int n = 1; n <= n_max / 2; ++n) u.alpha.push_back(alpha(n));
  for (int n = 0; n <= n_max; ++n) u.beta.push_back(beta(n, nu));
  for (int n = 0; n <= n_max; ++n) u.kappa_star.push_back(kappa_star(n, nu));
  return u;
}

double h_scaling_truncated(double u, long r_max) {
  if (r_max < 16) throw std::invalid_argument("h_scaling_truncated: r_max must be >= 16");
  const double u2 = u * u;
  const double u4 = u2 * u2;
  CompensatedSum<double> acc;
  for (long r = r_max - 1; r >= 0; --r) {
    const double q = kPi * (2.0 * static_cast<double>(r) + 1.0);
    const double root = std::sqrt(u2 + q * q) + q;
    acc += -u4 / (2.0 * q * root * root);
  }
  acc += -u4 * odd_cube_tail(r_max) / (8.0 * kPi * kPi * kPi);
  return acc.value();
}

double h_scaling(double u, double tol) {
  return doubling_limit([u](long r) { return h_scaling_truncated(u, r); }, tol, "h_scaling");
}

double g_scaling_truncated(double u, double nu, long r_max) {
  require_nu_open(nu, "g_scaling");
  if (r_max < 16) throw std::invalid_argument("g_scaling_truncated: r_max must be >= 16");
  constexpr double w = 0.5;
  const double a = nu * (1.0 - 2.0 * nu);
  const double b = nu * nu;
  const double d2 = 1.0 - nu * nu;
  const double d = std::sqrt(d2);
  const double u2 = u * u;
  CompensatedSum<double> acc;
  for (long r = r_max - 1; r >= 0; --r) {
    const double q = kPi * (2.0 * static_cast<double>(r) + 1.0);
    const double y = b * u2 / (d2 * q * q);
    acc += (w * u / (d * q)) * (-0.5 * b * u2 * y + (a * q * q + b * u2) * inv_sqrt_remainder(y));
  }
  acc += 4.0 * w * beta(5, nu) * std::pow(u, 5) * odd_cube_tail(r_max) / (kPi * kPi * kPi);
  return acc.value();
}

double g_scaling(double u, double nu, double tol) {
  return doubling_limit([u, nu](long r) { return g_scaling_truncated(u, nu, r); }, tol, "g_scaling");
}

double scaling_argument(double nu) {
  require_nu_half_open(nu, "scaling_argument");
  return nu / std::sqrt(1.0 - nu * nu);
}

double k0_tilde(double nu, int L, double u) {
  require_nu_open(nu, "k0_tilde");
  require_even_size(L);
  if (u == 0.0) return 0.0;
  const std::vector<double> kappa = critical_cumulants(nu, L, 2);
  const double v = u / L;
  CompensatedSum<double> shift;
  for (int r = 0; r < L / 2; ++r) shift += critical_mode_shift(nu, L, r, v);
  const double dk = 2.0 * shift.value() / L;
  const double l2 = static_cast<double>(L) * L;
  return sound_velocity(nu) * l2 * (dk - v * kappa[0] - 0.5 * v * v * kappa[1]);
}

double k0_scaled(double nu, int L, double u) {
  const double at_critical = cgf(ModelParams::normalized(nu), std::log(nu), L, Sector::even);
  const double l2 = static_cast<double>(L) * L;
  return k0_tilde(nu, L, u) + sound_velocity(nu) * l2 * (at_critical - kappa0_star(nu));
}

std::string to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::finite_L:
      return "finite_L";
    case CurveKind::limit_h:
      return "limit_h";
    case CurveKind::limit_plus_constant:
      return "limit_plus_constant";
  }
  return "unknown";
}

ScalingCurve scaling_curve(double nu, CurveKind kind, std::span<const double> us, std::optional<int> L) {
  ScalingCurve curve;
  curve.nu = nu;
  curve.kind = kind;
  if (kind == CurveKind::finite_L) {
    if (!L) throw std::invalid_argument("scaling_curve: finite_L needs a system size");
    curve.L = L;
  }
  const double theta = scaling_argument(nu);
  for (double u : us) {
    double value = 0.0;
    switch (kind) {
      case CurveKind::finite_L:
        value = k0_tilde(nu, *L, u);
        break;
      case CurveKind::limit_h:
        value = h_scaling(theta * u);
        break;
      case CurveKind::limit_plus_constant:
        value = kPi * kCentralCharge / 6.0 + h_scaling(theta * u);
        break;
    }
    curve.samples.emplace_back(u, value);
  }
  return curve;
}

double max_pairwise_spread(std::span<const ScalingCurve> curves) {
  if (curves.empty()) return 0.0;
  const std::size_t n = curves.front().samples.size();
  for (const ScalingCurve& c : curves)
    if (c.samples.size() != n) throw std::invalid_argument("max_pairwise_spread: curves differ in length");
  double spread = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double lo = curves.front().samples[i].second;
    double hi = lo;
    for (const ScalingCurve& c : curves) {
      if (c.samples[i].first != curves.front().samples[i].first)
        throw std::invalid_argument("max_pairwise_spread: curves use different u grids");
      lo = std::min(lo, c.samples[i].second);
      hi = std::max(hi, c.samples[i].second);
    }
    spread = std::max(spread, hi - lo);
  }
  return spread;
}

}  // namespace dlpad
