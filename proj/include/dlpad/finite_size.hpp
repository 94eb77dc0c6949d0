#pragma once

#include "dlpad/combinatorics.hpp"
#include "dlpad/model.hpp"
#include "dlpad/numeric.hpp"

#include <optional>
#include <vector>

namespace dlpad {

constexpr int kDefaultMaxOrder = 12;
/// Orders above this are evaluated in Real50; double loses ~1e-8 relative
/// accuracy at n = 12 through cancellation in the alternating sums.
constexpr int kDoublePrecisionMaxOrder = 10;
constexpr int kMaxCumulantOrder = kMaxSqrtDerivOrder;

/// Scaled cumulant generating function of the activity,
///   K_L(s) = -(w + mu) + (2/L) sum_{r < L/2} Lambda_{L,r}(s).
double cgf(const ModelParams& p, double s, int L, Sector sector = Sector::even);

/// dK_L/ds, from the analytic derivative of every mode.
double mean_activity(const ModelParams& p, double s, int L, Sector sector = Sector::even);

/// At w = 1/2 the even-sector mode energy is Lambda = sqrt(f(e^s)) / 2 with f
/// quadratic. These are f, f', f'' at the critical value e^s = nu.
template <class Real>
struct CriticalQuadratic {
  Real f, f1, f2;
};

template <class Real>
CriticalQuadratic<Real> critical_quadratic(const Real& nu, int L, int r) {
  using std::cos;
  using std::sin;
  const Real angle = pi_v<Real>() * Real(2 * r + 1) / Real(2 * L);
  const Real c = cos(angle);
  const Real s = sin(angle);
  const Real c2 = c * c;
  const Real s2 = s * s;
  const Real d = 1 - 2 * c2;
  return {4 * s2 * (1 - nu * nu * c2), 4 * s2 * (1 - 2 * nu * c2), 2 * d * d};
}

namespace detail {
void check_critical_args(double nu, int L, int r, int n);
}

/// lambda^(n)_{L,r} = d^n Lambda_{L,r}/ds^n at s_c, via Stirling numbers
/// (derivatives of a function of e^s) composed with the closed derivatives of
/// sqrt of a quadratic.
template <class Real>
Real lambda_derivative_t(const Real& nu, int L, int r, int n) {
  const CriticalQuadratic<Real> q = critical_quadratic<Real>(nu, L, r);
  Real acc = 0;
  Real nu_power = 1;
  for (int j = 1; j <= n; ++j) {
    nu_power *= nu;
    acc += int128_to<Real>(stirling2(n, j)) * nu_power * sqrt_derivative<Real>(j, q.f, q.f1, q.f2);
  }
  return acc / 2;
}

/// Double interface; switches to Real50 internally for n > 10.
double lambda_derivative(double nu, int L, int r, int n);

/// Lambda_{L,r}(s_c + v) - Lambda_{L,r}(s_c) at w = 1/2, written as a
/// difference quotient of f so it stays accurate for tiny v.
double critical_mode_shift(double nu, int L, int r, double v);

struct DispersionPoint {
  int L = 0;
  int r = 0;
  double lambda0 = 0;
  std::vector<double> lambda_n;  // lambda_n[i] = lambda^(i+1)
};

DispersionPoint dispersion_point(double nu, int L, int r, int n_max = kDefaultMaxOrder);

/// kappa^c_n(L) = (2/L) sum_{r < L/2} lambda^(n)_{L,r} (even sector, w = 1/2).
double critical_cumulant(double nu, int L, int n);

/// kappa^c_1 .. kappa^c_{n_max} in one pass over the modes.
std::vector<double> critical_cumulants(double nu, int L, int n_max);

/// Radius of convergence in x of K_L(s_c + x): distance to the nearest complex
/// zero of f(nu e^x) over all modes. Infinite for nu = 0.
double expansion_radius(double nu, int L);

/// sum_{n=1}^{n_max} kappa^c_n(L) x^n / n!. Rejects |x| >= expansion_radius.
double critical_cgf_expansion(double nu, int L, double x, int n_max);

struct CumulantReport {
  double nu = 0;
  int L = 0;
  Sector sector = Sector::even;
  int order = 1;
  double kappa_c = 0;
  std::optional<double> kappa_star;
  std::optional<double> residual;  // set only when an oracle value is attached
};

}  // namespace dlpad
