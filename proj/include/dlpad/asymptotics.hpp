#pragma once

#include "dlpad/finite_size.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dlpad {

/// Ising universality class.
constexpr double kCentralCharge = 0.5;

/// kappa*_n = kCumulantNormalization * n! alpha_{n/2} beta_n for n >= 2.
/// The bare product n! alpha beta_n falls short of the exact finite-size
/// sums by exactly this factor for every order checked; see kappa_star_bare.
constexpr double kCumulantNormalization = 2.0;

/// nu/2 - 1 + (asin(nu)/nu + sqrt(1 - nu^2))/pi, continuous on [0, 1].
double kappa0_star(double nu);

/// xi = 1/sqrt(1 - nu^2), nu in [0, 1).
double sound_velocity(double nu);

/// Limit of the critical mean activity,
///   (sqrt(1 - nu^2) - (1 - nu) asin(nu)/nu) / pi,  nu in [0, 1].
double kappa1_star(double nu);

/// Coefficient of 1/L^2 in the critical mean activity,
///   nu (1 - 2 nu) pi / (24 sqrt(1 - nu^2)).
double mean_activity_correction(double nu);

/// Growth rate of kappa^c_2(L) in ln L: nu^2 / (2 pi sqrt(1 - nu^2)).
double variance_slope(double nu);

/// Leading skewness 3(2 - nu) / (nu (1 - nu^2)^(3/4)) * sqrt(pi / (2 ln L)).
double skewness_asymptotic(double nu, int L);

/// alpha_1 = 1/(2 pi); alpha_n = (1 - 2^(1-2n)) zeta(2n - 1) / pi^(2n-1).
double alpha(int n);

/// beta_{2m} = nu^{2m} C(1/2, m) / (2 (1-nu^2)^(m-1/2)),
/// beta_{2m+1} = nu^{2m} [nu(1-2nu) C(-1/2, m) + (1-nu^2) C(-1/2, m-1)]
///               / (4 (1-nu^2)^(m+1/2)),  with C(-1/2, -1) = 0.
double beta(int n, double nu);

/// n! alpha_{floor(n/2)} beta_n, n >= 2.
double kappa_star_bare(int n, double nu);

/// Asymptotic coefficient of order n. n = 0 and n = 1 give kappa0_star and
/// kappa1_star; n >= 2 gives kCumulantNormalization * kappa_star_bare.
/// Even n >= 4: kappa^c_n(L) ~ kappa*_n L^(n-2). n = 2, 3: ~ kappa*_n ln L.
/// Odd n >= 5: ~ kappa*_n L^(n-3).
double kappa_star(int n, double nu);

/// kappa^c_n(L) / (kappa_star_bare(n) L^(n-2)) for even n >= 4: a finite-L
/// estimate of the normalization factor.
double normalization_estimate(int n, double nu, int L);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
};

/// Least-squares fit of kappa^c_2(L) against ln L.
LinearFit variance_log_fit(double nu, std::span<const int> sizes);

struct UniversalCoeffs {
  double nu = 0;
  double xi = 0;
  double c = kCentralCharge;
  double kappa0_star = 0;
  double kappa1_star = 0;
  std::vector<double> alpha;       // alpha[i] = alpha_{i+1}
  std::vector<double> beta;        // beta[i] = beta_i
  std::vector<double> kappa_star;  // kappa_star[i] = kappa*_i, i >= 2 meaningful
};

UniversalCoeffs universal_coeffs(double nu, int n_max = kDefaultMaxOrder);

/// h(u) = sum_r [sqrt(u^2 + q_r^2) - q_r - u^2/(2 q_r)], q_r = pi(2r+1).
/// Truncated at r_max, with the u^4 tail added in closed form.
double h_scaling_truncated(double u, long r_max);

/// h(u) to absolute accuracy tol (r_max doubled until stable).
double h_scaling(double u, double tol = 1e-12);

/// Odd-order companion g(u) at the w = 1/2 normalization, nu in (0, 1).
double g_scaling_truncated(double u, double nu, long r_max);
double g_scaling(double u, double nu, double tol = 1e-12);

/// theta = sqrt(xi^2 - 1) = nu / sqrt(1 - nu^2), the argument rescaling of h.
double scaling_argument(double nu);

/// L^2 K~_0(L, u) = xi L^2 [K_L(s_c + u/L) - K_L(s_c) - (u/L) kappa^c_1 - (u^2/2L^2) kappa^c_2].
/// Exactly 0 at u = 0. Limit: h(theta u).
double k0_tilde(double nu, int L, double u);

/// Same with kappa*_0 in place of K_L(s_c). Limit: pi c/6 + h(theta u).
double k0_scaled(double nu, int L, double u);

enum class CurveKind { finite_L, limit_h, limit_plus_constant };

std::string to_string(CurveKind kind);

struct ScalingCurve {
  double nu = 0;
  CurveKind kind = CurveKind::finite_L;
  std::optional<int> L;  // finite_L only
  std::vector<std::pair<double, double>> samples;
};

/// finite_L: L^2 K~_0(L, u); limit_h: h(theta u); limit_plus_constant:
/// pi c/6 + h(theta u), the limit of k0_scaled.
ScalingCurve scaling_curve(double nu, CurveKind kind, std::span<const double> us,
                           std::optional<int> L = std::nullopt);

/// Largest pairwise difference between finite-L curves on a common u grid.
double max_pairwise_spread(std::span<const ScalingCurve> curves);

}  // namespace dlpad
