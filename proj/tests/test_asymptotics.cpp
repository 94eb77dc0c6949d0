#include "dlpad/asymptotics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace dlpad;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}
}  // namespace

TEST_CASE("ground-state constants") {
  CHECK(kappa0_star(0.0) == Approx(2 / kPi - 1).epsilon(1e-14));
  CHECK(kappa0_star(1.0) == Approx(0.0).epsilon(1e-14));
  CHECK(kappa0_star(1e-6) == Approx(kappa0_star(0.0)).epsilon(1e-5));
  CHECK(sound_velocity(0.0) == 1.0);
  CHECK(sound_velocity(0.6) == Approx(1.25));
  CHECK_THROWS_AS(sound_velocity(1.0), std::invalid_argument);
  CHECK_THROWS_AS(kappa0_star(1.1), std::invalid_argument);
}

TEST_CASE("critical mean activity limit") {
  CHECK(kappa1_star(0.5) == Approx(0.1089978).epsilon(1e-6));
  CHECK(kappa1_star(0.9) == Approx(0.0991443).epsilon(1e-6));
  CHECK(std::abs(kappa1_star(0.0)) < 1e-15);
  CHECK(std::abs(kappa1_star(1e-7)) < 1e-6);
}

TEST_CASE("closed constants match Richardson-extrapolated exact sums") {
  // K_L = k + a/L^2 + b/L^4 + ...: two Richardson levels over L, 2L, 4L
  for (double nu : {0.3, 0.9}) {
    const ModelParams p = ModelParams::normalized(nu);
    const double sc = std::log(nu);
    auto extrapolate = [](double f1, double f2, double f4) {
      const double g1 = (4 * f2 - f1) / 3;
      const double g2 = (4 * f4 - f2) / 3;
      return (16 * g2 - g1) / 15;
    };
    const double k0 = extrapolate(cgf(p, sc, 256), cgf(p, sc, 512), cgf(p, sc, 1024));
    CHECK(std::abs(k0 - kappa0_star(nu)) < 1e-8);
    const double k1 = extrapolate(critical_cumulant(nu, 256, 1), critical_cumulant(nu, 512, 1),
                                  critical_cumulant(nu, 1024, 1));
    CHECK(std::abs(k1 - kappa1_star(nu)) < 1e-8);
  }
}

TEST_CASE("variance and skewness leading forms") {
  CHECK(variance_slope(0.0) == 0.0);
  CHECK(variance_slope(0.9) == Approx(0.2957524).epsilon(1e-6));
  CHECK(mean_activity_correction(0.5) == 0.0);
  double prev = INFINITY;
  for (int L : {16, 256, 4096, 1 << 20}) {
    const double s = skewness_asymptotic(0.6, L);
    CHECK(s > 0.0);
    CHECK(s < prev);
    prev = s;
  }
  CHECK_THROWS_AS(skewness_asymptotic(0.0, 64), std::invalid_argument);
}

TEST_CASE("alpha and beta") {
  CHECK(alpha(1) == Approx(0.1591549).epsilon(1e-7));
  CHECK(alpha(2) == Approx((1 - 0.125) * 1.2020569031595942 / std::pow(kPi, 3)).epsilon(1e-14));
  CHECK_THROWS_AS(alpha(0), std::out_of_range);
  for (double nu : {0.2, 0.7}) {
    const double d = std::sqrt(1 - nu * nu);
    CHECK(beta(0, nu) == Approx(d / 2));
    CHECK(beta(1, nu) == Approx(nu * (1 - 2 * nu) / (4 * d)));
    CHECK(beta(2, nu) == Approx(nu * nu / (4 * d)));
    CHECK(beta(4, nu) == Approx(-std::pow(nu, 4) / (16 * std::pow(1 - nu * nu, 1.5))));
  }
}

TEST_CASE("kappa star: normalization and signs") {
  for (double nu : {0.3, 0.9}) {
    CHECK(kappa_star(2, nu) == Approx(variance_slope(nu)).epsilon(1e-14));
    CHECK(kappa_star(4, nu) == Approx(2 * 24 * alpha(2) * beta(4, nu)).epsilon(1e-14));
    for (int n = 2; n <= 9; ++n) {
      // sign of kappa*_{2n} is that of C(1/2, n): (-1)^(n+1)
      const double k = kappa_star(2 * n, nu);
      CHECK((k > 0) == (n % 2 == 1));
    }
  }
  for (int n : {4, 6})
    CHECK(normalization_estimate(n, 0.9, 4096) == Approx(kCumulantNormalization).epsilon(1e-3));
  const std::vector<int> sizes{1 << 10, 1 << 12, 1 << 14};
  CHECK(variance_log_fit(0.9, sizes).slope == Approx(variance_slope(0.9)).epsilon(1e-3));
}

TEST_CASE("universal coefficient bundle") {
  const UniversalCoeffs u = universal_coeffs(0.8, 8);
  CHECK(u.c == 0.5);
  CHECK(u.xi == Approx(1 / 0.6));
  CHECK(u.alpha.size() == 4);
  CHECK(u.beta.size() == 9);
  CHECK(u.kappa_star[4] == kappa_star(4, 0.8));
  CHECK(u.kappa_star[1] == kappa1_star(0.8));
}

TEST_CASE("h scaling function") {
  CHECK(h_scaling(0.0) == 0.0);
  for (double u : {0.3, 1.7, 6.0}) CHECK(h_scaling(u) == h_scaling(-u));
  const double u = 0.05;
  CHECK(h_scaling(u) == Approx(-0.0042402 * std::pow(u, 4)).epsilon(1e-3));
  CHECK(-7 * 1.2020569031595942 / (64 * std::pow(kPi, 3)) == Approx(-0.0042402).epsilon(1e-4));
  // doubling the cut-off moves the truncated sum by less than the tolerance
  for (double v : {1.0, 5.0}) CHECK(std::abs(h_scaling_truncated(v, 4096) - h_scaling_truncated(v, 8192)) < 1e-12);
  CHECK(h_scaling(2 * scaling_argument(0.9)) == Approx(-0.7235394).epsilon(1e-6));
}

TEST_CASE("h carries the even asymptotic cumulants") {
  const double nu = 0.7;
  const double xi = sound_velocity(nu);
  const double theta = scaling_argument(nu);
  const double u = 0.15;
  double series = 0;
  for (int n = 2; n <= 5; ++n) series += kappa_star(2 * n, nu) * std::pow(u, 2 * n) / factorial(2 * n);
  CHECK(h_scaling(theta * u) == Approx(xi * series).epsilon(1e-6));
}

TEST_CASE("g scaling function") {
  CHECK(g_scaling(0.0, 0.5) == 0.0);
  for (double u : {0.4, 2.5}) CHECK(g_scaling(-u, 0.6) == Approx(-g_scaling(u, 0.6)).epsilon(1e-13));
  for (double nu : {0.3, 0.5, 0.8}) {
    const double u = 0.1;
    double series = 0;
    for (int n = 2; n <= 4; ++n) series += kappa_star(2 * n + 1, nu) * std::pow(u, 2 * n + 1) / factorial(2 * n + 1);
    CHECK(g_scaling(u, nu) == Approx(series).epsilon(1e-6));
  }
  CHECK_THROWS_AS(g_scaling(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("scaled near-critical generating function") {
  CHECK(k0_tilde(0.9, 64, 0.0) == 0.0);
  CHECK(k0_scaled(0.9, 1024, 0.0) == Approx(kPi / 12).epsilon(1e-2));
  const double nu = 0.9;
  const double theta = scaling_argument(nu);
  for (double u : {-2.0, 2.0}) {
    double prev = INFINITY;
    for (int L = 64; L <= 1024; L *= 2) {
      const double step = std::abs(k0_tilde(nu, L, u) - k0_tilde(nu, 2 * L, u));
      CHECK(step < prev);
      prev = step;
    }
  }
  // the u -> -u symmetric part converges to h(theta u)
  const double even = 0.5 * (k0_tilde(nu, 2048, 2.0) + k0_tilde(nu, 2048, -2.0));
  CHECK(even == Approx(h_scaling(2 * theta)).epsilon(1e-3));
}

TEST_CASE("scaling curves") {
  const std::vector<double> us{-1.0, 0.0, 1.0};
  const ScalingCurve a = scaling_curve(0.9, CurveKind::finite_L, us, 64);
  const ScalingCurve b = scaling_curve(0.9, CurveKind::finite_L, us, 128);
  const ScalingCurve h = scaling_curve(0.9, CurveKind::limit_h, us);
  const ScalingCurve hc = scaling_curve(0.9, CurveKind::limit_plus_constant, us);
  CHECK(a.samples.size() == 3);
  CHECK(a.samples[1].second == 0.0);
  CHECK(h.samples[0].second == h.samples[2].second);
  CHECK(hc.samples[1].second == Approx(kPi / 12));
  const std::vector<ScalingCurve> pair{a, b};
  CHECK(max_pairwise_spread(pair) > 0.0);
  CHECK(to_string(CurveKind::limit_h) == "limit_h");
  CHECK_THROWS_AS(scaling_curve(0.9, CurveKind::finite_L, us), std::invalid_argument);
}
