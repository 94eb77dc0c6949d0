// Acceptance suite: one line per criterion, tolerances pinned below.
//   acceptance            run everything
//   acceptance NAME...    run the named criteria
#include "dlpad/asymptotics.hpp"
#include "dlpad/combinatorics.hpp"
#include "dlpad/finite_size.hpp"
#include "dlpad/mc.hpp"
#include "dlpad/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace dlpad;

namespace {

constexpr double kOracleTol = 1e-10;
constexpr double kConservationTol = 1e-12;
constexpr double kDerivativeRelTol = 1e-5;
constexpr double kPhiTol = 1e-12;
constexpr double kPhiRatioSpread = 0.05;  // relative spread of (exact - asymptotic) N^4
constexpr double kCriticalCgfTolCoarse = 1e-2;  // L = 1024
constexpr double kCriticalCgfTolFine = 1e-4;    // L = 2^14
constexpr double kMeanActivityTol = 1e-2;        // L = 2048
constexpr double kSlopeTol = 2e-2;
constexpr double kCumulantTol = 1e-2;     // even orders at L = 2^12
constexpr double kCollapseSpread = 1e-3;
constexpr double kCollapseLimitTol = 5e-3;  // |u| = 2, largest L
constexpr double kZMax = 3.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Outcome oracle_equivalence() {
  // mode-sum CGF and activity vs exact diagonalization and finite differences
  double worst_ed = 0, worst_fd = 0;
  int cases = 0;
  for (double nu : {0.3, 0.5, 0.9}) {
    const ModelParams p = ModelParams::normalized(nu);
    const double sc = critical_point(p);
    for (int L : {4, 6, 8, 10})
      for (double s : {0.0, sc, sc - 0.2, sc + 0.2})
        for (Sector sec : {Sector::even, Sector::odd}) {
          worst_ed = std::max(worst_ed, std::abs(cgf_from_ed(p, s, L, sec) - cgf(p, s, L, sec)));
          worst_fd = std::max(worst_fd, std::abs(fd_cumulant(p, L, s, 1, sec).value - mean_activity(p, s, L, sec)));
          ++cases;
        }
  }
  return {worst_ed < kOracleTol && worst_fd < kOracleTol,
          fmt("%d cases, max |ED - K| = %.2e, max |FD - A| = %.2e (tol %.0e)", cases, worst_ed, worst_fd, kOracleTol)};
}

Outcome probability_conservation() {
  double worst = 0, worst_ed = 0;
  int cases = 0;
  for (auto [w, mu] : {std::pair{0.5, 0.35}, std::pair{0.5, 0.05}, std::pair{1.0, 2.0}, std::pair{3.0, 0.7}})
    for (int L = 2; L <= 512; L *= 2) {
      worst = std::max(worst, std::abs(cgf(ModelParams::from_rates(w, mu), 0.0, L)));
      ++cases;
      if (L <= 8) worst_ed = std::max(worst_ed, std::abs(cgf_from_ed(ModelParams::from_rates(w, mu), 0.0, L, Sector::even)));
    }
  return {worst < kConservationTol && worst_ed < kConservationTol,
          fmt("%d cases, max |K(0)| = %.2e, ED %.2e (tol %.0e)", cases, worst, worst_ed, kConservationTol)};
}

Outcome closed_form_derivatives() {
  double worst = 0;
  int cases = 0;
  for (double nu : {0.3, 0.5, 0.9}) {
    const ModelParams p = ModelParams::normalized(nu);
    const double sc = critical_point(p);
    for (int L : {2, 4, 8, 12, 16})
      for (int r = 0; r < L / 2; ++r)
        for (int n = 1; n <= 6; ++n) {
          const double analytic = lambda_derivative(nu, L, r, n);
          const double fd = fd_mode_derivative(p, L, r, sc, n, Sector::even, 1e-9).value;
          // floor keeps near-zero derivatives from inflating the relative error
          const double err = std::abs(analytic - fd) / std::max(std::abs(fd), 1e-3);
          worst = std::max(worst, err);
          ++cases;
        }
  }
  return {worst < kDerivativeRelTol, fmt("%d cases, max rel err %.2e (tol %.0e)", cases, worst, kDerivativeRelTol)};
}

Outcome phi_sums() {
  double worst = 0;
  for (int m = 0; m <= 10; ++m)
    for (long N = 1; N <= 64; ++N) {
      long double acc = 0;
      for (long k = 0; k < N; ++k) {
        const long double a = std::numbers::pi_v<long double> * (2 * k + 1) / (4.0L * N);
        acc += std::sin(a) * std::pow(std::cos(a), 2 * m);
      }
      worst = std::max(worst, std::abs(phi_exact(m, N) - static_cast<double>(2 * acc / N)));
    }
  // next-order remainder is O(N^-4)
  double spread = 0;
  for (int m = 0; m <= 3; ++m) {
    std::vector<double> c;
    for (long N : {64L, 128L, 256L}) c.push_back((phi_exact(m, N) - phi_asymptotic(m, N)) * std::pow(double(N), 4));
    const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    spread = std::max(spread, (*hi - *lo) / std::abs(*hi));
  }
  return {worst < kPhiTol && spread < kPhiRatioSpread,
          fmt("max |closed - sum| = %.2e (tol %.0e), N^4 remainder spread %.3f (tol %.2f)", worst, kPhiTol, spread,
              kPhiRatioSpread)};
}

Outcome critical_cgf() {
  const double target = std::numbers::pi * kCentralCharge / 6;
  double coarse = 0, fine = 0;
  for (double nu : {0.3, 0.9}) {
    const ModelParams p = ModelParams::normalized(nu);
    auto err = [&](int L) {
      const double v = double(L) * L * (cgf(p, critical_point(p), L) - kappa0_star(nu)) * sound_velocity(nu);
      return rel(v, target);
    };
    coarse = std::max(coarse, err(1024));
    fine = std::max(fine, err(1 << 14));
  }
  return {coarse < kCriticalCgfTolCoarse && fine < kCriticalCgfTolFine,
          fmt("rel err %.2e at L=1024 (tol %.0e), %.2e at L=16384 (tol %.0e)", coarse, kCriticalCgfTolCoarse, fine,
              kCriticalCgfTolFine)};
}

Outcome critical_mean_activity() {
  double worst = 0;
  for (double nu : {0.3, 0.9}) {
    const int L = 2048;
    const double v = double(L) * L * (critical_cumulant(nu, L, 1) - kappa1_star(nu));
    worst = std::max(worst, rel(v, mean_activity_correction(nu)));
  }
  return {worst < kMeanActivityTol, fmt("rel err of 1/L^2 coefficient %.2e at L=2048 (tol %.0e)", worst, kMeanActivityTol)};
}

Outcome variance_slope_fit() {
  std::vector<int> sizes;
  for (int k = 8; k <= 16; ++k) sizes.push_back(1 << k);
  double worst = 0;
  for (double nu : {0.3, 0.5, 0.9}) {
    const LinearFit fit = variance_log_fit(nu, sizes);
    worst = std::max(worst, rel(fit.slope, variance_slope(nu)));
  }
  return {worst < kSlopeTol, fmt("slope rel err %.2e over L=2^8..2^16 (tol %.0e)", worst, kSlopeTol)};
}

Outcome cumulant_asymptotics() {
  const double nu = 0.9;
  bool ok = true;
  std::string detail;
  for (int n : {4, 6}) {
    const auto ratio = [&](int L) { return critical_cumulant(nu, L, n) / std::pow(double(L), n - 2); };
    const double e1 = rel(ratio(1 << 10), kappa_star(n, nu));
    const double e2 = rel(ratio(1 << 12), kappa_star(n, nu));
    ok = ok && e2 < kCumulantTol && e2 < e1;
    detail += fmt("n=%d rel err %.2e -> %.2e; ", n, e1, e2);
  }
  for (int n : {5, 7}) {
    double prev1 = INFINITY, prev2 = INFINITY;
    for (int L : {256, 1024, 4096}) {
      const double k = std::abs(critical_cumulant(nu, L, n));
      const double r1 = k / std::pow(double(L), n - 1), r2 = k / std::pow(double(L), n - 2);
      ok = ok && r1 < prev1 && r2 < prev2;
      prev1 = r1;
      prev2 = r2;
    }
    const double e = rel(critical_cumulant(nu, 4096, n) / std::pow(4096.0, n - 3), kappa_star(n, nu));
    ok = ok && e < kCumulantTol;
    detail += fmt("n=%d |k|/L^%d=%.1e, |k|/L^%d=%.1e decreasing, k/L^%d rel err %.2e; ", n, n - 1, prev1, n - 2, prev2,
                  n - 3, e);
  }
  detail += fmt("(tol %.0e)", kCumulantTol);
  return {ok, detail};
}

Outcome scaling_collapse() {
  const double nu = 0.9;
  std::vector<double> us;
  for (int i = 0; i <= 12; ++i) us.push_back(-3.0 + 0.5 * i);
  std::vector<ScalingCurve> curves;
  for (int L : {64, 128, 256}) curves.push_back(scaling_curve(nu, CurveKind::finite_L, us, L));
  const double spread = max_pairwise_spread(curves);
  const double theta = scaling_argument(nu);
  double limit_err = 0;
  for (double u : {-2.0, 2.0}) limit_err = std::max(limit_err, rel(k0_tilde(nu, 256, u), h_scaling(theta * u)));
  return {spread < kCollapseSpread && limit_err < kCollapseLimitTol,
          fmt("spread %.3f over L=64,128,256 (tol %.0e); |u|=2 at L=256 off h by %.1f%% (tol %.1f%%); "
              "u=+2: %.3f/%.3f/%.3f vs h=%.4f",
              spread, kCollapseSpread, 100 * limit_err, 100 * kCollapseLimitTol, k0_tilde(nu, 64, 2.0),
              k0_tilde(nu, 128, 2.0), k0_tilde(nu, 256, 2.0), h_scaling(2 * theta))};
}

Outcome monte_carlo() {
  const ModelParams p = ModelParams::normalized(0.5);
  const int L = 64;
  const SimulationResult r = simulate(p, L, 1e4, 1, 16);
  const double z_rho = (r.density.mean - stationary_density(p)) / r.density.std_error;
  const double z_act = (r.activity_rate.mean - mean_activity(p, 0.0, L)) / r.activity_rate.std_error;
  bool parity = true;
  for (const auto& st : r.replicas) parity = parity && st.initial_parity == st.final_parity;
  return {std::abs(z_rho) <= kZMax && std::abs(z_act) <= kZMax && parity,
          fmt("rho %.6f +- %.6f (theory %.6f, z %.2f), activity z %.2f, parity %s (|z| <= %.0f)", r.density.mean,
              r.density.std_error, stationary_density(p), z_rho, z_act, parity ? "conserved" : "BROKEN", kZMax)};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {"oracle_equivalence", oracle_equivalence},
      {"probability_conservation", probability_conservation},
      {"closed_form_derivatives", closed_form_derivatives},
      {"phi_sums", phi_sums},
      {"critical_cgf", critical_cgf},
      {"critical_mean_activity", critical_mean_activity},
      {"variance_slope_fit", variance_slope_fit},
      {"cumulant_asymptotics", cumulant_asymptotics},
      {"scaling_collapse", scaling_collapse},
      {"monte_carlo", monte_carlo},
  };
  std::vector<std::string> wanted(argv + 1, argv + argc);
  int failures = 0, ran = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.name) == wanted.end()) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no such criterion\n");
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
