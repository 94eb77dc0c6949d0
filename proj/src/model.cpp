#include "dlpad/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dlpad {

std::string to_string(Sector sector) { return sector == Sector::even ? "even" : "odd"; }

Sector parse_sector(const std::string& text) {
  if (text == "even" || text == "+") return Sector::even;
  if (text == "odd" || text == "-") return Sector::odd;
  throw std::invalid_argument("unknown sector '" + text + "' (expected even|odd)");
}

ModelParams ModelParams::from_rates(double w, double mu) {
  if (!(w > 0.0) || !std::isfinite(w))
    throw std::invalid_argument("jump rate w must be finite and > 0");
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw std::invalid_argument("deposition rate mu must be finite and > 0");
  return ModelParams(w, mu);
}

ModelParams ModelParams::normalized(double nu) {
  if (!(nu >= 0.0 && nu < 1.0))
    throw std::invalid_argument("normalized parameters need nu in [0, 1)");
  return ModelParams(0.5, 0.5 * (1.0 - nu));
}

TrigPair trig_pair(int L, int r) {
  if (L < 2) throw std::invalid_argument("trig_pair: L must be >= 2");
  if (r < 0 || r > L / 2 - 1) throw std::out_of_range("trig_pair: r outside [0, L/2 - 1]");
  const double angle = std::numbers::pi * (2 * r + 1) / (2.0 * L);
  return {std::cos(angle), std::sin(angle)};
}

void require_even_size(int L) {
  if (L < 2 || L % 2 != 0)
    throw std::invalid_argument("system size L must be even and >= 2, got " + std::to_string(L));
}

namespace detail {

void check_mode_index(int L, int r) {
  if (r < 0 || r >= L)
    throw std::out_of_range("mode index r = " + std::to_string(r) + " outside [0, L-1]");
}

}  // namespace detail

double critical_point(const ModelParams& p) {
  if (p.mu() >= p.w())
    throw std::domain_error("no finite critical point: requires mu < w (nu > 0)");
  return std::log1p(-p.mu() / p.w());
}

double stationary_density(const ModelParams& p) {
  return 1.0 / (1.0 + std::sqrt(1.0 + 2.0 * p.w() / p.mu()));
}

TiltedParams tilted_params(const ModelParams& p, double s) {
  const double w = p.w();
  const double mu = p.mu();
  const double ws = w * std::exp(s);
  TiltedParams t;
  t.s = s;
  t.J = ws + mu;
  t.gamma = std::sqrt(mu * (2.0 * ws + mu)) / t.J;
  t.h = w / t.J;
  t.z = std::sqrt(mu / (2.0 * ws + mu));
  return t;
}

double dispersion(const ModelParams& p, double s, int L, int r, Sector sector) {
  return dispersion_t<double>(p.w(), p.mu(), s, L, r, sector);
}

double critical_dispersion(double nu, int L, int r) {
  if (!(nu >= 0.0 && nu <= 1.0)) throw std::invalid_argument("critical_dispersion: nu outside [0, 1]");
  require_even_size(L);
  const TrigPair t = trig_pair(L, r);
  return t.s * std::sqrt(1.0 - nu * nu * t.c * t.c);
}

}  // namespace dlpad
