#pragma once

#include "dlpad/numeric.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dlpad {

/// Particle-number parity sector. Pair creation and annihilation never
/// change it.
enum class Sector { even, odd };

std::string to_string(Sector sector);
Sector parse_sector(const std::string& text);

/// Rates of the pair annihilation / deposition process on a ring.
///   w  - jump rate, > 0
///   mu - pair deposition rate, > 0
class ModelParams {
 public:
  static ModelParams from_rates(double w, double mu);
  /// w = 1/2, mu = (1 - nu)/2, nu in [0, 1).
  static ModelParams normalized(double nu);

  double w() const { return w_; }
  double mu() const { return mu_; }
  /// Complementary deposition rate 1 - mu/w.
  double nu() const { return 1.0 - mu_ / w_; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  ModelParams(double w, double mu) : w_(w), mu_(mu) {}
  double w_;
  double mu_;
};

/// Parameters of the transverse-field XY chain equivalent to the tilted
/// generator at tilt s.
struct TiltedParams {
  double J = 0;      // w e^s + mu
  double gamma = 0;  // anisotropy
  double h = 0;      // transverse field
  double z = 0;      // similarity-transform parameter
  double s = 0;
};

/// cos and sin of pi (2r+1) / (2L).
struct TrigPair {
  double c = 0;
  double s = 0;
};

TrigPair trig_pair(int L, int r);

void require_even_size(int L);

/// ln(1 - mu/w). Throws std::domain_error when mu >= w.
double critical_point(const ModelParams& p);

/// Density of the reversible Bernoulli product measure, in (0, 1/2).
double stationary_density(const ModelParams& p);

TiltedParams tilted_params(const ModelParams& p, double s);

/// Single-mode energy Lambda^{+/-}_{L,r}(s). L must be even; r is accepted on
/// the full zone 0 <= r <= L-1 so that reflection symmetries can be checked,
/// although the generating function only sums r < L/2. The odd-sector r = 0
/// mode is the unpaired zero mode with energy J_s.
double dispersion(const ModelParams& p, double s, int L, int r, Sector sector);

/// Even-sector energy at the critical tilt with w = 1/2:
///   s_{L,r} sqrt(1 - nu^2 c_{L,r}^2),  nu in [0, 1].
double critical_dispersion(double nu, int L, int r);

namespace detail {

void check_mode_index(int L, int r);

template <class Real>
Real dispersion_impl(const Real& w, const Real& mu, const Real& s, int L, int r,
                     Sector sector) {
  using std::cos;
  using std::exp;
  using std::sin;
  using std::sqrt;
  const Real ws = w * exp(s);
  const Real J = ws + mu;
  if (sector == Sector::odd && r == 0) return J;
  const Real theta = sector == Sector::even ? pi_v<Real>() * Real(2 * r + 1) / Real(L)
                                            : 2 * pi_v<Real>() * Real(r) / Real(L);
  const Real C = cos(theta);
  const Real S = sin(theta);
  const Real a = w - J * C;
  return sqrt(a * a + (2 * ws + mu) * mu * S * S);
}

}  // namespace detail

/// Dispersion in an arbitrary floating type; used by the finite-difference
/// oracles. Performs the same argument validation as dispersion().
template <class Real>
Real dispersion_t(const Real& w, const Real& mu, const Real& s, int L, int r, Sector sector) {
  require_even_size(L);
  detail::check_mode_index(L, r);
  return detail::dispersion_impl(w, mu, s, L, r, sector);
}

}  // namespace dlpad
