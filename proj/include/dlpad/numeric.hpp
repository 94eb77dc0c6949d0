#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <limits>
#include <vector>

namespace dlpad {

/// 50 significant decimal digits; used wherever double cancels too much.
using Real50 = boost::multiprecision::cpp_bin_float_50;

template <class Real>
inline Real pi_v() {
  return boost::math::constants::pi<Real>();
}

/// Neumaier's variant of Kahan summation. Deterministic for a fixed
/// insertion order.
template <class Real = double>
class CompensatedSum {
 public:
  void add(const Real& x) {
    using std::abs;
    const Real t = sum_ + x;
    if (abs(sum_) >= abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(const Real& x) {
    add(x);
    return *this;
  }
  Real value() const { return sum_ + comp_; }

 private:
  Real sum_ = Real(0);
  Real comp_ = Real(0);
};

struct DerivativeEstimate {
  double value = 0.0;
  double error = 0.0;  // magnitude of the last Richardson correction
};

/// n-th derivative of f at x0 by central differences
///   D(h) = h^-n sum_j (-1)^j C(n,j) f(x0 + (n/2 - j) h),
/// whose error expands in even powers of h, followed by Richardson
/// extrapolation over h, h/2, h/4, ...
template <class Real, class F>
DerivativeEstimate richardson_derivative(F&& f, const Real& x0, int n, const Real& h0,
                                         int levels = 5) {
  std::vector<Real> binom(n + 1);
  binom[0] = 1;
  for (int j = 1; j <= n; ++j) binom[j] = binom[j - 1] * Real(n - j + 1) / Real(j);

  auto central = [&](const Real& h) {
    Real acc = 0;
    for (int j = 0; j <= n; ++j) {
      const Real offset = (Real(n) / 2 - Real(j)) * h;
      const Real term = binom[j] * f(x0 + offset);
      acc += (j % 2 == 0) ? term : Real(-term);
    }
    Real hn = 1;
    for (int j = 0; j < n; ++j) hn *= h;
    return Real(acc / hn);
  };

  // tableau[i][k]: k-fold extrapolated estimate from step h0 / 2^i.
  std::vector<std::vector<Real>> tableau(levels);
  Real h = h0;
  for (int i = 0; i < levels; ++i, h /= 2) {
    tableau[i].push_back(central(h));
    Real factor = 4;
    for (int k = 1; k <= i; ++k, factor *= 4) {
      tableau[i].push_back((factor * tableau[i][k - 1] - tableau[i - 1][k - 1]) /
                           (factor - 1));
    }
  }
  const Real best = tableau[levels - 1][levels - 1];
  const Real prev = levels > 1 ? tableau[levels - 1][levels - 2] : best;
  using std::abs;
  return {static_cast<double>(best), static_cast<double>(abs(best - prev))};
}

/// Step rule for an order-n difference in type Real: eps^(1/(n+2)) * scale.
template <class Real>
Real optimal_fd_step(int n, const Real& scale) {
  using std::pow;
  const Real eps = std::numeric_limits<Real>::epsilon();
  return pow(eps, Real(1) / Real(n + 2)) * scale;
}

}  // namespace dlpad
