#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlpad {

__extension__ using Int128 = __int128;
__extension__ using UInt128 = unsigned __int128;

std::string to_string(Int128 value);

/// Converts without going through long double, so Real50 keeps every bit.
template <class Real>
Real int128_to(Int128 v) {
  const bool negative = v < 0;
  const UInt128 mag = negative ? static_cast<UInt128>(-(v + 1)) + 1u : static_cast<UInt128>(v);
  const auto hi = static_cast<std::uint64_t>(mag >> 64);
  const auto lo = static_cast<std::uint64_t>(mag);
  Real out = Real(hi);
  out *= Real(18446744073709551616.0);  // 2^64, exact in binary types
  out += Real(lo);
  return negative ? Real(-out) : out;
}

/// Exact rational over 128-bit integers, always reduced with den > 0.
/// Arithmetic throws std::overflow_error instead of wrapping.
class Rational {
 public:
  Rational(Int128 num = 0, Int128 den = 1);

  Int128 num() const { return num_; }
  Int128 den() const { return den_; }

  double to_double() const { return int128_to<double>(num_) / int128_to<double>(den_); }
  template <class Real>
  Real to() const {
    return int128_to<Real>(num_) / int128_to<Real>(den_);
  }

  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }
  friend bool operator==(const Rational&, const Rational&) = default;

  std::string str() const;

 private:
  Int128 num_;
  Int128 den_;
};

constexpr int kMaxStirlingOrder = 30;
constexpr int kMaxSqrtDerivOrder = 20;
constexpr int kMaxHalfBinomialOrder = 40;

/// Stirling number of the second kind S(n, m), 1 <= m <= n <= 30.
Int128 stirling2(int n, int m);

enum class HalfOrder { plus_half, minus_half };

/// Generalized binomial C(a, n) for a = +1/2 or -1/2, 0 <= n <= 40.
Rational half_binomial(HalfOrder a, int n);

/// One term of the closed n-th derivative of sqrt(f) for quadratic f:
///   coeff * f'^first_power * f''^second_power / f^(k - 1/2).
struct SqrtDerivTerm {
  int k = 0;
  Rational coeff;
  int first_power = 0;   // 2k - n
  int second_power = 0;  // n - k
};

/// Terms for k = floor((n+1)/2) ... n. Tables are built once and shared.
const std::vector<SqrtDerivTerm>& sqrt_deriv_terms(int n);

/// n-th derivative of sqrt(f(x)) for quadratic f given f, f', f'' at x (f > 0).
template <class Real>
Real sqrt_derivative(int n, const Real& f, const Real& f1, const Real& f2) {
  using std::sqrt;
  const Real root = sqrt(f);
  Real acc = 0;
  for (const SqrtDerivTerm& t : sqrt_deriv_terms(n)) {
    Real term = t.coeff.template to<Real>();
    for (int i = 0; i < t.first_power; ++i) term *= f1;
    for (int i = 0; i < t.second_power; ++i) term *= f2;
    for (int i = 0; i < t.k - 1; ++i) term /= f;
    acc += term / root;
  }
  return acc;
}

/// d^n/dx^n g(e^x) = sum_m S(n,m) e^{m x} g^(m)(e^x). g_derivs[m-1] holds
/// g^(m) evaluated at e^x, m = 1..n.
template <class Real>
Real exp_chain_deriv(int n, std::span<const Real> g_derivs, const Real& x) {
  using std::exp;
  if (n < 1) throw std::invalid_argument("exp_chain_deriv: order must be >= 1");
  if (static_cast<int>(g_derivs.size()) < n)
    throw std::invalid_argument("exp_chain_deriv: need g^(m) for m = 1..n");
  const Real y = exp(x);
  Real power = 1;
  Real acc = 0;
  for (int m = 1; m <= n; ++m) {
    power *= y;
    acc += int128_to<Real>(stirling2(n, m)) * power * g_derivs[m - 1];
  }
  return acc;
}

/// Phi_m(N) = (2/N) sum_k sin(a_k) cos^{2m}(a_k), a_k = pi(2k+1)/(4N),
/// evaluated through the closed geometric-sum form.
double phi_exact(int m, long N);

/// 4/(pi(2m+1)) + pi/(24 N^2).
double phi_asymptotic(int m, long N);

/// zeta(2n - 1) for n >= 2, absolute error below 1e-14.
double zeta_odd(int n);

}  // namespace dlpad
