#include "dlpad/combinatorics.hpp"

#include "dlpad/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dlpad {
namespace {

Int128 abs128(Int128 v) { return v < 0 ? -v : v; }

Int128 gcd128(Int128 a, Int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    const Int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Int128 mul_checked(Int128 a, Int128 b) {
  Int128 out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("128-bit overflow in exact arithmetic");
  return out;
}

Int128 add_checked(Int128 a, Int128 b) {
  Int128 out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("128-bit overflow in exact arithmetic");
  return out;
}

// lo * (lo+1) * ... * hi, empty product = 1.
Int128 range_product(int lo, int hi) {
  Int128 out = 1;
  for (int i = lo; i <= hi; ++i) out = mul_checked(out, i);
  return out;
}

Int128 binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  Int128 out = 1;
  for (int i = 1; i <= k; ++i) out = mul_checked(out, n - k + i) / i;
  return out;
}

using StirlingTable = std::array<std::array<Int128, kMaxStirlingOrder + 1>, kMaxStirlingOrder + 1>;

const StirlingTable& stirling_table() {
  static const StirlingTable table = [] {
    StirlingTable t{};
    t[0][0] = 1;
    for (int n = 1; n <= kMaxStirlingOrder; ++n)
      for (int m = 1; m <= n; ++m) t[n][m] = add_checked(mul_checked(m, t[n - 1][m]), t[n - 1][m - 1]);
    return t;
  }();
  return table;
}

std::vector<SqrtDerivTerm> build_sqrt_terms(int n) {
  std::vector<SqrtDerivTerm> terms;
  for (int k = (n + 1) / 2; k <= n; ++k) {
    // n! / ((2k-n)! (n-k)!) = C(n, n-k) * k! / (2k-n)!
    const Int128 outer = mul_checked(binomial(n, n - k), range_product(2 * k - n + 1, k));
    // (2k-2)! / (k-1)!
    const Int128 inner = range_product(k, 2 * k - 2);
    Int128 numerator = mul_checked(outer, inner);
    if ((k + 1) % 2 != 0) numerator = -numerator;
    const int two_power = n + k - 1;
    if (two_power > 126) throw std::overflow_error("sqrt_deriv_terms: power of two too large");
    const Int128 denominator = static_cast<Int128>(1) << two_power;
    terms.push_back({k, Rational(numerator, denominator), 2 * k - n, n - k});
  }
  return terms;
}

}  // namespace

std::string to_string(Int128 value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  UInt128 mag = negative ? static_cast<UInt128>(-(value + 1)) + 1u : static_cast<UInt128>(value);
  std::string digits;
  while (mag > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  }
  if (negative) digits.push_back('-');
  return {digits.rbegin(), digits.rend()};
}

Rational::Rational(Int128 num, Int128 den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const Int128 g = gcd128(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

Rational operator*(const Rational& a, const Rational& b) {
  // cross-reduce first so intermediates stay as small as the result allows
  const Int128 g1 = gcd128(a.num_, b.den_);
  const Int128 g2 = gcd128(b.num_, a.den_);
  const Int128 n1 = g1 > 1 ? a.num_ / g1 : a.num_;
  const Int128 d2 = g1 > 1 ? b.den_ / g1 : b.den_;
  const Int128 n2 = g2 > 1 ? b.num_ / g2 : b.num_;
  const Int128 d1 = g2 > 1 ? a.den_ / g2 : a.den_;
  return Rational(mul_checked(n1, n2), mul_checked(d1, d2));
}

Rational operator+(const Rational& a, const Rational& b) {
  const Int128 g = gcd128(a.den_, b.den_);
  const Int128 scale_a = b.den_ / g;
  const Int128 scale_b = a.den_ / g;
  return Rational(add_checked(mul_checked(a.num_, scale_a), mul_checked(b.num_, scale_b)),
                  mul_checked(a.den_, scale_a));
}

std::string Rational::str() const {
  return den_ == 1 ? to_string(num_) : to_string(num_) + "/" + to_string(den_);
}

Int128 stirling2(int n, int m) {
  if (n < 1 || n > kMaxStirlingOrder)
    throw std::out_of_range("stirling2: order n must be in [1, 30], got " + std::to_string(n));
  if (m < 1 || m > n) throw std::out_of_range("stirling2: need 1 <= m <= n");
  return stirling_table()[n][m];
}

Rational half_binomial(HalfOrder a, int n) {
  if (n < 0 || n > kMaxHalfBinomialOrder)
    throw std::out_of_range("half_binomial: n must be in [0, 40]");
  const int twice_a = a == HalfOrder::plus_half ? 1 : -1;
  Rational out(1);
  // (a - j) / (j + 1) = (2a - 2j) / (2j + 2)
  for (int j = 0; j < n; ++j) out = out * Rational(twice_a - 2 * j, 2 * j + 2);
  return out;
}

const std::vector<SqrtDerivTerm>& sqrt_deriv_terms(int n) {
  if (n < 1 || n > kMaxSqrtDerivOrder)
    throw std::out_of_range("sqrt_deriv_terms: order must be in [1, 20], got " + std::to_string(n));
  static const std::array<std::vector<SqrtDerivTerm>, kMaxSqrtDerivOrder + 1> tables = [] {
    std::array<std::vector<SqrtDerivTerm>, kMaxSqrtDerivOrder + 1> t;
    for (int order = 1; order <= kMaxSqrtDerivOrder; ++order) t[order] = build_sqrt_terms(order);
    return t;
  }();
  return tables[n];
}

double phi_exact(int m, long N) {
  if (m < 0 || m > 30) throw std::out_of_range("phi_exact: m must be in [0, 30]");
  if (N < 1 || N > 1'000'000) throw std::out_of_range("phi_exact: N must be in [1, 10^6]");
  // weight_r = C(2m, r) / 4^m
  double weight = std::ldexp(1.0, -2 * m);
  CompensatedSum<double> acc;
  for (int r = 0; r <= 2 * m; ++r) {
    const double angle = std::numbers::pi * (2 * m + 1 - 2 * r) / (4.0 * static_cast<double>(N));
    acc += weight / std::sin(angle);
    weight = weight * (2 * m - r) / (r + 1);
  }
  return acc.value() / static_cast<double>(N);
}

double phi_asymptotic(int m, long N) {
  if (m < 0) throw std::out_of_range("phi_asymptotic: m must be >= 0");
  if (N < 1) throw std::out_of_range("phi_asymptotic: N must be >= 1");
  const double n = static_cast<double>(N);
  return 4.0 / (std::numbers::pi * (2 * m + 1)) + std::numbers::pi / (24.0 * n * n);
}

double zeta_odd(int n) {
  if (n < 2) throw std::domain_error("zeta_odd: requires n >= 2 (zeta(1) diverges)");
  const double p = 2.0 * n - 1.0;
  constexpr int cutoff = 64;
  double sum = 0.0;
  for (int k = cutoff - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -p);
  // Euler-Maclaurin tail from k = cutoff on
  const double N = cutoff;
  const double tail = std::pow(N, 1.0 - p) / (p - 1.0) + 0.5 * std::pow(N, -p) +
                      p * std::pow(N, -p - 1.0) / 12.0 -
                      p * (p + 1.0) * (p + 2.0) * std::pow(N, -p - 3.0) / 720.0;
  return sum + tail;
}

}  // namespace dlpad
