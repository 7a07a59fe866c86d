#pragma once

#include <cmath>
#include <string>

#include "deflectstats/errors.hpp"

namespace deflectstats {

inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace detail {

// Continued fraction for the incomplete beta function, evaluated with the
// modified Lentz algorithm.
inline double incomplete_beta_cf(double a, double b, double x) {
  constexpr int kMaxIterations = 300;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericalError("incomplete beta continued fraction did not converge (a=" +
                       std::to_string(a) + ", b=" + std::to_string(b) + ")");
}

}  // namespace detail

// Regularized incomplete beta function I_x(a, b).
inline double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw ValidationError("regularized_incomplete_beta: a and b must be positive");
  if (!(x >= 0.0) || x > 1.0)
    throw ValidationError("regularized_incomplete_beta: x outside [0, 1]");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  // The continued fraction converges fast below the distribution mean; use
  // the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) on the other side.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::incomplete_beta_cf(a, b, x) / a;
  return 1.0 - front * detail::incomplete_beta_cf(b, a, 1.0 - x) / b;
}

// Upper tail of the F distribution with (d1, d2) degrees of freedom:
//   P(F > f) = I_{d2 / (d2 + d1 f)}(d2/2, d1/2).
// f = 0 returns exactly 1.
inline double f_pvalue(double f, int d1, int d2) {
  if (d1 < 1 || d2 < 1) throw ValidationError("f_pvalue: degrees of freedom must be >= 1");
  if (!std::isfinite(f)) throw ValidationError("f_pvalue: non-finite statistic");
  if (f < 0.0) throw ValidationError("f_pvalue: negative statistic");
  if (f == 0.0) return 1.0;
  const double x = d2 / (d2 + d1 * f);
  return regularized_incomplete_beta(x, 0.5 * d2, 0.5 * d1);
}

}  // namespace deflectstats
