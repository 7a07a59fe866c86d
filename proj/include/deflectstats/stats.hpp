#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "deflectstats/errors.hpp"

namespace deflectstats {

inline double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

// Sample standard deviation with the n-1 divisor.
inline double sample_sd(std::span<const double> xs) {
  if (xs.size() < 2) throw ValidationError("sample_sd requires at least 2 values");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) {
    const double d = x - m;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

inline double sample_variance(std::span<const double> xs) {
  const double sd = sample_sd(xs);
  return sd * sd;
}

// Median; even-sized inputs take the midpoint of the two central order
// statistics. The argument is copied because it is partially sorted.
inline double median_of(std::vector<double> xs) {
  if (xs.empty()) throw ValidationError("median of empty sample");
  const std::size_t n = xs.size();
  const std::size_t mid = n / 2;
  std::nth_element(xs.begin(), xs.begin() + mid, xs.end());
  if (n % 2 == 1) return xs[mid];
  const double hi = xs[mid];
  const double lo = *std::max_element(xs.begin(), xs.begin() + mid);
  return 0.5 * (lo + hi);
}

// Linear-interpolation sample quantile (the common "type 7" rule):
// q(p) sits at rank (n-1)p of the sorted sample.
inline double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ValidationError("quantile of empty sample");
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// Pearson linear correlation. Both series must have nonzero variance.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("pearson: series length mismatch");
  if (x.size() < 2) throw ValidationError("pearson requires at least 2 points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw ValidationError("pearson: zero-variance series");
  return sxy / std::sqrt(sxx * syy);
}

// Adjusted Fisher-Pearson skewness: g1 * sqrt(m(m-1)) / (m-2), where g1 is
// the third standardized moment with population (1/m) scaling.
inline double skewness(std::span<const double> xs) {
  const std::size_t m = xs.size();
  if (m < 3) throw ValidationError("skewness requires at least 3 values");
  const double mu = mean(xs);
  double s2 = 0.0, s3 = 0.0;
  for (double x : xs) {
    const double d = x - mu;
    s2 += d * d;
    s3 += d * d * d;
  }
  const double var_pop = s2 / static_cast<double>(m);
  if (var_pop == 0.0) throw ValidationError("skewness of a zero-variance sample");
  const double g1 = (s3 / static_cast<double>(m)) / std::pow(var_pop, 1.5);
  const double md = static_cast<double>(m);
  return g1 * std::sqrt(md * (md - 1.0)) / (md - 2.0);
}

}  // namespace deflectstats
