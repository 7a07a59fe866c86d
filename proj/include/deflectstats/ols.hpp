#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "deflectstats/errors.hpp"
#include "deflectstats/fdist.hpp"
#include "deflectstats/matrix.hpp"

namespace deflectstats {

// Designs whose triangular factor has a reciprocal condition estimate below
// this are rejected as ill-conditioned.
inline constexpr double kMinReciprocalCondition = 1e-10;

// One ordinary-least-squares fit with its global F test.
struct OlsFit {
  double intercept = 0.0;
  std::vector<double> coefficients;  // one per predictor column
  double r_squared = 0.0;
  double f_statistic = 0.0;
  double p_value = 1.0;
  double residual_variance = 0.0;  // SS_res / (n - p - 1)
  int n = 0;
  int p = 0;

  friend bool operator==(const OlsFit&, const OlsFit&) = default;
};

// Least-squares fit of y on [1 | X] via Householder QR. The orthogonal
// factorization is applied to y alongside the design, so the residual sum of
// squares falls out of the trailing transformed entries. Requires
// n > p + 1; near-singular designs raise NumericalError.
inline OlsFit ols_fit(const Matrix& x, std::span<const double> y) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  const std::size_t m = p + 1;  // intercept column plus predictors
  if (y.size() != n) throw ValidationError("ols_fit: response length does not match rows");
  if (n <= m) throw ValidationError("ols_fit: need n > p + 1 observations");

  Matrix a(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    for (std::size_t j = 0; j < p; ++j) a(i, j + 1) = x(i, j);
  }
  std::vector<double> qty(y.begin(), y.end());

  std::vector<double> w(n);
  for (std::size_t col = 0; col < m; ++col) {
    double norm2 = 0.0;
    for (std::size_t i = col; i < n; ++i) norm2 += a(i, col) * a(i, col);
    const double norm = std::sqrt(norm2);
    if (norm == 0.0)
      throw NumericalError("ols_fit: design matrix is rank deficient at column " +
                           std::to_string(col));
    const double alpha = a(col, col) > 0.0 ? -norm : norm;
    w[col] = a(col, col) - alpha;
    double wtw = w[col] * w[col];
    for (std::size_t i = col + 1; i < n; ++i) {
      w[i] = a(i, col);
      wtw += w[i] * w[i];
    }
    a(col, col) = alpha;
    for (std::size_t i = col + 1; i < n; ++i) a(i, col) = 0.0;
    if (wtw == 0.0) continue;
    for (std::size_t j = col + 1; j < m; ++j) {
      double dot = 0.0;
      for (std::size_t i = col; i < n; ++i) dot += w[i] * a(i, j);
      const double scale = 2.0 * dot / wtw;
      for (std::size_t i = col; i < n; ++i) a(i, j) -= scale * w[i];
    }
    double dot = 0.0;
    for (std::size_t i = col; i < n; ++i) dot += w[i] * qty[i];
    const double scale = 2.0 * dot / wtw;
    for (std::size_t i = col; i < n; ++i) qty[i] -= scale * w[i];
  }

  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double d = std::abs(a(j, j));
    rmin = std::min(rmin, d);
    rmax = std::max(rmax, d);
  }
  if (rmax == 0.0 || rmin / rmax < kMinReciprocalCondition)
    throw NumericalError("ols_fit: ill-conditioned design (rcond ~ " +
                         std::to_string(rmax == 0.0 ? 0.0 : rmin / rmax) + ")");

  std::vector<double> beta(m);
  for (std::size_t j = m; j-- > 0;) {
    double s = qty[j];
    for (std::size_t k = j + 1; k < m; ++k) s -= a(j, k) * beta[k];
    beta[j] = s / a(j, j);
  }

  double ss_res = 0.0;
  for (std::size_t i = m; i < n; ++i) ss_res += qty[i] * qty[i];
  double ybar = 0.0;
  for (double v : y) ybar += v;
  ybar /= static_cast<double>(n);
  double ss_tot = 0.0;
  for (double v : y) ss_tot += (v - ybar) * (v - ybar);
  if (ss_tot == 0.0) throw ValidationError("ols_fit: constant response (zero total sum of squares)");

  OlsFit fit;
  fit.n = static_cast<int>(n);
  fit.p = static_cast<int>(p);
  fit.intercept = beta[0];
  fit.coefficients.assign(beta.begin() + 1, beta.end());
  fit.r_squared = std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
  const int dof2 = static_cast<int>(n - p - 1);
  fit.residual_variance = ss_res / static_cast<double>(dof2);
  if (fit.r_squared >= 1.0) {
    fit.f_statistic = std::numeric_limits<double>::infinity();
    fit.p_value = 0.0;
  } else {
    fit.f_statistic =
        (fit.r_squared / static_cast<double>(p)) / ((1.0 - fit.r_squared) / dof2);
    fit.p_value = f_pvalue(fit.f_statistic, static_cast<int>(p), dof2);
  }
  return fit;
}

}  // namespace deflectstats
