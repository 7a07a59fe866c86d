#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "deflectstats/errors.hpp"
#include "deflectstats/matrix.hpp"

namespace deflectstats {

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // columns are the matching unit eigenvectors
};

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return std::sqrt(2.0 * s);
}

}  // namespace detail

// Cyclic Jacobi eigensolver for dense symmetric matrices in the small-order
// regime. Sweeps rotate every off-diagonal pair; iteration stops once the
// off-diagonal Frobenius norm drops below 1e-12 relative to the matrix norm
// (at most 100 sweeps). Eigenvalues come back descending and each
// eigenvector is oriented so that its largest-magnitude component is
// non-negative, ties resolved toward the lowest index.
inline EigenDecomposition eigendecompose_symmetric(const SymmetricMatrix& m,
                                                   double rel_tolerance = 1e-12,
                                                   int max_sweeps = 100) {
  const std::size_t n = m.order();
  Matrix a = m.entries;
  Matrix v = Matrix::identity(n);
  if (n == 0) return {};

  double scale = frobenius_norm(a);
  if (scale == 0.0) scale = 1.0;

  double off = detail::off_diagonal_norm(a);
  for (int sweep = 0; sweep < max_sweeps && off > rel_tolerance * scale; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;  // avoids overflow in theta^2
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = a(r, p);
            const double arq = a(r, q);
            a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
            a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
          }
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
    off = detail::off_diagonal_norm(a);
  }
  if (off > rel_tolerance * scale)
    throw NumericalError("jacobi eigensolver did not converge; off-diagonal norm " +
                         std::to_string(off));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    out.values[col] = a(src, src);
    std::size_t imax = 0;
    double vmax = std::abs(v(0, src));
    for (std::size_t r = 1; r < n; ++r) {
      const double av = std::abs(v(r, src));
      if (av > vmax) {
        vmax = av;
        imax = r;
      }
    }
    const double sign = v(imax, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, col) = sign * v(r, src);
  }
  return out;
}

}  // namespace deflectstats
