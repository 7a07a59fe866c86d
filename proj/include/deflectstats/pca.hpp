#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "deflectstats/errors.hpp"
#include "deflectstats/jacobi.hpp"
#include "deflectstats/matrix.hpp"
#include "deflectstats/standardize.hpp"
#include "deflectstats/stats.hpp"

namespace deflectstats {

// Eigenvalues below this are treated as null dimensions: their
// variable-axis correlations are reported as 0 instead of dividing by a
// vanishing standard deviation.
inline constexpr double kNullEigenvalue = 1e-12;

// Fitted principal component analysis of a standardized data matrix.
//   eigenvalues      dimension inertias, descending; they sum to K
//   eigenvectors     K x K, orthonormal columns
//   individual_coords I x K projections of the rows onto the dimensions
//   inertia_pct      100 * eigenvalue / K, with its running sum
//   var_dim_corr     K x K correlation of variable k with dimension s
//   supp_corr        correlations of supplementary series with each dimension
struct PcaModel {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;
  Matrix individual_coords;
  std::vector<double> inertia_pct;
  std::vector<double> cumulative_pct;
  Matrix var_dim_corr;
  std::map<std::string, std::vector<double>> supp_corr;
  std::vector<std::string> column_names;
  std::vector<std::string> warnings;
};

// Correlation matrix of the standardized columns: entry (j,k) is
// sum_i z_ij z_ik / (I-1). Each unordered pair is computed once and
// mirrored, so symmetry is exact; off-diagonal entries are clamped into
// [-1, 1] against rounding spill.
inline SymmetricMatrix correlation_matrix(const StandardizedMatrix& std_matrix) {
  const Matrix& z = std_matrix.values;
  const std::size_t rows = z.rows();
  const std::size_t cols = z.cols();
  if (rows < 2) throw ValidationError("correlation_matrix requires at least 2 rows");
  Matrix r(cols, cols);
  const double inv = 1.0 / static_cast<double>(rows - 1);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t k = j; k < cols; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < rows; ++i) s += z(i, j) * z(i, k);
      double value = s * inv;
      if (j != k) value = std::clamp(value, -1.0, 1.0);
      r(j, k) = r(k, j) = value;
    }
  }
  return SymmetricMatrix{std::move(r)};
}

// Fits the PCA: eigen-decomposition of the correlation matrix, row
// projections, inertia shares, and variable/supplementary correlations with
// each dimension. Supplementary series must have one value per row;
// zero-variance series are skipped with a warning entry instead of failing
// the fit.
inline PcaModel fit_pca(const StandardizedMatrix& std_matrix,
                        const std::map<std::string, std::vector<double>>& supplementary = {}) {
  const std::size_t rows = std_matrix.values.rows();
  const std::size_t k = std_matrix.values.cols();

  PcaModel model;
  model.column_names = std_matrix.column_names;

  const SymmetricMatrix corr = correlation_matrix(std_matrix);
  EigenDecomposition eig = eigendecompose_symmetric(corr);
  for (double& v : eig.values) v = std::max(v, 0.0);  // clip rounding-negative inertias
  model.eigenvalues = std::move(eig.values);
  model.eigenvectors = std::move(eig.vectors);

  model.individual_coords = multiply(std_matrix.values, model.eigenvectors);

  model.inertia_pct.resize(k);
  model.cumulative_pct.resize(k);
  double running = 0.0;
  for (std::size_t s = 0; s < k; ++s) {
    model.inertia_pct[s] = model.eigenvalues[s] * (100.0 / static_cast<double>(k));
    running += model.inertia_pct[s];
    model.cumulative_pct[s] = running;
  }

  model.var_dim_corr = Matrix(k, k);
  for (std::size_t s = 0; s < k; ++s) {
    const double lambda = model.eigenvalues[s];
    if (lambda <= kNullEigenvalue) continue;  // null dimension: correlations stay 0
    const double root = std::sqrt(lambda);
    for (std::size_t var = 0; var < k; ++var)
      model.var_dim_corr(var, s) = std::clamp(model.eigenvectors(var, s) * root, -1.0, 1.0);
  }

  for (const auto& [name, series] : supplementary) {
    if (series.size() != rows)
      throw ValidationError("supplementary series '" + name + "' has " +
                            std::to_string(series.size()) + " values, expected " +
                            std::to_string(rows));
    double ss = 0.0;
    const double m = mean(series);
    for (double v : series) ss += (v - m) * (v - m);
    if (ss == 0.0) {
      model.warnings.push_back("supplementary variable '" + name +
                               "' has zero variance and was skipped");
      continue;
    }
    std::vector<double> corrs(k, 0.0);
    for (std::size_t s = 0; s < k; ++s) {
      if (model.eigenvalues[s] <= kNullEigenvalue) continue;
      corrs[s] = pearson(series, model.individual_coords.column(s));
    }
    model.supp_corr.emplace(name, std::move(corrs));
  }
  return model;
}

struct StrongCorrelation {
  std::string variable;
  int dimension = 0;  // 1-based
  double corr = 0.0;
};

// All (variable, dimension) pairs whose |correlation| strictly exceeds the
// threshold, ordered by dimension and then by descending magnitude.
inline std::vector<StrongCorrelation> strong_correlations(const PcaModel& model,
                                                          double threshold = 0.5) {
  if (!(threshold > 0.0) || threshold > 1.0)
    throw ValidationError("strong_correlations: threshold must lie in (0, 1]");
  std::vector<StrongCorrelation> out;
  const std::size_t k = model.var_dim_corr.rows();
  for (std::size_t s = 0; s < k; ++s)
    for (std::size_t var = 0; var < k; ++var) {
      const double c = model.var_dim_corr(var, s);
      if (std::abs(c) > threshold)
        out.push_back({model.column_names[var], static_cast<int>(s) + 1, c});
    }
  std::stable_sort(out.begin(), out.end(), [](const StrongCorrelation& a,
                                              const StrongCorrelation& b) {
    if (a.dimension != b.dimension) return a.dimension < b.dimension;
    return std::abs(a.corr) > std::abs(b.corr);
  });
  return out;
}

}  // namespace deflectstats
