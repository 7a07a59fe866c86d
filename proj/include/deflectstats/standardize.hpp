#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "deflectstats/dataset.hpp"
#include "deflectstats/errors.hpp"
#include "deflectstats/matrix.hpp"

namespace deflectstats {

// Column-wise z-scored copy of a data matrix. Every column of `values` has
// mean 0 and sample standard deviation 1 (n-1 divisor) up to rounding.
struct StandardizedMatrix {
  Matrix values;
  std::vector<double> column_means;
  std::vector<double> column_sds;  // all > 0
  std::vector<std::string> column_names;

  friend bool operator==(const StandardizedMatrix&, const StandardizedMatrix&) = default;
};

// A cell whose standardized value exceeded the flagging threshold.
struct ExtremeFlag {
  std::size_t row = 0;  // 0-based
  std::string column;
  double z_value = 0.0;

  friend bool operator==(const ExtremeFlag&, const ExtremeFlag&) = default;
};

// z-scores each column with its own mean and sample standard deviation.
// Two-pass: means first, then deviations, which keeps the residual column
// means at the rounding floor.
inline StandardizedMatrix standardize(const Matrix& values,
                                      std::vector<std::string> column_names) {
  const std::size_t rows = values.rows();
  const std::size_t cols = values.cols();
  if (rows < 2) throw ValidationError("standardize requires at least 2 rows");
  if (column_names.size() != cols)
    throw ValidationError("standardize: column name count does not match matrix width");

  StandardizedMatrix out;
  out.values = Matrix(rows, cols);
  out.column_means.resize(cols);
  out.column_sds.resize(cols);
  out.column_names = std::move(column_names);

  for (std::size_t k = 0; k < cols; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rows; ++i) sum += values(i, k);
    const double m = sum / static_cast<double>(rows);
    double ss = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      const double d = values(i, k) - m;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(rows - 1));
    if (sd == 0.0)
      throw ValidationError("column '" + out.column_names[k] + "' has zero variance");
    out.column_means[k] = m;
    out.column_sds[k] = sd;
    for (std::size_t i = 0; i < rows; ++i) out.values(i, k) = (values(i, k) - m) / sd;
  }
  return out;
}

inline StandardizedMatrix standardize_dataset(const Dataset& d) {
  std::vector<std::string> names(kActiveColumns.begin(), kActiveColumns.end());
  return standardize(active_matrix(d), std::move(names));
}

// All cells with |z| strictly greater than the threshold, ordered by row
// then column. Ties at the threshold are not flagged.
inline std::vector<ExtremeFlag> flag_extremes(const StandardizedMatrix& std_matrix,
                                              double threshold = 2.0) {
  if (!(threshold > 0.0)) throw ValidationError("flag_extremes: threshold must be positive");
  std::vector<ExtremeFlag> flags;
  for (std::size_t i = 0; i < std_matrix.values.rows(); ++i) {
    for (std::size_t k = 0; k < std_matrix.values.cols(); ++k) {
      const double z = std_matrix.values(i, k);
      if (std::abs(z) > threshold) flags.push_back({i, std_matrix.column_names[k], z});
    }
  }
  return flags;
}

}  // namespace deflectstats
