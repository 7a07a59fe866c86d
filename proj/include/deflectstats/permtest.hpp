#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "deflectstats/errors.hpp"
#include "deflectstats/matrix.hpp"
#include "deflectstats/parallel.hpp"
#include "deflectstats/rng.hpp"
#include "deflectstats/stats.hpp"

namespace deflectstats {

// Verdict for one group on one dimension: the observed median coordinate
// against the order-statistic interval of the permutation replicates.
struct GroupMedianResult {
  std::string group;
  int dimension = 0;  // 1-based
  double observed_median = 0.0;
  double lower_bound = 0.0;  // second-smallest replicate median
  double upper_bound = 0.0;  // second-largest replicate median
  bool inside = false;

  friend bool operator==(const GroupMedianResult&, const GroupMedianResult&) = default;
};

struct PermutationTestReport {
  std::vector<GroupMedianResult> results;  // groups in sorted label order, then dimensions
  int replicates = 0;
  std::uint64_t seed = 0;
  std::vector<int> dimensions_tested;  // 1-based
  // Bound convention, carried as a label rather than a recomputed coverage.
  std::string interval_note;

  friend bool operator==(const PermutationTestReport&, const PermutationTestReport&) = default;
};

struct PermutationTestOptions {
  int replicates = 50;
  std::vector<int> dimensions;  // 1-based; must be non-empty
  std::uint64_t seed = 0;
  int threads = 1;
};

inline bool interval_contains(double lower, double upper, double x) {
  return lower <= x && x <= upper;
}

// Componentwise median coordinates per group label.
inline std::map<std::string, std::vector<double>> median_center(
    const Matrix& coords, std::span<const std::string> labels) {
  if (labels.empty()) throw ValidationError("median_center: empty label set");
  if (labels.size() != coords.rows())
    throw ValidationError("median_center: label count does not match row count");
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);

  std::map<std::string, std::vector<double>> centers;
  for (const auto& [label, rows] : groups) {
    std::vector<double> center(coords.cols());
    std::vector<double> values(rows.size());
    for (std::size_t d = 0; d < coords.cols(); ++d) {
      for (std::size_t r = 0; r < rows.size(); ++r) values[r] = coords(rows[r], d);
      center[d] = median_of(values);
    }
    centers.emplace(label, std::move(center));
  }
  return centers;
}

// The uniform re-labeling for one replicate: position i of the output takes
// the label at position perm[i] of the input. Derived from (seed, replicate)
// only, so replicates can run in any order.
inline std::vector<std::size_t> replicate_permutation(std::size_t n, std::uint64_t seed,
                                                      std::uint64_t replicate) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(derive_seed(seed, replicate));
  rng.shuffle(perm);
  return perm;
}

inline std::vector<std::string> permuted_labels(const std::vector<std::string>& labels,
                                                std::uint64_t seed, std::uint64_t replicate) {
  const std::vector<std::size_t> perm = replicate_permutation(labels.size(), seed, replicate);
  std::vector<std::string> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = labels[perm[i]];
  return out;
}

// Permutation test on group median centers. Labels are shuffled uniformly
// while the points stay fixed; for every group and tested dimension the
// observed median is compared against [second-smallest, second-largest] of
// the replicate medians. Inclusive on both ends, so a boundary tie counts
// as inside.
inline PermutationTestReport permutation_test(const Matrix& coords,
                                              const std::vector<std::string>& labels,
                                              const PermutationTestOptions& options) {
  const std::size_t n = coords.rows();
  const std::size_t k = coords.cols();
  if (labels.size() != n)
    throw ValidationError("permutation_test: label count does not match row count");
  if (options.replicates < 3)
    throw ValidationError("permutation_test: need at least 3 replicates for the "
                          "second-order statistics");
  if (options.dimensions.empty())
    throw ValidationError("permutation_test: no dimensions requested");
  for (int d : options.dimensions)
    if (d < 1 || static_cast<std::size_t>(d) > k)
      throw ValidationError("permutation_test: dimension " + std::to_string(d) +
                            " outside 1.." + std::to_string(k));

  // Group labels in sorted order; group ids are positions in this order.
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[labels[i]].push_back(i);
  if (groups.size() < 2)
    throw ValidationError("permutation_test: need at least 2 distinct groups");

  std::vector<std::string> group_names;
  std::vector<std::size_t> group_of_row(n);
  {
    std::map<std::string, std::size_t> ids;
    for (const auto& [name, rows] : groups) {
      ids.emplace(name, group_names.size());
      group_names.push_back(name);
    }
    for (std::size_t i = 0; i < n; ++i) group_of_row[i] = ids[labels[i]];
  }
  const std::size_t n_groups = group_names.size();
  std::vector<std::size_t> group_sizes(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g) group_sizes[g] = groups[group_names[g]].size();
  const std::size_t n_dims = options.dimensions.size();
  const int b = options.replicates;

  // Observed median centers.
  const auto observed = median_center(coords, labels);

  // Replicate medians, one flat (group x dimension) block per replicate.
  std::vector<std::vector<double>> replicate_medians(static_cast<std::size_t>(b));
  parallel_for(static_cast<std::size_t>(b), options.threads, [&](std::size_t rep) {
    const std::vector<std::size_t> perm =
        replicate_permutation(n, options.seed, static_cast<std::uint64_t>(rep));
    std::vector<std::vector<std::size_t>> rows_by_group(n_groups);
    for (std::size_t g = 0; g < n_groups; ++g) rows_by_group[g].reserve(group_sizes[g]);
    for (std::size_t i = 0; i < n; ++i) rows_by_group[group_of_row[perm[i]]].push_back(i);

    std::vector<double> medians(n_groups * n_dims);
    std::vector<double> values;
    for (std::size_t g = 0; g < n_groups; ++g) {
      for (std::size_t di = 0; di < n_dims; ++di) {
        const std::size_t col = static_cast<std::size_t>(options.dimensions[di]) - 1;
        values.assign(rows_by_group[g].size(), 0.0);
        for (std::size_t r = 0; r < rows_by_group[g].size(); ++r)
          values[r] = coords(rows_by_group[g][r], col);
        medians[g * n_dims + di] = median_of(values);
      }
    }
    replicate_medians[rep] = std::move(medians);
  });

  PermutationTestReport report;
  report.replicates = b;
  report.seed = options.seed;
  report.dimensions_tested = options.dimensions;
  report.interval_note =
      "bounds are the second-smallest and second-largest of the replicate medians";

  std::vector<double> samples(static_cast<std::size_t>(b));
  for (std::size_t g = 0; g < n_groups; ++g) {
    const auto& obs_center = observed.at(group_names[g]);
    for (std::size_t di = 0; di < n_dims; ++di) {
      for (int rep = 0; rep < b; ++rep)
        samples[static_cast<std::size_t>(rep)] =
            replicate_medians[static_cast<std::size_t>(rep)][g * n_dims + di];
      std::sort(samples.begin(), samples.end());
      GroupMedianResult r;
      r.group = group_names[g];
      r.dimension = options.dimensions[di];
      r.observed_median = obs_center[static_cast<std::size_t>(options.dimensions[di]) - 1];
      r.lower_bound = samples[1];
      r.upper_bound = samples[samples.size() - 2];
      r.inside = interval_contains(r.lower_bound, r.upper_bound, r.observed_median);
      report.results.push_back(std::move(r));
    }
  }
  return report;
}

}  // namespace deflectstats
