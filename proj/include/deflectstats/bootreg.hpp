#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deflectstats/dataset.hpp"
#include "deflectstats/errors.hpp"
#include "deflectstats/ols.hpp"
#include "deflectstats/parallel.hpp"
#include "deflectstats/pca.hpp"
#include "deflectstats/rng.hpp"
#include "deflectstats/standardize.hpp"
#include "deflectstats/stats.hpp"

namespace deflectstats {

enum class Response { Xi, Eta };

inline const char* response_name(Response r) { return r == Response::Xi ? "xi" : "eta"; }

enum class DesignKind { Raw, PcaCoordinates };

inline const char* design_name(DesignKind d) {
  return d == DesignKind::Raw ? "raw" : "pca";
}

struct CoefficientSummary {
  std::string name;  // "intercept" or the predictor name
  double q025 = 0.0;
  double q500 = 0.0;
  double q975 = 0.0;
  double mean = 0.0;
  double skew = 0.0;
};

struct Histogram {
  std::vector<double> edges;  // bins + 1 entries
  std::vector<int> counts;

  friend bool operator==(const Histogram&, const Histogram&) = default;
};

// Equal-width histogram; a degenerate sample (all values equal) is widened
// by half a unit on each side so everything lands in one occupied bin.
inline Histogram make_histogram(std::span<const double> values, int bins, double lo, double hi) {
  Histogram h;
  if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i)
    h.edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / bins;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    int idx = static_cast<int>((v - lo) / (hi - lo) * bins);
    idx = std::clamp(idx, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(idx)];
  }
  return h;
}

struct BootstrapOptions {
  int replicates = 100;
  std::uint64_t seed = 0;
  DesignKind design = DesignKind::Raw;
  int pca_dimensions = 0;  // 0 = all coordinate columns
  int threads = 1;
  int max_redraws = 10;  // fresh draws allowed per replicate on ill-conditioning
};

struct BootstrapRegressionSummary {
  std::vector<OlsFit> fits;  // accepted replicates, in replicate order
  std::vector<CoefficientSummary> per_coefficient;  // intercept first
  Histogram r2_histogram;      // 10 bins on [0, 1]
  Histogram pvalue_histogram;  // 10 bins on [0, 1]
  std::uint64_t seed = 0;
  std::string response;
  std::string design;
  int replicates_requested = 0;
  int redraw_count = 0;
  int failed_replicates = 0;
  std::vector<std::string> predictor_names;
};

// Grouped bootstrap: every replicate draws one observation per night
// (uniformly within the night), fits OLS of the deflection component on the
// standardized predictors (or on the PCA coordinate columns), and the
// replicate fits are summarized with quantiles, skewness, and histograms.
// Ill-conditioned draws are redrawn with fresh randomness up to
// max_redraws times, then recorded as failed. Deterministic given the seed,
// independent of thread count.
inline BootstrapRegressionSummary bootstrap_regression(const Dataset& dataset,
                                                       Response response,
                                                       const BootstrapOptions& options,
                                                       const PcaModel* pca_model = nullptr) {
  if (options.replicates < 1)
    throw ValidationError("bootstrap_regression: replicate count must be positive");
  const std::size_t n_obs = dataset.size();
  const std::vector<double> y_all =
      response == Response::Xi ? xi_series(dataset) : eta_series(dataset);

  const StandardizedMatrix std_matrix = standardize_dataset(dataset);

  const Matrix* design_source = &std_matrix.values;
  std::size_t design_cols = kActiveColumnCount;
  std::vector<std::string> predictor_names(kActiveColumns.begin(), kActiveColumns.end());
  if (options.design == DesignKind::PcaCoordinates) {
    if (pca_model == nullptr)
      throw ValidationError("bootstrap_regression: pca design requires a fitted model");
    if (pca_model->individual_coords.rows() != n_obs)
      throw ValidationError("bootstrap_regression: pca model does not cover all observations");
    design_source = &pca_model->individual_coords;
    const std::size_t k = pca_model->individual_coords.cols();
    design_cols = options.pca_dimensions == 0 ? k
                                              : static_cast<std::size_t>(options.pca_dimensions);
    if (design_cols < 1 || design_cols > k)
      throw ValidationError("bootstrap_regression: pca dimension count outside 1.." +
                            std::to_string(k));
    predictor_names.clear();
    for (std::size_t s = 0; s < design_cols; ++s)
      predictor_names.push_back("D" + std::to_string(s + 1));
  }

  std::map<std::string, std::vector<std::size_t>> nights;
  for (std::size_t i = 0; i < n_obs; ++i) nights[dataset.observations[i].night].push_back(i);
  const std::size_t n_nights = nights.size();
  if (n_nights < design_cols + 2)
    throw ValidationError("bootstrap_regression: " + std::to_string(n_nights) +
                          " nights is too few for " + std::to_string(design_cols) +
                          " predictors (need at least p + 2)");
  std::vector<const std::vector<std::size_t>*> night_rows;
  night_rows.reserve(n_nights);
  for (const auto& [night, rows] : nights) night_rows.push_back(&rows);

  const std::size_t b = static_cast<std::size_t>(options.replicates);
  std::vector<std::optional<OlsFit>> slots(b);
  std::vector<int> redraws(b, 0);

  parallel_for(b, options.threads, [&](std::size_t rep) {
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(rep)));
    Matrix x(n_nights, design_cols);
    std::vector<double> y(n_nights);
    for (int attempt = 0; attempt <= options.max_redraws; ++attempt) {
      for (std::size_t g = 0; g < n_nights; ++g) {
        const auto& rows = *night_rows[g];
        const std::size_t pick = rows[static_cast<std::size_t>(rng.below(rows.size()))];
        for (std::size_t j = 0; j < design_cols; ++j) x(g, j) = (*design_source)(pick, j);
        y[g] = y_all[pick];
      }
      try {
        slots[rep] = ols_fit(x, y);
        return;
      } catch (const NumericalError&) {
        ++redraws[rep];  // singular draw; try a fresh one
      }
    }
    --redraws[rep];  // the final failed attempt is a failure, not a redraw
  });

  BootstrapRegressionSummary summary;
  summary.seed = options.seed;
  summary.response = response_name(response);
  summary.design = design_name(options.design);
  summary.replicates_requested = options.replicates;
  summary.predictor_names = std::move(predictor_names);
  for (std::size_t rep = 0; rep < b; ++rep) {
    summary.redraw_count += redraws[rep];
    if (slots[rep].has_value())
      summary.fits.push_back(std::move(*slots[rep]));
    else
      ++summary.failed_replicates;
  }
  if (summary.fits.empty())
    throw NumericalError("bootstrap_regression: every replicate stayed ill-conditioned "
                         "after the redraw budget");

  const std::size_t n_coef = design_cols + 1;
  std::vector<double> samples(summary.fits.size());
  for (std::size_t c = 0; c < n_coef; ++c) {
    for (std::size_t i = 0; i < summary.fits.size(); ++i)
      samples[i] = c == 0 ? summary.fits[i].intercept : summary.fits[i].coefficients[c - 1];
    CoefficientSummary cs;
    cs.name = c == 0 ? "intercept" : summary.predictor_names[c - 1];
    cs.mean = mean(samples);
    double ss = 0.0;
    for (double v : samples) ss += (v - cs.mean) * (v - cs.mean);
    // Samples that agree to rounding noise have no meaningful asymmetry.
    const double sd_pop = std::sqrt(ss / static_cast<double>(samples.size()));
    const bool degenerate = sd_pop <= 1e-12 * std::max(1.0, std::abs(cs.mean));
    cs.skew = (samples.size() >= 3 && !degenerate) ? skewness(samples) : 0.0;
    std::sort(samples.begin(), samples.end());
    cs.q025 = quantile_sorted(samples, 0.025);
    cs.q500 = quantile_sorted(samples, 0.5);
    cs.q975 = quantile_sorted(samples, 0.975);
    summary.per_coefficient.push_back(std::move(cs));
  }

  std::vector<double> r2(summary.fits.size()), pv(summary.fits.size());
  for (std::size_t i = 0; i < summary.fits.size(); ++i) {
    r2[i] = summary.fits[i].r_squared;
    pv[i] = summary.fits[i].p_value;
  }
  summary.r2_histogram = make_histogram(r2, 10, 0.0, 1.0);
  summary.pvalue_histogram = make_histogram(pv, 10, 0.0, 1.0);
  return summary;
}

}  // namespace deflectstats
