#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "deflectstats/bootreg.hpp"
#include "deflectstats/csv.hpp"
#include "deflectstats/dataset.hpp"
#include "deflectstats/errors.hpp"
#include "deflectstats/pca.hpp"
#include "deflectstats/permtest.hpp"
#include "deflectstats/report.hpp"
#include "deflectstats/rng.hpp"
#include "deflectstats/standardize.hpp"
#include "deflectstats/synth.hpp"

namespace deflectstats {

enum class ResponseChoice { Xi, Eta, Both };

struct RunConfig {
  std::string input;  // CSV path, or a "synth:..." campaign spec
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
  int perm_replicates = 50;
  int boot_replicates = 100;
  double extreme_threshold = 2.0;
  double corr_threshold = 0.5;
  int pca_design_dims = 0;  // 0 = all coordinates
  ResponseChoice response = ResponseChoice::Both;
  bool drop_extremes = false;  // drop flagged rows, then re-standardize
  int threads = 1;
};

// Which stages write their artifacts. Upstream results are always
// recomputed in memory (they are cheap, pure functions of the input and the
// seed), so running stages one at a time produces byte-identical files to a
// fused run.
struct StageSelection {
  bool standardize = false;
  bool pca = false;
  bool permtest = false;
  bool bootreg = false;
  bool report = false;

  static StageSelection all() { return {true, true, true, true, true}; }
};

namespace detail {

template <typename F>
auto run_stage(const char* stage, F&& f) -> decltype(f()) {
  const auto tag = [&](const char* what) { return std::string(stage) + " stage: " + what; };
  try {
    return f();
  } catch (const ParseError& e) {
    throw ParseError(tag(e.what()));
  } catch (const ValidationError& e) {
    throw ValidationError(tag(e.what()));
  } catch (const NumericalError& e) {
    throw NumericalError(tag(e.what()));
  } catch (const IoError& e) {
    throw IoError(tag(e.what()));
  }
}

}  // namespace detail

// Resolves the input reference. A synth: spec is generated, written to
// dataset.csv in the output directory, and read back, so a synthetic run
// leaves the same file trail as a file-based one.
inline Dataset load_input(const RunConfig& config) {
  return detail::run_stage("ingest", [&]() -> Dataset {
    if (config.input.starts_with("synth:")) {
      CampaignSpec spec = parse_campaign_spec(config.input);
      if (!spec.seed_explicit) spec.seed = derive_seed(config.seed, "synth");
      const Dataset generated = generate(spec);
      const std::filesystem::path path = config.output_dir / "dataset.csv";
      write_dataset_csv_file(generated, path);
      return read_dataset_csv_file(path);
    }
    return read_dataset_csv_file(config.input);
  });
}

inline std::vector<Response> selected_responses(ResponseChoice choice) {
  switch (choice) {
    case ResponseChoice::Xi: return {Response::Xi};
    case ResponseChoice::Eta: return {Response::Eta};
    default: return {Response::Xi, Response::Eta};
  }
}

// Runs ingest -> standardize -> pca -> permutation tests -> bootstrap
// regressions -> report emission, writing artifacts for the selected
// stages. Every stochastic stage draws from its own labelled child seed, so
// stage replicate counts never perturb one another. Returns the artifact
// bundle found in the output directory.
inline ReportBundle run_pipeline(const RunConfig& config,
                                 const StageSelection& stages = StageSelection::all()) {
  std::filesystem::create_directories(config.output_dir);
  Dataset data = load_input(config);

  // Standardization and extreme-value inspection. The flag table always
  // describes the data as loaded; with drop_extremes the flagged rows are
  // removed and the remaining rows re-standardized for every later stage.
  StandardizedMatrix std_matrix = detail::run_stage("standardize", [&] {
    return standardize_dataset(data);
  });
  std::vector<ExtremeFlag> flags = detail::run_stage("standardize", [&] {
    return flag_extremes(std_matrix, config.extreme_threshold);
  });
  if (config.drop_extremes && !flags.empty()) {
    detail::run_stage("standardize", [&] {
      std::set<std::size_t> drop;
      for (const auto& f : flags) drop.insert(f.row);
      Dataset kept;
      kept.has_supplementary = data.has_supplementary;
      for (std::size_t i = 0; i < data.size(); ++i)
        if (!drop.contains(i)) kept.observations.push_back(data.observations[i]);
      data = std::move(kept);
      std_matrix = standardize_dataset(data);
      return 0;
    });
  }
  if (stages.standardize) {
    detail::run_stage("standardize", [&] {
      emit_standardized_json(std_matrix, config.output_dir);
      return emit_extremes_table(flags, config.output_dir);
    });
  }

  const PcaModel model = detail::run_stage("pca", [&] {
    std::map<std::string, std::vector<double>> supplementary;
    if (data.has_supplementary) {
      supplementary.emplace("xi", xi_series(data));
      supplementary.emplace("eta", eta_series(data));
    }
    return fit_pca(std_matrix, supplementary);
  });
  const std::vector<StrongCorrelation> strong = detail::run_stage("pca", [&] {
    return strong_correlations(model, config.corr_threshold);
  });
  if (stages.pca) {
    detail::run_stage("pca", [&] { return emit_pca_json(model, strong, config.output_dir); });
  }

  const int k = static_cast<int>(model.eigenvalues.size());
  if (stages.permtest) {
    detail::run_stage("permtest", [&] {
      PermutationTestOptions night_opts;
      night_opts.replicates = config.perm_replicates;
      night_opts.dimensions = k >= 3 ? std::vector<int>{2, 3} : std::vector<int>{1, 2};
      night_opts.seed = derive_seed(config.seed, "permtest:night");
      night_opts.threads = config.threads;
      const auto night_report =
          permutation_test(model.individual_coords, night_labels(data), night_opts);
      emit_permtest_table(night_report, "night", config.output_dir);

      PermutationTestOptions star_opts;
      star_opts.replicates = config.perm_replicates;
      for (int d = 1; d <= k; ++d) star_opts.dimensions.push_back(d);
      star_opts.seed = derive_seed(config.seed, "permtest:star");
      star_opts.threads = config.threads;
      const auto star_report =
          permutation_test(model.individual_coords, star_labels(data), star_opts);
      return emit_permtest_table(star_report, "star", config.output_dir);
    });
  }

  if (stages.bootreg) {
    detail::run_stage("bootreg", [&] {
      for (Response response : selected_responses(config.response)) {
        for (DesignKind design : {DesignKind::Raw, DesignKind::PcaCoordinates}) {
          BootstrapOptions opts;
          opts.replicates = config.boot_replicates;
          opts.design = design;
          opts.pca_dimensions = design == DesignKind::PcaCoordinates ? config.pca_design_dims : 0;
          opts.threads = config.threads;
          opts.seed = derive_seed(config.seed, std::string("bootreg:") + response_name(response) +
                                                   ":" + design_name(design));
          const auto summary = bootstrap_regression(data, response, opts, &model);
          emit_bootstrap_histograms(summary, config.output_dir);
        }
      }
      return 0;
    });
  }

  if (stages.report) {
    detail::run_stage("report", [&] {
      emit_inertia_table(model, config.output_dir);
      emit_factor_map(model, 1, 2, nullptr, "", config.output_dir);
      if (k >= 4) emit_factor_map(model, 3, 4, nullptr, "", config.output_dir);
      if (k >= 3) {
        const auto nights = night_labels(data);
        emit_factor_map(model, 2, 3, &nights, "night", config.output_dir);
      }
      const auto stars = star_labels(data);
      emit_factor_map(model, 1, 2, &stars, "star", config.output_dir);
      emit_correlation_circle(model, 1, 2, data.has_supplementary, config.output_dir);
      if (k >= 4) emit_correlation_circle(model, 3, 4, data.has_supplementary, config.output_dir);
      ReportBundle bundle = scan_artifacts(config.output_dir);
      return write_manifest(bundle);
    });
  }

  return scan_artifacts(config.output_dir);
}

}  // namespace deflectstats
