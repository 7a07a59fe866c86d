#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "deflectstats/csv.hpp"
#include "deflectstats/numfmt.hpp"
#include "deflectstats/pipeline.hpp"
#include "deflectstats/synth.hpp"

namespace {

using deflectstats::RunConfig;
using deflectstats::StageSelection;

enum class Mode { None, Pipeline, Synth, Standardize, Pca, Permtest, Bootreg, Report };

struct CliState {
  RunConfig config;
  std::string response = "both";
  std::string pca_dims = "all";
  std::string synth_spec = "synth:default";
  std::filesystem::path synth_output = "dataset.csv";
  Mode mode = Mode::None;
};

const CLI::Validator kPcaDimsValidator(
    [](std::string& s) -> std::string {
      if (s == "all") return {};
      int v = 0;
      if (deflectstats::parse_int(s, v) && v >= 1) return {};
      return "must be 'all' or a positive integer";
    },
    "'all'|N");

void add_seed(CLI::App* sub, CliState& state) {
  sub->add_option("--seed", state.config.seed, "Master seed for all stochastic stages")
      ->envname("DEFLECT_STATS_SEED");
}

void add_io(CLI::App* sub, CliState& state) {
  sub->add_option("--input", state.config.input, "Input CSV path, or a synth:... campaign spec")
      ->required();
  sub->add_option("--output-dir", state.config.output_dir, "Directory for emitted artifacts")
      ->required();
  add_seed(sub, state);
  sub->add_option("--threads", state.config.threads,
                  "Worker threads for replicate loops (0 = hardware)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--extreme-threshold", state.config.extreme_threshold,
                  "|z| flagging threshold for standardized cells")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--drop-extremes", state.config.drop_extremes,
                "Drop flagged rows, then re-standardize before analysis");
}

void add_permtest_options(CLI::App* sub, CliState& state) {
  sub->add_option("--perm-replicates", state.config.perm_replicates,
                  "Permutation replicates per grouping")
      ->check(CLI::PositiveNumber);
}

void add_bootreg_options(CLI::App* sub, CliState& state) {
  sub->add_option("--boot-replicates", state.config.boot_replicates,
                  "Bootstrap replicates per regression")
      ->check(CLI::PositiveNumber);
  sub->add_option("--response", state.response, "Deflection component to regress")
      ->check(CLI::IsMember({"xi", "eta", "both"}));
  sub->add_option("--pca-dims", state.pca_dims,
                  "Coordinate columns for the pca design ('all' or a count)")
      ->check(kPcaDimsValidator);
}

void add_pca_options(CLI::App* sub, CliState& state) {
  sub->add_option("--corr-threshold", state.config.corr_threshold,
                  "|corr| threshold for the strong-correlation listing")
      ->check(CLI::PositiveNumber);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void finalize(CliState& state) {
  state.config.threads = resolve_threads(state.config.threads);
  state.config.response = state.response == "xi"  ? deflectstats::ResponseChoice::Xi
                          : state.response == "eta" ? deflectstats::ResponseChoice::Eta
                                                    : deflectstats::ResponseChoice::Both;
  if (state.pca_dims == "all") {
    state.config.pca_design_dims = 0;
  } else {
    int v = 0;
    deflectstats::parse_int(state.pca_dims, v);
    state.config.pca_design_dims = v;
  }
}

void run_stages(const CliState& state, const StageSelection& stages) {
  const auto bundle = deflectstats::run_pipeline(state.config, stages);
  std::cout << bundle.artifacts.size() << " artifacts in " << bundle.output_dir.string() << "\n";
}

void run_synth(const CliState& state) {
  deflectstats::CampaignSpec spec = deflectstats::parse_campaign_spec(state.synth_spec);
  if (!spec.seed_explicit) spec.seed = deflectstats::derive_seed(state.config.seed, "synth");
  const deflectstats::Dataset data = deflectstats::generate(spec);
  if (state.synth_output.has_parent_path())
    std::filesystem::create_directories(state.synth_output.parent_path());
  deflectstats::write_dataset_csv_file(data, state.synth_output);
  std::cout << data.size() << " observations written to " << state.synth_output.string() << "\n";
}

void run_pca_listing(const CliState& state) {
  StageSelection stages;
  stages.standardize = false;
  stages.pca = true;
  run_stages(state, stages);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Statistical pipeline for astro-geodetic vertical-deflection campaigns:\n"
               "standardization, PCA, median-center permutation tests, and grouped-bootstrap\n"
               "regression, with deterministic seeded output."};
  app.require_subcommand(1);
  app.fallthrough(true);
  app.set_config("--config", "",
                 "Read option defaults from an INI file with one [subcommand] section");
  CliState state;

  CLI::App* pipeline = app.add_subcommand(
      "pipeline", "Run every stage and emit the full artifact bundle");
  pipeline->alias("run");
  add_io(pipeline, state);
  add_pca_options(pipeline, state);
  add_permtest_options(pipeline, state);
  add_bootreg_options(pipeline, state);
  pipeline->callback([&] { state.mode = Mode::Pipeline; });

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic campaign CSV");
  synth->add_option("--spec", state.synth_spec,
                    "Campaign spec: synth:default or synth:key=value,...");
  synth->add_option("--output", state.synth_output, "Output CSV path")->required();
  add_seed(synth, state);
  synth->callback([&] { state.mode = Mode::Synth; });

  CLI::App* standardize =
      app.add_subcommand("standardize", "Standardize and flag extremes (standardized.json, "
                                        "extremes.csv)");
  add_io(standardize, state);
  standardize->callback([&] { state.mode = Mode::Standardize; });

  CLI::App* pca = app.add_subcommand("pca", "Fit the PCA and write pca.json");
  add_io(pca, state);
  add_pca_options(pca, state);
  pca->callback([&] { state.mode = Mode::Pca; });

  CLI::App* permtest = app.add_subcommand(
      "permtest", "Median-center permutation tests by night and by star");
  add_io(permtest, state);
  add_permtest_options(permtest, state);
  permtest->callback([&] { state.mode = Mode::Permtest; });

  CLI::App* bootreg = app.add_subcommand(
      "bootreg", "Grouped-bootstrap regressions (raw and pca designs)");
  add_io(bootreg, state);
  add_bootreg_options(bootreg, state);
  bootreg->callback([&] { state.mode = Mode::Bootreg; });

  CLI::App* report = app.add_subcommand(
      "report", "Emit tables, factor maps, correlation circles, and the manifest");
  add_io(report, state);
  add_pca_options(report, state);
  report->callback([&] { state.mode = Mode::Report; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    finalize(state);
    StageSelection stages;
    switch (state.mode) {
      case Mode::Pipeline:
        run_stages(state, StageSelection::all());
        break;
      case Mode::Synth:
        run_synth(state);
        break;
      case Mode::Standardize:
        stages.standardize = true;
        run_stages(state, stages);
        break;
      case Mode::Pca:
        run_pca_listing(state);
        break;
      case Mode::Permtest:
        stages.permtest = true;
        run_stages(state, stages);
        break;
      case Mode::Bootreg:
        stages.bootreg = true;
        run_stages(state, stages);
        break;
      case Mode::Report:
        stages.report = true;
        run_stages(state, stages);
        break;
      case Mode::None:
        std::cerr << "error: no subcommand selected\n";
        return 1;
    }
  } catch (const deflectstats::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const deflectstats::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
