// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Returns nonzero if any
// criterion fails. Criteria 9 and 10 exercise the CLI binary named by the
// DEFLECTSTATS_CLI environment variable.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "deflectstats/bootreg.hpp"
#include "deflectstats/parallel.hpp"
#include "deflectstats/pca.hpp"
#include "deflectstats/permtest.hpp"
#include "deflectstats/pipeline.hpp"
#include "deflectstats/rng.hpp"
#include "deflectstats/standardize.hpp"
#include "deflectstats/synth.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace deflectstats;

namespace {

struct Outcome {
  bool pass = false;
  std::string note;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::string> column_names(std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back("c" + std::to_string(i));
  return out;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.normal() * 2.0 + 5.0;
  return m;
}

// 1. Standardization identities on 100 random 510x9 matrices, under 1 s.
Outcome criterion_standardize() {
  const auto start = Clock::now();
  Rng rng(101);
  double worst_mean = 0.0, worst_sd = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const Matrix m = random_matrix(510, 9, rng);
    const auto std_m = standardize(m, column_names(9));
    for (std::size_t k = 0; k < 9; ++k) {
      const auto col = std_m.values.column(k);
      worst_mean = std::max(worst_mean, std::abs(oracles::mean_direct(col)));
      worst_sd = std::max(worst_sd, std::abs(oracles::sample_sd_direct(col) - 1.0));
    }
  }
  bool constant_named = false;
  try {
    Matrix constant(10, 2);
    for (std::size_t i = 0; i < 10; ++i) {
      constant(i, 0) = double(i);
      constant(i, 1) = 7.0;
    }
    standardize(constant, {"ok", "flat"});
  } catch (const ValidationError& e) {
    constant_named = std::string(e.what()).find("flat") != std::string::npos;
  }
  const double elapsed = seconds_since(start);
  const bool pass =
      worst_mean <= 1e-12 && worst_sd <= 1e-12 && constant_named && elapsed < 1.0;
  char note[160];
  std::snprintf(note, sizeof note,
                "max |mean| %.2e, max |sd-1| %.2e, constant named %d, %.2f s", worst_mean,
                worst_sd, constant_named ? 1 : 0, elapsed);
  return {pass, note};
}

// 2. Jacobi eigensolver residuals on 200 random symmetric matrices, under 2 s.
Outcome criterion_eigensolver() {
  const auto start = Clock::now();
  Rng rng(202);
  double worst_residual = 0.0, worst_ortho = 0.0, worst_trace = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.below(19));
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
    const auto sym = SymmetricMatrix::from_upper(std::move(m));
    const auto eig = eigendecompose_symmetric(sym);

    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += sym.entries(i, i);
    const double total = std::accumulate(eig.values.begin(), eig.values.end(), 0.0);
    worst_trace = std::max(worst_trace, std::abs(total - trace));

    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t r = 0; r < n; ++r) {
        double av = 0.0;
        for (std::size_t c = 0; c < n; ++c) av += sym.entries(r, c) * eig.vectors(c, s);
        worst_residual =
            std::max(worst_residual, std::abs(av - eig.values[s] * eig.vectors(r, s)));
      }
      for (std::size_t t = s; t < n; ++t) {
        double dot = 0.0;
        for (std::size_t r = 0; r < n; ++r) dot += eig.vectors(r, s) * eig.vectors(r, t);
        worst_ortho = std::max(worst_ortho, std::abs(dot - (s == t ? 1.0 : 0.0)));
      }
    }
  }
  const double elapsed = seconds_since(start);
  const bool pass = worst_residual <= 1e-9 && worst_ortho <= 1e-9 && worst_trace <= 1e-9 &&
                    elapsed < 2.0;
  char note[160];
  std::snprintf(note, sizeof note, "residual %.2e, ortho %.2e, trace %.2e, %.2f s",
                worst_residual, worst_ortho, worst_trace, elapsed);
  return {pass, note};
}

// 3. PCA identities: inertia bookkeeping, correlation norms, coordinate
//    variances, reconstruction.
Outcome criterion_pca_identities() {
  Rng rng(303);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t rows = 510, k = 9;
    const auto std_m = standardize(random_matrix(rows, k, rng), column_names(k));
    const auto model = fit_pca(std_m);

    const double inertia_sum =
        std::accumulate(model.inertia_pct.begin(), model.inertia_pct.end(), 0.0);
    if (std::abs(inertia_sum - 100.0) > 1e-9) worst = std::max(worst, 1.0);
    if (std::abs(model.cumulative_pct.back() - 100.0) > 1e-9) worst = std::max(worst, 1.0);

    for (std::size_t var = 0; var < k; ++var) {
      double sum_sq = 0.0;
      for (std::size_t s = 0; s < k; ++s)
        sum_sq += model.var_dim_corr(var, s) * model.var_dim_corr(var, s);
      if (std::abs(sum_sq - 1.0) > 1e-8) worst = std::max(worst, 2.0);
    }
    for (std::size_t s = 0; s < k; ++s) {
      const double var_s = sample_variance(model.individual_coords.column(s));
      if (std::abs(var_s - model.eigenvalues[s]) > 1e-8) worst = std::max(worst, 3.0);
    }
    const Matrix rebuilt = multiply(model.individual_coords, transposed(model.eigenvectors));
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (std::abs(rebuilt(i, j) - std_m.values(i, j)) > 1e-9) worst = std::max(worst, 4.0);
  }
  return {worst == 0.0, worst == 0.0 ? "all identities hold on 20 random fits"
                                     : "identity group " + std::to_string(int(worst)) + " failed"};
}

// 4. OLS equals the normal-equations oracle on 500 random 12x9 designs.
Outcome criterion_ols_oracle() {
  Rng rng(404);
  double worst_coef = 0.0, worst_orth = 0.0;
  for (int rep = 0; rep < 500; ++rep) {
    Matrix x(12, 9);
    for (std::size_t i = 0; i < 12; ++i)
      for (std::size_t j = 0; j < 9; ++j) x(i, j) = rng.normal();
    std::vector<double> y(12);
    for (auto& v : y) v = rng.normal();

    const OlsFit fit = ols_fit(x, y);
    const auto oracle = oracles::normal_equations_ols(x, y);
    worst_coef = std::max(worst_coef, std::abs(fit.intercept - oracle[0]));
    for (std::size_t j = 0; j < 9; ++j)
      worst_coef = std::max(worst_coef, std::abs(fit.coefficients[j] - oracle[j + 1]));

    double max_xtr = 0.0, max_xty = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
      double xtr = 0.0, xty = 0.0;
      for (std::size_t i = 0; i < 12; ++i) {
        const double xij = j == 0 ? 1.0 : x(i, j - 1);
        double pred = fit.intercept;
        for (std::size_t c = 0; c < 9; ++c) pred += fit.coefficients[c] * x(i, c);
        xtr += xij * (y[i] - pred);
        xty += xij * y[i];
      }
      max_xtr = std::max(max_xtr, std::abs(xtr));
      max_xty = std::max(max_xty, std::abs(xty));
    }
    worst_orth = std::max(worst_orth, max_xtr / max_xty);
  }
  const bool pass = worst_coef <= 1e-8 && worst_orth <= 1e-8;
  char note[120];
  std::snprintf(note, sizeof note, "max coef gap %.2e, relative orthogonality %.2e", worst_coef,
                worst_orth);
  return {pass, note};
}

// 5. F p-values match adaptive quadrature over a 220-triple grid.
Outcome criterion_f_pvalue() {
  if (f_pvalue(0.0, 3, 9) != 1.0) return {false, "f = 0 did not return exactly 1"};
  const double fs[] = {0.001, 0.01, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  const int dofs[][2] = {{1, 1},  {1, 5},   {1, 30}, {2, 2},  {2, 28}, {3, 7},  {4, 18},
                         {5, 1},  {5, 5},   {6, 6},  {8, 20}, {9, 2},  {10, 3}, {12, 12},
                         {14, 9}, {17, 23}, {20, 30}, {25, 12}, {30, 1}, {30, 30}};
  double worst = 0.0;
  int count = 0;
  for (double f : fs) {
    for (const auto& d : dofs) {
      const double gap = std::abs(f_pvalue(f, d[0], d[1]) - oracles::f_tail_quadrature(f, d[0], d[1]));
      worst = std::max(worst, gap);
      ++count;
    }
  }
  char note[120];
  std::snprintf(note, sizeof note, "%d triples, max |gap| %.2e", count, worst);
  return {worst <= 1e-8, note};
}

// 6. Permutation-test calibration against the Monte Carlo nominal level.
Outcome criterion_calibration() {
  const auto start = Clock::now();
  const int runs = 1000;
  const std::size_t points = 510, groups = 12;
  std::vector<double> rejected(runs, 0.0);
  parallel_for(runs, 8, [&](std::size_t run) {
    Rng rng(derive_seed(606, static_cast<std::uint64_t>(run)));
    Matrix coords(points, 2);
    std::vector<std::string> labels(points);
    for (std::size_t i = 0; i < points; ++i) {
      coords(i, 0) = rng.normal();
      coords(i, 1) = rng.normal();
      labels[i] = "g" + std::to_string(i % groups);
    }
    PermutationTestOptions options;
    options.replicates = 50;
    options.dimensions = {1, 2};
    options.seed = derive_seed(707, static_cast<std::uint64_t>(run));
    const auto report = permutation_test(coords, labels, options);
    int outside = 0;
    for (const auto& r : report.results) outside += r.inside ? 0 : 1;
    rejected[run] = double(outside) / double(report.results.size());
  });
  const double test_rate = oracles::mean_direct(rejected);

  // Monte Carlo estimate of the nominal exceedance of the (2nd, B-1th)
  // order-statistic interval for an exchangeable draw.
  Rng rng(808);
  const int trials = 200000;
  int outside = 0;
  std::vector<double> sample(51);
  for (int t = 0; t < trials; ++t) {
    for (auto& v : sample) v = rng.normal();
    const double observed = sample[50];
    std::vector<double> replicates(sample.begin(), sample.begin() + 50);
    std::sort(replicates.begin(), replicates.end());
    if (observed < replicates[1] || observed > replicates[48]) ++outside;
  }
  const double nominal = double(outside) / double(trials);
  const double elapsed = seconds_since(start);
  const bool pass = std::abs(test_rate - nominal) <= 0.02 && elapsed < 60.0;
  char note[160];
  std::snprintf(note, sizeof note, "test %.4f vs nominal %.4f (|gap| %.4f), %.1f s", test_rate,
                nominal, std::abs(test_rate - nominal), elapsed);
  return {pass, note};
}

// 7. Bootstrap interval recovers the planted pressure coefficient.
Outcome criterion_bootstrap_recovery() {
  const auto start = Clock::now();
  const int seeds = 100;
  std::vector<int> ok(seeds, 0);
  parallel_for(seeds, 8, [&](std::size_t s) {
    CampaignSpec spec = default_campaign_spec();  // xi = 0.8 P_std + 0.1 noise
    spec.seed = 9000 + s;
    const Dataset data = generate(spec);
    BootstrapOptions options;
    options.replicates = 100;
    options.seed = 100 + s;
    const auto summary = bootstrap_regression(data, Response::Xi, options);
    const auto& p_coef = summary.per_coefficient[1];
    const bool excludes_zero = p_coef.q025 > 0.0 || p_coef.q975 < 0.0;
    const bool covers_truth = p_coef.q025 <= 0.8 && 0.8 <= p_coef.q975;
    ok[s] = (excludes_zero && covers_truth) ? 1 : 0;
  });
  const int passed = std::accumulate(ok.begin(), ok.end(), 0);
  const double elapsed = seconds_since(start);
  char note[120];
  std::snprintf(note, sizeof note, "%d/100 seeds recovered, %.1f s", passed, elapsed);
  return {passed >= 95 && elapsed < 30.0, note};
}

// 8. All-coordinate PCA design reproduces the raw-design R^2 per replicate.
Outcome criterion_pca_design_equivalence() {
  CampaignSpec spec = default_campaign_spec();
  spec.seed = 1234;
  const Dataset data = generate(spec);
  const PcaModel model = fit_pca(standardize_dataset(data));

  BootstrapOptions raw;
  raw.replicates = 100;
  raw.seed = 77;
  const auto raw_summary = bootstrap_regression(data, Response::Xi, raw);
  BootstrapOptions pca = raw;
  pca.design = DesignKind::PcaCoordinates;
  const auto pca_summary = bootstrap_regression(data, Response::Xi, pca, &model);

  if (raw_summary.redraw_count != 0 || pca_summary.redraw_count != 0)
    return {false, "unexpected redraws"};
  if (raw_summary.fits.size() != pca_summary.fits.size())
    return {false, "replicate counts diverged"};
  double worst = 0.0;
  for (std::size_t i = 0; i < raw_summary.fits.size(); ++i)
    worst = std::max(worst,
                     std::abs(raw_summary.fits[i].r_squared - pca_summary.fits[i].r_squared));
  char note[120];
  std::snprintf(note, sizeof note, "max |r2 gap| %.2e over %zu replicates", worst,
                raw_summary.fits.size());
  return {worst <= 1e-8, note};
}

// 9. CLI determinism: identical trees across runs and thread counts.
Outcome criterion_cli_determinism() {
  const std::string cli = testutil::cli_path();
  if (cli.empty()) return {false, "DEFLECTSTATS_CLI not set"};
  testutil::TempDir first("acc9-a");
  testutil::TempDir second("acc9-b");
  testutil::TempDir threaded("acc9-c");
  const std::string base = " pipeline --input synth:default --seed 7 --output-dir ";
  const std::string quiet = " >/dev/null 2>&1";
  if (testutil::run_command(cli + base + first.path().string() + " --threads 1" + quiet) != 0)
    return {false, "first run failed"};
  if (testutil::run_command(cli + base + second.path().string() + " --threads 1" + quiet) != 0)
    return {false, "second run failed"};
  if (testutil::run_command(cli + base + threaded.path().string() + " --threads 8" + quiet) != 0)
    return {false, "threaded run failed"};
  std::string why;
  if (!testutil::trees_equal(first.path(), second.path(), &why))
    return {false, "rerun differs: " + why};
  if (!testutil::trees_equal(first.path(), threaded.path(), &why))
    return {false, "thread count changed output: " + why};
  return {true, "byte-identical across reruns and threads 1/8"};
}

// 10. Desk-scale throughput: the full pipeline in under 5 s.
Outcome criterion_throughput() {
  testutil::TempDir dir("acc10");
  RunConfig config;
  config.input = "synth:default";
  config.output_dir = dir.path();
  config.seed = 99;
  const auto start = Clock::now();
  const ReportBundle bundle = run_pipeline(config);
  const double elapsed = seconds_since(start);
  char note[120];
  std::snprintf(note, sizeof note, "%zu artifacts in %.2f s", bundle.artifacts.size(), elapsed);
  return {elapsed < 5.0 && !bundle.artifacts.empty(), note};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* label;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "standardization identities", criterion_standardize},
      {2, "eigensolver residuals", criterion_eigensolver},
      {3, "pca identities", criterion_pca_identities},
      {4, "ols oracle equivalence", criterion_ols_oracle},
      {5, "f p-value vs quadrature", criterion_f_pvalue},
      {6, "permutation-test calibration", criterion_calibration},
      {7, "bootstrap coefficient recovery", criterion_bootstrap_recovery},
      {8, "pca-design r2 equivalence", criterion_pca_design_equivalence},
      {9, "cli determinism across runs and threads", criterion_cli_determinism},
      {10, "full-pipeline throughput", criterion_throughput},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += outcome.pass ? 0 : 1;
    std::printf("%s %2d  %s (%s)\n", outcome.pass ? "PASS" : "FAIL", criterion.id,
                criterion.label, outcome.note.c_str());
    std::fflush(stdout);
  }
  if (failures == 0) {
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
