#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "deflectstats/bootreg.hpp"
#include "deflectstats/errors.hpp"
#include "deflectstats/numfmt.hpp"
#include "deflectstats/pca.hpp"
#include "deflectstats/permtest.hpp"
#include "deflectstats/standardize.hpp"
#include "deflectstats/svg.hpp"

namespace deflectstats {

struct Artifact {
  std::string name;  // file name inside the output directory
  std::string kind;  // csv | json | svg
  std::filesystem::path path;
};

struct ReportBundle {
  std::filesystem::path output_dir;
  std::vector<Artifact> artifacts;
};

namespace detail {

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline Artifact emit(const std::filesystem::path& dir, const std::string& name,
                     const std::string& kind, const std::string& content) {
  const std::filesystem::path path = dir / name;
  write_text_file(path, content);
  return Artifact{name, kind, path};
}

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json histogram_to_json(const Histogram& h) {
  return nlohmann::json{{"edges", h.edges}, {"counts", h.counts}};
}

inline void check_dimensions(const PcaModel& model, int a, int b, bool distinct) {
  const int k = static_cast<int>(model.eigenvalues.size());
  if (a < 1 || a > k || b < 1 || b > k)
    throw ValidationError("dimension index outside 1.." + std::to_string(k));
  if (distinct && a == b)
    throw ValidationError("dimension pair (" + std::to_string(a) + "," + std::to_string(b) +
                          ") is degenerate");
}

inline std::string dim_caption(const PcaModel& model, int dim) {
  return "D" + std::to_string(dim) + " (" +
         format_fixed(model.inertia_pct[static_cast<std::size_t>(dim) - 1], 2) + "%)";
}

}  // namespace detail

// Table of inertia percentages per dimension with the running total;
// two-decimal percent formatting, final cumulative row printing 100.00.
inline Artifact emit_inertia_table(const PcaModel& model, const std::filesystem::path& dir) {
  std::string csv = "dimension,pct,cumulative_pct\n";
  for (std::size_t s = 0; s < model.inertia_pct.size(); ++s) {
    csv += std::to_string(s + 1) + "," + format_fixed(model.inertia_pct[s], 2) + "," +
           format_fixed(model.cumulative_pct[s], 2) + "\n";
  }
  return detail::emit(dir, "inertia.csv", "csv", csv);
}

// Scatter of the individuals on a dimension pair. With labels, points are
// color-coded per label (sorted order against the fixed palette) and a
// legend is drawn; axis captions carry the inertia percentages.
inline Artifact emit_factor_map(const PcaModel& model, int dim_a, int dim_b,
                                const std::vector<std::string>* labels,
                                const std::string& label_name,
                                const std::filesystem::path& dir) {
  detail::check_dimensions(model, dim_a, dim_b, true);
  const Matrix& coords = model.individual_coords;
  if (labels != nullptr && labels->size() != coords.rows())
    throw ValidationError("factor map: label count does not match row count");

  const std::size_t ca = static_cast<std::size_t>(dim_a) - 1;
  const std::size_t cb = static_cast<std::size_t>(dim_b) - 1;

  double xmin = coords(0, ca), xmax = xmin, ymin = coords(0, cb), ymax = ymin;
  for (std::size_t i = 0; i < coords.rows(); ++i) {
    xmin = std::min(xmin, coords(i, ca));
    xmax = std::max(xmax, coords(i, ca));
    ymin = std::min(ymin, coords(i, cb));
    ymax = std::max(ymax, coords(i, cb));
  }
  auto pad = [](double lo, double hi) {
    const double span = hi - lo;
    return span > 0.0 ? 0.05 * span : 1.0;
  };
  const double px = pad(xmin, xmax), py = pad(ymin, ymax);
  xmin -= px; xmax += px; ymin -= py; ymax += py;

  std::vector<std::string> legend;
  std::map<std::string, std::size_t> color_of;
  if (labels != nullptr) {
    const std::set<std::string> unique(labels->begin(), labels->end());
    for (const auto& l : unique) {
      color_of.emplace(l, legend.size());
      legend.push_back(l);
    }
  }

  const double plot_w = 520.0, plot_h = 380.0, left = 70.0, top = 50.0;
  const double legend_w = legend.empty() ? 0.0 : 170.0;
  svg::Document doc(left + plot_w + 30.0 + legend_w, top + plot_h + 60.0);

  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
  auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * plot_h; };

  doc.add(svg::rect(left, top, plot_w, plot_h, "fill:none;stroke:#444;stroke-width:1"));
  if (xmin < 0.0 && xmax > 0.0)
    doc.add(svg::line(sx(0), top, sx(0), top + plot_h, "stroke:#bbb;stroke-width:0.8"));
  if (ymin < 0.0 && ymax > 0.0)
    doc.add(svg::line(left, sy(0), left + plot_w, sy(0), "stroke:#bbb;stroke-width:0.8"));

  const auto& palette = svg::palette();
  for (std::size_t i = 0; i < coords.rows(); ++i) {
    std::string color = "#1f77b4";
    if (labels != nullptr)
      color = palette[color_of[(*labels)[i]] % palette.size()];
    doc.add(svg::circle(sx(coords(i, ca)), sy(coords(i, cb)), 2.5,
                        "fill:" + color + ";fill-opacity:0.75;stroke:none"));
  }

  std::string title = "Factor map " + std::string("D") + std::to_string(dim_a) + "-D" +
                      std::to_string(dim_b);
  if (labels != nullptr) title += " by " + label_name;
  doc.add(svg::text(left + plot_w / 2.0, 28.0, title, 16.0, "middle"));
  doc.add(svg::text(left + plot_w / 2.0, top + plot_h + 40.0, detail::dim_caption(model, dim_a),
                    13.0, "middle"));
  doc.add(svg::text(22.0, top + plot_h / 2.0, detail::dim_caption(model, dim_b), 13.0, "middle",
                    "transform=\"rotate(-90 22.00 " + svg::num(top + plot_h / 2.0) + ")\""));

  for (std::size_t i = 0; i < legend.size(); ++i) {
    const double lx = left + plot_w + 45.0;
    const double ly = top + 10.0 + 18.0 * static_cast<double>(i);
    doc.add(svg::rect(lx, ly - 9.0, 11.0, 11.0,
                      "fill:" + palette[i % palette.size()] + ";stroke:none"));
    doc.add(svg::text(lx + 16.0, ly, legend[i], 11.0));
  }

  std::string name = "factor_map_D" + std::to_string(dim_a) + "D" + std::to_string(dim_b);
  if (labels != nullptr) name += "_by_" + label_name;
  name += ".svg";
  return detail::emit(dir, name, "svg", doc.str());
}

// Unit circle with one arrow per active variable at its correlation pair;
// supplementary variables are drawn dashed in a distinct color.
inline Artifact emit_correlation_circle(const PcaModel& model, int dim_a, int dim_b,
                                        bool include_supplementary,
                                        const std::filesystem::path& dir) {
  detail::check_dimensions(model, dim_a, dim_b, true);
  const std::size_t ca = static_cast<std::size_t>(dim_a) - 1;
  const std::size_t cb = static_cast<std::size_t>(dim_b) - 1;

  const double size = 560.0, cx = 280.0, cy = 300.0, radius = 210.0;
  svg::Document doc(size, size + 40.0);
  doc.add(svg::text(cx, 28.0, "Correlation circle D" + std::to_string(dim_a) + "-D" +
                                  std::to_string(dim_b),
                    16.0, "middle"));
  doc.add(svg::circle(cx, cy, radius, "fill:none;stroke:#444;stroke-width:1"));
  doc.add(svg::line(cx - radius, cy, cx + radius, cy, "stroke:#ccc;stroke-width:0.8"));
  doc.add(svg::line(cx, cy - radius, cx, cy + radius, "stroke:#ccc;stroke-width:0.8"));
  doc.add(svg::text(cx + radius + 6.0, cy + 4.0, detail::dim_caption(model, dim_a), 12.0));
  doc.add(svg::text(cx, cy - radius - 8.0, detail::dim_caption(model, dim_b), 12.0, "middle"));

  auto arrow = [&](double corr_a, double corr_b, const std::string& label,
                   const std::string& stroke, bool dashed) {
    const double tx = cx + corr_a * radius;
    const double ty = cy - corr_b * radius;
    std::string style = "stroke:" + stroke + ";stroke-width:1.4";
    if (dashed) style += ";stroke-dasharray:5 3";
    doc.add(svg::line(cx, cy, tx, ty, style));
    const double len = std::hypot(tx - cx, ty - cy);
    if (len > 1e-9) {
      const double ux = (tx - cx) / len, uy = (ty - cy) / len;
      const double hx = tx - 8.0 * ux, hy = ty - 8.0 * uy;
      doc.add(svg::polygon({{tx, ty},
                            {hx - 3.0 * uy, hy + 3.0 * ux},
                            {hx + 3.0 * uy, hy - 3.0 * ux}},
                           "fill:" + stroke + ";stroke:none"));
    }
    doc.add(svg::text(cx + corr_a * (radius + 18.0), cy - corr_b * (radius + 18.0) + 4.0, label,
                      11.0, "middle"));
  };

  for (std::size_t var = 0; var < model.column_names.size(); ++var)
    arrow(model.var_dim_corr(var, ca), model.var_dim_corr(var, cb), model.column_names[var],
          "#1f77b4", false);
  if (include_supplementary) {
    for (const auto& [name, corrs] : model.supp_corr)
      arrow(corrs[ca], corrs[cb], name, "#d62728", true);
  }

  const std::string name = "corr_circle_D" + std::to_string(dim_a) + "D" +
                           std::to_string(dim_b) + ".svg";
  return detail::emit(dir, name, "svg", doc.str());
}

// Group/dimension verdict table, four-decimal bounds, true/false literals.
inline Artifact emit_permtest_table(const PermutationTestReport& report,
                                    const std::string& grouping,
                                    const std::filesystem::path& dir) {
  if (report.results.empty()) throw ValidationError("permutation report is empty");
  std::string csv = "group,dimension,lower,upper,observed,inside\n";
  for (const auto& r : report.results) {
    csv += r.group + "," + std::to_string(r.dimension) + "," + format_fixed(r.lower_bound, 4) +
           "," + format_fixed(r.upper_bound, 4) + "," + format_fixed(r.observed_median, 4) +
           "," + (r.inside ? "true" : "false") + "\n";
  }
  return detail::emit(dir, "permtest_" + grouping + ".csv", "csv", csv);
}

// Histogram panel board for one bootstrap run (one panel per coefficient,
// plus R^2 and p-value), a JSON sidecar with bins/quantiles/skewness, and a
// CSV of the raw replicate fits.
inline std::vector<Artifact> emit_bootstrap_histograms(const BootstrapRegressionSummary& summary,
                                                       const std::filesystem::path& dir) {
  if (summary.fits.empty()) throw ValidationError("bootstrap summary is empty");
  const std::string base = "bootreg_" + summary.response + "_" + summary.design;

  // Per-coefficient histograms over the observed sample range.
  std::vector<std::pair<std::string, Histogram>> panels;
  std::vector<double> samples(summary.fits.size());
  for (std::size_t c = 0; c < summary.per_coefficient.size(); ++c) {
    for (std::size_t i = 0; i < summary.fits.size(); ++i)
      samples[i] = c == 0 ? summary.fits[i].intercept : summary.fits[i].coefficients[c - 1];
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    panels.emplace_back(summary.per_coefficient[c].name,
                        make_histogram(samples, 10, *lo, *hi));
  }
  panels.emplace_back("R^2", summary.r2_histogram);
  panels.emplace_back("p-value", summary.pvalue_histogram);

  const double panel_w = 200.0, panel_h = 150.0, gap = 14.0;
  const std::size_t cols = 4;
  const std::size_t rows = (panels.size() + cols - 1) / cols;
  svg::Document doc(gap + cols * (panel_w + gap),
                    48.0 + static_cast<double>(rows) * (panel_h + gap));
  doc.add(svg::text(gap + cols * (panel_w + gap) / 2.0, 26.0,
                    "Bootstrap distributions: " + summary.response + ", " + summary.design +
                        " design, " + std::to_string(summary.fits.size()) + " fits",
                    15.0, "middle"));
  for (std::size_t idx = 0; idx < panels.size(); ++idx) {
    const double x0 = gap + static_cast<double>(idx % cols) * (panel_w + gap);
    const double y0 = 48.0 + static_cast<double>(idx / cols) * (panel_h + gap);
    const Histogram& h = panels[idx].second;
    int max_count = 1;
    for (int c : h.counts) max_count = std::max(max_count, c);
    doc.add(svg::rect(x0, y0, panel_w, panel_h, "fill:none;stroke:#999;stroke-width:0.8"));
    doc.add(svg::text(x0 + panel_w / 2.0, y0 + 14.0, panels[idx].first, 11.0, "middle"));
    const double bar_zone = panel_h - 30.0;
    const double bar_w = panel_w / static_cast<double>(h.counts.size());
    for (std::size_t bin = 0; bin < h.counts.size(); ++bin) {
      const double bh = bar_zone * h.counts[bin] / max_count;
      if (h.counts[bin] == 0) continue;
      doc.add(svg::rect(x0 + bar_w * static_cast<double>(bin), y0 + panel_h - 6.0 - bh,
                        bar_w - 1.0, bh, "fill:#1f77b4;stroke:none"));
    }
    doc.add(svg::text(x0 + 4.0, y0 + panel_h + 11.0, format_fixed(h.edges.front(), 2), 9.0));
    doc.add(svg::text(x0 + panel_w - 4.0, y0 + panel_h + 11.0, format_fixed(h.edges.back(), 2),
                      9.0, "end"));
  }

  nlohmann::json j;
  j["response"] = summary.response;
  j["design"] = summary.design;
  j["seed"] = summary.seed;
  j["replicates_requested"] = summary.replicates_requested;
  j["accepted"] = summary.fits.size();
  j["failed_replicates"] = summary.failed_replicates;
  j["redraw_count"] = summary.redraw_count;
  nlohmann::json coeffs = nlohmann::json::array();
  for (std::size_t c = 0; c < summary.per_coefficient.size(); ++c) {
    const auto& cs = summary.per_coefficient[c];
    coeffs.push_back({{"name", cs.name},
                      {"q025", cs.q025},
                      {"q500", cs.q500},
                      {"q975", cs.q975},
                      {"mean", cs.mean},
                      {"skewness", cs.skew},
                      {"histogram", detail::histogram_to_json(panels[c].second)}});
  }
  j["coefficients"] = std::move(coeffs);
  j["r2_histogram"] = detail::histogram_to_json(summary.r2_histogram);
  j["pvalue_histogram"] = detail::histogram_to_json(summary.pvalue_histogram);

  std::string fits_csv = "replicate,intercept";
  for (const auto& n : summary.predictor_names) fits_csv += "," + n;
  fits_csv += ",r_squared,f_statistic,p_value,residual_variance\n";
  for (std::size_t i = 0; i < summary.fits.size(); ++i) {
    const OlsFit& f = summary.fits[i];
    fits_csv += std::to_string(i + 1) + "," + format_exact(f.intercept);
    for (double cfv : f.coefficients) fits_csv += "," + format_exact(cfv);
    fits_csv += "," + format_exact(f.r_squared) + "," + format_exact(f.f_statistic) + "," +
                format_exact(f.p_value) + "," + format_exact(f.residual_variance) + "\n";
  }

  std::vector<Artifact> out;
  out.push_back(detail::emit(dir, base + ".svg", "svg", doc.str()));
  out.push_back(detail::emit(dir, base + ".json", "json", j.dump(2) + "\n"));
  out.push_back(detail::emit(dir, base + "_fits.csv", "csv", fits_csv));
  return out;
}

// Flagged standardized cells, one row per cell.
inline Artifact emit_extremes_table(const std::vector<ExtremeFlag>& flags,
                                    const std::filesystem::path& dir) {
  std::string csv = "row,column,z\n";
  for (const auto& f : flags)
    csv += std::to_string(f.row) + "," + f.column + "," + format_fixed(f.z_value, 2) + "\n";
  return detail::emit(dir, "extremes.csv", "csv", csv);
}

inline Artifact emit_standardized_json(const StandardizedMatrix& std_matrix,
                                       const std::filesystem::path& dir) {
  nlohmann::json j;
  j["columns"] = std_matrix.column_names;
  j["means"] = std_matrix.column_means;
  j["sds"] = std_matrix.column_sds;
  j["rows"] = std_matrix.values.rows();
  j["values"] = detail::matrix_to_json(std_matrix.values);
  return detail::emit(dir, "standardized.json", "json", j.dump(2) + "\n");
}

inline Artifact emit_pca_json(const PcaModel& model,
                              const std::vector<StrongCorrelation>& strong,
                              const std::filesystem::path& dir) {
  nlohmann::json j;
  j["column_names"] = model.column_names;
  j["eigenvalues"] = model.eigenvalues;
  j["eigenvectors"] = detail::matrix_to_json(model.eigenvectors);
  j["individual_coords"] = detail::matrix_to_json(model.individual_coords);
  j["inertia_pct"] = model.inertia_pct;
  j["cumulative_pct"] = model.cumulative_pct;
  j["var_dim_corr"] = detail::matrix_to_json(model.var_dim_corr);
  nlohmann::json supp = nlohmann::json::object();
  for (const auto& [name, corrs] : model.supp_corr) supp[name] = corrs;
  j["supp_corr"] = std::move(supp);
  nlohmann::json sc = nlohmann::json::array();
  for (const auto& s : strong)
    sc.push_back({{"variable", s.variable}, {"dimension", s.dimension}, {"corr", s.corr}});
  j["strong_correlations"] = std::move(sc);
  j["warnings"] = model.warnings;
  return detail::emit(dir, "pca.json", "json", j.dump(2) + "\n");
}

// Collects the recognized artifacts present in a directory, sorted by name.
// Scanning (instead of carrying a list through the call graph) makes the
// manifest identical whether stages ran separately or fused.
inline ReportBundle scan_artifacts(const std::filesystem::path& dir) {
  ReportBundle bundle;
  bundle.output_dir = dir;
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name == "manifest.json") continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".csv" || ext == ".json" || ext == ".svg") names.push_back(name);
  }
  std::sort(names.begin(), names.end());
  for (const auto& name : names) {
    const std::string ext = std::filesystem::path(name).extension().string();
    bundle.artifacts.push_back(Artifact{name, ext.substr(1), dir / name});
  }
  return bundle;
}

inline Artifact write_manifest(const ReportBundle& bundle) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& a : bundle.artifacts)
    items.push_back({{"name", a.name}, {"kind", a.kind}, {"path", a.name}});
  nlohmann::json j{{"artifacts", std::move(items)}};
  return detail::emit(bundle.output_dir, "manifest.json", "json", j.dump(2) + "\n");
}

}  // namespace deflectstats
