#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "deflectstats/numfmt.hpp"

namespace deflectstats::svg {

// Coordinates are printed with two fixed decimals: deterministic output and
// plenty of resolution at plot scale.
inline std::string num(double v) { return format_fixed(v, 2); }

inline std::string escape_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string line(double x1, double y1, double x2, double y2, std::string_view style) {
  return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
         num(y2) + "\" style=\"" + std::string(style) + "\"/>";
}

inline std::string circle(double cx, double cy, double r, std::string_view style) {
  return "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" style=\"" +
         std::string(style) + "\"/>";
}

inline std::string rect(double x, double y, double w, double h, std::string_view style) {
  return "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" +
         num(h) + "\" style=\"" + std::string(style) + "\"/>";
}

inline std::string text(double x, double y, std::string_view content, double size,
                        std::string_view anchor = "start", std::string_view extra = "") {
  std::string out = "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) +
                    "\" font-family=\"sans-serif\" text-anchor=\"" + std::string(anchor) + "\"";
  if (!extra.empty()) out += " " + std::string(extra);
  out += ">" + escape_text(content) + "</text>";
  return out;
}

inline std::string polygon(const std::vector<std::pair<double, double>>& pts,
                           std::string_view style) {
  std::string out = "<polygon points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += num(pts[i].first) + "," + num(pts[i].second);
  }
  out += "\" style=\"" + std::string(style) + "\"/>";
  return out;
}

class Document {
 public:
  Document(double width, double height) : width_(width), height_(height) {}

  void add(std::string element) { elements_.push_back(std::move(element)); }

  std::string str() const {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) + "\" height=\"" +
           num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) + "\">\n";
    for (const auto& e : elements_) {
      out += e;
      out += '\n';
    }
    out += "</svg>\n";
    return out;
  }

 private:
  double width_;
  double height_;
  std::vector<std::string> elements_;
};

// Fixed categorical palette, assigned to group labels in sorted order and
// cycled when there are more labels than entries.
inline const std::vector<std::string>& palette() {
  static const std::vector<std::string> colors = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
      "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#ad494a"};
  return colors;
}

}  // namespace deflectstats::svg
