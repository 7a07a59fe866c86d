#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "deflectstats/dataset.hpp"
#include "deflectstats/errors.hpp"
#include "deflectstats/numfmt.hpp"

namespace deflectstats {

// Canonical column order of a campaign file. The two supplementary columns
// may be absent as a pair; everything else is mandatory.
inline constexpr std::array<const char*, 13> kCsvColumns = {
    "star", "night", "P", "T", "H", "rms1", "img", "rms2", "A", "z", "V", "xi", "eta"};

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

inline void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace detail

// Parses a campaign CSV: a mandatory header in kCsvColumns order (with or
// without the trailing xi,eta pair), then one observation per line. Numbers
// use a decimal point, no grouping. Lines are LF or CRLF terminated; fully
// empty lines are ignored.
inline Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty input: missing header row");
  detail::strip_cr(line);
  const std::vector<std::string> header = detail::split_csv_line(line);

  std::size_t expected_cols = 0;
  if (header.size() == kCsvColumns.size()) {
    expected_cols = 13;
  } else if (header.size() == kCsvColumns.size() - 2) {
    expected_cols = 11;
  } else {
    if (header.size() < kCsvColumns.size() - 2)
      throw ParseError("line 1: missing column '" + std::string(kCsvColumns[header.size()]) + "'");
    throw ParseError("line 1: expected 11 or 13 columns, found " +
                     std::to_string(header.size()));
  }
  for (std::size_t c = 0; c < expected_cols; ++c) {
    if (header[c] != kCsvColumns[c])
      throw ParseError("line 1: expected column '" + std::string(kCsvColumns[c]) +
                       "', found '" + header[c] + "'");
  }

  Dataset out;
  out.has_supplementary = (expected_cols == 13);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = detail::split_csv_line(line);
    if (fields.size() != expected_cols)
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(expected_cols) + " fields, found " +
                       std::to_string(fields.size()));

    Observation o;
    o.star = fields[0];
    o.night = fields[1];
    auto numeric = [&](std::size_t c) {
      double v = 0.0;
      if (!parse_double(fields[c], v))
        throw ParseError("line " + std::to_string(line_no) + ", column '" +
                         std::string(kCsvColumns[c]) + "': not a number: '" + fields[c] + "'");
      return v;
    };
    o.pressure = numeric(2);
    o.temperature = numeric(3);
    o.humidity = numeric(4);
    o.rms1 = numeric(5);
    o.img_count = numeric(6);
    o.rms2 = numeric(7);
    o.azimuth = numeric(8);
    o.zenith_distance = numeric(9);
    o.velocity = numeric(10);
    if (out.has_supplementary) {
      o.xi = numeric(11);
      o.eta = numeric(12);
    }
    validate_observation(o, out.observations.size());
    out.observations.push_back(std::move(o));
  }

  if (out.observations.empty()) throw ParseError("empty dataset: header without data rows");
  return out;
}

inline Dataset read_dataset_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_dataset_csv(in);
}

// Writes the canonical CSV form. Numeric cells use the shortest decimal
// representation that round-trips, so parse(write(d)) == d holds exactly.
inline void write_dataset_csv(const Dataset& d, std::ostream& out) {
  const std::size_t cols = d.has_supplementary ? 13 : 11;
  for (std::size_t c = 0; c < cols; ++c) {
    if (c) out << ',';
    out << kCsvColumns[c];
  }
  out << '\n';
  for (const auto& o : d.observations) {
    out << o.star << ',' << o.night << ',' << format_exact(o.pressure) << ','
        << format_exact(o.temperature) << ',' << format_exact(o.humidity) << ','
        << format_exact(o.rms1) << ',' << format_exact(o.img_count) << ','
        << format_exact(o.rms2) << ',' << format_exact(o.azimuth) << ','
        << format_exact(o.zenith_distance) << ',' << format_exact(o.velocity);
    if (d.has_supplementary) out << ',' << format_exact(o.xi) << ',' << format_exact(o.eta);
    out << '\n';
  }
}

inline std::string dataset_csv_string(const Dataset& d) {
  std::ostringstream out;
  write_dataset_csv(d, out);
  return out.str();
}

inline void write_dataset_csv_file(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_dataset_csv(d, out);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace deflectstats
