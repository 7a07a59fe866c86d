#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "deflectstats/errors.hpp"
#include "deflectstats/matrix.hpp"

namespace deflectstats {

// One campaign measurement: a star tracked during one observation night,
// together with the conditions and image-reduction errors attached to it.
// xi / eta are the vertical-deflection components in arcseconds; they are
// only meaningful when Dataset::has_supplementary is set.
struct Observation {
  std::string star;              // Bayer designation
  std::string night;             // date label
  double pressure = 0.0;         // hPa
  double temperature = 0.0;      // deg C
  double humidity = 0.0;         // percent, in [0, 100]
  double rms1 = 0.0;             // px
  double img_count = 0.0;        // integral, >= 0
  double rms2 = 0.0;             // px
  double azimuth = 0.0;          // deg, in [0, 360)
  double zenith_distance = 0.0;  // deg, in [0, 180]
  double velocity = 0.0;         // deg/h
  double xi = 0.0;               // arcsec
  double eta = 0.0;              // arcsec

  friend bool operator==(const Observation&, const Observation&) = default;
};

// The fixed order of the active quantitative columns. Every matrix derived
// from a Dataset uses exactly this column order.
inline constexpr std::array<const char*, 9> kActiveColumns = {
    "P", "T", "H", "rms1", "img", "rms2", "A", "z", "V"};

inline constexpr std::size_t kActiveColumnCount = kActiveColumns.size();

struct Dataset {
  std::vector<Observation> observations;
  bool has_supplementary = false;  // xi / eta columns were present

  std::size_t size() const { return observations.size(); }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

inline double active_value(const Observation& o, std::size_t k) {
  switch (k) {
    case 0: return o.pressure;
    case 1: return o.temperature;
    case 2: return o.humidity;
    case 3: return o.rms1;
    case 4: return o.img_count;
    case 5: return o.rms2;
    case 6: return o.azimuth;
    case 7: return o.zenith_distance;
    case 8: return o.velocity;
    default: throw ValidationError("active column index out of range");
  }
}

// Checks the per-row invariants; `row` is the 0-based data row used in the
// error message.
inline void validate_observation(const Observation& o, std::size_t row) {
  const std::string at = "row " + std::to_string(row) + ": ";
  auto finite = [&](double v, const char* name) {
    if (!std::isfinite(v)) throw ValidationError(at + std::string(name) + " is not finite");
  };
  if (o.star.empty()) throw ValidationError(at + "star label is empty");
  if (o.night.empty()) throw ValidationError(at + "night label is empty");
  finite(o.pressure, "P");
  finite(o.temperature, "T");
  finite(o.humidity, "H");
  finite(o.rms1, "rms1");
  finite(o.img_count, "img");
  finite(o.rms2, "rms2");
  finite(o.azimuth, "A");
  finite(o.zenith_distance, "z");
  finite(o.velocity, "V");
  if (o.humidity < 0.0 || o.humidity > 100.0)
    throw ValidationError(at + "humidity " + std::to_string(o.humidity) + " outside [0, 100]");
  if (o.img_count < 0.0 || o.img_count != std::floor(o.img_count))
    throw ValidationError(at + "img must be a non-negative integer count");
  if (o.azimuth < 0.0 || o.azimuth >= 360.0)
    throw ValidationError(at + "azimuth " + std::to_string(o.azimuth) + " outside [0, 360)");
  if (o.zenith_distance < 0.0 || o.zenith_distance > 180.0)
    throw ValidationError(at + "zenith distance " + std::to_string(o.zenith_distance) +
                          " outside [0, 180]");
}

inline void validate_dataset(const Dataset& d) {
  for (std::size_t i = 0; i < d.observations.size(); ++i)
    validate_observation(d.observations[i], i);
}

// I x 9 matrix of the active variables, in kActiveColumns order.
inline Matrix active_matrix(const Dataset& d) {
  Matrix m(d.size(), kActiveColumnCount);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t k = 0; k < kActiveColumnCount; ++k)
      m(i, k) = active_value(d.observations[i], k);
  return m;
}

inline std::vector<std::string> night_labels(const Dataset& d) {
  std::vector<std::string> out;
  out.reserve(d.size());
  for (const auto& o : d.observations) out.push_back(o.night);
  return out;
}

inline std::vector<std::string> star_labels(const Dataset& d) {
  std::vector<std::string> out;
  out.reserve(d.size());
  for (const auto& o : d.observations) out.push_back(o.star);
  return out;
}

inline std::vector<double> xi_series(const Dataset& d) {
  if (!d.has_supplementary)
    throw ValidationError("dataset has no xi/eta columns; supplementary analysis unavailable");
  std::vector<double> out;
  out.reserve(d.size());
  for (const auto& o : d.observations) out.push_back(o.xi);
  return out;
}

inline std::vector<double> eta_series(const Dataset& d) {
  if (!d.has_supplementary)
    throw ValidationError("dataset has no xi/eta columns; supplementary analysis unavailable");
  std::vector<double> out;
  out.reserve(d.size());
  for (const auto& o : d.observations) out.push_back(o.eta);
  return out;
}

}  // namespace deflectstats
