#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deflectstats/dataset.hpp"
#include "deflectstats/errors.hpp"
#include "deflectstats/numfmt.hpp"
#include "deflectstats/rng.hpp"
#include "deflectstats/standardize.hpp"

namespace deflectstats {

// Recipe for a synthetic observation campaign. Atmospheric variables get a
// per-night level (drift scaled by night_effect_scale) plus within-night
// jitter scaled by noise_scale, which reproduces the strong within-night
// correlation the grouped bootstrap is built to break. When
// planted_coefficients is set, xi is that linear combination of the
// standardized predictors plus Gaussian noise, so downstream estimates can
// be checked against a known truth.
struct CampaignSpec {
  int nights = 12;
  int obs_per_night_min = 40;
  int obs_per_night_max = 45;
  double night_effect_scale = 5.0;
  double noise_scale = 0.1;
  std::optional<std::array<double, kActiveColumnCount>> planted_coefficients;
  std::uint64_t seed = 0;
  bool seed_explicit = false;  // spec text carried its own seed=

  friend bool operator==(const CampaignSpec&, const CampaignSpec&) = default;
};

inline void validate_spec(const CampaignSpec& spec) {
  if (spec.nights < 2) throw ValidationError("campaign spec: need at least 2 nights");
  if (spec.obs_per_night_min < 1 || spec.obs_per_night_max < spec.obs_per_night_min)
    throw ValidationError("campaign spec: bad observations-per-night range");
  if (spec.noise_scale < 0.0) throw ValidationError("campaign spec: negative noise scale");
  if (spec.night_effect_scale < 0.0)
    throw ValidationError("campaign spec: negative night effect scale");
}

// The "synth:default" campaign: a 12-night, roughly 510-row run with a
// planted pressure signal xi = 0.8 * P_std + 0.1-noise.
inline CampaignSpec default_campaign_spec() {
  CampaignSpec spec;
  spec.planted_coefficients = std::array<double, kActiveColumnCount>{
      0.8, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  return spec;
}

// Spec grammar: "synth:default" or "synth:key=value,...". Keys: nights,
// obs (single count or MIN-MAX), effect, noise, seed, beta (nine
// colon-separated values, or "none"). The "synth:" prefix is optional.
inline CampaignSpec parse_campaign_spec(std::string_view text) {
  if (text.starts_with("synth:")) text.remove_prefix(6);
  if (text.empty() || text == "default") return default_campaign_spec();

  CampaignSpec spec = default_campaign_spec();
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view item =
        text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    pos = comma == std::string_view::npos ? text.size() + 1 : comma + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError("campaign spec: expected key=value, found '" + std::string(item) +
                            "'");
    const std::string_view key = item.substr(0, eq);
    const std::string_view value = item.substr(eq + 1);
    auto as_int = [&](std::string_view v) {
      int out = 0;
      if (!parse_int(v, out))
        throw ValidationError("campaign spec: bad integer '" + std::string(v) + "'");
      return out;
    };
    auto as_double = [&](std::string_view v) {
      double out = 0.0;
      if (!parse_double(v, out))
        throw ValidationError("campaign spec: bad number '" + std::string(v) + "'");
      return out;
    };
    if (key == "nights") {
      spec.nights = as_int(value);
    } else if (key == "obs") {
      const std::size_t dash = value.find('-');
      if (dash == std::string_view::npos) {
        spec.obs_per_night_min = spec.obs_per_night_max = as_int(value);
      } else {
        spec.obs_per_night_min = as_int(value.substr(0, dash));
        spec.obs_per_night_max = as_int(value.substr(dash + 1));
      }
    } else if (key == "effect") {
      spec.night_effect_scale = as_double(value);
    } else if (key == "noise") {
      spec.noise_scale = as_double(value);
    } else if (key == "seed") {
      std::uint64_t s = 0;
      if (!parse_uint64(value, s))
        throw ValidationError("campaign spec: bad seed '" + std::string(value) + "'");
      spec.seed = s;
      spec.seed_explicit = true;
    } else if (key == "beta") {
      if (value == "none") {
        spec.planted_coefficients.reset();
      } else {
        std::array<double, kActiveColumnCount> beta{};
        std::size_t start = 0;
        for (std::size_t i = 0; i < beta.size(); ++i) {
          const std::size_t colon = value.find(':', start);
          const bool last = i + 1 == beta.size();
          if (!last && colon == std::string_view::npos)
            throw ValidationError("campaign spec: beta needs 9 colon-separated values");
          const std::string_view tok =
              value.substr(start, last ? std::string_view::npos : colon - start);
          beta[i] = as_double(tok);
          start = colon + 1;
        }
        spec.planted_coefficients = beta;
      }
    } else {
      throw ValidationError("campaign spec: unknown key '" + std::string(key) + "'");
    }
  }
  validate_spec(spec);
  return spec;
}

namespace detail {

inline const std::vector<std::string>& star_pool() {
  static const std::vector<std::string> pool = {
      "αCas", "αOri", "γCep", "αHya", "βUMi", "ζVir", "α2Lib", "ηUMa",
      "αUMi", "βCas", "γDra", "αLyr", "εCyg", "βPeg", "αAnd",  "γAnd",
      "αPer", "βAur", "αAur", "βTau", "γGem", "αCMi", "βLeo",  "αBoo"};
  return pool;
}

inline std::string night_label(int index, int nights) {
  int width = 2;
  for (int v = nights; v >= 100; v /= 10) ++width;
  std::string digits = std::to_string(index + 1);
  while (static_cast<int>(digits.size()) < width) digits.insert(digits.begin(), '0');
  return "night-" + digits;
}

}  // namespace detail

// Deterministic synthetic campaign. Independent draw streams are derived
// from the spec seed per concern (counts, atmosphere, geometry, star
// labels, response noise), so the row layout stays stable when only one
// concern's parameters change.
inline Dataset generate(const CampaignSpec& spec) {
  validate_spec(spec);
  Rng counts(derive_seed(spec.seed, "synth:counts"));
  Rng atmos(derive_seed(spec.seed, "synth:atmosphere"));
  Rng geom(derive_seed(spec.seed, "synth:geometry"));
  Rng star(derive_seed(spec.seed, "synth:stars"));
  Rng noise(derive_seed(spec.seed, "synth:noise"));

  const auto& pool = detail::star_pool();
  Dataset out;
  out.has_supplementary = true;

  for (int night = 0; night < spec.nights; ++night) {
    const int span = spec.obs_per_night_max - spec.obs_per_night_min + 1;
    const int n_obs =
        spec.obs_per_night_min + static_cast<int>(counts.below(static_cast<std::uint64_t>(span)));
    const std::string label = detail::night_label(night, spec.nights);

    const double p_level = 1005.0 + spec.night_effect_scale * atmos.normal();
    const double t_level = 15.0 + spec.night_effect_scale * atmos.normal();
    const double h_level = 60.0 + 2.0 * spec.night_effect_scale * atmos.normal();

    std::string current_star;
    int run_left = 0;
    for (int i = 0; i < n_obs; ++i) {
      if (run_left == 0) {
        current_star = pool[static_cast<std::size_t>(star.below(pool.size()))];
        run_left = 1 + static_cast<int>(star.below(8));
      }
      --run_left;

      Observation o;
      o.star = current_star;
      o.night = label;
      o.pressure = p_level + spec.noise_scale * atmos.normal();
      o.temperature = t_level + spec.noise_scale * atmos.normal();
      o.humidity = std::clamp(h_level + spec.noise_scale * atmos.normal(), 1.0, 99.0);
      o.rms1 = geom.uniform(0.1, 0.3);
      o.img_count = static_cast<double>(100 + geom.below(501));
      o.rms2 = geom.uniform(0.1, 0.3);
      o.azimuth = geom.uniform() * 360.0;
      o.zenith_distance = geom.uniform(30.0, 70.0);
      o.velocity = geom.uniform(2.0, 16.0);
      out.observations.push_back(std::move(o));
    }
  }

  // Response columns, after all predictors exist: the planted combination
  // needs the standardized predictor matrix of the full campaign.
  if (spec.planted_coefficients.has_value()) {
    const StandardizedMatrix std_matrix = standardize_dataset(out);
    const auto& beta = *spec.planted_coefficients;
    for (std::size_t i = 0; i < out.size(); ++i) {
      double signal = 0.0;
      for (std::size_t k = 0; k < kActiveColumnCount; ++k)
        signal += beta[k] * std_matrix.values(i, k);
      out.observations[i].xi = signal + spec.noise_scale * noise.normal();
      out.observations[i].eta = spec.noise_scale * noise.normal();
    }
  } else {
    for (auto& o : out.observations) {
      o.xi = spec.noise_scale * noise.normal();
      o.eta = spec.noise_scale * noise.normal();
    }
  }

  validate_dataset(out);
  return out;
}

}  // namespace deflectstats
