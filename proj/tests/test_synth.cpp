#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <sstream>

#include "deflectstats/csv.hpp"
#include "deflectstats/stats.hpp"
#include "deflectstats/synth.hpp"

using namespace deflectstats;

TEST_CASE("the default campaign has the expected shape") {
  CampaignSpec spec = default_campaign_spec();
  spec.seed = 100;
  const Dataset data = generate(spec);
  CHECK(data.size() >= 12u * 40u);
  CHECK(data.size() <= 12u * 45u);
  std::set<std::string> nights;
  for (const auto& o : data.observations) nights.insert(o.night);
  CHECK(nights.size() == 12);
  CHECK(data.has_supplementary);
  CHECK_NOTHROW(validate_dataset(data));
}

TEST_CASE("generation is deterministic and seed-sensitive") {
  CampaignSpec spec = default_campaign_spec();
  spec.seed = 55;
  CHECK(generate(spec) == generate(spec));
  CampaignSpec other = spec;
  other.seed = 56;
  CHECK_FALSE(generate(spec) == generate(other));
}

TEST_CASE("no noise and a zero planted signal make xi identically zero") {
  CampaignSpec spec;
  spec.nights = 5;
  spec.obs_per_night_min = 4;
  spec.obs_per_night_max = 4;
  spec.noise_scale = 0.0;
  spec.planted_coefficients = std::array<double, kActiveColumnCount>{};
  spec.seed = 7;
  const Dataset data = generate(spec);
  for (const auto& o : data.observations) CHECK(o.xi == 0.0);
}

TEST_CASE("night effects dominate within-night variation of pressure") {
  CampaignSpec spec = default_campaign_spec();
  spec.night_effect_scale = 5.0;
  spec.noise_scale = 0.1;
  spec.seed = 3;
  const Dataset data = generate(spec);

  // Between-night share of the pressure variance, the correlation the
  // grouped bootstrap is designed around.
  std::map<std::string, std::vector<double>> per_night;
  std::vector<double> all;
  for (const auto& o : data.observations) {
    per_night[o.night].push_back(o.pressure);
    all.push_back(o.pressure);
  }
  double within = 0.0;
  for (const auto& [night, values] : per_night) within += sample_variance(values);
  within /= double(per_night.size());
  const double total = sample_variance(all);
  CHECK(1.0 - within / total > 0.9);
}

TEST_CASE("campaign specs parse from text") {
  CHECK(parse_campaign_spec("synth:default") == default_campaign_spec());
  CHECK(parse_campaign_spec("default") == default_campaign_spec());

  const CampaignSpec spec =
      parse_campaign_spec("synth:nights=6,obs=10-12,effect=2.5,noise=0.05,seed=99,beta=none");
  CHECK(spec.nights == 6);
  CHECK(spec.obs_per_night_min == 10);
  CHECK(spec.obs_per_night_max == 12);
  CHECK(spec.night_effect_scale == 2.5);
  CHECK(spec.noise_scale == 0.05);
  CHECK(spec.seed == 99);
  CHECK(spec.seed_explicit);
  CHECK_FALSE(spec.planted_coefficients.has_value());

  const CampaignSpec fixed = parse_campaign_spec("obs=7,beta=1:0:0:0:0:0:0:0:0.5");
  CHECK(fixed.obs_per_night_min == 7);
  CHECK(fixed.obs_per_night_max == 7);
  REQUIRE(fixed.planted_coefficients.has_value());
  CHECK((*fixed.planted_coefficients)[0] == 1.0);
  CHECK((*fixed.planted_coefficients)[8] == 0.5);
}

TEST_CASE("bad campaign specs are rejected") {
  CHECK_THROWS_AS(parse_campaign_spec("synth:planets=4"), ValidationError);
  CHECK_THROWS_AS(parse_campaign_spec("synth:nights=abc"), ValidationError);
  CHECK_THROWS_AS(parse_campaign_spec("synth:beta=1:2"), ValidationError);
  CHECK_THROWS_AS(parse_campaign_spec("synth:nights=1"), ValidationError);
  CHECK_THROWS_AS(parse_campaign_spec("synth:obs=5-3"), ValidationError);
  CHECK_THROWS_AS(parse_campaign_spec("synth:noise=-1"), ValidationError);
}

TEST_CASE("generated campaigns survive the CSV round trip") {
  CampaignSpec spec;
  spec.nights = 3;
  spec.obs_per_night_min = 2;
  spec.obs_per_night_max = 5;
  spec.seed = 17;
  const Dataset data = generate(spec);
  std::istringstream in(dataset_csv_string(data));
  CHECK(read_dataset_csv(in) == data);
}
