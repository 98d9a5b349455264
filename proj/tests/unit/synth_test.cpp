// SPDX-License-Identifier: Apache-2.0

#include "baire/synth.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "baire/error.hpp"
#include "baire/redshift.hpp"

namespace baire {
namespace {

TEST(Synth, SameSeedSameCatalog) {
  SynthConfig config;
  config.n = 500;
  std::ostringstream a;
  std::ostringstream b;
  write_catalog_csv(a, generate_catalog(config), config.decimals);
  write_catalog_csv(b, generate_catalog(config), config.decimals);
  EXPECT_EQ(a.str(), b.str());
  config.seed = 2;
  std::ostringstream c;
  write_catalog_csv(c, generate_catalog(config), config.decimals);
  EXPECT_NE(a.str(), c.str());
}

TEST(Synth, ValuesStayInRange) {
  SynthConfig config;
  config.n = 5000;
  config.noise_kind = NoiseKind::kGaussian;
  config.noise = 0.05;
  for (const auto& r : generate_catalog(config)) {
    ASSERT_GE(r.z_spec, 0.0);
    ASSERT_LE(r.z_spec, config.z_max);
    ASSERT_GE(r.z_phot, 0.0);
    ASSERT_LE(r.z_phot, config.z_max);
    ASSERT_GE(r.ra, 0.0);
    ASSERT_LE(r.ra, 360.0);
    ASSERT_GE(r.dec, -90.0);
    ASSERT_LE(r.dec, 90.0);
  }
}

TEST(Synth, CsvRoundTripsThroughIngest) {
  SynthConfig config;
  config.n = 1000;
  const auto records = generate_catalog(config);
  std::ostringstream out;
  write_catalog_csv(out, records, config.decimals);
  std::istringstream in(out.str());
  const auto result = ingest(in);
  ASSERT_EQ(result.records.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    ASSERT_EQ(result.records[i].z_spec, records[i].z_spec);
    ASSERT_EQ(result.records[i].z_phot, records[i].z_phot);
    ASSERT_EQ(result.records[i].ra, records[i].ra);
  }
}

TEST(Synth, LessNoiseMeansDeeperAgreement) {
  const BaireParams params;
  double previous = -1.0;
  for (double noise : {0.05, 0.005, 0.0005}) {
    SynthConfig config;
    config.n = 4000;
    config.noise = noise;
    const auto table = coincidence_table(generate_catalog(config), params);
    const double deep = confidence_at_least(table, 3);
    EXPECT_GT(deep, previous) << "noise " << noise;
    previous = deep;
  }
}

TEST(Synth, RejectsBadConfig) {
  SynthConfig config;
  config.z_max = 0.0;
  EXPECT_THROW(generate_catalog(config), ValidationError);
  config = {};
  config.noise = -1.0;
  EXPECT_THROW(generate_catalog(config), ValidationError);
  config = {};
  config.decimals = 0;
  EXPECT_THROW(generate_catalog(config), ValidationError);
  EXPECT_THROW(parse_noise_kind("pink"), ValidationError);
}

}  // namespace
}  // namespace baire
