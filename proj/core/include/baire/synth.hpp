// SPDX-License-Identifier: Apache-2.0
//
// Seeded synthetic catalogs shaped like a low-redshift spectroscopic sample:
// z_spec concentrated below 0.2, z_phot = clamp(z_spec + noise).

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "baire/redshift.hpp"

namespace baire {

enum class NoiseKind : std::uint8_t { kUniform, kGaussian };

std::string to_string(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string& text);

struct SynthConfig {
  std::size_t n = 10000;
  std::uint64_t seed = 1;
  double z_max = 0.6;
  /// Gamma(2, z_scale) before truncation at z_max; mean 2 * z_scale.
  double z_scale = 0.05;
  NoiseKind noise_kind = NoiseKind::kUniform;
  /// Half-width for uniform noise, standard deviation for Gaussian noise.
  double noise = 0.02;
  /// Decimal places written for every column.
  int decimals = 6;

  void validate() const;
};

/// Values are already rounded to `decimals`, so they equal what write_csv emits.
std::vector<RedshiftRecord> generate_catalog(const SynthConfig& config);

/// Header "ra,dec,z_spec,z_phot", fixed-point values.
void write_catalog_csv(std::ostream& out, std::span<const RedshiftRecord> records, int decimals);

}  // namespace baire
