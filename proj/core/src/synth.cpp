// SPDX-License-Identifier: Apache-2.0

#include "baire/synth.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>

#include "baire/error.hpp"
#include "baire/random.hpp"

namespace baire {
namespace {

std::string fixed(double value, int decimals) {
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                               std::chars_format::fixed, decimals);
  return {buf.data(), r.ptr};
}

double round_to(double value, int decimals) {
  const auto text = fixed(value, decimals);
  double out = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), out);
  return out == 0.0 ? 0.0 : out;  // drop negative zero
}

}  // namespace

std::string to_string(NoiseKind kind) {
  return kind == NoiseKind::kUniform ? "uniform" : "gaussian";
}

NoiseKind parse_noise_kind(const std::string& text) {
  if (text == "uniform") {
    return NoiseKind::kUniform;
  }
  if (text == "gaussian") {
    return NoiseKind::kGaussian;
  }
  throw ValidationError("unknown noise kind '" + text + "' (expected uniform or gaussian)");
}

void SynthConfig::validate() const {
  if (!(z_max > 0.0 && std::isfinite(z_max))) {
    throw ValidationError("z_max must be positive");
  }
  if (!(z_scale > 0.0 && std::isfinite(z_scale))) {
    throw ValidationError("z_scale must be positive");
  }
  if (!(noise >= 0.0 && std::isfinite(noise))) {
    throw ValidationError("noise must be non-negative");
  }
  if (decimals < 1 || decimals > 15) {
    throw ValidationError("decimals must be in [1, 15]");
  }
}

std::vector<RedshiftRecord> generate_catalog(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  std::vector<RedshiftRecord> out;
  out.reserve(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    RedshiftRecord r;
    r.id = i;
    r.ra = round_to(rng.uniform(0.0, 360.0), config.decimals);
    r.dec = round_to(std::asin(rng.uniform(-1.0, 1.0)) * 180.0 / std::numbers::pi,
                     config.decimals);
    double z = 0.0;
    do {
      // Sum of two exponentials is Gamma(2, scale).
      z = -config.z_scale * (std::log(1.0 - rng.uniform()) + std::log(1.0 - rng.uniform()));
    } while (z > config.z_max);
    const double eps = config.noise_kind == NoiseKind::kUniform
                           ? rng.uniform(-config.noise, config.noise)
                           : config.noise * rng.normal();
    r.z_spec = round_to(z, config.decimals);
    r.z_phot = round_to(std::clamp(z + eps, 0.0, config.z_max), config.decimals);
    out.push_back(r);
  }
  return out;
}

void write_catalog_csv(std::ostream& out, std::span<const RedshiftRecord> records, int decimals) {
  out << "ra,dec,z_spec,z_phot\n";
  for (const auto& r : records) {
    out << fixed(r.ra, decimals) << ',' << fixed(r.dec, decimals) << ','
        << fixed(r.z_spec, decimals) << ',' << fixed(r.z_phot, decimals) << '\n';
  }
}

}  // namespace baire
