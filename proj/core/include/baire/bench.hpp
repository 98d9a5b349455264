// SPDX-License-Identifier: Apache-2.0
//
// Growth-rate harness: times the prefix-tree build and the AHC oracle over a
// range of input sizes and fits log(time) against log(n).

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "baire/digit_codec.hpp"

namespace baire {

struct BenchConfig {
  std::vector<std::size_t> baire_sizes{10000, 20000, 50000, 100000, 200000, 500000, 1000000};
  std::vector<std::size_t> ahc_sizes{200, 400, 800, 1200, 1600, 2000};
  std::size_t repetitions = 5;
  std::uint64_t seed = 1;
  BaireParams params;
  std::uint32_t max_depth = 6;

  void validate() const;
};

struct BenchPoint {
  std::size_t n = 0;
  double median_seconds = 0.0;
  std::vector<double> seconds;   // one per repetition
  std::uint64_t operations = 0;  // bucket steps (tree) or merges (AHC)
};

struct BenchResult {
  std::vector<BenchPoint> baire;
  std::vector<BenchPoint> ahc;
  std::uint32_t max_depth = 0;
  double baire_slope = 0.0;
  double ahc_slope = 0.0;

  /// Sizes and operation counts only; identical across runs.
  std::string counts_json() const;
  /// Wall-clock measurements and fitted exponents.
  std::string timings_json() const;
};

BenchResult run_bench(const BenchConfig& config);

/// Least-squares slope of log(y) on log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> values);

}  // namespace baire
