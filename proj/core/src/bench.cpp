// SPDX-License-Identifier: Apache-2.0

#include "baire/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "baire/baire_tree.hpp"
#include "baire/dendrogram.hpp"
#include "baire/error.hpp"
#include "baire/synth.hpp"
#include "json_support.hpp"

namespace baire {
namespace {

template <typename F>
double time_seconds(F&& body) {
  const auto start = std::chrono::steady_clock::now();
  body();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

double fitted_slope(const std::vector<BenchPoint>& points) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& p : points) {
    x.push_back(static_cast<double>(p.n));
    y.push_back(std::max(p.median_seconds, 1e-9));
  }
  return points.size() >= 2 ? loglog_slope(x, y) : 0.0;
}

detail::Json points_json(const std::vector<BenchPoint>& points, bool timings) {
  auto out = detail::Json::array();
  for (const auto& p : points) {
    detail::Json entry;
    entry["n"] = p.n;
    entry["operations"] = p.operations;
    if (timings) {
      entry["median_seconds"] = p.median_seconds;
      entry["seconds"] = p.seconds;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace

void BenchConfig::validate() const {
  params.validate();
  if (max_depth > params.precision) {
    throw ValidationError("max_depth exceeds precision");
  }
  if (repetitions < 1) {
    throw ValidationError("repetitions must be at least 1");
  }
  for (const auto* sizes : {&baire_sizes, &ahc_sizes}) {
    for (std::size_t i = 0; i < sizes->size(); ++i) {
      if ((*sizes)[i] == 0 || (i > 0 && (*sizes)[i] <= (*sizes)[i - 1])) {
        throw ValidationError("benchmark sizes must be positive and strictly increasing");
      }
    }
  }
}

double median(std::vector<double> values) {
  if (values.empty()) {
    return 0.0;
  }
  std::sort(values.begin(), values.end());
  const auto mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("slope fit needs at least two paired points");
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

BenchResult run_bench(const BenchConfig& config) {
  config.validate();
  std::size_t largest = 0;
  for (auto n : config.baire_sizes) {
    largest = std::max(largest, n);
  }
  for (auto n : config.ahc_sizes) {
    largest = std::max(largest, n);
  }
  SynthConfig synth;
  synth.n = largest;
  synth.seed = config.seed;
  const auto catalog = generate_catalog(synth);
  std::vector<double> values;
  values.reserve(catalog.size());
  for (const auto& r : catalog) {
    values.push_back(r.z_spec);
  }

  BenchResult result;
  result.max_depth = config.max_depth;
  TreeOptions options;
  options.max_depth = config.max_depth;
  for (auto n : config.baire_sizes) {
    BenchPoint point;
    point.n = n;
    const std::span<const double> input(values.data(), n);
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      point.seconds.push_back(time_seconds([&] {
        const auto tree = BaireTree::build(input, config.params, options);
        point.operations = tree.bucket_operations();
      }));
    }
    point.median_seconds = median(point.seconds);
    result.baire.push_back(std::move(point));
  }

  BaireParams ahc_params = config.params;
  ahc_params.precision = std::max<std::uint32_t>(config.max_depth, 1);
  AgglomerateOptions ahc_options;
  ahc_options.max_n = std::max<std::size_t>(2000, config.ahc_sizes.empty() ? 0 : config.ahc_sizes.back());
  for (auto n : config.ahc_sizes) {
    BenchPoint point;
    point.n = n;
    const std::span<const double> input(values.data(), n);
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      point.seconds.push_back(time_seconds([&] {
        const auto matrix = baire_distance_matrix(input, ahc_params);
        const auto dendrogram = agglomerate(matrix, Linkage::kSingle, ahc_options);
        point.operations = dendrogram.merges().size();
      }));
    }
    point.median_seconds = median(point.seconds);
    result.ahc.push_back(std::move(point));
  }
  result.baire_slope = fitted_slope(result.baire);
  result.ahc_slope = fitted_slope(result.ahc);
  return result;
}

std::string BenchResult::counts_json() const {
  detail::Json doc;
  doc["max_depth"] = max_depth;
  doc["baire"] = points_json(baire, false);
  doc["ahc"] = points_json(ahc, false);
  return detail::dump(doc);
}

std::string BenchResult::timings_json() const {
  detail::Json doc;
  doc["max_depth"] = max_depth;
  doc["baire"] = points_json(baire, true);
  doc["ahc"] = points_json(ahc, true);
  doc["baire_loglog_slope"] = baire_slope;
  doc["ahc_loglog_slope"] = ahc_slope;
  return detail::dump(doc);
}

}  // namespace baire
