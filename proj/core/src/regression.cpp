// SPDX-License-Identifier: Apache-2.0

#include "baire/regression.hpp"

#include <algorithm>
#include <cmath>

#include "baire/error.hpp"
#include "baire/random.hpp"
#include "json_support.hpp"

namespace baire {

std::string to_string(Direction direction) {
  return direction == Direction::kPhotToSpec ? "phot-to-spec" : "spec-to-phot";
}

Direction parse_direction(const std::string& text) {
  if (text == "phot-to-spec") {
    return Direction::kPhotToSpec;
  }
  if (text == "spec-to-phot") {
    return Direction::kSpecToPhot;
  }
  throw ValidationError("unknown direction '" + text + "' (expected phot-to-spec or spec-to-phot)");
}

std::vector<TrainingPair> make_pairs(std::span<const RedshiftRecord> records, Direction direction) {
  std::vector<TrainingPair> pairs;
  pairs.reserve(records.size());
  for (const auto& r : records) {
    if (direction == Direction::kPhotToSpec) {
      pairs.push_back({r.z_phot, r.z_spec});
    } else {
      pairs.push_back({r.z_spec, r.z_phot});
    }
  }
  return pairs;
}

void RegressionConfig::validate() const {
  params.validate();
  if (k_neighbors < 1) {
    throw ValidationError("k_neighbors must be at least 1");
  }
  if (min_cluster_size < k_neighbors) {
    throw ValidationError("min_cluster_size (" + std::to_string(min_cluster_size) +
                          ") must be at least k_neighbors (" + std::to_string(k_neighbors) + ")");
  }
  if (max_depth > params.precision) {
    throw ValidationError("max_depth exceeds precision");
  }
}

ClusterwiseModel::ClusterwiseModel(RegressionConfig config, std::vector<TrainingPair> training,
                                   BaireTree tree)
    : config_(std::move(config)), training_(std::move(training)), tree_(std::move(tree)) {
  by_predictor_.resize(training_.size());
  for (std::size_t i = 0; i < by_predictor_.size(); ++i) {
    by_predictor_[i] = i;
  }
  std::sort(by_predictor_.begin(), by_predictor_.end(), [&](std::size_t a, std::size_t b) {
    if (training_[a].predictor != training_[b].predictor) {
      return training_[a].predictor < training_[b].predictor;
    }
    return a < b;
  });
}

ClusterwiseModel ClusterwiseModel::fit(std::vector<TrainingPair> training,
                                       const RegressionConfig& config) {
  config.validate();
  if (training.size() < config.k_neighbors) {
    throw ValidationError("need at least k_neighbors = " + std::to_string(config.k_neighbors) +
                          " training pairs, got " + std::to_string(training.size()));
  }
  std::vector<Observation> observations;
  observations.reserve(training.size());
  for (std::size_t i = 0; i < training.size(); ++i) {
    if (!std::isfinite(training[i].response)) {
      throw EncodingError("training pair " + std::to_string(i) + " has a non-finite response");
    }
    observations.push_back({static_cast<ObservationId>(i), training[i].predictor});
  }
  TreeOptions options;
  options.max_depth = config.max_depth;
  auto tree = BaireTree::build(observations, config.params, options);
  return ClusterwiseModel(config, std::move(training), std::move(tree));
}

Prediction ClusterwiseModel::nearest(std::span<const std::size_t> candidates, double query,
                                     int depth) const {
  std::vector<std::size_t> order(candidates.begin(), candidates.end());
  const std::size_t k = std::min(config_.k_neighbors, order.size());
  auto closer = [&](std::size_t a, std::size_t b) {
    const double da = std::fabs(training_[a].predictor - query);
    const double db = std::fabs(training_[b].predictor - query);
    if (da != db) {
      return da < db;
    }
    if (training_[a].predictor != training_[b].predictor) {
      return training_[a].predictor < training_[b].predictor;
    }
    return a < b;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    closer);
  order.resize(k);
  double sum = 0.0;
  for (auto i : order) {
    sum += training_[i].response;
  }
  return {sum / static_cast<double>(k), depth, std::move(order)};
}

Prediction ClusterwiseModel::predict_global(double query) const {
  if (!std::isfinite(query)) {
    throw EncodingError("cannot predict for a non-finite query");
  }
  const std::size_t n = by_predictor_.size();
  const std::size_t k = config_.k_neighbors;
  const auto pos = static_cast<std::size_t>(
      std::lower_bound(by_predictor_.begin(), by_predictor_.end(), query,
                       [&](std::size_t i, double q) { return training_[i].predictor < q; }) -
      by_predictor_.begin());
  auto dist = [&](std::size_t sorted_index) {
    return std::fabs(training_[by_predictor_[sorted_index]].predictor - query);
  };
  std::size_t lo = pos >= k ? pos - k : 0;
  while (lo > 0 && lo < pos && dist(lo - 1) == dist(lo)) {
    --lo;
  }
  std::size_t hi = std::min(n, pos + k);
  while (hi < n && hi > pos && dist(hi) == dist(hi - 1)) {
    ++hi;
  }
  std::vector<std::size_t> window(by_predictor_.begin() + static_cast<std::ptrdiff_t>(lo),
                                  by_predictor_.begin() + static_cast<std::ptrdiff_t>(hi));
  return nearest(window, query, -1);
}

Prediction ClusterwiseModel::predict(double query) const {
  if (!std::isfinite(query)) {
    throw EncodingError("cannot predict for a non-finite query");
  }
  const auto path = tree_.path_of(encode(query, config_.params));
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    if (tree_.count(*it) >= config_.min_cluster_size) {
      const auto ids = tree_.members(*it);
      std::vector<std::size_t> candidates(ids.begin(), ids.end());
      return nearest(candidates, query, static_cast<int>(tree_.depth(*it)));
    }
  }
  return predict_global(query);
}

std::string ClusterwiseModel::to_json() const {
  auto doc = detail::parse(tree_.to_json(true), "tree");
  doc["format"] = "baire-clusterwise-model";
  doc["model"] = {{"k_neighbors", config_.k_neighbors},
                  {"min_cluster_size", config_.min_cluster_size},
                  {"direction", to_string(config_.direction)},
                  {"n_training", training_.size()}};
  for (auto& node : doc["nodes"]) {
    if (!node.contains("members")) {
      continue;
    }
    auto pairs = detail::Json::array();
    for (const auto& id : node["members"]) {
      const auto i = id.get<std::size_t>();
      pairs.push_back(detail::Json::array({i, training_[i].predictor, training_[i].response}));
    }
    node["pairs"] = std::move(pairs);
  }
  return detail::dump(doc);
}

ClusterwiseModel ClusterwiseModel::from_json(std::string_view text) {
  auto doc = detail::parse(text, "model");
  try {
    if (doc.value("format", std::string{}) != "baire-clusterwise-model") {
      throw DataError("not a baire-clusterwise-model document");
    }
    RegressionConfig config;
    config.k_neighbors = doc.at("model").at("k_neighbors").get<std::size_t>();
    config.min_cluster_size = doc.at("model").at("min_cluster_size").get<std::size_t>();
    config.direction = parse_direction(doc.at("model").at("direction").get<std::string>());
    config.params.base = doc.at("params").at("base").get<std::uint32_t>();
    config.params.precision = doc.at("params").at("precision").get<std::uint32_t>();
    config.params.rounding = parse_rounding(doc.at("params").at("rounding").get<std::string>());
    config.max_depth = doc.at("max_depth").get<std::uint32_t>();

    const auto n = doc.at("model").at("n_training").get<std::size_t>();
    std::vector<TrainingPair> training(n);
    std::vector<bool> seen(n, false);
    for (auto& node : doc.at("nodes")) {
      if (!node.contains("pairs")) {
        continue;
      }
      for (const auto& triple : node.at("pairs")) {
        const auto i = triple.at(0).get<std::size_t>();
        if (i >= n || seen[i]) {
          throw DataError("model lists a training index twice or out of range");
        }
        seen[i] = true;
        training[i] = {triple.at(1).get<double>(), triple.at(2).get<double>()};
      }
      node.erase("pairs");
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      throw DataError("model document is missing training pairs");
    }
    auto model = fit(std::move(training), config);

    doc["format"] = "baire-tree";
    doc.erase("model");
    const auto stored = BaireTree::from_json(detail::dump(doc));
    for (std::uint32_t depth = 0; depth <= config.max_depth; ++depth) {
      if (stored.level_partition(depth) != model.tree().level_partition(depth)) {
        throw DataError("stored tree does not match its training pairs");
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model document: ") + e.what());
  } catch (const ValidationError& e) {
    throw DataError(std::string("invalid model document: ") + e.what());
  }
}

std::string RegressionReport::to_json() const {
  detail::Json doc;
  doc["n_test"] = n_test;
  doc["rmse"] = rmse;
  doc["mae"] = mae;
  doc["baseline_rmse"] = baseline_rmse;
  doc["baseline_mae"] = baseline_mae;
  auto depths = detail::Json::array();
  for (const auto& [depth, count] : resolved_depth_counts) {
    depths.push_back({{"depth", depth}, {"count", count}});
  }
  doc["resolved_depth_counts"] = std::move(depths);
  doc["locality_violations"] = locality_violations;
  return detail::dump(doc);
}

RegressionReport evaluate(const ClusterwiseModel& model, std::span<const TrainingPair> test) {
  if (test.empty()) {
    throw ValidationError("evaluation needs a non-empty test set");
  }
  const auto& params = model.config().params;
  RegressionReport report;
  report.n_test = test.size();
  double se = 0.0;
  double ae = 0.0;
  double base_se = 0.0;
  double base_ae = 0.0;
  for (const auto& pair : test) {
    const auto p = model.predict(pair.predictor);
    const auto b = model.predict_global(pair.predictor);
    const double e = p.estimate - pair.response;
    const double eb = b.estimate - pair.response;
    se += e * e;
    ae += std::fabs(e);
    base_se += eb * eb;
    base_ae += std::fabs(eb);
    ++report.resolved_depth_counts[p.resolved_depth];

    if (p.resolved_depth >= 0) {
      const auto query = encode(pair.predictor, params);
      for (auto i : p.neighbors) {
        const auto shared =
            common_prefix_length(query, encode(model.training()[i].predictor, params));
        if (!shared || *shared < static_cast<std::size_t>(p.resolved_depth)) {
          ++report.locality_violations;
          break;
        }
      }
    }
  }
  const auto n = static_cast<double>(test.size());
  report.rmse = std::sqrt(se / n);
  report.mae = ae / n;
  report.baseline_rmse = std::sqrt(base_se / n);
  report.baseline_mae = base_ae / n;
  return report;
}

Split train_test_split(std::span<const TrainingPair> pairs, double test_fraction,
                       std::uint64_t seed) {
  if (!(test_fraction >= 0.0 && test_fraction <= 1.0)) {
    throw ValidationError("test fraction must be in [0, 1]");
  }
  std::vector<TrainingPair> shuffled(pairs.begin(), pairs.end());
  Rng rng(seed);
  rng.shuffle(std::span<TrainingPair>(shuffled));
  const auto n_test = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(shuffled.size())));
  Split split;
  split.test.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_test));
  split.train.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(n_test), shuffled.end());
  return split;
}

}  // namespace baire
