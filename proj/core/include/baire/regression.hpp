// SPDX-License-Identifier: Apache-2.0
//
// Clusterwise nearest-neighbour regression over the Baire prefix tree.
//
// The predictor series is indexed in a BaireTree. A query descends its own
// digit path to the deepest node holding at least min_cluster_size training
// pairs, then averages the responses of the k nearest (by |predictor - query|)
// pairs inside that node. When even the level-0 bin is too small the model
// falls back to a global k-NN and reports depth -1.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "baire/baire_tree.hpp"
#include "baire/digit_codec.hpp"
#include "baire/redshift.hpp"

namespace baire {

enum class Direction : std::uint8_t {
  kPhotToSpec,  // predict z_spec from z_phot
  kSpecToPhot,
};

std::string to_string(Direction direction);
/// Accepts "phot-to-spec" and "spec-to-phot".
Direction parse_direction(const std::string& text);

struct TrainingPair {
  double predictor = 0.0;
  double response = 0.0;
  friend bool operator==(const TrainingPair&, const TrainingPair&) = default;
};

/// (predictor, response) per record for the given direction.
std::vector<TrainingPair> make_pairs(std::span<const RedshiftRecord> records, Direction direction);

struct RegressionConfig {
  std::size_t k_neighbors = 5;
  std::size_t min_cluster_size = 10;
  Direction direction = Direction::kPhotToSpec;
  BaireParams params;
  std::uint32_t max_depth = 6;

  void validate() const;
};

struct Prediction {
  double estimate = 0.0;
  int resolved_depth = -1;
  /// Training indices of the neighbours used, nearest first.
  std::vector<std::size_t> neighbors;
};

class ClusterwiseModel {
 public:
  /// Throws ValidationError on bad config or fewer than k_neighbors pairs.
  static ClusterwiseModel fit(std::vector<TrainingPair> training, const RegressionConfig& config);

  Prediction predict(double query) const;
  /// Global k-NN over all training pairs with the same tie rules.
  Prediction predict_global(double query) const;

  const RegressionConfig& config() const { return config_; }
  const BaireTree& tree() const { return tree_; }
  const std::vector<TrainingPair>& training() const { return training_; }

  /// Tree document whose leaves also list their [index, predictor, response] triples.
  std::string to_json() const;
  static ClusterwiseModel from_json(std::string_view text);

 private:
  ClusterwiseModel(RegressionConfig config, std::vector<TrainingPair> training, BaireTree tree);

  Prediction nearest(std::span<const std::size_t> candidates, double query, int depth) const;

  RegressionConfig config_;
  std::vector<TrainingPair> training_;
  BaireTree tree_;
  std::vector<std::size_t> by_predictor_;  // training indices sorted by (predictor, index)
};

struct RegressionReport {
  std::size_t n_test = 0;
  double rmse = 0.0;
  double mae = 0.0;
  double baseline_rmse = 0.0;
  double baseline_mae = 0.0;
  std::map<int, std::size_t> resolved_depth_counts;  // -1 means global fallback
  /// Predictions that used a neighbour outside the resolved prefix cluster.
  std::size_t locality_violations = 0;

  std::string to_json() const;
};

/// Throws ValidationError on an empty test set.
RegressionReport evaluate(const ClusterwiseModel& model, std::span<const TrainingPair> test);

struct Split {
  std::vector<TrainingPair> train;
  std::vector<TrainingPair> test;
};

/// Seeded shuffle, then the first round(test_fraction * n) pairs form the test set.
Split train_test_split(std::span<const TrainingPair> pairs, double test_fraction,
                       std::uint64_t seed);

}  // namespace baire
