// SPDX-License-Identifier: Apache-2.0
//
// Reference agglomerative hierarchical clustering. Exists to check the prefix
// tree against a textbook closest-pair clustering, so it favours clarity over
// speed and refuses inputs above a configurable size.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "baire/baire_tree.hpp"
#include "baire/digit_codec.hpp"

namespace baire {

/// Dense symmetric n x n dissimilarity matrix.
class DissimilarityMatrix {
 public:
  DissimilarityMatrix() = default;
  explicit DissimilarityMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }

  /// Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double value) {
    values_[i * n_ + j] = value;
    values_[j * n_ + i] = value;
  }

  /// Throws ValidationError unless symmetric, finite, non-negative and zero on the diagonal.
  void validate() const;

  friend bool operator==(const DissimilarityMatrix&, const DissimilarityMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Pairwise Baire distances of the encoded values.
DissimilarityMatrix baire_distance_matrix(std::span<const double> values,
                                          const BaireParams& params);

enum class Linkage : std::uint8_t { kSingle, kComplete };

std::string to_string(Linkage linkage);
Linkage parse_linkage(const std::string& text);

/// Cluster ids follow the usual convention: leaves are 0..n-1, the cluster
/// created by merge i is n + i.
struct Merge {
  std::size_t cluster_a = 0;  // smaller id
  std::size_t cluster_b = 0;
  double level = 0.0;
  std::size_t size = 0;  // leaves in the merged cluster
};

class Dendrogram {
 public:
  Dendrogram(std::vector<ObservationId> leaves, std::vector<Merge> merges);

  const std::vector<ObservationId>& leaves() const { return leaves_; }
  const std::vector<Merge>& merges() const { return merges_; }
  std::size_t size() const { return leaves_.size(); }

  /// Level of the lowest cluster holding both leaves; 0 when a == b.
  double cophenetic(ObservationId a, ObservationId b) const;
  /// Indexed by leaf position.
  DissimilarityMatrix cophenetic_matrix() const;

  /// Clusters formed by all merges with level < threshold. Each cluster lists
  /// leaf ids ascending; clusters are ordered by their smallest id.
  std::vector<std::vector<ObservationId>> cut_below(double threshold) const;

  std::string to_json() const;

 private:
  std::size_t leaf_position(ObservationId id) const;
  std::size_t lowest_common_cluster(std::size_t a, std::size_t b) const;

  std::vector<ObservationId> leaves_;
  std::vector<Merge> merges_;
  std::vector<std::size_t> parent_;  // cluster id -> parent cluster id
};

struct AgglomerateOptions {
  std::size_t max_n = 2000;
  /// Leaf ids; defaults to 0..n-1.
  std::vector<ObservationId> leaf_ids;
};

/// Greedy closest-pair merging. Among equally close pairs the one whose
/// smallest-member ids (i, j), i < j, are lexicographically smallest merges
/// first. Throws ValidationError on invalid matrices or n above max_n.
Dendrogram agglomerate(const DissimilarityMatrix& dissimilarity, Linkage linkage,
                       const AgglomerateOptions& options = {});

}  // namespace baire
