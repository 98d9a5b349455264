// SPDX-License-Identifier: Apache-2.0
//
// One-pass m-adic prefix tree. Observations are encoded once and dropped into
// one bin per level: level 0 is keyed by sign and integer digits, level k by the
// first k fractional digits. The depth-k nodes are the Baire clusters at
// resolution m^-k. Building costs exactly n * (max_depth + 1) bucket steps.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "baire/digit_codec.hpp"

namespace baire {

using ObservationId = std::uint64_t;

struct Observation {
  ObservationId id = 0;
  double value = 0.0;
};

/// Opaque index of a node inside one tree.
struct NodeHandle {
  std::uint32_t index = 0;
  friend bool operator==(NodeHandle, NodeHandle) = default;
};

/// Value view of one cluster.
struct BaireNode {
  Level0Key level0;
  std::vector<Digit> path;  // fractional digits; empty at depth 0
  std::size_t count = 0;
  std::vector<ObservationId> member_ids;  // ascending

  std::size_t depth() const { return path.size(); }
};

struct PartitionEntry {
  Level0Key level0;
  std::vector<Digit> path;
  std::size_t count = 0;

  friend bool operator==(const PartitionEntry&, const PartitionEntry&) = default;
};

struct TreeOptions {
  std::uint32_t max_depth = 6;
  /// Member ids are stored at every depth >= this one (default: leaves only).
  std::optional<std::uint32_t> materialize_from_depth;
};

class BaireTree {
 public:
  /// Throws ValidationError if max_depth exceeds params.precision, EncodingError
  /// naming the id of a non-finite value, DataError on a duplicate id.
  static BaireTree build(std::span<const Observation> values, const BaireParams& params,
                         const TreeOptions& options = {});

  /// Convenience overload: ids are the positions in `values`.
  static BaireTree build(std::span<const double> values, const BaireParams& params,
                         const TreeOptions& options = {});

  BaireTree(const BaireTree& other);
  BaireTree(BaireTree&& other) noexcept;
  BaireTree& operator=(const BaireTree& other);
  BaireTree& operator=(BaireTree&& other) noexcept;
  ~BaireTree();

  const BaireParams& params() const { return params_; }
  std::uint32_t max_depth() const { return max_depth_; }
  std::size_t n_items() const { return n_items_; }
  std::size_t node_count() const { return nodes_.size(); }
  /// Number of (item, level) bucket assignments performed while building.
  std::uint64_t bucket_operations() const { return bucket_operations_; }

  /// Node on the encoded value's path at `depth`, members included.
  std::optional<BaireNode> cluster_of(double value, std::uint32_t depth) const;

  /// Populated nodes at `depth`, ordered by (level-0 key, path).
  std::vector<PartitionEntry> level_partition(std::uint32_t depth) const;

  /// Same as level_partition() but each entry carries its member ids.
  std::vector<BaireNode> level_clusters(std::uint32_t depth) const;

  /// Baire distance read off the deepest common node; at most resolution m^-max_depth.
  double induced_ultrametric(ObservationId a, ObservationId b) const;

  bool contains(ObservationId id) const { return leaf_node(id).has_value(); }

  /// Handles along the path of `digits`, from level 0 down to the deepest
  /// populated node (empty when the level-0 bin is absent).
  std::vector<NodeHandle> path_of(const DigitString& digits) const;

  std::size_t count(NodeHandle node) const { return nodes_[node.index].count; }
  std::uint32_t depth(NodeHandle node) const { return nodes_[node.index].depth; }
  /// All observations in the node's subtree, ascending.
  std::vector<ObservationId> members(NodeHandle node) const;
  BaireNode node(NodeHandle node) const;

  /// {params, max_depth, n_items, nodes: [{sign, int_digits, path, count, members?}]}
  std::string to_json(bool include_members = true) const;
  /// Throws DataError when the document is malformed or its counts are inconsistent.
  static BaireTree from_json(std::string_view text);

 private:
  static constexpr std::uint32_t kNoNode = 0xffffffffu;

  struct Node {
    std::uint32_t parent = kNoNode;
    std::uint32_t first_child = kNoNode;
    std::uint32_t next_sibling = kNoNode;
    std::uint32_t root = 0;  // index into root_keys_
    std::uint32_t depth = 0;
    Digit digit = 0;
    std::size_t count = 0;
    std::size_t member_begin = 0;  // into member_pool_, materialized nodes only
  };

  BaireTree(const BaireParams& params, const TreeOptions& options);
  struct ChildIndex;

  std::uint32_t root_for(const Level0Key& key);
  std::uint32_t child_for(std::uint32_t parent, Digit digit);
  std::optional<std::uint32_t> find_child(std::uint32_t parent, Digit digit) const;
  void insert(ObservationId id, const DigitString& digits);
  std::vector<Digit> path_digits(std::uint32_t node) const;
  void collect_members(std::uint32_t node, std::vector<ObservationId>& out) const;
  std::vector<std::uint32_t> nodes_at_depth(std::uint32_t depth) const;
  void check_depth(std::uint32_t depth) const;
  void index_leaves();
  std::optional<std::uint32_t> leaf_node(ObservationId id) const;
  bool materialized(std::uint32_t depth) const { return depth >= materialize_from_; }

  BaireParams params_;
  std::uint32_t max_depth_ = 0;
  std::uint32_t materialize_from_ = 0;
  std::size_t n_items_ = 0;
  std::uint64_t bucket_operations_ = 0;
  std::vector<Node> nodes_;
  std::vector<Level0Key> root_keys_;
  std::map<Level0Key, std::uint32_t> roots_;
  std::unique_ptr<ChildIndex> children_;  // parent * base + digit -> node
  std::vector<std::pair<ObservationId, std::uint32_t>> leaf_of_;  // sorted by id after build
  std::vector<ObservationId> member_pool_;  // empty when members were not loaded
};

/// Upper bound on the number of depth-k nodes below one level-0 bin when the
/// first fractional digit is restricted to `level1_alphabet` symbols.
std::uint64_t potential_node_count(std::uint32_t level1_alphabet, std::uint32_t base,
                                   std::uint32_t depth);

}  // namespace baire
