// SPDX-License-Identifier: Apache-2.0

#include "baire/baire_tree.hpp"

#include <absl/container/flat_hash_map.h>

#include <algorithm>
#include <limits>

#include "baire/error.hpp"
#include "json_support.hpp"

namespace baire {

struct BaireTree::ChildIndex {
  absl::flat_hash_map<std::uint64_t, std::uint32_t> map;
};

BaireTree::BaireTree(const BaireParams& params, const TreeOptions& options)
    : params_(params), max_depth_(options.max_depth), children_(std::make_unique<ChildIndex>()) {
  params_.validate();
  if (max_depth_ > params_.precision) {
    throw ValidationError("max_depth " + std::to_string(max_depth_) + " exceeds precision " +
                          std::to_string(params_.precision));
  }
  materialize_from_ = std::min(options.materialize_from_depth.value_or(max_depth_), max_depth_);
}

BaireTree::BaireTree(const BaireTree& other)
    : params_(other.params_),
      max_depth_(other.max_depth_),
      materialize_from_(other.materialize_from_),
      n_items_(other.n_items_),
      bucket_operations_(other.bucket_operations_),
      nodes_(other.nodes_),
      root_keys_(other.root_keys_),
      roots_(other.roots_),
      children_(std::make_unique<ChildIndex>(*other.children_)),
      leaf_of_(other.leaf_of_),
      member_pool_(other.member_pool_) {}

BaireTree::BaireTree(BaireTree&& other) noexcept = default;
BaireTree& BaireTree::operator=(BaireTree&& other) noexcept = default;
BaireTree::~BaireTree() = default;

BaireTree& BaireTree::operator=(const BaireTree& other) {
  if (this != &other) {
    BaireTree copy(other);
    *this = std::move(copy);
  }
  return *this;
}

BaireTree BaireTree::build(std::span<const Observation> values, const BaireParams& params,
                           const TreeOptions& options) {
  BaireTree tree(params, options);
  tree.leaf_of_.reserve(values.size());
  for (const auto& obs : values) {
    DigitString digits;
    try {
      digits = encode(obs.value, params);
    } catch (const EncodingError& e) {
      throw EncodingError("observation " + std::to_string(obs.id) + ": " + e.what());
    }
    tree.insert(obs.id, digits);
  }
  tree.index_leaves();
  return tree;
}

BaireTree BaireTree::build(std::span<const double> values, const BaireParams& params,
                           const TreeOptions& options) {
  std::vector<Observation> observations;
  observations.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    observations.push_back({static_cast<ObservationId>(i), values[i]});
  }
  return build(observations, params, options);
}

std::uint32_t BaireTree::root_for(const Level0Key& key) {
  if (auto it = roots_.find(key); it != roots_.end()) {
    return it->second;
  }
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  Node node;
  node.root = static_cast<std::uint32_t>(root_keys_.size());
  nodes_.push_back(std::move(node));
  root_keys_.push_back(key);
  roots_.emplace(key, index);
  return index;
}

std::optional<std::uint32_t> BaireTree::find_child(std::uint32_t parent, Digit digit) const {
  const std::uint64_t key = static_cast<std::uint64_t>(parent) * params_.base + digit;
  if (auto it = children_->map.find(key); it != children_->map.end()) {
    return it->second;
  }
  return std::nullopt;
}

std::uint32_t BaireTree::child_for(std::uint32_t parent, Digit digit) {
  const std::uint64_t key = static_cast<std::uint64_t>(parent) * params_.base + digit;
  auto [it, inserted] =
      children_->map.try_emplace(key, static_cast<std::uint32_t>(nodes_.size()));
  if (!inserted) {
    return it->second;
  }
  const std::uint32_t index = it->second;
  if (nodes_.size() >= kNoNode) {
    throw ValidationError("tree exceeds the maximum node count");
  }
  Node node;
  node.parent = parent;
  node.root = nodes_[parent].root;
  node.depth = nodes_[parent].depth + 1;
  node.digit = digit;
  node.next_sibling = nodes_[parent].first_child;
  nodes_.push_back(std::move(node));
  nodes_[parent].first_child = index;
  return index;
}

void BaireTree::insert(ObservationId id, const DigitString& digits) {
  std::uint32_t current = root_for(digits.level0);
  ++bucket_operations_;
  for (std::uint32_t depth = 0;; ++depth) {
    ++nodes_[current].count;
    if (depth == max_depth_) {
      break;
    }
    current = child_for(current, digits.frac_digits[depth]);
    ++bucket_operations_;
  }
  leaf_of_.emplace_back(id, current);
  ++n_items_;
}

void BaireTree::index_leaves() {
  // Ids usually arrive in increasing order; skip the sort then.
  if (!std::is_sorted(leaf_of_.begin(), leaf_of_.end())) {
    std::sort(leaf_of_.begin(), leaf_of_.end());
  }
  const auto dup = std::adjacent_find(leaf_of_.begin(), leaf_of_.end(),
                                      [](const auto& a, const auto& b) { return a.first == b.first; });
  if (dup != leaf_of_.end()) {
    throw DataError("duplicate observation id " + std::to_string(dup->first));
  }
  if (leaf_of_.empty()) {
    return;
  }
  // Counting sort of ids into the materialized nodes; ids arrive ascending.
  std::size_t offset = 0;
  for (auto& n : nodes_) {
    if (materialized(n.depth)) {
      n.member_begin = offset;
      offset += n.count;
    }
  }
  member_pool_.assign(offset, 0);
  std::vector<std::size_t> cursor(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    cursor[i] = nodes_[i].member_begin;
  }
  for (const auto& [id, leaf] : leaf_of_) {
    for (auto n = leaf; n != kNoNode && materialized(nodes_[n].depth); n = nodes_[n].parent) {
      member_pool_[cursor[n]++] = id;
    }
  }
}

std::optional<std::uint32_t> BaireTree::leaf_node(ObservationId id) const {
  const auto it = std::lower_bound(leaf_of_.begin(), leaf_of_.end(), id,
                                   [](const auto& entry, ObservationId v) { return entry.first < v; });
  if (it == leaf_of_.end() || it->first != id) {
    return std::nullopt;
  }
  return it->second;
}

void BaireTree::check_depth(std::uint32_t depth) const {
  if (depth > max_depth_) {
    throw ValidationError("depth " + std::to_string(depth) + " out of range [0, " +
                          std::to_string(max_depth_) + "]");
  }
}

std::vector<NodeHandle> BaireTree::path_of(const DigitString& digits) const {
  if (!(digits.params == params_)) {
    throw IncompatibleEncodingError("digit string was encoded with different parameters");
  }
  std::vector<NodeHandle> path;
  auto root = roots_.find(digits.level0);
  if (root == roots_.end()) {
    return path;
  }
  std::uint32_t current = root->second;
  path.push_back({current});
  for (std::uint32_t depth = 0; depth < max_depth_; ++depth) {
    auto next = find_child(current, digits.frac_digits[depth]);
    if (!next) {
      break;
    }
    current = *next;
    path.push_back({current});
  }
  return path;
}

std::optional<BaireNode> BaireTree::cluster_of(double value, std::uint32_t depth) const {
  check_depth(depth);
  const auto path = path_of(encode(value, params_));
  if (path.size() <= depth) {
    return std::nullopt;
  }
  return node(path[depth]);
}

std::vector<Digit> BaireTree::path_digits(std::uint32_t index) const {
  std::vector<Digit> digits(nodes_[index].depth);
  for (std::uint32_t cur = index; nodes_[cur].depth > 0; cur = nodes_[cur].parent) {
    digits[nodes_[cur].depth - 1] = nodes_[cur].digit;
  }
  return digits;
}

void BaireTree::collect_members(std::uint32_t index, std::vector<ObservationId>& out) const {
  const Node& n = nodes_[index];
  if (materialized(n.depth)) {
    if (!member_pool_.empty()) {
      const auto first = member_pool_.begin() + static_cast<std::ptrdiff_t>(n.member_begin);
      out.insert(out.end(), first, first + static_cast<std::ptrdiff_t>(n.count));
    }
    return;
  }
  for (auto child = n.first_child; child != kNoNode; child = nodes_[child].next_sibling) {
    collect_members(child, out);
  }
}

std::vector<ObservationId> BaireTree::members(NodeHandle handle) const {
  std::vector<ObservationId> out;
  out.reserve(nodes_[handle.index].count);
  collect_members(handle.index, out);
  if (!materialized(nodes_[handle.index].depth)) {
    std::sort(out.begin(), out.end());
  }
  return out;
}

BaireNode BaireTree::node(NodeHandle handle) const {
  const Node& n = nodes_[handle.index];
  return {root_keys_[n.root], path_digits(handle.index), n.count, members(handle)};
}

std::vector<std::uint32_t> BaireTree::nodes_at_depth(std::uint32_t depth) const {
  std::vector<std::uint32_t> selected;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].depth == depth) {
      selected.push_back(i);
    }
  }
  std::vector<std::pair<std::vector<Digit>, std::uint32_t>> keyed;
  keyed.reserve(selected.size());
  for (auto i : selected) {
    keyed.emplace_back(path_digits(i), i);
  }
  std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
    const auto& ka = root_keys_[nodes_[a.second].root];
    const auto& kb = root_keys_[nodes_[b.second].root];
    if (ka != kb) {
      return ka < kb;
    }
    return a.first < b.first;
  });
  selected.clear();
  for (const auto& entry : keyed) {
    selected.push_back(entry.second);
  }
  return selected;
}

std::vector<PartitionEntry> BaireTree::level_partition(std::uint32_t depth) const {
  check_depth(depth);
  std::vector<PartitionEntry> out;
  for (auto i : nodes_at_depth(depth)) {
    out.push_back({root_keys_[nodes_[i].root], path_digits(i), nodes_[i].count});
  }
  return out;
}

std::vector<BaireNode> BaireTree::level_clusters(std::uint32_t depth) const {
  check_depth(depth);
  std::vector<BaireNode> out;
  for (auto i : nodes_at_depth(depth)) {
    out.push_back(node({i}));
  }
  return out;
}

double BaireTree::induced_ultrametric(ObservationId a, ObservationId b) const {
  const auto ia = leaf_node(a);
  const auto ib = leaf_node(b);
  if (!ia || !ib) {
    throw DataError("unknown observation id " + std::to_string(ia ? b : a));
  }
  std::uint32_t x = *ia;
  std::uint32_t y = *ib;
  if (nodes_[x].root != nodes_[y].root) {
    return 1.0;
  }
  // Every observation reaches max_depth, so both walks start at the same depth.
  while (x != y) {
    x = nodes_[x].parent;
    y = nodes_[y].parent;
  }
  const std::uint32_t shared = nodes_[x].depth;
  return shared == 0 ? 1.0 : base_power(params_.base, shared);
}

std::string BaireTree::to_json(bool include_members) const {
  using detail::Json;
  Json doc;
  doc["format"] = "baire-tree";
  doc["version"] = 1;
  doc["params"] = {{"base", params_.base},
                   {"precision", params_.precision},
                   {"rounding", to_string(params_.rounding)}};
  doc["max_depth"] = max_depth_;
  doc["n_items"] = n_items_;
  Json nodes = Json::array();
  for (std::uint32_t depth = 0; depth <= max_depth_; ++depth) {
    for (auto i : nodes_at_depth(depth)) {
      const auto& key = root_keys_[nodes_[i].root];
      Json entry;
      entry["sign"] = key.sign;
      entry["int_digits"] = key.int_digits;
      entry["path"] = path_digits(i);
      entry["count"] = nodes_[i].count;
      if (include_members && depth == max_depth_ && !member_pool_.empty()) {
        entry["members"] = members({i});
      }
      nodes.push_back(std::move(entry));
    }
  }
  doc["nodes"] = std::move(nodes);
  return detail::dump(doc);
}

BaireTree BaireTree::from_json(std::string_view text) {
  const auto doc = detail::parse(text, "tree");
  try {
    if (doc.value("format", std::string{}) != "baire-tree") {
      throw DataError("not a baire-tree document");
    }
    BaireParams params;
    params.base = doc.at("params").at("base").get<std::uint32_t>();
    params.precision = doc.at("params").at("precision").get<std::uint32_t>();
    params.rounding = parse_rounding(doc.at("params").at("rounding").get<std::string>());
    TreeOptions options;
    options.max_depth = doc.at("max_depth").get<std::uint32_t>();
    BaireTree tree(params, options);

    const auto& nodes = doc.at("nodes");
    bool any_members = false;
    for (const auto& entry : nodes) {
      Level0Key key{entry.at("sign").get<int>(), entry.at("int_digits").get<std::vector<Digit>>()};
      const auto path = entry.at("path").get<std::vector<Digit>>();
      if (path.size() > tree.max_depth_) {
        throw DataError("node path deeper than max_depth");
      }
      if (key.sign != 1 && key.sign != -1) {
        throw DataError("node sign must be +1 or -1");
      }
      for (Digit d : key.int_digits) {
        if (d >= params.base) {
          throw DataError("integer digit out of range for base");
        }
      }
      std::uint32_t current = tree.root_for(key);
      for (Digit d : path) {
        if (d >= params.base) {
          throw DataError("path digit out of range for base");
        }
        current = tree.child_for(current, d);
      }
      Node& node = tree.nodes_[current];
      if (node.count != 0) {
        throw DataError("duplicate node in tree document");
      }
      node.count = entry.at("count").get<std::size_t>();
      if (entry.contains("members")) {
        any_members = true;
        if (path.size() != tree.max_depth_) {
          throw DataError("member lists are only allowed on deepest-level nodes");
        }
        const auto ids = entry.at("members").get<std::vector<ObservationId>>();
        if (ids.size() != node.count) {
          throw DataError("leaf member list does not match its count");
        }
        for (auto id : ids) {
          tree.leaf_of_.emplace_back(id, current);
        }
      }
    }

    // Counts must add up level by level.
    std::size_t total = 0;
    for (std::uint32_t i = 0; i < tree.nodes_.size(); ++i) {
      const Node& n = tree.nodes_[i];
      if (n.count == 0) {
        throw DataError("tree document omits a populated node");
      }
      if (n.depth == 0) {
        total += n.count;
      }
      if (n.depth < tree.max_depth_) {
        std::size_t below = 0;
        for (auto c = n.first_child; c != kNoNode; c = tree.nodes_[c].next_sibling) {
          below += tree.nodes_[c].count;
        }
        if (below != n.count) {
          throw DataError("node count does not equal the sum of its children");
        }
      }
    }
    if (total != doc.at("n_items").get<std::size_t>()) {
      throw DataError("n_items does not match the level-0 counts");
    }
    if (any_members && tree.leaf_of_.size() != total) {
      throw DataError("member lists cover only part of the tree");
    }
    tree.index_leaves();
    tree.n_items_ = total;
    tree.bucket_operations_ = 0;
    return tree;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed tree document: ") + e.what());
  } catch (const ValidationError& e) {
    throw DataError(std::string("invalid tree document: ") + e.what());
  }
}

std::uint64_t potential_node_count(std::uint32_t level1_alphabet, std::uint32_t base,
                                   std::uint32_t depth) {
  if (depth == 0) {
    return 1;
  }
  std::uint64_t total = level1_alphabet;
  for (std::uint32_t k = 1; k < depth; ++k) {
    total *= base;
  }
  return total;
}

}  // namespace baire
