// SPDX-License-Identifier: Apache-2.0

#include "baire/dendrogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "baire/error.hpp"
#include "json_support.hpp"

namespace baire {

void DissimilarityMatrix::validate() const {
  for (std::size_t i = 0; i < n_; ++i) {
    if ((*this)(i, i) != 0.0) {
      throw ValidationError("dissimilarity diagonal must be zero (row " + std::to_string(i) + ")");
    }
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double v = (*this)(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw ValidationError("dissimilarity (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") must be finite and non-negative");
      }
      if (v != (*this)(j, i)) {
        throw ValidationError("dissimilarity matrix is not symmetric at (" + std::to_string(i) +
                              ", " + std::to_string(j) + ")");
      }
    }
  }
}

DissimilarityMatrix baire_distance_matrix(std::span<const double> values,
                                          const BaireParams& params) {
  std::vector<DigitString> encoded;
  encoded.reserve(values.size());
  for (double v : values) {
    encoded.push_back(encode(v, params));
  }
  DissimilarityMatrix d(values.size());
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    for (std::size_t j = i + 1; j < encoded.size(); ++j) {
      d.set(i, j, baire_distance(encoded[i], encoded[j], params));
    }
  }
  return d;
}

std::string to_string(Linkage linkage) {
  return linkage == Linkage::kSingle ? "single" : "complete";
}

Linkage parse_linkage(const std::string& text) {
  if (text == "single") {
    return Linkage::kSingle;
  }
  if (text == "complete") {
    return Linkage::kComplete;
  }
  throw ValidationError("unknown linkage '" + text + "' (expected single or complete)");
}

Dendrogram::Dendrogram(std::vector<ObservationId> leaves, std::vector<Merge> merges)
    : leaves_(std::move(leaves)), merges_(std::move(merges)) {
  const std::size_t n = leaves_.size();
  if (n > 0 && merges_.size() > n - 1) {
    throw DataError("dendrogram has more than n - 1 merges");
  }
  parent_.assign(n + merges_.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < merges_.size(); ++i) {
    const auto& m = merges_[i];
    if (m.cluster_a >= n + i || m.cluster_b >= n + i) {
      throw DataError("merge refers to a cluster that does not exist yet");
    }
    parent_[m.cluster_a] = n + i;
    parent_[m.cluster_b] = n + i;
  }
}

std::size_t Dendrogram::leaf_position(ObservationId id) const {
  auto it = std::find(leaves_.begin(), leaves_.end(), id);
  if (it == leaves_.end()) {
    throw DataError("unknown leaf " + std::to_string(id));
  }
  return static_cast<std::size_t>(it - leaves_.begin());
}

std::size_t Dendrogram::lowest_common_cluster(std::size_t a, std::size_t b) const {
  constexpr auto kNone = std::numeric_limits<std::size_t>::max();
  std::vector<bool> above_a(parent_.size(), false);
  for (auto c = a; c != kNone; c = parent_[c]) {
    above_a[c] = true;
  }
  for (auto c = b; c != kNone; c = parent_[c]) {
    if (above_a[c]) {
      return c;
    }
  }
  return kNone;
}

double Dendrogram::cophenetic(ObservationId a, ObservationId b) const {
  const auto pa = leaf_position(a);
  const auto pb = leaf_position(b);
  if (pa == pb) {
    return 0.0;
  }
  const auto c = lowest_common_cluster(pa, pb);
  if (c == std::numeric_limits<std::size_t>::max()) {
    return std::numeric_limits<double>::infinity();
  }
  return merges_[c - leaves_.size()].level;
}

DissimilarityMatrix Dendrogram::cophenetic_matrix() const {
  const std::size_t n = leaves_.size();
  DissimilarityMatrix out(n);
  // Members of every cluster, built bottom-up; each merge fixes the distance
  // between the members of its two children.
  std::vector<std::vector<std::size_t>> members(n + merges_.size());
  for (std::size_t i = 0; i < n; ++i) {
    members[i] = {i};
  }
  for (std::size_t m = 0; m < merges_.size(); ++m) {
    const auto& left = members[merges_[m].cluster_a];
    const auto& right = members[merges_[m].cluster_b];
    for (auto i : left) {
      for (auto j : right) {
        out.set(i, j, merges_[m].level);
      }
    }
    auto& joined = members[n + m];
    joined.reserve(left.size() + right.size());
    joined.insert(joined.end(), left.begin(), left.end());
    joined.insert(joined.end(), right.begin(), right.end());
  }
  return out;
}

std::vector<std::vector<ObservationId>> Dendrogram::cut_below(double threshold) const {
  const std::size_t n = leaves_.size();
  std::vector<std::size_t> uf(n);
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](std::size_t x) {
    while (uf[x] != x) {
      uf[x] = uf[uf[x]];
      x = uf[x];
    }
    return x;
  };
  // Any leaf of each cluster id stands in for the whole cluster.
  std::vector<std::size_t> rep(n + merges_.size());
  std::iota(rep.begin(), rep.begin() + static_cast<std::ptrdiff_t>(n), 0);
  for (std::size_t m = 0; m < merges_.size(); ++m) {
    rep[n + m] = rep[merges_[m].cluster_a];
    if (merges_[m].level < threshold) {
      uf[find(rep[merges_[m].cluster_b])] = find(rep[merges_[m].cluster_a]);
    }
  }
  std::vector<std::vector<ObservationId>> groups;
  std::vector<std::size_t> group_of(n, std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return leaves_[x] < leaves_[y]; });
  for (auto i : order) {
    const auto root = find(i);
    if (group_of[root] == std::numeric_limits<std::size_t>::max()) {
      group_of[root] = groups.size();
      groups.emplace_back();
    }
    groups[group_of[root]].push_back(leaves_[i]);
  }
  return groups;
}

std::string Dendrogram::to_json() const {
  detail::Json doc;
  doc["format"] = "baire-dendrogram";
  doc["n"] = leaves_.size();
  doc["leaves"] = leaves_;
  auto merges = detail::Json::array();
  for (const auto& m : merges_) {
    merges.push_back(
        {{"a", m.cluster_a}, {"b", m.cluster_b}, {"level", m.level}, {"size", m.size}});
  }
  doc["merges"] = std::move(merges);
  return detail::dump(doc);
}

Dendrogram agglomerate(const DissimilarityMatrix& dissimilarity, Linkage linkage,
                       const AgglomerateOptions& options) {
  const std::size_t n = dissimilarity.size();
  if (n == 0) {
    throw ValidationError("agglomerate needs at least one observation");
  }
  if (n > options.max_n) {
    throw ValidationError("agglomerate is capped at n = " + std::to_string(options.max_n) +
                          ", got " + std::to_string(n));
  }
  if (!options.leaf_ids.empty() && options.leaf_ids.size() != n) {
    throw ValidationError("leaf id count does not match the matrix size");
  }
  dissimilarity.validate();

  std::vector<ObservationId> leaves = options.leaf_ids;
  if (leaves.empty()) {
    leaves.resize(n);
    std::iota(leaves.begin(), leaves.end(), ObservationId{0});
  }

  // Slot i holds the cluster whose smallest leaf position is i, so comparing
  // slot indices is comparing the tie-break keys.
  DissimilarityMatrix d = dissimilarity;
  constexpr auto kNone = std::numeric_limits<std::size_t>::max();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<bool> active(n, true);
  std::vector<std::size_t> cluster_id(n);
  std::vector<std::size_t> size(n, 1);
  std::iota(cluster_id.begin(), cluster_id.end(), 0);
  std::vector<std::size_t> nn(n, kNone);
  std::vector<double> nn_dist(n, kInf);

  auto refresh = [&](std::size_t k) {
    nn[k] = kNone;
    nn_dist[k] = kInf;
    for (std::size_t l = k + 1; l < n; ++l) {
      if (active[l] && d(k, l) < nn_dist[k]) {
        nn[k] = l;
        nn_dist[k] = d(k, l);
      }
    }
  };
  for (std::size_t k = 0; k < n; ++k) {
    refresh(k);
  }

  std::vector<Merge> merges;
  merges.reserve(n - 1);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t i = kNone;
    for (std::size_t k = 0; k < n; ++k) {
      if (active[k] && nn[k] != kNone && (i == kNone || nn_dist[k] < nn_dist[i])) {
        i = k;
      }
    }
    const std::size_t j = nn[i];
    const double level = nn_dist[i];

    merges.push_back({std::min(cluster_id[i], cluster_id[j]),
                      std::max(cluster_id[i], cluster_id[j]), level, size[i] + size[j]});

    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == i || k == j) {
        continue;
      }
      const double merged = linkage == Linkage::kSingle ? std::min(d(i, k), d(j, k))
                                                        : std::max(d(i, k), d(j, k));
      d.set(i, k, merged);
    }
    active[j] = false;
    size[i] += size[j];
    cluster_id[i] = n + step;

    for (std::size_t k = 0; k < i; ++k) {
      if (!active[k]) {
        continue;
      }
      if (nn[k] == i || nn[k] == j) {
        refresh(k);
      } else if (d(k, i) < nn_dist[k] || (d(k, i) == nn_dist[k] && i < nn[k])) {
        nn[k] = i;
        nn_dist[k] = d(k, i);
      }
    }
    refresh(i);
    for (std::size_t k = i + 1; k < j; ++k) {
      if (active[k] && nn[k] == j) {
        refresh(k);
      }
    }
  }
  return Dendrogram(std::move(leaves), std::move(merges));
}

}  // namespace baire
