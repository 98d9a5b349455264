// SPDX-License-Identifier: Apache-2.0

#include "baire/baire_tree.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "baire/error.hpp"
#include "oracles.hpp"

namespace baire {
namespace {

const BaireParams kDecimal6{10, 6, Rounding::kTruncate};

TreeOptions depth(std::uint32_t d) {
  TreeOptions o;
  o.max_depth = d;
  return o;
}

std::vector<Digit> path(std::initializer_list<Digit> d) { return d; }

BaireTree four_points(std::uint32_t max_depth) {
  const std::vector<double> values{0.41, 0.42, 0.49, 0.70};
  return BaireTree::build(values, kDecimal6, depth(max_depth));
}

TEST(BaireTree, FirstDecimalPartition) {
  const auto tree = four_points(1);
  const auto level1 = tree.level_partition(1);
  ASSERT_EQ(level1.size(), 2u);
  EXPECT_EQ(level1[0].path, path({4}));
  EXPECT_EQ(level1[0].count, 3u);
  EXPECT_EQ(level1[1].path, path({7}));
  EXPECT_EQ(level1[1].count, 1u);

  const auto clusters = tree.level_clusters(1);
  EXPECT_EQ(clusters[0].member_ids, (std::vector<ObservationId>{0, 1, 2}));
  EXPECT_EQ(clusters[1].member_ids, (std::vector<ObservationId>{3}));
}

TEST(BaireTree, EmptyInput) {
  const auto tree = BaireTree::build(std::vector<double>{}, kDecimal6, depth(3));
  EXPECT_EQ(tree.n_items(), 0u);
  EXPECT_TRUE(tree.level_partition(2).empty());
  EXPECT_EQ(tree.bucket_operations(), 0u);
}

TEST(BaireTree, DeepPathAndPotentialNodes) {
  const auto tree = BaireTree::build(std::vector<double>{0.1257}, kDecimal6, depth(4));
  const auto node = tree.cluster_of(0.1257, 4);
  ASSERT_TRUE(node.has_value());
  EXPECT_EQ(node->path, path({1, 2, 5, 7}));
  EXPECT_EQ(potential_node_count(6, 10, 4), 6000u);
  EXPECT_EQ(potential_node_count(6, 10, 1), 6u);
  EXPECT_EQ(potential_node_count(6, 10, 0), 1u);
}

TEST(BaireTree, ClusterOf) {
  const std::vector<double> values{0.437, 0.439, 0.5};
  const auto tree = BaireTree::build(values, kDecimal6, depth(3));
  const auto node = tree.cluster_of(0.437, 2);
  ASSERT_TRUE(node.has_value());
  EXPECT_EQ(node->path, path({4, 3}));
  EXPECT_EQ(node->count, 2u);
  EXPECT_EQ(node->member_ids, (std::vector<ObservationId>{0, 1}));

  const auto root = tree.cluster_of(0.5, 0);
  ASSERT_TRUE(root.has_value());
  EXPECT_EQ(root->count, 3u);
  EXPECT_TRUE(root->path.empty());

  EXPECT_FALSE(four_points(1).cluster_of(0.9, 1).has_value());
  EXPECT_FALSE(four_points(1).cluster_of(3.0, 0).has_value());
  EXPECT_THROW(four_points(1).cluster_of(0.4, 2), ValidationError);
}

TEST(BaireTree, InducedUltrametric) {
  const auto tree = four_points(2);
  EXPECT_EQ(tree.induced_ultrametric(0, 1), 0.1);
  EXPECT_EQ(tree.induced_ultrametric(0, 0), 0.01);
  EXPECT_EQ(tree.induced_ultrametric(0, 3), 1.0);
  EXPECT_THROW(tree.induced_ultrametric(0, 17), DataError);

  const auto mixed = BaireTree::build(std::vector<double>{0.41, 1.41}, kDecimal6, depth(2));
  EXPECT_EQ(mixed.induced_ultrametric(0, 1), 1.0);
}

TEST(BaireTree, Errors) {
  const std::vector<Observation> with_nan{{5, 0.1}, {9, std::numeric_limits<double>::quiet_NaN()}};
  try {
    BaireTree::build(with_nan, kDecimal6, depth(2));
    FAIL() << "expected EncodingError";
  } catch (const EncodingError& e) {
    EXPECT_NE(std::string(e.what()).find("observation 9"), std::string::npos);
  }
  const std::vector<Observation> dup{{1, 0.1}, {1, 0.2}};
  EXPECT_THROW(BaireTree::build(dup, kDecimal6, depth(2)), DataError);
  EXPECT_THROW(BaireTree::build(std::vector<double>{0.1}, kDecimal6, depth(7)), ValidationError);
  EXPECT_THROW(four_points(1).level_partition(2), ValidationError);
}

TEST(BaireTree, BucketOperationsAreLinear) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 0.6);
  std::vector<double> values(5000);
  for (auto& v : values) {
    v = u(rng);
  }
  for (std::uint32_t l : {0u, 1u, 3u, 6u}) {
    const auto tree = BaireTree::build(values, kDecimal6, depth(l));
    EXPECT_EQ(tree.bucket_operations(), values.size() * (l + 1));
  }
}

TEST(BaireTree, LevelCountsSumToN) {
  std::mt19937_64 rng(4);
  std::vector<double> values;
  for (int i = 0; i < 3000; ++i) {
    values.push_back(std::stod(oracle::random_decimal(rng, 6, 4, 2)));
  }
  const auto tree = BaireTree::build(values, kDecimal6, depth(6));
  for (std::uint32_t k = 0; k <= 6; ++k) {
    std::size_t sum = 0;
    for (const auto& e : tree.level_partition(k)) {
      sum += e.count;
    }
    EXPECT_EQ(sum, values.size()) << "depth " << k;
  }
  // Parent count = sum of child counts.
  for (std::uint32_t k = 0; k < 6; ++k) {
    std::map<std::pair<std::string, std::vector<Digit>>, std::size_t> children;
    for (const auto& e : tree.level_partition(k + 1)) {
      auto parent = e.path;
      parent.pop_back();
      children[{to_string(e.level0, 10), parent}] += e.count;
    }
    for (const auto& e : tree.level_partition(k)) {
      EXPECT_EQ((children[{to_string(e.level0, 10), e.path}]), e.count);
    }
  }
}

TEST(BaireTree, MatchesStringBucketing) {
  std::mt19937_64 rng(8);
  std::vector<std::string> text;
  std::vector<double> values;
  for (int i = 0; i < 400; ++i) {
    text.push_back(oracle::random_decimal(rng, 1 + rng() % 6, 3, 1));
    values.push_back(std::stod(text.back()));
  }
  const auto tree = BaireTree::build(values, kDecimal6, depth(6));
  for (std::uint32_t k = 0; k <= 6; ++k) {
    std::set<std::set<std::size_t>> from_tree;
    for (const auto& c : tree.level_clusters(k)) {
      from_tree.insert(std::set<std::size_t>(c.member_ids.begin(), c.member_ids.end()));
    }
    EXPECT_EQ(from_tree, oracle::string_bucketing(text, k)) << "depth " << k;
  }
}

TEST(BaireTree, InducedMatchesPairwiseDistance) {
  std::mt19937_64 rng(9);
  for (std::uint32_t l : {2u, 4u}) {
    std::vector<std::string> text;
    std::vector<double> values;
    for (int i = 0; i < 200; ++i) {
      text.push_back(oracle::random_decimal(rng, 6, 3, 1));
      values.push_back(std::stod(text.back()));
    }
    const BaireParams p{10, l, Rounding::kTruncate};
    const auto tree = BaireTree::build(values, p, depth(l));
    for (std::size_t a = 0; a < values.size(); ++a) {
      for (std::size_t b = 0; b < values.size(); ++b) {
        const double expected = oracle::string_distance(text[a], text[b], l);
        ASSERT_EQ(tree.induced_ultrametric(a, b), expected) << text[a] << " " << text[b];
        ASSERT_EQ(tree.induced_ultrametric(a, b),
                  baire_distance(encode(values[a], p), encode(values[b], p), p));
      }
    }
  }
}

TEST(BaireTree, SameNodeIffSharedPrefix) {
  std::mt19937_64 rng(10);
  std::vector<double> values;
  for (int i = 0; i < 150; ++i) {
    values.push_back(std::stod(oracle::random_decimal(rng, 5, 3, 1)));
  }
  const auto tree = BaireTree::build(values, kDecimal6, depth(5));
  for (std::uint32_t k = 1; k <= 5; ++k) {
    std::vector<std::size_t> node_of(values.size());
    const auto clusters = tree.level_clusters(k);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      for (auto id : clusters[c].member_ids) {
        node_of[id] = c;
      }
    }
    for (std::size_t a = 0; a < values.size(); ++a) {
      for (std::size_t b = a + 1; b < values.size(); ++b) {
        const auto shared =
            common_prefix_length(encode(values[a], kDecimal6), encode(values[b], kDecimal6));
        ASSERT_EQ(node_of[a] == node_of[b], shared && *shared >= k);
      }
    }
  }
}

TEST(BaireTree, IndependentOfInsertionOrder) {
  std::mt19937_64 rng(12);
  std::vector<Observation> obs;
  for (int i = 0; i < 2000; ++i) {
    obs.push_back({static_cast<ObservationId>(i), std::stod(oracle::random_decimal(rng, 6, 5, 1))});
  }
  const auto a = BaireTree::build(obs, kDecimal6, depth(6));
  std::shuffle(obs.begin(), obs.end(), rng);
  const auto b = BaireTree::build(obs, kDecimal6, depth(6));
  for (std::uint32_t k = 0; k <= 6; ++k) {
    EXPECT_EQ(a.level_partition(k), b.level_partition(k));
  }
  EXPECT_EQ(a.to_json(), b.to_json());
}

TEST(BaireTree, MaterializedInteriorMembersMatchTraversal) {
  std::mt19937_64 rng(13);
  std::vector<double> values;
  for (int i = 0; i < 500; ++i) {
    values.push_back(std::stod(oracle::random_decimal(rng, 4, 4)));
  }
  TreeOptions eager = depth(4);
  eager.materialize_from_depth = 1;
  const auto lazy_tree = BaireTree::build(values, kDecimal6, depth(4));
  const auto eager_tree = BaireTree::build(values, kDecimal6, eager);
  for (std::uint32_t k = 0; k <= 4; ++k) {
    const auto x = lazy_tree.level_clusters(k);
    const auto y = eager_tree.level_clusters(k);
    ASSERT_EQ(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      EXPECT_EQ(x[i].member_ids, y[i].member_ids);
    }
  }
}

TEST(BaireTreeJson, RoundTrip) {
  const std::vector<double> values{0.41, 0.42, 0.49, 0.70, -0.3, 1.25};
  const auto tree = BaireTree::build(values, kDecimal6, depth(3));
  const auto loaded = BaireTree::from_json(tree.to_json());
  EXPECT_EQ(loaded.n_items(), tree.n_items());
  EXPECT_EQ(loaded.params(), tree.params());
  for (std::uint32_t k = 0; k <= 3; ++k) {
    EXPECT_EQ(loaded.level_partition(k), tree.level_partition(k));
  }
  EXPECT_EQ(loaded.induced_ultrametric(0, 2), tree.induced_ultrametric(0, 2));
  EXPECT_EQ(loaded.to_json(), tree.to_json());

  const auto counts_only = BaireTree::from_json(tree.to_json(false));
  EXPECT_EQ(counts_only.level_partition(2), tree.level_partition(2));
  EXPECT_FALSE(counts_only.contains(0));
}

TEST(BaireTreeJson, RejectsInconsistentDocuments) {
  const auto tree = BaireTree::build(std::vector<double>{0.41, 0.42}, kDecimal6, depth(1));
  auto text = tree.to_json();
  EXPECT_THROW(BaireTree::from_json("{not json"), DataError);
  EXPECT_THROW(BaireTree::from_json("{\"format\": \"other\"}"), DataError);
  auto broken = text;
  const auto pos = broken.find("\"n_items\": 2");
  ASSERT_NE(pos, std::string::npos);
  broken.replace(pos, 12, "\"n_items\": 3");
  EXPECT_THROW(BaireTree::from_json(broken), DataError);
}

}  // namespace
}  // namespace baire
