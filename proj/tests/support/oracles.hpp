// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations for the test suites. Nothing here calls
// into the encoder or the tree; values are handled as decimal strings and
// clusters as explicit member lists.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace baire::oracle {

/// Integer and fractional text of a plain decimal like "-12.3400".
struct DecimalText {
  bool negative = false;
  std::string int_part;
  std::string frac_part;
};

inline DecimalText split_decimal(std::string text) {
  DecimalText out;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    out.negative = text[0] == '-';
    text.erase(0, 1);
  }
  const auto dot = text.find('.');
  out.int_part = text.substr(0, dot);
  out.frac_part = dot == std::string::npos ? "" : text.substr(dot + 1);
  while (out.int_part.size() > 1 && out.int_part[0] == '0') {
    out.int_part.erase(0, 1);
  }
  if (out.int_part.empty()) {
    out.int_part = "0";
  }
  return out;
}

/// Character-by-character longest common prefix of two decimal renderings
/// truncated (or zero padded) to `precision` fractional places. nullopt when
/// the sign or integer part differs.
inline std::optional<std::size_t> string_prefix(const std::string& a, const std::string& b,
                                                std::size_t precision) {
  auto da = split_decimal(a);
  auto db = split_decimal(b);
  da.frac_part.resize(precision, '0');
  db.frac_part.resize(precision, '0');
  auto is_zero = [](const DecimalText& d) {
    return d.int_part == "0" && d.frac_part.find_first_not_of('0') == std::string::npos;
  };
  const bool neg_a = da.negative && !is_zero(da);
  const bool neg_b = db.negative && !is_zero(db);
  if (neg_a != neg_b || da.int_part != db.int_part) {
    return std::nullopt;
  }
  std::size_t k = 0;
  while (k < precision && da.frac_part[k] == db.frac_part[k]) {
    ++k;
  }
  return k;
}

/// Baire distance from the string scan, base 10.
inline double string_distance(const std::string& a, const std::string& b, std::size_t precision) {
  const auto k = string_prefix(a, b, precision);
  if (!k || *k == 0) {
    return 1.0;
  }
  double d = 1.0;
  for (std::size_t i = 0; i < *k; ++i) {
    d /= 10.0;
  }
  return d;
}

/// Random decimals "0.d1...dn" whose digits are drawn from a small alphabet so
/// that long shared prefixes are common.
inline std::string random_decimal(std::mt19937_64& rng, std::size_t digits, unsigned alphabet,
                                  unsigned max_int = 0) {
  std::string s = std::to_string(rng() % (max_int + 1)) + ".";
  for (std::size_t i = 0; i < digits; ++i) {
    s += static_cast<char>('0' + rng() % alphabet);
  }
  return s;
}

struct NaiveMerge {
  std::size_t rep_a = 0;  // smallest member of each side, rep_a < rep_b
  std::size_t rep_b = 0;
  double level = 0.0;
};

struct NaiveResult {
  std::vector<NaiveMerge> merges;
  std::vector<std::vector<double>> cophenetic;
};

/// Textbook O(n^3) agglomeration that recomputes linkage from the original
/// matrix each step. Ties go to the lexicographically smallest pair of
/// smallest-member indices.
inline NaiveResult naive_agglomerate(const std::vector<std::vector<double>>& d, bool complete) {
  const std::size_t n = d.size();
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < n; ++i) {
    clusters.push_back({i});
  }
  NaiveResult out;
  out.cophenetic.assign(n, std::vector<double>(n, 0.0));
  while (clusters.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::size_t, std::size_t> best_reps{n, n};
    std::pair<std::size_t, std::size_t> best_idx{0, 0};
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double link = complete ? 0.0 : std::numeric_limits<double>::infinity();
        for (auto i : clusters[a]) {
          for (auto j : clusters[b]) {
            link = complete ? std::max(link, d[i][j]) : std::min(link, d[i][j]);
          }
        }
        auto ra = clusters[a].front();
        auto rb = clusters[b].front();
        if (ra > rb) {
          std::swap(ra, rb);
        }
        if (link < best || (link == best && std::make_pair(ra, rb) < best_reps)) {
          best = link;
          best_reps = {ra, rb};
          best_idx = {a, b};
        }
      }
    }
    auto& left = clusters[best_idx.first];
    auto& right = clusters[best_idx.second];
    for (auto i : left) {
      for (auto j : right) {
        out.cophenetic[i][j] = out.cophenetic[j][i] = best;
      }
    }
    out.merges.push_back({best_reps.first, best_reps.second, best});
    left.insert(left.end(), right.begin(), right.end());
    std::sort(left.begin(), left.end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best_idx.second));
    std::sort(clusters.begin(), clusters.end());
  }
  return out;
}

/// Groups of indices sharing the first `depth` fractional characters and the
/// integer part of their decimal renderings.
inline std::set<std::set<std::size_t>> string_bucketing(const std::vector<std::string>& values,
                                                        std::size_t depth) {
  std::map<std::string, std::set<std::size_t>> buckets;
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto d = split_decimal(values[i]);
    d.frac_part.resize(depth, '0');
    buckets[(d.negative ? "-" : "+") + d.int_part + "." + d.frac_part].insert(i);
  }
  std::set<std::set<std::size_t>> out;
  for (auto& [key, members] : buckets) {
    out.insert(members);
  }
  return out;
}

struct BrutePrediction {
  double estimate = 0.0;
  int depth = -1;
};

/// Exhaustive re-computation of the clusterwise rule from decimal strings:
/// the deepest prefix depth whose population (training strings sharing the
/// query's integer part and first `depth` fractional places) reaches
/// min_cluster_size, then the k nearest of that population by
/// (|p - q|, p, index).
inline BrutePrediction brute_clusterwise(const std::vector<std::string>& train_text,
                                         const std::vector<double>& train_pred,
                                         const std::vector<double>& train_resp,
                                         const std::string& query_text, double query,
                                         std::size_t max_depth, std::size_t k,
                                         std::size_t min_cluster) {
  std::vector<std::size_t> chosen;
  int depth = -1;
  for (int dep = static_cast<int>(max_depth); dep >= 0; --dep) {
    std::vector<std::size_t> pop;
    for (std::size_t i = 0; i < train_text.size(); ++i) {
      const auto shared = string_prefix(train_text[i], query_text, max_depth);
      if (shared && *shared >= static_cast<std::size_t>(dep)) {
        pop.push_back(i);
      }
    }
    if (pop.size() >= min_cluster) {
      chosen = pop;
      depth = dep;
      break;
    }
  }
  if (depth < 0) {
    chosen.resize(train_text.size());
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      chosen[i] = i;
    }
  }
  std::sort(chosen.begin(), chosen.end(), [&](std::size_t a, std::size_t b) {
    const double da = std::fabs(train_pred[a] - query);
    const double db = std::fabs(train_pred[b] - query);
    if (da != db) {
      return da < db;
    }
    if (train_pred[a] != train_pred[b]) {
      return train_pred[a] < train_pred[b];
    }
    return a < b;
  });
  double sum = 0.0;
  const std::size_t take = std::min(k, chosen.size());
  for (std::size_t i = 0; i < take; ++i) {
    sum += train_resp[chosen[i]];
  }
  return {sum / static_cast<double>(take), depth};
}

}  // namespace baire::oracle
