// SPDX-License-Identifier: Apache-2.0
//
// Catalog ingest and per-object z_spec / z_phot prefix-coincidence analytics.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "baire/baire_tree.hpp"
#include "baire/digit_codec.hpp"

namespace baire {

struct RedshiftRecord {
  ObservationId id = 0;  // data-row ordinal, 0-based
  double ra = 0.0;
  double dec = 0.0;
  double z_spec = 0.0;
  double z_phot = 0.0;
};

enum class Series : std::uint8_t { kSpec, kPhot };

std::string to_string(Series series);
/// Accepts "z_spec"/"spec" and "z_phot"/"phot".
Series parse_series(const std::string& text);
double value_of(const RedshiftRecord& record, Series series);

struct IngestOptions {
  std::string ra_column = "ra";
  std::string dec_column = "dec";
  std::string z_spec_column = "z_spec";
  std::string z_phot_column = "z_phot";
  double z_min = 0.0;
  double z_max = 0.6;
  /// Malformed rows tolerated, as a fraction of all data rows.
  double max_malformed_fraction = 0.01;

  void validate() const;
};

struct RowIssue {
  std::size_t line = 0;  // 1-based file line
  std::string reason;
};

struct IngestReport {
  std::size_t data_rows = 0;
  std::size_t accepted = 0;
  std::size_t malformed = 0;
  std::size_t filtered_out = 0;
  std::size_t filtered_negative = 0;   // z_spec or z_phot below z_min
  std::size_t filtered_above_max = 0;  // z_spec or z_phot above z_max
  std::vector<RowIssue> issues;        // first kMaxIssues malformed/filtered rows

  static constexpr std::size_t kMaxIssues = 50;

  std::string to_json() const;
};

struct IngestResult {
  std::vector<RedshiftRecord> records;
  IngestReport report;
};

/// Reads a comma-separated catalog with a header row. Throws IoError if the
/// file cannot be opened and DataError for missing columns or too many
/// malformed rows.
IngestResult ingest(const std::filesystem::path& path, const IngestOptions& options = {});
IngestResult ingest(std::istream& in, const IngestOptions& options = {});

/// Record counts by exact longest-common-prefix class. Class 0 ("int_only")
/// shares only the integer part; class k shares k fractional digits.
class CoincidenceTable {
 public:
  explicit CoincidenceTable(std::uint32_t precision);

  /// counts[0] is int_only, counts[k] the k-digit class; size is precision + 1.
  static CoincidenceTable from_counts(std::span<const std::size_t> counts,
                                      std::size_t excluded = 0);

  std::uint32_t precision() const { return precision_; }
  std::size_t count(std::size_t klass) const { return counts_.at(klass); }
  const std::vector<std::size_t>& counts() const { return counts_; }
  /// Records whose integer parts or signs differ; not part of total().
  std::size_t excluded() const { return excluded_; }
  std::size_t total() const;
  double percent(std::size_t klass) const;

  void add(std::size_t klass) { ++counts_.at(klass); }
  void add_excluded() { ++excluded_; }

  std::string to_json() const;
  std::string to_csv() const;

 private:
  std::uint32_t precision_;
  std::vector<std::size_t> counts_;
  std::size_t excluded_ = 0;
};

/// Prefix class of one record; nullopt when the integer parts differ.
std::optional<std::size_t> coincidence_class(const RedshiftRecord& record,
                                             const BaireParams& params);

CoincidenceTable coincidence_table(std::span<const RedshiftRecord> records,
                                   const BaireParams& params);

/// Fraction of records sharing at least `digits` leading digits, where the
/// integer part is digit 1 and the k-th fractional place is digit k + 1.
/// Valid for 1 <= digits <= precision + 1.
double confidence_at_least(const CoincidenceTable& table, std::size_t digits);

/// confidence_at_least for every digit count, as JSON / CSV.
std::string confidence_curve_json(const CoincidenceTable& table);
std::string confidence_curve_csv(const CoincidenceTable& table);

class DigitHistogram {
 public:
  DigitHistogram(Series series, std::uint32_t base, std::uint32_t precision);

  Series series() const { return series_; }
  std::uint32_t base() const { return base_; }
  std::uint32_t precision() const { return precision_; }
  std::size_t n() const { return n_; }
  /// Records whose fractional place `position` (1-based) holds `digit`.
  std::size_t count(std::size_t position, Digit digit) const;

  void add(const DigitString& digits);

  std::string to_json() const;
  std::string to_csv() const;

 private:
  Series series_;
  std::uint32_t base_;
  std::uint32_t precision_;
  std::size_t n_ = 0;
  std::vector<std::size_t> counts_;  // [position - 1][digit]
};

DigitHistogram digit_distribution(std::span<const RedshiftRecord> records, Series series,
                                  const BaireParams& params);

/// Records in exactly class `klass` (0 = int_only), in input order.
std::vector<RedshiftRecord> pairwise_match_export(std::span<const RedshiftRecord> records,
                                                  const BaireParams& params, std::size_t klass);

/// id,z_spec,z_phot rows.
std::string scatter_csv(std::span<const RedshiftRecord> records);

}  // namespace baire
