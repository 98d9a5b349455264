// SPDX-License-Identifier: Apache-2.0

#include "baire/redshift.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "baire/error.hpp"
#include "json_support.hpp"

namespace baire {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  bool quoted = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == ',' && !quoted) {
      fields.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  fields.push_back(trim(line.substr(start)));
  return fields;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool parse_number(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
  }
  if (text.empty()) {
    return false;
  }
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(out);
}

std::string class_label(std::size_t klass) {
  return klass == 0 ? "int_only" : std::to_string(klass);
}

}  // namespace

std::string to_string(Series series) {
  return series == Series::kSpec ? "z_spec" : "z_phot";
}

Series parse_series(const std::string& text) {
  if (text == "z_spec" || text == "spec") {
    return Series::kSpec;
  }
  if (text == "z_phot" || text == "phot") {
    return Series::kPhot;
  }
  throw ValidationError("unknown series '" + text + "' (expected z_spec or z_phot)");
}

double value_of(const RedshiftRecord& record, Series series) {
  return series == Series::kSpec ? record.z_spec : record.z_phot;
}

void IngestOptions::validate() const {
  if (!(std::isfinite(z_min) && std::isfinite(z_max)) || z_min > z_max) {
    throw ValidationError("z range must satisfy z_min <= z_max");
  }
  if (!(max_malformed_fraction >= 0.0 && max_malformed_fraction <= 1.0)) {
    throw ValidationError("malformed-row budget must be a fraction in [0, 1]");
  }
}

std::string IngestReport::to_json() const {
  detail::Json doc;
  doc["data_rows"] = data_rows;
  doc["accepted"] = accepted;
  doc["malformed"] = malformed;
  doc["filtered_out"] = filtered_out;
  doc["filtered_below_min"] = filtered_negative;
  doc["filtered_above_max"] = filtered_above_max;
  auto list = detail::Json::array();
  for (const auto& issue : issues) {
    list.push_back({{"line", issue.line}, {"reason", issue.reason}});
  }
  doc["issues"] = std::move(list);
  return detail::dump(doc);
}

IngestResult ingest(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open catalog '" + path.string() + "'");
  }
  return ingest(in, options);
}

IngestResult ingest(std::istream& in, const IngestOptions& options) {
  options.validate();
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw DataError("catalog is empty (header row required)");
  }
  ++line_no;
  if (line.starts_with("\xEF\xBB\xBF")) {
    line.erase(0, 3);
  }
  const auto header = split_fields(line);
  auto column = [&](const std::string& name) {
    const std::string wanted = lower(name);
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (lower(header[i]) == wanted) {
        return i;
      }
    }
    throw DataError("catalog header lacks column '" + name + "'");
  };
  const std::size_t ra_col = column(options.ra_column);
  const std::size_t dec_col = column(options.dec_column);
  const std::size_t spec_col = column(options.z_spec_column);
  const std::size_t phot_col = column(options.z_phot_column);
  const std::size_t needed = std::max({ra_col, dec_col, spec_col, phot_col}) + 1;

  IngestResult result;
  auto& report = result.report;
  auto note = [&](std::string reason) {
    if (report.issues.size() < IngestReport::kMaxIssues) {
      report.issues.push_back({line_no, std::move(reason)});
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const auto id = static_cast<ObservationId>(report.data_rows++);
    const auto fields = split_fields(line);
    if (fields.size() < needed) {
      ++report.malformed;
      note("expected at least " + std::to_string(needed) + " fields, found " +
           std::to_string(fields.size()));
      continue;
    }
    RedshiftRecord rec;
    rec.id = id;
    if (!parse_number(fields[ra_col], rec.ra) || !parse_number(fields[dec_col], rec.dec) ||
        !parse_number(fields[spec_col], rec.z_spec) ||
        !parse_number(fields[phot_col], rec.z_phot)) {
      ++report.malformed;
      note("unparsable numeric field");
      continue;
    }
    const bool below = rec.z_spec < options.z_min || rec.z_phot < options.z_min;
    const bool above = rec.z_spec > options.z_max || rec.z_phot > options.z_max;
    if (below || above) {
      ++report.filtered_out;
      report.filtered_negative += below ? 1 : 0;
      report.filtered_above_max += above ? 1 : 0;
      note("redshift outside [" + format_decimal(options.z_min) + ", " +
           format_decimal(options.z_max) + "]");
      continue;
    }
    result.records.push_back(rec);
  }
  report.accepted = result.records.size();
  if (report.data_rows > 0 &&
      static_cast<double>(report.malformed) >
          options.max_malformed_fraction * static_cast<double>(report.data_rows)) {
    throw DataError(std::to_string(report.malformed) + " of " + std::to_string(report.data_rows) +
                    " rows are malformed, above the allowed fraction " +
                    format_decimal(options.max_malformed_fraction));
  }
  return result;
}

CoincidenceTable::CoincidenceTable(std::uint32_t precision)
    : precision_(precision), counts_(precision + 1, 0) {}

CoincidenceTable CoincidenceTable::from_counts(std::span<const std::size_t> counts,
                                               std::size_t excluded) {
  if (counts.size() < 2) {
    throw ValidationError("a coincidence table needs the int_only class and at least one digit");
  }
  CoincidenceTable table(static_cast<std::uint32_t>(counts.size() - 1));
  std::copy(counts.begin(), counts.end(), table.counts_.begin());
  table.excluded_ = excluded;
  return table;
}

std::size_t CoincidenceTable::total() const {
  std::size_t sum = 0;
  for (auto c : counts_) {
    sum += c;
  }
  return sum;
}

double CoincidenceTable::percent(std::size_t klass) const {
  const auto n = total();
  return n == 0 ? 0.0 : 100.0 * static_cast<double>(count(klass)) / static_cast<double>(n);
}

std::string CoincidenceTable::to_json() const {
  detail::Json doc;
  doc["precision"] = precision_;
  doc["total"] = total();
  doc["excluded_int_mismatch"] = excluded_;
  auto classes = detail::Json::array();
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    classes.push_back({{"class", class_label(k)},
                       {"digit_position", k + 1},
                       {"count", counts_[k]},
                       {"percent", percent(k)}});
  }
  doc["classes"] = std::move(classes);
  return detail::dump(doc);
}

std::string CoincidenceTable::to_csv() const {
  std::ostringstream out;
  out << "class,digit_position,count,percent\n";
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    out << class_label(k) << ',' << (k + 1) << ',' << counts_[k] << ','
        << format_decimal(percent(k)) << '\n';
  }
  return out.str();
}

std::optional<std::size_t> coincidence_class(const RedshiftRecord& record,
                                             const BaireParams& params) {
  return common_prefix_length(encode(record.z_spec, params), encode(record.z_phot, params));
}

CoincidenceTable coincidence_table(std::span<const RedshiftRecord> records,
                                   const BaireParams& params) {
  params.validate();
  CoincidenceTable table(params.precision);
  for (const auto& rec : records) {
    if (const auto klass = coincidence_class(rec, params)) {
      table.add(*klass);
    } else {
      table.add_excluded();
    }
  }
  return table;
}

double confidence_at_least(const CoincidenceTable& table, std::size_t digits) {
  if (digits < 1 || digits > table.precision() + 1) {
    throw ValidationError("digit count " + std::to_string(digits) + " out of range [1, " +
                          std::to_string(table.precision() + 1) + "]");
  }
  const auto n = table.total();
  if (n == 0) {
    return 0.0;
  }
  std::size_t at_least = 0;
  for (std::size_t k = digits - 1; k < table.counts().size(); ++k) {
    at_least += table.count(k);
  }
  return static_cast<double>(at_least) / static_cast<double>(n);
}

std::string confidence_curve_json(const CoincidenceTable& table) {
  detail::Json doc;
  doc["total"] = table.total();
  auto curve = detail::Json::array();
  for (std::size_t d = 1; d <= table.precision() + 1u; ++d) {
    curve.push_back({{"digits", d}, {"fraction", confidence_at_least(table, d)}});
  }
  doc["at_least"] = std::move(curve);
  return detail::dump(doc);
}

std::string confidence_curve_csv(const CoincidenceTable& table) {
  std::ostringstream out;
  out << "digits,fraction\n";
  for (std::size_t d = 1; d <= table.precision() + 1u; ++d) {
    out << d << ',' << format_decimal(confidence_at_least(table, d)) << '\n';
  }
  return out.str();
}

DigitHistogram::DigitHistogram(Series series, std::uint32_t base, std::uint32_t precision)
    : series_(series),
      base_(base),
      precision_(precision),
      counts_(static_cast<std::size_t>(base) * precision, 0) {}

std::size_t DigitHistogram::count(std::size_t position, Digit digit) const {
  if (position < 1 || position > precision_ || digit >= base_) {
    throw ValidationError("histogram cell out of range");
  }
  return counts_[(position - 1) * base_ + digit];
}

void DigitHistogram::add(const DigitString& digits) {
  if (digits.params.base != base_ || digits.frac_digits.size() != precision_) {
    throw IncompatibleEncodingError("digit string does not match the histogram layout");
  }
  for (std::size_t k = 0; k < precision_; ++k) {
    ++counts_[k * base_ + digits.frac_digits[k]];
  }
  ++n_;
}

std::string DigitHistogram::to_json() const {
  detail::Json doc;
  doc["series"] = to_string(series_);
  doc["base"] = base_;
  doc["precision"] = precision_;
  doc["n"] = n_;
  auto rows = detail::Json::array();
  for (std::size_t k = 0; k < precision_; ++k) {
    std::vector<std::size_t> row(counts_.begin() + static_cast<std::ptrdiff_t>(k * base_),
                                 counts_.begin() + static_cast<std::ptrdiff_t>((k + 1) * base_));
    rows.push_back({{"position", k + 1}, {"counts", row}});
  }
  doc["positions"] = std::move(rows);
  return detail::dump(doc);
}

std::string DigitHistogram::to_csv() const {
  std::ostringstream out;
  out << "position";
  for (std::uint32_t d = 0; d < base_; ++d) {
    out << ",d" << d;
  }
  out << '\n';
  for (std::size_t k = 0; k < precision_; ++k) {
    out << (k + 1);
    for (std::uint32_t d = 0; d < base_; ++d) {
      out << ',' << counts_[k * base_ + d];
    }
    out << '\n';
  }
  return out.str();
}

DigitHistogram digit_distribution(std::span<const RedshiftRecord> records, Series series,
                                  const BaireParams& params) {
  params.validate();
  DigitHistogram hist(series, params.base, params.precision);
  for (const auto& rec : records) {
    hist.add(encode(value_of(rec, series), params));
  }
  return hist;
}

std::vector<RedshiftRecord> pairwise_match_export(std::span<const RedshiftRecord> records,
                                                  const BaireParams& params, std::size_t klass) {
  std::vector<RedshiftRecord> out;
  for (const auto& rec : records) {
    const auto c = coincidence_class(rec, params);
    if (c && *c == klass) {
      out.push_back(rec);
    }
  }
  return out;
}

std::string scatter_csv(std::span<const RedshiftRecord> records) {
  std::ostringstream out;
  out << "id,z_spec,z_phot\n";
  for (const auto& rec : records) {
    out << rec.id << ',' << format_decimal(rec.z_spec) << ',' << format_decimal(rec.z_phot)
        << '\n';
  }
  return out.str();
}

}  // namespace baire
