// SPDX-License-Identifier: Apache-2.0
//
// baire: command-line front end for prefix-tree clustering of redshift catalogs.
//
// Exit codes: 0 success, 2 invalid arguments or configuration, 3 file I/O
// failure, 4 malformed or inconsistent data.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "baire/baire_tree.hpp"
#include "baire/bench.hpp"
#include "baire/error.hpp"
#include "baire/redshift.hpp"
#include "baire/regression.hpp"
#include "baire/svg.hpp"
#include "baire/synth.hpp"
#include "json_support.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitData = 4;

enum class Format { kJson, kCsv };

struct RunConfig {
  std::string input;
  fs::path out_dir = ".";
  std::uint32_t base = 10;
  std::uint32_t precision = 6;
  std::string rounding = "truncate";
  std::optional<std::uint32_t> depth;
  double z_min = 0.0;
  double z_max = 0.6;
  std::uint64_t seed = 1;
  std::string format = "json";

  baire::BaireParams params() const {
    return {base, precision, baire::parse_rounding(rounding)};
  }
  std::uint32_t max_depth() const { return depth.value_or(precision); }
  Format output_format() const { return format == "csv" ? Format::kCsv : Format::kJson; }

  baire::IngestOptions ingest_options() const {
    baire::IngestOptions options;
    options.z_min = z_min;
    options.z_max = z_max;
    return options;
  }

  void validate() const {
    params().validate();
    if (max_depth() > precision) {
      throw baire::ValidationError("--depth " + std::to_string(max_depth()) +
                                   " exceeds --precision " + std::to_string(precision));
    }
    ingest_options().validate();
  }
};

void add_encoding_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--base", cfg.base, "Digit base")->capture_default_str();
  cmd->add_option("--precision", cfg.precision, "Fractional digits kept")->capture_default_str();
  cmd->add_option("--rounding", cfg.rounding, "truncate or round-half-even")
      ->check(CLI::IsMember({"truncate", "round-half-even"}))
      ->capture_default_str();
  cmd->add_option("--depth", cfg.depth, "Deepest tree level (default: precision)");
}

void add_catalog_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--z-min", cfg.z_min, "Lowest accepted redshift")->capture_default_str();
  cmd->add_option("--z-max", cfg.z_max, "Highest accepted redshift")->capture_default_str();
}

void add_output_flags(CLI::App* cmd, RunConfig& cfg, bool with_format) {
  cmd->add_option("--out-dir,-o", cfg.out_dir, "Output directory")->capture_default_str();
  if (with_format) {
    cmd->add_option("--format", cfg.format, "Table format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw baire::IoError("cannot write '" + path.string() + "'");
  }
  out << content;
  if (!out.flush()) {
    throw baire::IoError("write to '" + path.string() + "' failed");
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw baire::IoError("cannot read '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw baire::IoError("cannot create output directory '" + dir.string() + "'");
  }
}

baire::IngestResult load_catalog(const RunConfig& cfg) {
  if (cfg.input.empty()) {
    throw baire::ValidationError("--input is required");
  }
  auto result = baire::ingest(fs::path(cfg.input), cfg.ingest_options());
  write_file(cfg.out_dir / "ingest_report.json", result.report.to_json());
  std::cerr << "ingest: " << result.report.accepted << " of " << result.report.data_rows
            << " rows accepted (" << result.report.malformed << " malformed, "
            << result.report.filtered_out << " outside redshift range)\n";
  return result;
}

std::string path_text(const std::vector<baire::Digit>& path, std::uint32_t base) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (base > 10 && i > 0) {
      out += '/';
    }
    out += std::to_string(path[i]);
  }
  return out;
}

std::string cluster_label(const baire::PartitionEntry& entry, std::uint32_t base) {
  auto label = baire::to_string(entry.level0, base);
  if (!entry.path.empty()) {
    label += "." + path_text(entry.path, base);
  }
  return label;
}

// ---------------------------------------------------------------- cluster

struct ClusterArgs {
  std::string series = "z_spec";
  std::string save_tree;
  std::string load_tree;
};

int cmd_cluster(const RunConfig& cfg, const ClusterArgs& args) {
  cfg.validate();
  const auto series = baire::parse_series(args.series);
  if (args.load_tree.empty() == cfg.input.empty()) {
    throw baire::ValidationError("cluster needs exactly one of --input or --load-tree");
  }
  prepare_out_dir(cfg.out_dir);

  std::optional<baire::BaireTree> loaded;
  if (!args.load_tree.empty()) {
    loaded = baire::BaireTree::from_json(read_file(args.load_tree));
  } else {
    const auto catalog = load_catalog(cfg);
    std::vector<baire::Observation> observations;
    observations.reserve(catalog.records.size());
    for (const auto& r : catalog.records) {
      observations.push_back({r.id, baire::value_of(r, series)});
    }
    baire::TreeOptions options;
    options.max_depth = cfg.max_depth();
    loaded = baire::BaireTree::build(observations, cfg.params(), options);
  }
  const auto& tree = *loaded;
  const auto base = tree.params().base;

  baire::detail::Json summary;
  summary["params"] = {{"base", base},
                       {"precision", tree.params().precision},
                       {"rounding", baire::to_string(tree.params().rounding)}};
  if (args.load_tree.empty()) {
    summary["series"] = baire::to_string(series);
  }
  summary["max_depth"] = tree.max_depth();
  summary["n_items"] = tree.n_items();
  summary["node_count"] = tree.node_count();
  summary["bucket_operations"] = tree.bucket_operations();
  auto levels = baire::detail::Json::array();

  baire::detail::Json partitions;
  partitions["max_depth"] = tree.max_depth();
  auto partition_levels = baire::detail::Json::array();
  std::string csv = "depth,cluster,count\n";
  for (std::uint32_t depth = 0; depth <= tree.max_depth(); ++depth) {
    const auto entries = tree.level_partition(depth);
    std::size_t total = 0;
    std::size_t largest = 0;
    auto clusters = baire::detail::Json::array();
    for (const auto& e : entries) {
      total += e.count;
      largest = std::max(largest, e.count);
      const auto label = cluster_label(e, base);
      clusters.push_back({{"cluster", label}, {"count", e.count}});
      csv += std::to_string(depth) + "," + label + "," + std::to_string(e.count) + "\n";
    }
    levels.push_back({{"depth", depth},
                      {"clusters", entries.size()},
                      {"items", total},
                      {"largest", largest}});
    partition_levels.push_back({{"depth", depth}, {"clusters", std::move(clusters)}});
  }
  summary["levels"] = std::move(levels);
  partitions["levels"] = std::move(partition_levels);

  write_file(cfg.out_dir / "tree_summary.json", baire::detail::dump(summary));
  if (cfg.output_format() == Format::kCsv) {
    write_file(cfg.out_dir / "partitions.csv", csv);
  } else {
    write_file(cfg.out_dir / "partitions.json", baire::detail::dump(partitions));
  }
  if (!args.save_tree.empty()) {
    write_file(args.save_tree, tree.to_json(true));
  }
  std::cout << "clustered " << tree.n_items() << " values into " << tree.node_count()
            << " nodes (max depth " << tree.max_depth() << ")\n";
  return 0;
}

// ---------------------------------------------------------------- stats

struct StatsArgs {
  std::string counts;
  bool svg = false;
};

std::string class_name(std::size_t klass) {
  return klass == 0 ? "int_only" : std::to_string(klass);
}

std::vector<std::size_t> parse_counts(const std::string& text) {
  std::vector<std::size_t> counts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const auto value = std::stoull(item, &used);
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
      counts.push_back(static_cast<std::size_t>(value));
    } catch (const std::exception&) {
      throw baire::ValidationError("--counts expects comma-separated non-negative integers, got '" +
                                   item + "'");
    }
  }
  return counts;
}

void print_table(const baire::CoincidenceTable& table) {
  std::cout << "class      count      percent\n";
  for (std::size_t k = 0; k < table.counts().size(); ++k) {
    std::ostringstream line;
    line << class_name(k);
    std::string name = line.str();
    name.resize(10, ' ');
    std::string count = std::to_string(table.count(k));
    count.insert(0, count.size() < 9 ? 9 - count.size() : 0, ' ');
    std::cout << name << count << "   " << baire::format_decimal(std::round(table.percent(k) * 100) / 100)
              << "\n";
  }
  std::cout << "total     " << table.total() << "\n";
  if (table.excluded() > 0) {
    std::cout << "excluded (integer part differs): " << table.excluded() << "\n";
  }
}

void write_table_outputs(const RunConfig& cfg, const baire::CoincidenceTable& table, bool svg) {
  if (cfg.output_format() == Format::kCsv) {
    write_file(cfg.out_dir / "coincidence_table.csv", table.to_csv());
    write_file(cfg.out_dir / "confidence.csv", baire::confidence_curve_csv(table));
  } else {
    write_file(cfg.out_dir / "coincidence_table.json", table.to_json());
    write_file(cfg.out_dir / "confidence.json", baire::confidence_curve_json(table));
  }
  if (svg) {
    std::vector<std::string> labels;
    std::vector<double> values;
    for (std::size_t k = 0; k < table.counts().size(); ++k) {
      labels.push_back(class_name(k));
      values.push_back(static_cast<double>(table.count(k)));
    }
    write_file(cfg.out_dir / "coincidence_table.svg",
               baire::bar_chart_svg("Shared leading digits, z_spec vs z_phot", labels, values));
  }
  print_table(table);
  if (table.precision() >= 1) {
    std::cout << "confidence_at_least(2) = "
              << baire::format_decimal(baire::confidence_at_least(table, 2)) << "\n";
  }
}

int cmd_stats(const RunConfig& cfg, const StatsArgs& args) {
  cfg.validate();
  if (!args.counts.empty()) {
    if (!cfg.input.empty()) {
      throw baire::ValidationError("--counts and --input are mutually exclusive");
    }
    prepare_out_dir(cfg.out_dir);
    const auto counts = parse_counts(args.counts);
    write_table_outputs(cfg, baire::CoincidenceTable::from_counts(counts), args.svg);
    return 0;
  }
  prepare_out_dir(cfg.out_dir);
  const auto catalog = load_catalog(cfg);
  const auto params = cfg.params();
  const auto table = baire::coincidence_table(catalog.records, params);
  write_table_outputs(cfg, table, args.svg);

  for (auto series : {baire::Series::kSpec, baire::Series::kPhot}) {
    const auto h = baire::digit_distribution(catalog.records, series, params);
    const auto stem = "histogram_" + baire::to_string(series);
    if (cfg.output_format() == Format::kCsv) {
      write_file(cfg.out_dir / (stem + ".csv"), h.to_csv());
    } else {
      write_file(cfg.out_dir / (stem + ".json"), h.to_json());
    }
    if (args.svg) {
      std::vector<std::string> labels;
      std::vector<double> values;
      for (baire::Digit d = 0; d < params.base; ++d) {
        labels.push_back(std::to_string(d));
        values.push_back(static_cast<double>(h.count(1, d)));
      }
      write_file(cfg.out_dir / (stem + ".svg"),
                 baire::bar_chart_svg("First decimal digit of " + baire::to_string(series), labels,
                                      values));
    }
  }
  for (std::size_t k = 0; k <= params.precision; ++k) {
    write_file(cfg.out_dir / ("scatter_class_" + class_name(k) + ".csv"),
               baire::scatter_csv(baire::pairwise_match_export(catalog.records, params, k)));
  }
  return 0;
}

// ---------------------------------------------------------------- regress

struct RegressArgs {
  std::string direction = "phot-to-spec";
  std::size_t k = 5;
  std::size_t min_cluster = 10;
  double test_fraction = 0.2;
  std::string save_model;
  std::string load_model;
};

int cmd_regress(const RunConfig& cfg, const RegressArgs& args) {
  cfg.validate();
  baire::RegressionConfig rc;
  rc.k_neighbors = args.k;
  rc.min_cluster_size = args.min_cluster;
  rc.direction = baire::parse_direction(args.direction);
  rc.params = cfg.params();
  rc.max_depth = cfg.max_depth();
  rc.validate();
  if (!(args.test_fraction > 0.0 && args.test_fraction < 1.0)) {
    throw baire::ValidationError("--test-fraction must be strictly between 0 and 1");
  }
  prepare_out_dir(cfg.out_dir);
  const auto catalog = load_catalog(cfg);

  std::optional<baire::ClusterwiseModel> model;
  std::vector<baire::TrainingPair> test;
  if (!args.load_model.empty()) {
    model = baire::ClusterwiseModel::from_json(read_file(args.load_model));
    test = baire::make_pairs(catalog.records, model->config().direction);
  } else {
    auto split = baire::train_test_split(baire::make_pairs(catalog.records, rc.direction),
                                         args.test_fraction, cfg.seed);
    if (split.test.empty()) {
      throw baire::DataError("test split is empty; the catalog has too few accepted rows");
    }
    model = baire::ClusterwiseModel::fit(std::move(split.train), rc);
    test = std::move(split.test);
  }
  if (test.empty()) {
    throw baire::DataError("no rows to evaluate");
  }
  const auto report = baire::evaluate(*model, test);
  write_file(cfg.out_dir / "regression_report.json", report.to_json());
  if (!args.save_model.empty()) {
    write_file(args.save_model, model->to_json());
  }
  std::cout << "rmse " << baire::format_decimal(report.rmse) << " (global k-NN "
            << baire::format_decimal(report.baseline_rmse) << ") over " << report.n_test
            << " test pairs\n";
  return 0;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> ahc_sizes;
  std::size_t repetitions = 5;
};

int cmd_bench(const RunConfig& cfg, const BenchArgs& args) {
  cfg.validate();
  baire::BenchConfig bc;
  if (!args.sizes.empty()) {
    bc.baire_sizes = args.sizes;
  }
  if (!args.ahc_sizes.empty()) {
    bc.ahc_sizes = args.ahc_sizes;
  }
  bc.repetitions = args.repetitions;
  bc.seed = cfg.seed;
  bc.params = cfg.params();
  bc.max_depth = cfg.max_depth();
  bc.validate();
  prepare_out_dir(cfg.out_dir);
  const auto result = baire::run_bench(bc);
  write_file(cfg.out_dir / "bench_counts.json", result.counts_json());
  write_file(cfg.out_dir / "bench_timings.json", result.timings_json());
  std::cout << "baire tree: log-log slope " << baire::format_decimal(result.baire_slope) << "\n"
            << "AHC oracle: log-log slope " << baire::format_decimal(result.ahc_slope) << "\n";
  return 0;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  baire::SynthConfig config;
  std::string noise_kind = "uniform";
  std::string out;
};

int cmd_synth(const RunConfig& cfg, SynthArgs args) {
  args.config.seed = cfg.seed;
  args.config.noise_kind = baire::parse_noise_kind(args.noise_kind);
  args.config.validate();
  if (args.out.empty()) {
    throw baire::ValidationError("--out is required (use - for standard output)");
  }
  const auto records = baire::generate_catalog(args.config);
  std::ostringstream csv;
  baire::write_catalog_csv(csv, records, args.config.decimals);
  if (args.out == "-") {
    std::cout << csv.str();
  } else {
    write_file(args.out, csv.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prefix-tree (Baire) clustering of redshift catalogs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "baire 0.1.0");

  RunConfig cfg;
  ClusterArgs cluster_args;
  StatsArgs stats_args;
  RegressArgs regress_args;
  BenchArgs bench_args;
  SynthArgs synth_args;

  auto* cluster = app.add_subcommand("cluster", "Build the prefix tree and write level partitions");
  cluster->add_option("--input,-i", cfg.input, "Catalog CSV");
  cluster->add_option("--series", cluster_args.series, "z_spec or z_phot")->capture_default_str();
  cluster->add_option("--save-tree", cluster_args.save_tree, "Write the tree as JSON");
  cluster->add_option("--load-tree", cluster_args.load_tree, "Read a saved tree instead of --input");
  add_encoding_flags(cluster, cfg);
  add_catalog_flags(cluster, cfg);
  add_output_flags(cluster, cfg, true);

  auto* stats = app.add_subcommand("stats", "Prefix-coincidence table, confidence and histograms");
  stats->add_option("--input,-i", cfg.input, "Catalog CSV");
  stats->add_option("--counts", stats_args.counts,
                    "Comma-separated class counts (int_only first) instead of --input");
  stats->add_flag("--svg", stats_args.svg, "Also write SVG bar charts");
  add_encoding_flags(stats, cfg);
  add_catalog_flags(stats, cfg);
  add_output_flags(stats, cfg, true);

  auto* regress = app.add_subcommand("regress", "Clusterwise k-NN regression between the series");
  regress->add_option("--input,-i", cfg.input, "Catalog CSV")->required();
  regress->add_option("--direction", regress_args.direction, "phot-to-spec or spec-to-phot")
      ->capture_default_str();
  regress->add_option("--k", regress_args.k, "Neighbours averaged")->capture_default_str();
  regress->add_option("--min-cluster", regress_args.min_cluster,
                      "Smallest cluster searched before falling back a level")
      ->capture_default_str();
  regress->add_option("--test-fraction", regress_args.test_fraction, "Held-out share")
      ->capture_default_str();
  regress->add_option("--seed", cfg.seed, "Split seed")->capture_default_str();
  regress->add_option("--save-model", regress_args.save_model, "Write the fitted model as JSON");
  regress->add_option("--load-model", regress_args.load_model,
                      "Evaluate a saved model on the whole input");
  add_encoding_flags(regress, cfg);
  add_catalog_flags(regress, cfg);
  add_output_flags(regress, cfg, false);

  auto* bench = app.add_subcommand("bench", "Time the tree build against the AHC oracle");
  bench->add_option("--sizes", bench_args.sizes, "Tree input sizes")->delimiter(',');
  bench->add_option("--ahc-sizes", bench_args.ahc_sizes, "AHC input sizes")->delimiter(',');
  bench->add_option("--repetitions", bench_args.repetitions, "Timed runs per size")
      ->capture_default_str();
  bench->add_option("--seed", cfg.seed, "Synthetic data seed")->capture_default_str();
  add_encoding_flags(bench, cfg);
  add_output_flags(bench, cfg, false);

  auto* synth = app.add_subcommand("synth", "Write a seeded synthetic catalog");
  synth->add_option("--n", synth_args.config.n, "Rows")->capture_default_str();
  synth->add_option("--seed", cfg.seed, "Generator seed")->capture_default_str();
  synth->add_option("--noise", synth_args.config.noise,
                    "Half-width (uniform) or sigma (gaussian) of z_phot noise")
      ->capture_default_str();
  synth->add_option("--noise-kind", synth_args.noise_kind, "uniform or gaussian")
      ->capture_default_str();
  synth->add_option("--z-max", synth_args.config.z_max, "Upper redshift cut")->capture_default_str();
  synth->add_option("--z-scale", synth_args.config.z_scale, "Gamma scale of z_spec")
      ->capture_default_str();
  synth->add_option("--decimals", synth_args.config.decimals, "Decimal places written")
      ->capture_default_str();
  synth->add_option("--out", synth_args.out, "Output CSV, or - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (cluster->parsed()) {
      return cmd_cluster(cfg, cluster_args);
    }
    if (stats->parsed()) {
      return cmd_stats(cfg, stats_args);
    }
    if (regress->parsed()) {
      return cmd_regress(cfg, regress_args);
    }
    if (bench->parsed()) {
      return cmd_bench(cfg, bench_args);
    }
    return cmd_synth(cfg, synth_args);
  } catch (const baire::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const baire::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const baire::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return kExitData;
  }
}
