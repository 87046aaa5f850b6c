#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "khopnet/config.hpp"
#include "khopnet/dump.hpp"
#include "khopnet/engine.hpp"
#include "khopnet/metrics.hpp"

namespace khopnet {

enum class Algorithm { KHop, LowestId, HighestDegree };

std::string_view to_string(Algorithm algo);
std::optional<Algorithm> algorithm_from_string(std::string_view name);

struct CliOptions {
  std::string topology_dir = ".";
  std::size_t n = 0;
  int index = 0;
  bool degree_version = false;
  int k = 1;
  Algorithm algorithm = Algorithm::KHop;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> config_path;
  std::optional<std::string> figure;
  std::optional<std::string> output;    // dump (or plot data) path; stdout otherwise
  std::optional<std::string> trace;     // message trace path
  bool generate = false;                // synthesize missing topology files
  double area = 2500.0;                 // side of the square used when generating
  bool help = false;
};

/// Parses the classic flags `-t <dir> -N <n> -I <index> [-d] -k <K>` plus the
/// long-form extensions. Throws UsageError carrying the usage text.
CliOptions parse_flags(int argc, const char* const* argv);
std::string usage_text();

/// Loads `coordS<index>N<n>` from the topology directory, or generates it when
/// missing and generation is enabled. Throws FileNotFound.
Topology resolve_topology(const CliOptions& opts);

/// Effective simulation config for `opts`: config file (or $KHOPNET_CONFIG),
/// then seed, K, and the degree switch. Without -d the single-hop weight is 0.
SimConfig experiment_config(const CliOptions& opts);

struct ExperimentOutput {
  DumpData dump;
  MetricsReport report;
  std::string dump_text;
  std::string metrics_line;
  std::string trace_text;
};

ExperimentOutput run_experiment(const CliOptions& opts);
ExperimentOutput run_experiment(const CliOptions& opts, const Topology& topology);

/// Sweep behind a figure: which N, K and topology indices to run.
struct FigureRecipe {
  std::string id;
  std::vector<std::size_t> sizes;
  std::vector<int> ks;
  std::vector<int> indices;
  bool both_degree_versions = false;
  bool mobile = false;
};

std::optional<FigureRecipe> figure_recipe(std::string_view id);
std::vector<std::string> figure_ids();

/// Runs the whole sweep for opts.figure, reusing the rest of opts.
std::vector<MetricsReport> run_figure(const CliOptions& opts);

/// Whitespace-delimited columns for `recipe`, one row per x value with the
/// mean over runs sharing that x. Throws EmptyInput for empty reports or an
/// unknown recipe.
std::string emit_plot_data(std::span<const MetricsReport> reports, std::string_view recipe);

}  // namespace khopnet
