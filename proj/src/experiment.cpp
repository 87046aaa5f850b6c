#include "khopnet/experiment.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>

#include "khopnet/baselines.hpp"
#include "khopnet/error.hpp"
#include "khopnet/format.hpp"

namespace khopnet {

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::KHop: return "khop";
    case Algorithm::LowestId: return "lowest_id";
    case Algorithm::HighestDegree: return "highest_degree";
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_string(std::string_view name) {
  for (auto a : {Algorithm::KHop, Algorithm::LowestId, Algorithm::HighestDegree}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

namespace {

void build_app(CLI::App& app, CliOptions& o, std::string& algo, std::uint64_t& seed,
               std::string& config, std::string& figure, std::string& output,
               std::string& trace) {
  app.add_option("-t,--topologies", o.topology_dir, "Topology directory");
  app.add_option("-N,--nodes", o.n, "Number of nodes")->check(CLI::PositiveNumber);
  app.add_option("-I,--index", o.index, "Topology file index")->check(CLI::NonNegativeNumber);
  app.add_flag("-d,--degree", o.degree_version, "Weigh the single-hop count in the priority");
  app.add_option("-k,--hops", o.k, "Cluster radius K in hops")->check(CLI::NonNegativeNumber);
  app.add_option("--algo", algo, "khop | lowest_id | highest_degree")
      ->check(CLI::IsMember({"khop", "lowest_id", "highest_degree"}));
  app.add_option("--seed", seed, "Simulation seed");
  app.add_option("--config", config, "Config file (falls back to $KHOPNET_CONFIG)");
  app.add_option("--figure", figure, "Run a figure sweep and print its plot data");
  app.add_option("-o,--output", output, "Write the dump or plot data here");
  app.add_option("--trace", trace, "Write the message trace here");
  app.add_flag("--generate", o.generate, "Generate missing topology files");
  app.add_option("--area", o.area, "Square side in meters for generated topologies")
      ->check(CLI::PositiveNumber);
}

}  // namespace

std::string usage_text() {
  CliOptions o;
  std::string algo, config, figure, output, trace;
  std::uint64_t seed = 0;
  CLI::App app{"k-hop cluster-head election simulator", "khopnet"};
  build_app(app, o, algo, seed, config, figure, output, trace);
  return app.help();
}

CliOptions parse_flags(int argc, const char* const* argv) {
  CliOptions o;
  std::string algo = "khop", config, figure, output, trace;
  std::uint64_t seed = 0;
  CLI::App app{"k-hop cluster-head election simulator", "khopnet"};
  build_app(app, o, algo, seed, config, figure, output, trace);
  if (argc <= 1) throw UsageError(app.help());
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    o.help = true;
    return o;
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "\n" + app.help());
  }
  if (o.n == 0 && figure.empty()) throw UsageError("-N is required\n" + app.help());
  o.algorithm = *algorithm_from_string(algo);
  if (app.count("--seed") > 0) o.seed = seed;
  if (!config.empty()) o.config_path = config;
  if (!figure.empty()) {
    if (!figure_recipe(figure)) throw UsageError("unknown figure '" + figure + "'");
    o.figure = figure;
  }
  if (!output.empty()) o.output = output;
  if (!trace.empty()) o.trace = trace;
  return o;
}

Topology resolve_topology(const CliOptions& opts) {
  const auto path =
      (std::filesystem::path(opts.topology_dir) / topology_file_name(opts.index, opts.n)).string();
  if (std::filesystem::exists(path)) return parse_topology(read_file(path));
  if (!opts.generate) throw FileNotFound(path);
  TopologySpec spec;
  spec.nodes = opts.n;
  spec.width = opts.area;
  spec.height = opts.area;
  spec.seed = static_cast<std::uint64_t>(opts.index);
  return generate_topology(spec);
}

SimConfig experiment_config(const CliOptions& opts) {
  SimConfig cfg = load_config(opts.config_path);
  if (opts.seed) cfg.seed = *opts.seed;
  cfg.protocol.thresholds.max_hops = opts.k;
  if (!opts.degree_version) cfg.protocol.weights.w4 = 0;
  return cfg;
}

ExperimentOutput run_experiment(const CliOptions& opts) {
  return run_experiment(opts, resolve_topology(opts));
}

ExperimentOutput run_experiment(const CliOptions& opts, const Topology& topology) {
  const SimConfig cfg = experiment_config(opts);
  ExperimentOutput out;
  if (opts.algorithm == Algorithm::KHop) {
    SimResult result = run(cfg, topology);
    out.dump = make_dump(topology, result.ledgers, result.snapshot.roles, result.snapshot.visibility);
    out.report = make_report(opts.k, result.snapshot, result.ledgers);
    out.trace_text = format_trace(result.trace);
  } else {
    const auto graph = build_visibility_graph(topology, cfg.radio);
    const auto clustering = opts.algorithm == Algorithm::LowestId
                                ? lowest_id_clustering(graph)
                                : highest_degree_clustering(graph);
    const auto snap = baseline_snapshot(clustering, graph);
    // Centralized baselines exchange no messages.
    std::vector<EnergyLedger> ledgers(graph.size());
    for (std::size_t i = 0; i < ledgers.size(); ++i) ledgers[i].node = static_cast<int>(i);
    out.dump = make_dump(topology, ledgers, snap.roles, graph);
    out.report = make_report(opts.k, snap, ledgers);
  }
  out.report.index = opts.index;
  out.report.degree_version = opts.degree_version;
  out.dump_text = emit_dump(out.dump);
  out.metrics_line = format_report_line(out.report);
  return out;
}

namespace {

struct Column {
  std::string_view name;
  double (*get)(const MetricsReport&);
};

enum class Axis { Index, K, N };

struct PlotSpec {
  FigureRecipe recipe;
  Axis axis;
  std::vector<Column> columns;
};

const std::vector<PlotSpec>& plot_specs() {
  static const Column n_ch{"n_ch", [](const MetricsReport& r) { return double(r.n_clusterheads); }};
  static const Column n_gw{"n_gw", [](const MetricsReport& r) { return double(r.n_gateways); }};
  static const Column n_ord{"n_ord", [](const MetricsReport& r) { return double(r.n_ordinary); }};
  static const Column conn{"avg_conn",
                           [](const MetricsReport& r) { return r.avg_connected_clusterheads; }};
  static const Column asp{"backbone_asp",
                          [](const MetricsReport& r) { return r.backbone_avg_shortest_path; }};
  static const Column packets{"packets",
                              [](const MetricsReport& r) { return double(r.packets_total); }};
  static const Column bytes{"bytes", [](const MetricsReport& r) { return double(r.bytes_total); }};
  static const std::vector<int> ten{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  static const std::vector<PlotSpec> specs{
      {{"fig1", {100}, {3}, {1, 2, 3, 4, 5}, false, false}, Axis::Index, {n_ch}},
      {{"fig2", {100}, {1}, ten, true, false}, Axis::Index, {conn}},
      {{"fig3", {50, 100, 300}, {1}, {1}, false, false}, Axis::N, {packets}},
      {{"fig4", {100}, {0, 1, 2, 3, 4, 5, 6}, ten, false, false}, Axis::K, {n_ch}},
      {{"fig5", {100}, {1, 2, 3, 4, 5, 6}, ten, false, false}, Axis::K, {conn}},
      {{"fig6", {100}, {1, 2, 3, 4, 5}, {1, 2, 3}, false, false}, Axis::K, {n_ch, n_gw, n_ord}},
      {{"fig7", {10}, {1}, {1, 2, 3, 4, 5}, false, true}, Axis::Index, {n_ch, n_gw, n_ord}},
      {{"fig8", {100}, {3}, ten, false, false}, Axis::Index, {asp}},
      {{"fig9", {50, 100, 300}, {1}, ten, false, false}, Axis::N, {n_ch, n_gw}},
      {{"fig10", {50, 100, 300}, {1}, {1}, false, false}, Axis::N, {bytes}},
  };
  return specs;
}

const PlotSpec* find_spec(std::string_view id) {
  for (const auto& s : plot_specs()) {
    if (s.recipe.id == id) return &s;
  }
  return nullptr;
}

double x_of(const MetricsReport& r, Axis axis) {
  switch (axis) {
    case Axis::Index: return r.index;
    case Axis::K: return r.k;
    case Axis::N: return static_cast<double>(r.nodes);
  }
  return 0.0;
}

}  // namespace

std::optional<FigureRecipe> figure_recipe(std::string_view id) {
  if (const auto* s = find_spec(id)) return s->recipe;
  return std::nullopt;
}

std::vector<std::string> figure_ids() {
  std::vector<std::string> ids;
  for (const auto& s : plot_specs()) ids.push_back(s.recipe.id);
  return ids;
}

std::vector<MetricsReport> run_figure(const CliOptions& opts) {
  if (!opts.figure) throw UsageError("no figure selected");
  const auto recipe = figure_recipe(*opts.figure);
  if (!recipe) throw EmptyInput("unknown figure recipe '" + *opts.figure + "'");
  std::vector<MetricsReport> reports;
  std::vector<bool> degree_modes{opts.degree_version};
  if (recipe->both_degree_versions) degree_modes = {false, true};
  for (std::size_t n : recipe->sizes) {
    for (int index : recipe->indices) {
      CliOptions run_opts = opts;
      run_opts.n = n;
      run_opts.index = index;
      Topology topology;
      const auto path = std::filesystem::path(opts.topology_dir) / topology_file_name(index, n);
      if (recipe->mobile && !std::filesystem::exists(path)) {
        TopologySpec spec;
        spec.nodes = n;
        spec.width = spec.height = opts.area;
        spec.with_motion = true;
        spec.min_speed = 1.0;
        spec.max_speed = 10.0;
        spec.seed = static_cast<std::uint64_t>(index);
        topology = generate_topology(spec);
      } else {
        topology = resolve_topology(run_opts);
      }
      for (int k : recipe->ks) {
        for (bool degree : degree_modes) {
          run_opts.k = k;
          run_opts.degree_version = degree;
          reports.push_back(run_experiment(run_opts, topology).report);
        }
      }
    }
  }
  return reports;
}

std::string emit_plot_data(std::span<const MetricsReport> reports, std::string_view recipe) {
  const PlotSpec* spec = find_spec(recipe);
  if (!spec) throw EmptyInput("unknown figure recipe '" + std::string(recipe) + "'");
  if (reports.empty()) throw EmptyInput("no reports for figure '" + std::string(recipe) + "'");

  const bool split = spec->recipe.both_degree_versions;
  // x -> degree mode -> column sums, count
  std::map<double, std::map<bool, std::pair<std::vector<double>, int>>> groups;
  for (const auto& r : reports) {
    auto& [sums, count] = groups[x_of(r, spec->axis)][split && r.degree_version];
    sums.resize(spec->columns.size(), 0.0);
    for (std::size_t c = 0; c < spec->columns.size(); ++c) sums[c] += spec->columns[c].get(r);
    ++count;
  }

  static constexpr std::string_view axis_names[] = {"index", "K", "N"};
  std::string out = "# ";
  out += axis_names[static_cast<int>(spec->axis)];
  for (bool degree : split ? std::vector<bool>{false, true} : std::vector<bool>{false}) {
    for (const auto& col : spec->columns) {
      out += ' ';
      out += col.name;
      if (split) out += degree ? "_degree" : "_plain";
    }
  }
  out += '\n';
  for (const auto& [x, modes] : groups) {
    out += format_shortest(x);
    for (bool degree : split ? std::vector<bool>{false, true} : std::vector<bool>{false}) {
      auto it = modes.find(degree);
      for (std::size_t c = 0; c < spec->columns.size(); ++c) {
        out += ' ';
        if (it == modes.end()) {
          out += "nan";
        } else {
          out += format_shortest(it->second.first[c] / it->second.second);
        }
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace khopnet
