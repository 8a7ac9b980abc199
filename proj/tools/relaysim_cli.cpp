// relaysim command line: run scenarios, sweep densities, compare presets.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "relaysim/config.hpp"
#include "relaysim/engine.hpp"
#include "relaysim/metrics.hpp"

namespace fs = std::filesystem;
using namespace relaysim;

namespace {

std::string scenario_label(const std::string& name_or_path) {
  const fs::path p(name_or_path);
  return p.has_filename() ? p.stem().string() : name_or_path;
}

// Labeled variants for either a built-in name or a scenario file.
std::vector<std::pair<std::string, ScenarioConfig>> variants_for(
    const std::string& name_or_path) {
  for (const auto& [name, config] : builtin_scenarios()) {
    if (name == name_or_path) return scenario_variants(name);
  }
  return {{scenario_label(name_or_path), load_scenario(name_or_path)}};
}

void set_field(ScenarioConfig& c, const std::string& name, double value) {
  if (name == "vehicle_count") {
    c.vehicle_count = static_cast<int>(value);
  } else if (name == "road_length_m") {
    c.road_length_m = value;
  } else if (name == "v2v_range_m") {
    c.v2v_range_m = value;
  } else if (name == "d2d_range_m") {
    c.d2d_range_m = value;
  } else if (name == "failure_distance_m") {
    c.failure_distance_m = value;
  } else if (name == "t_discovery_ms") {
    c.timing.t_discovery_ms = value;
  } else if (name == "interference_coeff") {
    c.timing.interference_coeff = value;
  } else {
    throw ConfigError("cannot vary unknown field '" + name + "'");
  }
}

std::string fmt(double v) { return format_double(v); }

void print_summary(std::ostream& out, const std::string& label,
                   const SimResult& result) {
  const auto& d = result.deliveries;
  std::size_t delivered = 0;
  std::map<RecordedRecovery, int> methods;
  for (const auto& r : d) {
    if (r.outcome == DeliveryOutcome::delivered) ++delivered;
    if (r.recovery_method != RecordedRecovery::none) {
      methods[r.recovery_method]++;
    }
  }
  const ScenarioConfig& c = result.config_echo;
  out << "scenario " << label << "  seed " << c.seed << "\n";
  out << "  vehicles " << c.vehicle_count << "  road " << fmt(c.road_length_m)
      << " m  v2v " << fmt(c.v2v_range_m) << " m  d2d " << fmt(c.d2d_range_m)
      << " m  mode " << to_string(c.d2d_mode) << "\n";
  out << "  alerts " << d.size() << "  delivered " << delivered;
  if (!d.empty()) {
    out << "  ratio " << fmt(run_metric(d, "delivery_ratio"));
  }
  out << "\n";
  if (delivered > 0) {
    out << "  mean hops " << fmt(run_metric(d, "hops")) << "  mean e2e "
        << fmt(run_metric(d, "e2e_delay_ms")) << " ms\n";
  }
  if (!methods.empty()) {
    out << "  recoveries:";
    for (const auto& [method, count] : methods) {
      out << " " << to_string(method) << " x" << count;
    }
    out << "\n";
    out << "  mean recovery delay " << fmt(run_metric(d, "recovery_delay_ms"))
        << " ms  overhead " << fmt(run_metric(d, "recovery_overhead_ms"))
        << " ms\n";
    double td = 0, ho = 0, rest = 0, total = 0;
    int oht_n = 0;
    for (const auto& r : d) {
      if (!r.oht) continue;
      ++oht_n;
      td += r.oht->t_discovery_ms;
      ho += r.oht->t_handover_total_ms;
      rest += r.oht->t_v2v_rest_ms;
      total += r.oht->total_ms;
    }
    if (oht_n > 0) {
      out << "  OHT means: T_D " << fmt(td / oht_n) << " ms, handovers "
          << fmt(ho / oht_n) << " ms, v2v rest " << fmt(rest / oht_n)
          << " ms, total " << fmt(total / oht_n) << " ms\n";
    }
  }
  out << "  wall time " << fmt(result.wall_time_s) << " s\n";
}

int cmd_list() {
  for (const auto& [name, config] : builtin_scenarios()) {
    std::printf("%-22s mode=%-9s v2v=%gm d2d=%gm vehicles=%d road=%gm",
                name.c_str(), to_string(config.d2d_mode).c_str(),
                config.v2v_range_m, config.d2d_range_m, config.vehicle_count,
                config.road_length_m);
    if (config.failure_distance_m > 0) {
      std::printf(" failure=%gm", config.failure_distance_m);
    }
    std::printf("\n");
  }
  return 0;
}

int cmd_run(const std::string& scenario, std::int64_t seed,
            const std::string& out_dir, bool trace, bool routes, bool graph) {
  ScenarioConfig config = resolve_scenario(scenario);
  if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
  const std::string label = scenario_label(scenario);

  RunOptions options;
  fs::path dir;
  if (!out_dir.empty()) {
    dir = fs::path(out_dir) / label;
    fs::create_directories(dir);
    if (trace) options.trace_csv_path = (dir / "mobility_trace.csv").string();
    if (routes) options.route_csv_path = (dir / "route_events.csv").string();
    if (graph) options.graph_csv_path = (dir / "connectivity.csv").string();
  }

  const SimResult result = run(config, options);
  if (!out_dir.empty()) {
    std::ofstream out(dir / "deliveries.csv", std::ios::binary);
    write_deliveries_csv(result.deliveries, out);
    std::ofstream summary(dir / "summary.txt", std::ios::binary);
    print_summary(summary, label, result);
  }
  print_summary(std::cout, label, result);
  return 0;
}

int cmd_sweep(const std::string& scenario, const std::string& vary,
              const std::vector<double>& values, int seeds,
              const std::string& out_dir) {
  const auto variants = variants_for(scenario);
  std::vector<LabeledRun> runs;
  for (const auto& [label, base] : variants) {
    for (double value : values) {
      for (int k = 0; k < seeds; ++k) {
        ScenarioConfig config = base;
        set_field(config, vary, value);
        config.seed = base.seed + static_cast<std::uint64_t>(k);
        SimResult result = run(config);
        runs.push_back(LabeledRun{label, result.config_echo,
                                  std::move(result.deliveries)});
      }
    }
  }
  const SweepTable table = aggregate(runs, vary);

  if (!out_dir.empty()) {
    const fs::path dir = fs::path(out_dir) / scenario_label(scenario);
    fs::create_directories(dir);
    for (const std::string& metric : metric_names()) {
      SweepTable filtered;
      filtered.x_name = table.x_name;
      for (const auto& row : table.rows) {
        if (row.metric == metric) filtered.rows.push_back(row);
      }
      write_csv(filtered, (dir / (metric + ".csv")).string());
    }
  }

  std::cout << "sweep " << scenario_label(scenario) << " over " << vary << " ("
            << seeds << " seeds)\n";
  std::cout << "label,x,metric,mean,stddev,n\n";
  for (const auto& row : table.rows) {
    if (row.metric != "hops" && row.metric != "e2e_delay_ms" &&
        row.metric != "delivery_ratio") {
      continue;
    }
    std::cout << row.label << ',' << fmt(row.x) << ',' << row.metric << ','
              << fmt(row.mean) << ',' << fmt(row.stddev) << ',' << row.n
              << "\n";
  }
  return 0;
}

int cmd_compare(const std::string& scenarios_csv, const std::string& metric,
                int seeds, const std::string& out_dir) {
  std::vector<std::string> names;
  std::stringstream ss(scenarios_csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) names.push_back(item);
  }
  if (names.empty()) throw ConfigError("no scenarios listed");

  struct Row {
    std::string label;
    double mean, stddev;
    int n;
  };
  std::vector<Row> rows;
  SweepTable table;
  table.x_name = "scenario";
  for (const std::string& name : names) {
    for (const auto& [label, base] : variants_for(name)) {
      std::vector<double> values;
      for (int k = 0; k < seeds; ++k) {
        ScenarioConfig config = base;
        config.seed = base.seed + static_cast<std::uint64_t>(k);
        const SimResult result = run(config);
        const double v = run_metric(result.deliveries, metric);
        if (!std::isnan(v)) values.push_back(v);
      }
      if (values.empty()) continue;
      double mean = 0;
      for (double v : values) mean += v;
      mean /= values.size();
      double var = 0;
      for (double v : values) var += (v - mean) * (v - mean);
      const double stddev =
          values.size() > 1 ? std::sqrt(var / (values.size() - 1)) : 0.0;
      rows.push_back(
          Row{label, mean, stddev, static_cast<int>(values.size())});
      table.rows.push_back(SweepRow{label, 0.0, metric, mean, stddev,
                                    static_cast<int>(values.size())});
    }
  }

  if (!out_dir.empty()) {
    const fs::path dir = fs::path(out_dir) / "compare";
    fs::create_directories(dir);
    write_csv(table, (dir / (metric + ".csv")).string());
  }
  std::cout << "compare on " << metric << " (" << seeds << " seeds)\n";
  for (const Row& row : rows) {
    std::cout << "  " << row.label << ": mean " << fmt(row.mean) << " stddev "
              << fmt(row.stddev) << " n " << row.n << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Highway V2V relay simulator with LTE-D2D failure recovery"};
  app.require_subcommand(1);

  auto* list_cmd = app.add_subcommand("list", "print built-in scenarios");

  std::string scenario;
  std::int64_t seed = -1;
  std::string out_dir;
  bool trace = false, routes = false, graph = false;
  auto* run_cmd = app.add_subcommand("run", "run one scenario");
  run_cmd->add_option("--scenario", scenario, "built-in name or file path")
      ->required();
  run_cmd->add_option("--seed", seed, "override the config seed");
  auto* out_opt = run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_flag("--trace", trace, "dump the mobility trace CSV")
      ->needs(out_opt);
  run_cmd->add_flag("--routes", routes, "dump per-message route events")
      ->needs(out_opt);
  run_cmd->add_flag("--graph", graph, "dump the initial connectivity edges")
      ->needs(out_opt);

  std::string vary = "vehicle_count";
  std::vector<double> values = {20, 40, 60, 80, 100};
  int seeds = 10;
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep one config field");
  sweep_cmd->add_option("--scenario", scenario, "built-in name or file path")
      ->required();
  sweep_cmd->add_option("--vary", vary, "field to sweep");
  sweep_cmd->add_option("--values", values, "sweep values")->delimiter(',');
  sweep_cmd->add_option("--seeds", seeds, "seeds per point");
  sweep_cmd->add_option("--out", out_dir, "output directory");

  std::string scenarios_csv;
  std::string metric = "e2e_delay_ms";
  int compare_seeds = 1;
  auto* compare_cmd =
      app.add_subcommand("compare", "compare scenarios on one metric");
  compare_cmd->add_option("--scenarios", scenarios_csv, "comma-separated list")
      ->required();
  compare_cmd->add_option("--metric", metric, "metric name");
  compare_cmd->add_option("--seeds", compare_seeds, "seeds per scenario");
  compare_cmd->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_cmd->parsed()) return cmd_list();
    if (run_cmd->parsed()) {
      return cmd_run(scenario, seed, out_dir, trace, routes, graph);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(scenario, vary, values, seeds, out_dir);
    }
    if (compare_cmd->parsed()) {
      return cmd_compare(scenarios_csv, metric, compare_seeds, out_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
