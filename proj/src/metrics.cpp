#include "relaysim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

namespace relaysim {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / values.size();
}

double sample_stddev(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / (values.size() - 1));
}

// Field-by-field comparison used by the aggregation homogeneity check.
std::vector<std::string> config_diff(const ScenarioConfig& a,
                                     const ScenarioConfig& b) {
  std::vector<std::string> diff;
  const auto check = [&](bool equal, const char* name) {
    if (!equal) diff.push_back(name);
  };
  check(a.road_length_m == b.road_length_m, "road_length_m");
  check(a.vehicle_count == b.vehicle_count, "vehicle_count");
  check(a.v2v_range_m == b.v2v_range_m, "v2v_range_m");
  check(a.d2d_range_m == b.d2d_range_m, "d2d_range_m");
  check(a.speed_min_kmh == b.speed_min_kmh, "speed_min_kmh");
  check(a.speed_max_kmh == b.speed_max_kmh, "speed_max_kmh");
  check(a.packet_interval_s == b.packet_interval_s, "packet_interval_s");
  check(a.packet_size_kb == b.packet_size_kb, "packet_size_kb");
  check(a.sim_duration_s == b.sim_duration_s, "sim_duration_s");
  check(a.d2d_mode == b.d2d_mode, "d2d_mode");
  check(a.rsu_positions_m == b.rsu_positions_m, "rsu_positions_m");
  check(a.failure_distance_m == b.failure_distance_m, "failure_distance_m");
  check(a.timing == b.timing, "timing");
  check(a.seed == b.seed, "seed");
  check(a.vehicle_positions_m == b.vehicle_positions_m,
        "vehicle_positions_m");
  check(a.gap_m == b.gap_m, "gap_m");
  check(a.source_vehicle_id == b.source_vehicle_id, "source_vehicle_id");
  return diff;
}

double field_value(const ScenarioConfig& c, const std::string& name) {
  if (name == "vehicle_count") return c.vehicle_count;
  if (name == "road_length_m") return c.road_length_m;
  if (name == "v2v_range_m") return c.v2v_range_m;
  if (name == "d2d_range_m") return c.d2d_range_m;
  if (name == "failure_distance_m") return c.failure_distance_m;
  if (name == "t_discovery_ms") return c.timing.t_discovery_ms;
  if (name == "interference_coeff") return c.timing.interference_coeff;
  throw AggregationError("cannot group by unknown field '" + name + "'");
}

}  // namespace

std::string to_string(DeliveryOutcome outcome) {
  return outcome == DeliveryOutcome::delivered ? "delivered" : "failed";
}

std::string to_string(RecordedRecovery method) {
  switch (method) {
    case RecordedRecovery::none: return "none";
    case RecordedRecovery::redirect_neighbor: return "redirect_neighbor";
    case RecordedRecovery::alternate_rsu: return "alternate_rsu";
    case RecordedRecovery::d2d_fallback: return "d2d_fallback";
    case RecordedRecovery::exhausted: return "exhausted";
  }
  return "none";
}

std::string format_double(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {
      "hops", "e2e_delay_ms", "recovery_delay_ms", "recovery_overhead_ms",
      "delivery_ratio"};
  return names;
}

double run_metric(const std::vector<DeliveryRecord>& deliveries,
                  const std::string& metric) {
  if (metric == "delivery_ratio") {
    if (deliveries.empty()) return kNan;
    std::size_t delivered = 0;
    for (const DeliveryRecord& r : deliveries) {
      if (r.outcome == DeliveryOutcome::delivered) ++delivered;
    }
    return static_cast<double>(delivered) / deliveries.size();
  }

  std::vector<double> values;
  for (const DeliveryRecord& r : deliveries) {
    if (metric == "hops") {
      if (r.outcome == DeliveryOutcome::delivered) {
        values.push_back(r.total_hops);
      }
    } else if (metric == "e2e_delay_ms") {
      if (r.outcome == DeliveryOutcome::delivered) {
        values.push_back(r.e2e_delay_ms);
      }
    } else if (metric == "recovery_delay_ms") {
      if (r.recovery_method != RecordedRecovery::none) {
        values.push_back(r.recovery_delay_ms);
      }
    } else if (metric == "recovery_overhead_ms") {
      if (r.recovery_method != RecordedRecovery::none) {
        values.push_back(r.recovery_overhead_ms);
      }
    } else {
      throw AggregationError("unknown metric '" + metric + "'");
    }
  }
  return values.empty() ? kNan : mean_of(values);
}

SweepTable aggregate(const std::vector<LabeledRun>& runs,
                     const std::string& group_by) {
  SweepTable table;
  table.x_name = group_by;
  if (runs.empty()) return table;

  std::map<std::pair<std::string, double>, std::vector<const LabeledRun*>>
      groups;
  std::map<std::string, const ScenarioConfig*> reference;
  for (const LabeledRun& run : runs) {
    const double x = field_value(run.config, group_by);
    groups[{run.label, x}].push_back(&run);
    const auto [it, inserted] = reference.emplace(run.label, &run.config);
    if (!inserted) {
      auto diff = config_diff(*it->second, run.config);
      std::erase(diff, group_by);
      std::erase(diff, "seed");
      if (group_by == "vehicle_count") std::erase(diff, "vehicle_positions_m");
      if (!diff.empty()) {
        throw AggregationError("aggregation error: configs differ in " +
                               diff.front());
      }
    }
  }

  for (const auto& [key, members] : groups) {
    for (const std::string& metric : metric_names()) {
      std::vector<double> values;
      for (const LabeledRun* run : members) {
        const double v = run_metric(run->deliveries, metric);
        if (!std::isnan(v)) values.push_back(v);
      }
      if (values.empty()) continue;
      SweepRow row;
      row.label = key.first;
      row.x = key.second;
      row.metric = metric;
      row.mean = mean_of(values);
      row.stddev = sample_stddev(values, row.mean);
      row.n = static_cast<int>(values.size());
      table.rows.push_back(row);
    }
  }
  return table;
}

void write_csv(const SweepTable& table, std::ostream& out) {
  std::vector<SweepRow> rows = table.rows;
  std::sort(rows.begin(), rows.end(),
            [](const SweepRow& a, const SweepRow& b) {
              if (a.label != b.label) return a.label < b.label;
              if (a.x != b.x) return a.x < b.x;
              return a.metric < b.metric;
            });
  out << "x,label,metric,mean,stddev,n\n";
  for (const SweepRow& r : rows) {
    out << format_double(r.x) << ',' << r.label << ',' << r.metric << ','
        << format_double(r.mean) << ',' << format_double(r.stddev) << ','
        << r.n << '\n';
  }
}

void write_csv(const SweepTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw AggregationError("cannot write CSV '" + path + "'");
  write_csv(table, out);
}

void write_deliveries_csv(const std::vector<DeliveryRecord>& deliveries,
                          std::ostream& out) {
  out << "msg_id,outcome,total_hops,v2v_hops,d2d_hops,e2e_delay_ms,"
         "recovery_delay_ms,recovery_overhead_ms,recovery_method,"
         "oht_discovery_ms,oht_handover_total_ms,oht_v2v_rest_ms,"
         "oht_total_ms\n";
  for (const DeliveryRecord& r : deliveries) {
    out << r.msg_id << ',' << to_string(r.outcome) << ',' << r.total_hops
        << ',' << r.v2v_hops << ',' << r.d2d_hops << ','
        << format_double(r.e2e_delay_ms) << ','
        << format_double(r.recovery_delay_ms) << ','
        << format_double(r.recovery_overhead_ms) << ','
        << to_string(r.recovery_method) << ',';
    if (r.oht) {
      out << format_double(r.oht->t_discovery_ms) << ','
          << format_double(r.oht->t_handover_total_ms) << ','
          << format_double(r.oht->t_v2v_rest_ms) << ','
          << format_double(r.oht->total_ms);
    } else {
      out << ",,,";
    }
    out << '\n';
  }
}

}  // namespace relaysim
