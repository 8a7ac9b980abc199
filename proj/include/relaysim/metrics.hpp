#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "relaysim/config.hpp"
#include "relaysim/d2d.hpp"

namespace relaysim {

enum class DeliveryOutcome { delivered, failed };

enum class RecordedRecovery {
  none,
  redirect_neighbor,
  alternate_rsu,
  d2d_fallback,
  exhausted,
};

std::string to_string(DeliveryOutcome outcome);
std::string to_string(RecordedRecovery method);

/// One row per emitted alert.
struct DeliveryRecord {
  std::int64_t msg_id = 0;
  DeliveryOutcome outcome = DeliveryOutcome::failed;
  int total_hops = 0;  // = v2v_hops + d2d_hops
  int v2v_hops = 0;
  int d2d_hops = 0;  // 0 or 1
  double e2e_delay_ms = 0.0;       // emission to T_a (to abandonment if failed)
  double recovery_delay_ms = 0.0;  // T_f to T_a, 0 without a failure
  double recovery_overhead_ms = 0.0;  // recovery machinery only
  RecordedRecovery recovery_method = RecordedRecovery::none;
  std::optional<OhtBreakdown> oht;
};

struct SweepRow {
  std::string label;
  double x = 0.0;
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;
  int n = 0;  // seeds contributing to this cell
};

struct SweepTable {
  std::string x_name;
  std::vector<SweepRow> rows;
};

/// One run's worth of input to aggregation.
struct LabeledRun {
  std::string label;
  ScenarioConfig config;
  std::vector<DeliveryRecord> deliveries;
};

struct AggregationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Per-run scalar for one metric name; NaN when the run has no qualifying
/// messages. Metrics: hops, e2e_delay_ms, recovery_delay_ms,
/// recovery_overhead_ms, delivery_ratio.
double run_metric(const std::vector<DeliveryRecord>& deliveries,
                  const std::string& metric);

const std::vector<std::string>& metric_names();

/// Groups runs by (label, value of group_by) and reduces each metric to
/// mean/stddev over seeds. Within a label, configs must agree on everything
/// except group_by and seed; a mismatch names the offending field.
SweepTable aggregate(const std::vector<LabeledRun>& runs,
                     const std::string& group_by);

/// `x,label,metric,mean,stddev,n` with rows sorted by (label, x); LF line
/// endings, byte-deterministic.
void write_csv(const SweepTable& table, std::ostream& out);
void write_csv(const SweepTable& table, const std::string& path);

/// Per-message table `msg_id,outcome,...` including the OHT columns.
void write_deliveries_csv(const std::vector<DeliveryRecord>& deliveries,
                          std::ostream& out);

/// Fixed-format float used by every CSV writer.
std::string format_double(double value);

}  // namespace relaysim
