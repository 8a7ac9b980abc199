#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relaysim/config.hpp"
#include "relaysim/metrics.hpp"
#include "relaysim/mobility.hpp"
#include "relaysim/radio.hpp"
#include "relaysim/routing.hpp"

namespace relaysim {

enum class EventKind {
  mobility_tick,
  emit_alert,
  inject_failure,
  relay_episode,
  end_of_run,
};

/// Queue entries pop in (time_s, seq) lexicographic order.
struct Event {
  double time_s = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::end_of_run;
  std::int64_t msg_id = -1;
};

/// Min-queue over (time_s, seq); popped times never decrease.
class EventQueue {
 public:
  void push(const Event& event);
  Event pop();  // throws std::logic_error on empty pop or time regression
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  std::vector<Event> heap_;
  double last_popped_s_ = 0.0;
};

struct SimResult {
  ScenarioConfig config_echo;
  std::vector<DeliveryRecord> deliveries;
  std::optional<std::string> trace_path;
  double wall_time_s = 0.0;
};

struct RunOptions {
  std::optional<std::string> trace_csv_path;   // mobility trace dump
  std::optional<std::string> route_csv_path;   // per-message route events
  std::optional<std::string> graph_csv_path;   // t=0 connectivity edge list
};

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Relocates vehicles so that an empty interval of exactly gap_m opens
/// immediately ahead of the vehicle pinned at rsu_pos - failure_distance_m.
/// The first vehicle at or beyond the far side is pulled onto the gap edge
/// and pinned as the D2D candidate; in-gap vehicles are repacked behind the
/// anchor. Throws ScenarioError when too few vehicles exist to build the gap.
void inject_dead_end(std::vector<VehicleState>& world,
                     double failure_distance_m, double rsu_pos,
                     double v2v_range_m, double gap_m,
                     const IdmParams& idm = {});

/// Deterministic discrete-event run: mobility ticks at 0.5 s, one alert per
/// packet interval, greedy relay plus the configured recovery on dead ends.
/// (config, seed) fully determines the result; SIM_SEED in the environment
/// overrides the config seed.
SimResult run(const ScenarioConfig& config, const RunOptions& options = {});

}  // namespace relaysim
