#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relaysim/config.hpp"
#include "relaysim/radio.hpp"

namespace relaysim {

enum class Direction { forward, reverse };
enum class MessageState { in_flight, dead_end, recovering, delivered, failed };

/// The relayed safety payload. Timestamps are simulation seconds; per-hop
/// model delays accumulate separately in milliseconds.
struct AlertMessage {
  std::int64_t msg_id = 0;
  int origin_id = 0;
  int target_rsu_id = kRsuIdBase;
  double target_pos_m = 0.0;
  std::vector<int> hop_trace;  // vehicles visited, origin first
  double created_s = 0.0;
  std::optional<double> t_failure_s;  // T_f, instant of dead-end detection
  std::optional<double> t_arrival_s;  // T_a, instant of RSU reception
  Direction direction = Direction::forward;
  MessageState state = MessageState::in_flight;
};

enum class RouteOutcome { delivered, dead_end };

struct RouteResult {
  RouteOutcome outcome = RouteOutcome::dead_end;
  int hops = 0;                 // path.size() - 1
  std::vector<int> path;        // vehicle ids, ending in the RSU id on delivery
  std::optional<int> stuck_at;  // set iff dead_end
  double elapsed_ms = 0.0;
};

enum class RecoveryMethod {
  redirect_neighbor,
  alternate_rsu,
  backward_recursion_exhausted,
  d2d_fallback,
};

struct OhtBreakdown;  // defined in d2d.hpp

struct RecoveryResult {
  RecoveryMethod method = RecoveryMethod::backward_recursion_exhausted;
  int backward_hops = 0;
  std::optional<int> resumed_from;
  double recovery_delay_ms = 0.0;  // T_f to T_a (or to abandonment)
  // Recovery machinery only: backward hops for V2V-RA, discovery + handovers
  // + bridge hop for the hybrid. Excludes the resumed relay leg.
  double overhead_ms = 0.0;
  int forward_hops_total = 0;  // v2v transmissions spent during recovery
  std::optional<RouteResult> final;
};

// Route event dump rows: event in {hop, dead_end, backward, redirect,
// reverse, deliver, fail}.
struct RouteEvent {
  std::int64_t msg_id = 0;
  std::string event;
  double time_ms = 0.0;
  int vehicle_id = 0;
  std::string detail;
};
using RouteLog = std::vector<RouteEvent>;

/// Neighbor of `current` strictly closer to target_pos, maximizing progress;
/// ties broken by lowest vehicle id. `excluded` entries are never picked.
std::optional<int> greedy_next_hop(const VehicleState& current,
                                   double target_pos,
                                   const NeighborTable& table,
                                   const std::vector<int>& excluded = {});

/// True iff greedy forwarding is stuck and the target RSU is out of reach.
bool is_dead_end(const VehicleState& current, double target_pos,
                 const NeighborTable& table, double v2v_range_m);

/// Greedy geographic forwarding from `source_id` toward the RSU at
/// target_pos. Accumulates density-inflated per-hop delays; the hop into the
/// RSU counts. start_ms offsets logged event times.
RouteResult forward_greedy(const std::vector<VehicleState>& world,
                           const NeighborTables& tables, int source_id,
                           double target_pos, int target_rsu_id,
                           double v2v_range_m, const TimingModel& timing,
                           RouteLog* log = nullptr, std::int64_t msg_id = -1,
                           double start_ms = 0.0);

/// One-shot broadcast flood: every vehicle rebroadcasts once, breadth-first.
/// Hop count is the BFS depth at first delivery; elapsed is the per-hop sum
/// along the delivering tree path.
RouteResult broadcast_relay(const std::vector<VehicleState>& world,
                            const NeighborTables& tables, int source_id,
                            double target_pos, int target_rsu_id,
                            double v2v_range_m, const TimingModel& timing);

/// Backward dead-end recovery. Walks the hop trace backwards one paid hop at
/// a time; at each predecessor tries (a) redirecting to an untried neighbor
/// that makes progress, then (b) greedy relay toward each other RSU by
/// proximity, else (c) keeps walking back. A redirect that dead-ends again
/// re-enters the procedure with the accumulated trace.
RecoveryResult v2v_ra_recover(const std::vector<VehicleState>& world,
                              const NeighborTables& tables, AlertMessage& msg,
                              int stuck_at, const TimingModel& timing,
                              const std::vector<Rsu>& rsus,
                              double v2v_range_m, RouteLog* log = nullptr,
                              double start_ms = 0.0);

}  // namespace relaysim
