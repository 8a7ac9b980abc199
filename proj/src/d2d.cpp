#include "relaysim/d2d.hpp"

#include <algorithm>
#include <cmath>

namespace relaysim {

D2dPlan make_d2d_plan(const ScenarioConfig& config) {
  if (config.d2d_mode == D2dMode::disabled) {
    throw ConfigError("d2d plan requested with d2d_mode = disabled");
  }
  const TimingModel timing = resolved_timing(config);
  D2dPlan plan;
  plan.mode = config.d2d_mode;
  plan.t_discovery_ms = timing.t_discovery_ms;
  plan.t_handover_ms = timing.t_handover_ms;
  plan.d2d_range_m = config.d2d_range_m;
  return plan;
}

LRest l_rest(double total_distance_m, double d2d_range_m) {
  if (d2d_range_m > total_distance_m) {
    return LRest{0.0, true};
  }
  return LRest{total_distance_m - d2d_range_m, false};
}

OhtBreakdown d2d_oht(double t_discovery_ms, double t_handover_ms,
                     double t_v2v_rest_ms) {
  OhtBreakdown oht;
  oht.t_discovery_ms = t_discovery_ms;
  oht.t_handover_total_ms = 2.0 * t_handover_ms;
  oht.t_v2v_rest_ms = t_v2v_rest_ms;
  oht.total_ms = oht.t_discovery_ms + oht.t_handover_total_ms +
                 oht.t_v2v_rest_ms;
  return oht;
}

std::optional<int> discover_bridge(const VehicleState& stuck,
                                   const std::vector<VehicleState>& world,
                                   double d2d_range_m, double target_pos) {
  if (!stuck.d2d_enabled) return std::nullopt;
  const double own_dist = std::abs(stuck.position_m - target_pos);
  std::optional<int> best;
  double best_dist = own_dist;
  for (const VehicleState& v : world) {
    if (v.id == stuck.id || !v.d2d_enabled) continue;
    if (!in_range(stuck.position_m, v.position_m, d2d_range_m)) continue;
    const double dist = std::abs(v.position_m - target_pos);
    if (dist >= own_dist) continue;
    if (!best || dist < best_dist || (dist == best_dist && v.id < *best)) {
      best = v.id;
      best_dist = dist;
    }
  }
  return best;
}

RecoveryResult hybrid_recover(AlertMessage& msg, int stuck_at,
                              const std::vector<VehicleState>& world,
                              const NeighborTables& tables, D2dPlan& plan,
                              const TimingModel& timing, double target_pos,
                              double v2v_range_m, OhtBreakdown& oht_out,
                              RouteLog* log, double start_ms) {
  msg.state = MessageState::recovering;
  plan.bridge_from = stuck_at;
  plan.bridge_to = std::nullopt;

  RecoveryResult rr;
  rr.method = RecoveryMethod::d2d_fallback;

  const VehicleState* stuck = nullptr;
  for (const VehicleState& v : world) {
    if (v.id == stuck_at) {
      stuck = &v;
      break;
    }
  }

  const std::optional<int> bridge =
      stuck ? discover_bridge(*stuck, world, plan.d2d_range_m, target_pos)
            : std::nullopt;
  if (!bridge) {
    // Discovery ran and the handover into D2D happened; both are sunk.
    const double sunk = plan.t_discovery_ms + plan.t_handover_ms;
    oht_out = OhtBreakdown{plan.t_discovery_ms, plan.t_handover_ms, 0.0,
                           sunk};
    rr.recovery_delay_ms = sunk;
    rr.overhead_ms = sunk;
    rr.final = std::nullopt;
    msg.state = MessageState::failed;
    if (log) {
      log->push_back(RouteEvent{msg.msg_id, "fail", start_ms + sunk, stuck_at,
                                "no d2d candidate in range"});
    }
    return rr;
  }

  plan.bridge_to = bridge;
  const double bridge_ms =
      plan.t_discovery_ms + plan.t_handover_ms + timing.per_hop_d2d_ms;
  if (log) {
    log->push_back(RouteEvent{msg.msg_id, "hop", start_ms + bridge_ms,
                              stuck_at, "d2d to " + std::to_string(*bridge)});
  }
  msg.hop_trace.push_back(*bridge);

  // Back on .11p past the gap; greedy covers the rest of the road.
  const double resume_start =
      bridge_ms + plan.t_handover_ms;  // second handover
  RouteResult resumed =
      forward_greedy(world, tables, *bridge, target_pos, msg.target_rsu_id,
                     v2v_range_m, timing, log, msg.msg_id,
                     start_ms + resume_start);
  for (std::size_t i = 1; i < resumed.path.size(); ++i) {
    if (resumed.path[i] == msg.target_rsu_id) break;
    msg.hop_trace.push_back(resumed.path[i]);
  }

  oht_out = d2d_oht(plan.t_discovery_ms, plan.t_handover_ms,
                    resumed.elapsed_ms);
  rr.recovery_delay_ms = oht_out.total_ms + timing.per_hop_d2d_ms;
  rr.overhead_ms = plan.t_discovery_ms + 2.0 * plan.t_handover_ms +
                   timing.per_hop_d2d_ms;
  rr.resumed_from = bridge;
  rr.forward_hops_total = resumed.hops;
  const bool delivered = resumed.outcome == RouteOutcome::delivered;
  rr.final = std::move(resumed);
  msg.state = delivered ? MessageState::delivered : MessageState::failed;
  if (!delivered && log) {
    log->push_back(RouteEvent{msg.msg_id, "fail",
                              start_ms + rr.recovery_delay_ms,
                              rr.final->stuck_at.value_or(stuck_at),
                              "resumed leg dead-ended"});
  }
  return rr;
}

}  // namespace relaysim
