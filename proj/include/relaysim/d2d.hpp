#pragma once

#include <optional>

#include "relaysim/config.hpp"
#include "relaysim/routing.hpp"

namespace relaysim {

/// Mode-resolved D2D parameters for one recovery attempt.
struct D2dPlan {
  D2dMode mode = D2dMode::proactive;
  double t_discovery_ms = 0.0;  // T_D, 0 when proactive
  double t_handover_ms = 0.0;   // T_HO per handover, 0 when proactive
  double d2d_range_m = 1000.0;
  int bridge_from = -1;
  std::optional<int> bridge_to;
};

/// Throws ConfigError if the config has D2D disabled.
D2dPlan make_d2d_plan(const ScenarioConfig& config);

/// Additive overhead of one hybrid recovery: discovery, the handovers
/// actually charged, and the resumed V2V leg.
struct OhtBreakdown {
  double t_discovery_ms = 0.0;
  double t_handover_total_ms = 0.0;  // 2 * T_HO on success, one on failure
  double t_v2v_rest_ms = 0.0;
  double total_ms = 0.0;  // exact sum of the three
};

struct LRest {
  double rest_m = 0.0;
  // D2D range reaches past the RSU: no V2V leg left.
  bool direct_delivery = false;
};

/// Road left for the resumed V2V leg after a full-range bridge hop.
/// A range longer than the remaining distance clamps to zero and flags
/// direct delivery.
LRest l_rest(double total_distance_m, double d2d_range_m);

OhtBreakdown d2d_oht(double t_discovery_ms, double t_handover_ms,
                     double t_v2v_rest_ms);

/// D2D-capable vehicle within d2d_range of `stuck` and strictly closer to
/// target_pos, maximizing progress; ties by lowest id.
std::optional<int> discover_bridge(const VehicleState& stuck,
                                   const std::vector<VehicleState>& world,
                                   double d2d_range_m, double target_pos);

/// LTE-assisted fallback: charge discovery and one handover, take a single
/// D2D bridge hop to the best candidate, hand back over, then resume greedy
/// V2V over the rest of the road. No candidate in range fails the message
/// with the sunk discovery + handover cost. Fills plan.bridge_from/to and
/// returns the OHT breakdown through `oht_out`.
RecoveryResult hybrid_recover(AlertMessage& msg, int stuck_at,
                              const std::vector<VehicleState>& world,
                              const NeighborTables& tables, D2dPlan& plan,
                              const TimingModel& timing, double target_pos,
                              double v2v_range_m, OhtBreakdown& oht_out,
                              RouteLog* log = nullptr, double start_ms = 0.0);

}  // namespace relaysim
