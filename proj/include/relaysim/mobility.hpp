#pragma once

#include <cstdint>
#include <vector>

#include "relaysim/random.hpp"

namespace relaysim {

constexpr double kKmhToMs = 1000.0 / 3600.0;

struct VehicleState {
  int id = 0;
  double position_m = 0.0;
  double velocity_ms = 0.0;
  double desired_speed_ms = 0.0;
  bool d2d_enabled = true;
  // Gap-edge vehicles of an injected dead-end are pinned for the whole run
  // so the failure geometry survives mobility.
  bool pinned = false;
};

struct IdmParams {
  double max_accel_ms2 = 1.4;
  double comfortable_decel_ms2 = 2.0;
  double min_gap_m = 2.0;
  double headway_s = 1.5;
  double delta_exponent = 4.0;
};

/// Uniform placement on [0, road_length) with every gap (including the ring
/// wrap gap) at least min_gap_m. Ids are assigned in position order;
/// velocities start at the drawn desired speed.
/// Throws std::invalid_argument on infeasible packing
/// (count * min_gap > road_length).
std::vector<VehicleState> place_vehicles(int count, double road_length_m,
                                         double speed_min_kmh,
                                         double speed_max_kmh,
                                         RandomStream& placement,
                                         RandomStream& speeds,
                                         const IdmParams& p = {});

/// IDM acceleration. leader == nullptr means free road.
/// gap_m is the bumper distance to the leader (ignored without one);
/// a degenerate gap <= 0 returns the emergency clamp -5 * comfortable decel.
double idm_acceleration(const VehicleState& self, const VehicleState* leader,
                        double gap_m, const IdmParams& p);

/// Convenience overload: gap taken from the position difference. The leader,
/// if present, must not be behind self.
double idm_acceleration(const VehicleState& self, const VehicleState* leader,
                        const IdmParams& p);

/// One semi-implicit Euler step over a ring road. `world` must be sorted by
/// position and stays sorted (vehicles crossing road_length wrap around and
/// resample their desired speed). Pinned vehicles do not move.
void step_mobility(std::vector<VehicleState>& world, const IdmParams& p,
                   double dt_s, double road_length_m, double speed_min_kmh,
                   double speed_max_kmh, RandomStream& wrap_speeds);

}  // namespace relaysim
