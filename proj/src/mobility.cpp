#include "relaysim/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace relaysim {

std::vector<VehicleState> place_vehicles(int count, double road_length_m,
                                         double speed_min_kmh,
                                         double speed_max_kmh,
                                         RandomStream& placement,
                                         RandomStream& speeds,
                                         const IdmParams& p) {
  if (count < 1) throw std::invalid_argument("vehicle count must be >= 1");
  if (road_length_m <= 0) {
    throw std::invalid_argument("road length must be positive");
  }
  const double slack = road_length_m - count * p.min_gap_m;
  if (slack < 0) {
    throw std::invalid_argument(
        "infeasible packing: " + std::to_string(count) + " vehicles * " +
        std::to_string(p.min_gap_m) + " m min gap exceeds road length " +
        std::to_string(road_length_m) + " m");
  }

  // Uniform draws on the slack, sorted, then spread by the minimum gap. This
  // keeps every gap (including the ring wrap gap) >= min_gap_m.
  std::vector<double> offsets(count);
  for (double& u : offsets) u = placement.next_uniform(0.0, slack);
  std::sort(offsets.begin(), offsets.end());

  std::vector<VehicleState> world(count);
  for (int i = 0; i < count; ++i) {
    VehicleState& v = world[i];
    v.id = i;
    v.position_m = offsets[i] + i * p.min_gap_m;
    v.desired_speed_ms =
        speeds.next_uniform(speed_min_kmh, speed_max_kmh) * kKmhToMs;
    v.velocity_ms = v.desired_speed_ms;
  }
  return world;
}

double idm_acceleration(const VehicleState& self, const VehicleState* leader,
                        double gap_m, const IdmParams& p) {
  const double v = self.velocity_ms;
  const double v0 = self.desired_speed_ms;
  const double free_term =
      v0 > 0 ? std::pow(v / v0, p.delta_exponent) : (v > 0 ? 2.0 : 0.0);
  if (leader == nullptr) {
    return p.max_accel_ms2 * (1.0 - free_term);
  }
  if (gap_m <= 0) {
    return -p.comfortable_decel_ms2 * 5.0;  // degenerate gap, emergency clamp
  }
  const double dv = v - leader->velocity_ms;
  const double s_star =
      p.min_gap_m + v * p.headway_s +
      v * dv / (2.0 * std::sqrt(p.max_accel_ms2 * p.comfortable_decel_ms2));
  const double interaction = s_star / gap_m;
  return p.max_accel_ms2 * (1.0 - free_term - interaction * interaction);
}

double idm_acceleration(const VehicleState& self, const VehicleState* leader,
                        const IdmParams& p) {
  const double gap =
      leader ? leader->position_m - self.position_m
             : std::numeric_limits<double>::infinity();
  return idm_acceleration(self, leader, gap, p);
}

void step_mobility(std::vector<VehicleState>& world, const IdmParams& p,
                   double dt_s, double road_length_m, double speed_min_kmh,
                   double speed_max_kmh, RandomStream& wrap_speeds) {
  const int n = static_cast<int>(world.size());
  if (n == 0) return;

  // Velocity pass against the current snapshot, so every follower reacts to
  // its leader's pre-step state.
  std::vector<double> new_velocity(n);
  for (int i = 0; i < n; ++i) {
    const VehicleState& self = world[i];
    if (self.pinned) {
      new_velocity[i] = 0.0;
      continue;
    }
    const VehicleState* leader = nullptr;
    double gap = 0.0;
    if (n > 1) {
      const VehicleState& ahead = world[(i + 1) % n];
      leader = &ahead;
      gap = ahead.position_m - self.position_m;
      if (i == n - 1) gap += road_length_m;  // ring leader
    }
    const double a = leader ? idm_acceleration(self, leader, gap, p)
                            : idm_acceleration(self, nullptr, 0.0, p);
    new_velocity[i] = std::max(0.0, self.velocity_ms + a * dt_s);
  }

  // Position pass front to back with a hard no-pass bound against the
  // leader's already-updated position. A simultaneous update alone can
  // overshoot when a fast leader brakes to a stop in the same tick.
  const double floor_gap = 0.05 * p.min_gap_m;
  std::vector<double> new_position(n);
  for (int i = n - 1; i >= 0; --i) {
    const VehicleState& self = world[i];
    if (self.pinned) {
      new_position[i] = self.position_m;
      new_velocity[i] = 0.0;
      continue;
    }
    if (n > 1) {
      // The front-most vehicle bounds against its wrapped leader's old
      // position; the leader only moves forward, so this is conservative.
      const double leader_x = (i + 1 < n)
                                  ? new_position[i + 1]
                                  : world[0].position_m + road_length_m;
      const double max_move = leader_x - floor_gap - self.position_m;
      new_velocity[i] =
          std::min(new_velocity[i], std::max(0.0, max_move / dt_s));
    }
    new_position[i] = self.position_m + new_velocity[i] * dt_s;
  }

  int wrapped = 0;
  for (int i = 0; i < n; ++i) {
    VehicleState& v = world[i];
    if (v.pinned) continue;
    v.velocity_ms = new_velocity[i];
    v.position_m = new_position[i];
    if (v.position_m >= road_length_m) {
      // Re-enters as fresh traffic: new desired speed, never faster than it.
      v.position_m = std::fmod(v.position_m, road_length_m);
      v.desired_speed_ms =
          wrap_speeds.next_uniform(speed_min_kmh, speed_max_kmh) * kKmhToMs;
      v.velocity_ms = std::min(v.velocity_ms, v.desired_speed_ms);
      ++wrapped;
    }
  }
  if (wrapped > 0) {
    // Wrapping vehicles came off the tail of the sorted order.
    std::rotate(world.begin(), world.end() - wrapped, world.end());
  }
}

}  // namespace relaysim
