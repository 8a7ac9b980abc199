#include "relaysim/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "relaysim/d2d.hpp"

namespace relaysim {

namespace {

constexpr double kMobilityDtS = 0.5;

bool event_after(const Event& a, const Event& b) {
  if (a.time_s != b.time_s) return a.time_s > b.time_s;
  return a.seq > b.seq;
}

std::vector<Rsu> make_rsus(const ScenarioConfig& config) {
  std::vector<Rsu> rsus;
  for (std::size_t i = 0; i < config.rsu_positions_m.size(); ++i) {
    rsus.push_back(make_rsu(static_cast<int>(i), config.rsu_positions_m[i]));
  }
  return rsus;
}

// Vehicle with the longest distance to its nearest RSU; ties to lowest id.
int pick_source(const std::vector<VehicleState>& world,
                const std::vector<Rsu>& rsus) {
  int best = world.front().id;
  double best_dist = -1.0;
  for (const VehicleState& v : world) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const Rsu& r : rsus) {
      nearest = std::min(nearest, std::abs(r.position_m - v.position_m));
    }
    if (nearest > best_dist ||
        (nearest == best_dist && v.id < best)) {
      best = v.id;
      best_dist = nearest;
    }
  }
  return best;
}

// Alerts travel forward: nearest RSU ahead of the source, or the nearest one
// behind when the road ahead has none.
const Rsu& pick_target(const std::vector<Rsu>& rsus, double source_pos) {
  const Rsu* best = nullptr;
  for (const Rsu& r : rsus) {
    if (r.position_m < source_pos) continue;
    if (!best || r.position_m - source_pos < best->position_m - source_pos) {
      best = &r;
    }
  }
  if (!best) {
    for (const Rsu& r : rsus) {
      if (!best ||
          source_pos - r.position_m < source_pos - best->position_m) {
        best = &r;
      }
    }
  }
  return *best;
}

RecordedRecovery to_recorded(RecoveryMethod method) {
  switch (method) {
    case RecoveryMethod::redirect_neighbor:
      return RecordedRecovery::redirect_neighbor;
    case RecoveryMethod::alternate_rsu:
      return RecordedRecovery::alternate_rsu;
    case RecoveryMethod::d2d_fallback:
      return RecordedRecovery::d2d_fallback;
    case RecoveryMethod::backward_recursion_exhausted:
      return RecordedRecovery::exhausted;
  }
  return RecordedRecovery::none;
}

void dump_trace(std::ofstream& out, double time_s,
                const std::vector<VehicleState>& world) {
  char buf[160];
  for (const VehicleState& v : world) {
    std::snprintf(buf, sizeof(buf), "%.3f,%d,%.6f,%.6f\n", time_s, v.id,
                  v.position_m, v.velocity_ms);
    out << buf;
  }
}

}  // namespace

void EventQueue::push(const Event& event) {
  heap_.push_back(event);
  std::push_heap(heap_.begin(), heap_.end(), event_after);
}

Event EventQueue::pop() {
  if (heap_.empty()) throw std::logic_error("pop from empty event queue");
  std::pop_heap(heap_.begin(), heap_.end(), event_after);
  const Event event = heap_.back();
  heap_.pop_back();
  if (event.time_s < last_popped_s_) {
    throw std::logic_error("event queue time regression");
  }
  last_popped_s_ = event.time_s;
  return event;
}

void inject_dead_end(std::vector<VehicleState>& world,
                     double failure_distance_m, double rsu_pos,
                     double v2v_range_m, double gap_m, const IdmParams& idm) {
  if (failure_distance_m > rsu_pos) {
    throw ScenarioError("failure_distance_m exceeds the RSU position");
  }
  if (gap_m <= v2v_range_m) {
    throw ScenarioError("injected gap must exceed the v2v range");
  }
  if (world.empty()) {
    throw ScenarioError("cannot construct dead-end gap: no vehicles");
  }
  std::sort(world.begin(), world.end(),
            [](const VehicleState& a, const VehicleState& b) {
              return a.position_m < b.position_m;
            });

  const double anchor_pos = rsu_pos - failure_distance_m;
  const double far_pos = anchor_pos + gap_m;

  // Anchor: vehicle closest to the failure point, pinned exactly onto it.
  std::size_t anchor = 0;
  for (std::size_t i = 1; i < world.size(); ++i) {
    if (std::abs(world[i].position_m - anchor_pos) <
        std::abs(world[anchor].position_m - anchor_pos)) {
      anchor = i;
    }
  }
  world[anchor].position_m = anchor_pos;
  world[anchor].velocity_ms = 0.0;
  world[anchor].pinned = true;

  // Far edge: first vehicle at or past the far side, pulled onto the edge.
  // If none exists, promote the last in-gap vehicle.
  std::size_t far = world.size();
  for (std::size_t i = anchor + 1; i < world.size(); ++i) {
    if (world[i].position_m >= far_pos) {
      far = i;
      break;
    }
  }
  if (far == world.size() && world.size() > anchor + 1) {
    far = world.size() - 1;
  }
  if (far == world.size() || far == anchor) {
    throw ScenarioError(
        "cannot construct dead-end gap: too few vehicles beyond the anchor");
  }
  world[far].position_m = far_pos;
  world[far].velocity_ms = 0.0;
  world[far].pinned = true;

  // Repack everything left inside the gap behind the anchor.
  for (std::size_t i = anchor + 1; i < far; ++i) {
    world[i].position_m = anchor_pos;
  }
  std::stable_sort(world.begin(), world.end(),
                   [](const VehicleState& a, const VehicleState& b) {
                     if (a.position_m != b.position_m) {
                       return a.position_m < b.position_m;
                     }
                     return a.pinned < b.pinned;  // anchor last in its tie
                   });
  std::size_t anchor_idx = 0;
  for (std::size_t i = 0; i < world.size(); ++i) {
    if (world[i].pinned && world[i].position_m == anchor_pos) anchor_idx = i;
  }
  for (std::size_t i = anchor_idx; i-- > 0;) {
    const double limit = world[i + 1].position_m - idm.min_gap_m;
    if (world[i].position_m > limit) world[i].position_m = limit;
    if (world[i].position_m < 0) {
      throw ScenarioError(
          "cannot construct dead-end gap: no room to repack vehicles");
    }
  }
}

SimResult run(const ScenarioConfig& input_config, const RunOptions& options) {
  const auto wall_start = std::chrono::steady_clock::now();

  ScenarioConfig config = input_config;
  if (const char* env_seed = std::getenv("SIM_SEED")) {
    char* end = nullptr;
    const unsigned long long parsed = std::strtoull(env_seed, &end, 10);
    if (end == env_seed || *end != '\0') {
      throw ScenarioError("SIM_SEED is not an unsigned integer");
    }
    config.seed = parsed;
  }
  {
    const auto violations = validate(config);
    if (!violations.empty()) {
      std::string msg = "invalid scenario: ";
      for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) msg += "; ";
        msg += violations[i];
      }
      throw ScenarioError(msg);
    }
  }

  const IdmParams idm;
  RandomStream placement(config.seed, "placement");
  RandomStream speeds(config.seed, "speeds");
  RandomStream wrap_speeds(config.seed, "wrap");

  std::vector<VehicleState> world;
  if (!config.vehicle_positions_m.empty()) {
    std::vector<double> positions = config.vehicle_positions_m;
    std::sort(positions.begin(), positions.end());
    for (std::size_t i = 0; i < positions.size(); ++i) {
      VehicleState v;
      v.id = static_cast<int>(i);
      v.position_m = positions[i];
      v.desired_speed_ms =
          speeds.next_uniform(config.speed_min_kmh, config.speed_max_kmh) *
          kKmhToMs;
      v.velocity_ms = v.desired_speed_ms;
      world.push_back(v);
    }
  } else {
    try {
      world = place_vehicles(config.vehicle_count, config.road_length_m,
                             config.speed_min_kmh, config.speed_max_kmh,
                             placement, speeds, idm);
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(e.what());
    }
  }

  const std::vector<Rsu> rsus = make_rsus(config);
  const TimingModel timing = resolved_timing(config);

  EventQueue queue;
  std::uint64_t seq = 0;
  if (config.failure_distance_m > 0) {
    queue.push(Event{0.0, seq++, EventKind::inject_failure, -1});
  }
  const auto count_steps = [](double duration, double step) {
    return static_cast<std::int64_t>(std::floor(duration / step + 1e-9));
  };
  for (std::int64_t k = 1; k <= count_steps(config.sim_duration_s,
                                            kMobilityDtS);
       ++k) {
    queue.push(Event{k * kMobilityDtS, seq++, EventKind::mobility_tick, -1});
  }
  const std::int64_t alerts =
      count_steps(config.sim_duration_s, config.packet_interval_s);
  for (std::int64_t k = 1; k <= alerts; ++k) {
    queue.push(Event{k * config.packet_interval_s, seq++,
                     EventKind::emit_alert, k - 1});
  }
  queue.push(Event{config.sim_duration_s, seq++, EventKind::end_of_run, -1});

  std::ofstream trace_out;
  if (options.trace_csv_path) {
    trace_out.open(*options.trace_csv_path, std::ios::binary);
    if (!trace_out) throw ScenarioError("cannot write mobility trace");
    trace_out << "time_s,vehicle_id,position_m,velocity_ms\n";
  }
  RouteLog route_log;
  const bool keep_routes = options.route_csv_path.has_value();

  // Without an injection event the t = 0 snapshots happen here.
  if (config.failure_distance_m <= 0) {
    if (trace_out.is_open()) dump_trace(trace_out, 0.0, world);
    if (options.graph_csv_path) {
      std::ofstream graph_out(*options.graph_csv_path, std::ios::binary);
      if (!graph_out) throw ScenarioError("cannot write graph dump");
      write_edge_list_csv(connectivity_graph(world, rsus, config.v2v_range_m,
                                             config.d2d_range_m),
                          graph_out);
    }
  }

  SimResult result;
  result.deliveries.reserve(static_cast<std::size_t>(std::max<std::int64_t>(
      alerts, 0)));

  while (!queue.empty()) {
    const Event event = queue.pop();
    switch (event.kind) {
      case EventKind::inject_failure: {
        const double rsu_ref =
            *std::max_element(config.rsu_positions_m.begin(),
                              config.rsu_positions_m.end());
        const double gap = config.gap_m > 0 ? config.gap_m
                                            : config.v2v_range_m + 50.0;
        inject_dead_end(world, config.failure_distance_m, rsu_ref,
                        config.v2v_range_m, gap, idm);
        if (options.graph_csv_path) {
          std::ofstream graph_out(*options.graph_csv_path, std::ios::binary);
          if (!graph_out) throw ScenarioError("cannot write graph dump");
          write_edge_list_csv(connectivity_graph(world, rsus,
                                                 config.v2v_range_m,
                                                 config.d2d_range_m),
                              graph_out);
        }
        if (trace_out.is_open()) dump_trace(trace_out, 0.0, world);
        break;
      }
      case EventKind::mobility_tick: {
        step_mobility(world, idm, kMobilityDtS, config.road_length_m,
                      config.speed_min_kmh, config.speed_max_kmh,
                      wrap_speeds);
        if (trace_out.is_open()) dump_trace(trace_out, event.time_s, world);
        break;
      }
      case EventKind::emit_alert: {
        queue.push(Event{event.time_s, seq++, EventKind::relay_episode,
                         event.msg_id});
        break;
      }
      case EventKind::relay_episode: {
        const int source = config.source_vehicle_id >= 0
                               ? config.source_vehicle_id
                               : pick_source(world, rsus);
        double source_pos = -1.0;
        for (const VehicleState& v : world) {
          if (v.id == source) source_pos = v.position_m;
        }
        if (source_pos < 0) throw ScenarioError("source vehicle not found");
        const Rsu& target = pick_target(rsus, source_pos);

        AlertMessage msg;
        msg.msg_id = event.msg_id;
        msg.origin_id = source;
        msg.target_rsu_id = target.id;
        msg.target_pos_m = target.position_m;
        msg.created_s = event.time_s;

        const NeighborTables tables =
            build_neighbor_tables(world, config.v2v_range_m, event.time_s);
        RouteLog* log = keep_routes ? &route_log : nullptr;
        RouteResult route = forward_greedy(
            world, tables, source, target.position_m, target.id,
            config.v2v_range_m, timing, log, msg.msg_id, 0.0);
        for (int id : route.path) {
          if (id != target.id) msg.hop_trace.push_back(id);
        }

        DeliveryRecord record;
        record.msg_id = msg.msg_id;
        if (route.outcome == RouteOutcome::delivered) {
          msg.state = MessageState::delivered;
          msg.t_arrival_s = msg.created_s + route.elapsed_ms / 1000.0;
          record.outcome = DeliveryOutcome::delivered;
          record.v2v_hops = route.hops;
          record.e2e_delay_ms = route.elapsed_ms;
        } else {
          msg.state = MessageState::dead_end;
          msg.t_failure_s = msg.created_s + route.elapsed_ms / 1000.0;
          const int stuck = *route.stuck_at;
          RecoveryResult recovery;
          if (config.d2d_mode == D2dMode::disabled) {
            recovery = v2v_ra_recover(world, tables, msg, stuck, timing, rsus,
                                      config.v2v_range_m, log,
                                      route.elapsed_ms);
          } else {
            D2dPlan plan = make_d2d_plan(config);
            OhtBreakdown oht;
            recovery = hybrid_recover(msg, stuck, world, tables, plan, timing,
                                      target.position_m, config.v2v_range_m,
                                      oht, log, route.elapsed_ms);
            record.oht = oht;
            record.d2d_hops = plan.bridge_to ? 1 : 0;
          }
          record.recovery_method = to_recorded(recovery.method);
          record.recovery_delay_ms = recovery.recovery_delay_ms;
          record.recovery_overhead_ms = recovery.overhead_ms;
          record.v2v_hops =
              route.hops + recovery.backward_hops + recovery.forward_hops_total;
          record.e2e_delay_ms = route.elapsed_ms + recovery.recovery_delay_ms;
          if (msg.state == MessageState::delivered) {
            msg.t_arrival_s = msg.created_s + record.e2e_delay_ms / 1000.0;
            record.outcome = DeliveryOutcome::delivered;
          } else {
            record.outcome = DeliveryOutcome::failed;
          }
        }
        record.total_hops = record.v2v_hops + record.d2d_hops;
        result.deliveries.push_back(record);
        break;
      }
      case EventKind::end_of_run:
        break;
    }
  }

  if (options.route_csv_path) {
    std::ofstream route_out(*options.route_csv_path, std::ios::binary);
    if (!route_out) throw ScenarioError("cannot write route dump");
    route_out << "msg_id,event,time_ms,vehicle_id,detail\n";
    for (const RouteEvent& e : route_log) {
      route_out << e.msg_id << ',' << e.event << ','
                << format_double(e.time_ms) << ',' << e.vehicle_id << ','
                << e.detail << '\n';
    }
  }
  result.config_echo = config;
  result.trace_path = options.trace_csv_path;
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    wall_start)
          .count();
  return result;
}

}  // namespace relaysim
