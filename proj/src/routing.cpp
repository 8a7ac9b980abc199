#include "relaysim/routing.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace relaysim {

namespace {

using WorldIndex = std::unordered_map<int, const VehicleState*>;

WorldIndex index_world(const std::vector<VehicleState>& world) {
  WorldIndex idx;
  idx.reserve(world.size());
  for (const VehicleState& v : world) idx.emplace(v.id, &v);
  return idx;
}

int table_size(const NeighborTables& tables, int owner_id) {
  const NeighborTable* t = tables.by_owner(owner_id);
  return t ? static_cast<int>(t->entries.size()) : 0;
}

void log_event(RouteLog* log, std::int64_t msg_id, const char* event,
               double time_ms, int vehicle_id, std::string detail) {
  if (!log) return;
  log->push_back(RouteEvent{msg_id, event, time_ms, vehicle_id,
                            std::move(detail)});
}

}  // namespace

std::optional<int> greedy_next_hop(const VehicleState& current,
                                   double target_pos,
                                   const NeighborTable& table,
                                   const std::vector<int>& excluded) {
  const double own_dist = std::abs(current.position_m - target_pos);
  std::optional<int> best;
  double best_dist = own_dist;
  for (const NeighborEntry& e : table.entries) {
    if (std::find(excluded.begin(), excluded.end(), e.vehicle_id) !=
        excluded.end()) {
      continue;
    }
    const double dist = std::abs(e.position_m - target_pos);
    if (dist >= own_dist) continue;  // must make strict progress
    if (!best || dist < best_dist ||
        (dist == best_dist && e.vehicle_id < *best)) {
      best = e.vehicle_id;
      best_dist = dist;
    }
  }
  return best;
}

bool is_dead_end(const VehicleState& current, double target_pos,
                 const NeighborTable& table, double v2v_range_m) {
  if (in_range(current.position_m, target_pos, v2v_range_m)) return false;
  return !greedy_next_hop(current, target_pos, table).has_value();
}

RouteResult forward_greedy(const std::vector<VehicleState>& world,
                           const NeighborTables& tables, int source_id,
                           double target_pos, int target_rsu_id,
                           double v2v_range_m, const TimingModel& timing,
                           RouteLog* log, std::int64_t msg_id,
                           double start_ms) {
  const WorldIndex idx = index_world(world);
  RouteResult result;
  result.path.push_back(source_id);

  int current = source_id;
  while (true) {
    const auto it = idx.find(current);
    if (it == idx.end()) break;  // unknown vehicle: stuck immediately
    const VehicleState& state = *it->second;
    const int neighbors = table_size(tables, current);

    if (in_range(state.position_m, target_pos, v2v_range_m)) {
      result.elapsed_ms += per_hop_delay(timing.per_hop_v2v_ms, neighbors,
                                         timing.interference_coeff);
      result.path.push_back(target_rsu_id);
      result.hops = static_cast<int>(result.path.size()) - 1;
      result.outcome = RouteOutcome::delivered;
      log_event(log, msg_id, "deliver", start_ms + result.elapsed_ms, current,
                "rsu " + std::to_string(target_rsu_id));
      return result;
    }

    const NeighborTable* table = tables.by_owner(current);
    const std::optional<int> next =
        table ? greedy_next_hop(state, target_pos, *table) : std::nullopt;
    if (!next) break;

    result.elapsed_ms += per_hop_delay(timing.per_hop_v2v_ms, neighbors,
                                       timing.interference_coeff);
    log_event(log, msg_id, "hop", start_ms + result.elapsed_ms, current,
              "to " + std::to_string(*next));
    result.path.push_back(*next);
    current = *next;
  }

  result.outcome = RouteOutcome::dead_end;
  result.stuck_at = current;
  result.hops = static_cast<int>(result.path.size()) - 1;
  log_event(log, msg_id, "dead_end", start_ms + result.elapsed_ms, current,
            "");
  return result;
}

RouteResult broadcast_relay(const std::vector<VehicleState>& world,
                            const NeighborTables& tables, int source_id,
                            double target_pos, int target_rsu_id,
                            double v2v_range_m, const TimingModel& timing) {
  const WorldIndex idx = index_world(world);
  RouteResult result;
  result.path.push_back(source_id);
  if (!idx.count(source_id)) {
    result.outcome = RouteOutcome::dead_end;
    result.stuck_at = source_id;
    return result;
  }

  std::unordered_map<int, int> parent;
  std::vector<int> level = {source_id};
  std::unordered_set<int> seen = {source_id};

  while (!level.empty()) {
    std::sort(level.begin(), level.end());
    // Delivery check: lowest-id vehicle of this level that can reach the RSU.
    for (int id : level) {
      const VehicleState& v = *idx.at(id);
      if (!in_range(v.position_m, target_pos, v2v_range_m)) continue;
      std::vector<int> path = {id};
      auto it = parent.find(id);
      while (it != parent.end()) {
        path.push_back(it->second);
        it = parent.find(it->second);
      }
      std::reverse(path.begin(), path.end());
      path.push_back(target_rsu_id);
      result.path = path;
      result.hops = static_cast<int>(path.size()) - 1;
      result.outcome = RouteOutcome::delivered;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        result.elapsed_ms +=
            per_hop_delay(timing.per_hop_v2v_ms, table_size(tables, path[i]),
                          timing.interference_coeff);
      }
      return result;
    }
    // Everyone on the frontier rebroadcasts once.
    std::vector<int> next_level;
    for (int id : level) {
      const NeighborTable* table = tables.by_owner(id);
      if (!table) continue;
      for (const NeighborEntry& e : table->entries) {
        if (seen.insert(e.vehicle_id).second) {
          parent[e.vehicle_id] = id;
          next_level.push_back(e.vehicle_id);
        }
      }
    }
    level = std::move(next_level);
  }

  // Flood exhausted: report the closest approach as the blocking vehicle.
  result.outcome = RouteOutcome::dead_end;
  int stuck = source_id;
  double stuck_dist = std::abs(idx.at(source_id)->position_m - target_pos);
  for (int id : seen) {
    const double dist = std::abs(idx.at(id)->position_m - target_pos);
    if (dist < stuck_dist || (dist == stuck_dist && id < stuck)) {
      stuck = id;
      stuck_dist = dist;
    }
  }
  result.stuck_at = stuck;
  result.hops = 0;
  result.path = {source_id};
  return result;
}

RecoveryResult v2v_ra_recover(const std::vector<VehicleState>& world,
                              const NeighborTables& tables, AlertMessage& msg,
                              int stuck_at, const TimingModel& timing,
                              const std::vector<Rsu>& rsus,
                              double v2v_range_m, RouteLog* log,
                              double start_ms) {
  const WorldIndex idx = index_world(world);
  msg.state = MessageState::recovering;

  RecoveryResult rr;
  const double rec_hop = timing.v2v_recovery_per_hop_ms;
  double forward_delay_ms = 0.0;

  // Walk-back stack: the forward trace up to the dead end. Everything ever
  // visited is excluded from redirects.
  std::vector<int> stack = msg.hop_trace;
  if (stack.empty() || stack.back() != stuck_at) stack.push_back(stuck_at);
  std::vector<int> visited = stack;

  const auto now_ms = [&]() {
    return start_ms + rr.backward_hops * rec_hop + forward_delay_ms;
  };

  enum class RedirectOutcome { no_candidate, resumed_dead_end, delivered };

  // (a) redirect to an untried neighbor of `at` that still makes progress;
  // a redirect that dead-ends again re-enters the walk from there.
  const auto try_redirect = [&](int at) {
    const VehicleState& state = *idx.at(at);
    const NeighborTable* table = tables.by_owner(at);
    const std::optional<int> cand =
        table ? greedy_next_hop(state, msg.target_pos_m, *table, visited)
              : std::nullopt;
    if (!cand) return RedirectOutcome::no_candidate;
    forward_delay_ms += per_hop_delay(timing.per_hop_v2v_ms,
                                      table_size(tables, at),
                                      timing.interference_coeff);
    ++rr.forward_hops_total;
    log_event(log, msg.msg_id, "redirect", now_ms(), at,
              "to " + std::to_string(*cand));
    visited.push_back(*cand);
    stack.push_back(*cand);
    msg.hop_trace.push_back(*cand);

    RouteResult resumed = forward_greedy(world, tables, *cand,
                                         msg.target_pos_m, msg.target_rsu_id,
                                         v2v_range_m, timing, log, msg.msg_id,
                                         now_ms());
    forward_delay_ms += resumed.elapsed_ms;
    rr.forward_hops_total += resumed.hops;
    for (std::size_t i = 1; i < resumed.path.size(); ++i) {
      const int id = resumed.path[i];
      if (id == msg.target_rsu_id) break;
      visited.push_back(id);
      stack.push_back(id);
      msg.hop_trace.push_back(id);
    }
    if (resumed.outcome != RouteOutcome::delivered) {
      return RedirectOutcome::resumed_dead_end;
    }
    rr.method = RecoveryMethod::redirect_neighbor;
    rr.resumed_from = *cand;
    rr.final = std::move(resumed);
    rr.recovery_delay_ms = rr.backward_hops * rec_hop + forward_delay_ms;
    rr.overhead_ms = rr.backward_hops * rec_hop;
    msg.state = MessageState::delivered;
    return RedirectOutcome::delivered;
  };

  // (b) another RSU greedily reachable from `at`, reversing the relay
  // direction. Reachability is probed first; only a successful route is
  // transmitted.
  const auto try_alternate_rsu = [&](int at) {
    const VehicleState& state = *idx.at(at);
    std::vector<Rsu> others;
    for (const Rsu& r : rsus) {
      if (r.id != msg.target_rsu_id) others.push_back(r);
    }
    std::sort(others.begin(), others.end(), [&](const Rsu& a, const Rsu& b) {
      const double da = std::abs(a.position_m - state.position_m);
      const double db = std::abs(b.position_m - state.position_m);
      return da != db ? da < db : a.id < b.id;
    });
    for (const Rsu& rsu : others) {
      RouteResult probe = forward_greedy(world, tables, at, rsu.position_m,
                                         rsu.id, v2v_range_m, timing);
      if (probe.outcome != RouteOutcome::delivered) continue;
      log_event(log, msg.msg_id, "reverse", now_ms(), at,
                "rsu " + std::to_string(rsu.id));
      // Replay with logging now that the attempt is committed.
      RouteResult route = forward_greedy(world, tables, at, rsu.position_m,
                                         rsu.id, v2v_range_m, timing, log,
                                         msg.msg_id, now_ms());
      forward_delay_ms += route.elapsed_ms;
      rr.forward_hops_total += route.hops;
      for (std::size_t i = 1; i < route.path.size(); ++i) {
        if (route.path[i] == rsu.id) break;
        msg.hop_trace.push_back(route.path[i]);
      }
      rr.method = RecoveryMethod::alternate_rsu;
      rr.resumed_from = at;
      rr.final = std::move(route);
      rr.recovery_delay_ms = rr.backward_hops * rec_hop + forward_delay_ms;
      rr.overhead_ms = rr.backward_hops * rec_hop;
      msg.direction = Direction::reverse;
      msg.state = MessageState::delivered;
      return true;
    }
    return false;
  };

  // A dead end right at the origin has nobody to hand back to; the origin
  // itself runs the option checks at zero backward cost.
  if (stack.size() == 1) {
    const RedirectOutcome redirected = try_redirect(stack.back());
    if (redirected == RedirectOutcome::delivered) return rr;
    if (redirected == RedirectOutcome::no_candidate &&
        try_alternate_rsu(stack.back())) {
      return rr;
    }
  }

  while (stack.size() > 1) {
    const int from = stack.back();
    stack.pop_back();
    const int pred = stack.back();
    ++rr.backward_hops;
    log_event(log, msg.msg_id, "backward", now_ms(), from,
              "to " + std::to_string(pred));
    msg.hop_trace.push_back(pred);

    const RedirectOutcome redirected = try_redirect(pred);
    if (redirected == RedirectOutcome::delivered) return rr;
    // the redirect relocated the message: recover from the new dead end
    if (redirected == RedirectOutcome::resumed_dead_end) continue;
    if (try_alternate_rsu(pred)) return rr;
    // (c) keep walking back
  }

  rr.method = RecoveryMethod::backward_recursion_exhausted;
  rr.final = std::nullopt;
  rr.recovery_delay_ms = rr.backward_hops * rec_hop + forward_delay_ms;
  rr.overhead_ms = rr.backward_hops * rec_hop;
  msg.state = MessageState::failed;
  log_event(log, msg.msg_id, "fail", now_ms(), stack.empty() ? stuck_at
                                                             : stack.back(),
            "recovery exhausted");
  return rr;
}

}  // namespace relaysim
