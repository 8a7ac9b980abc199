#pragma once

// Test-side oracles, written independently of the library code paths they
// check: brute-force pairwise graphs, BFS over edge lists, a direct IDM
// formula transcription, and chi-square statistics.

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "relaysim/mobility.hpp"
#include "relaysim/radio.hpp"

namespace testutil {

struct OracleNode {
  int id;
  double pos;
  bool d2d;
};

// O(n^2) pairwise-distance edge set, the ground truth for radio tests.
inline std::set<std::pair<int, int>> pairwise_edges(
    const std::vector<OracleNode>& nodes, double range, bool need_d2d) {
  std::set<std::pair<int, int>> edges;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (need_d2d && !(nodes[i].d2d && nodes[j].d2d)) continue;
      if (std::abs(nodes[i].pos - nodes[j].pos) <= range) {
        const int a = std::min(nodes[i].id, nodes[j].id);
        const int b = std::max(nodes[i].id, nodes[j].id);
        edges.insert({a, b});
      }
    }
  }
  return edges;
}

// BFS hop count over an explicit edge set; nullopt when unreachable.
inline std::optional<int> bfs_hops(const std::set<std::pair<int, int>>& edges,
                                   int from, int to) {
  std::map<int, std::vector<int>> adj;
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::map<int, int> dist = {{from, 0}};
  std::deque<int> queue = {from};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    if (u == to) return dist[u];
    for (int v : adj[u]) {
      if (!dist.count(v)) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return std::nullopt;
}

inline bool bfs_reachable(const std::set<std::pair<int, int>>& edges, int from,
                          int to) {
  return bfs_hops(edges, from, to).has_value();
}

// Direct transcription of the IDM acceleration law.
inline double idm_reference(double v, double v0, double dv, double s,
                            double a_max, double b, double s0, double T,
                            double delta) {
  const double s_star = s0 + v * T + v * dv / (2.0 * std::sqrt(a_max * b));
  return a_max * (1.0 - std::pow(v / v0, delta) - (s_star / s) * (s_star / s));
}

// World of vehicles at the given positions; ids follow position order.
inline std::vector<relaysim::VehicleState> world_at(
    const std::vector<double>& positions, double speed_ms = 10.0) {
  std::vector<double> sorted = positions;
  std::sort(sorted.begin(), sorted.end());
  std::vector<relaysim::VehicleState> world;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    relaysim::VehicleState v;
    v.id = static_cast<int>(i);
    v.position_m = sorted[i];
    v.velocity_ms = speed_ms;
    v.desired_speed_ms = speed_ms;
    world.push_back(v);
  }
  return world;
}

// Ideal relay chain: vehicles every `spacing` meters from 0, covering the
// road up to (but excluding) the RSU at `distance`.
inline std::vector<relaysim::VehicleState> ideal_chain(double distance,
                                                       double spacing) {
  std::vector<double> positions;
  for (double pos = 0.0; pos < distance; pos += spacing) {
    positions.push_back(pos);
  }
  return world_at(positions);
}

// Random 1-D instance for property runs; mt19937 keeps the generator
// independent of the library's stream.
inline std::vector<relaysim::VehicleState> random_world(std::mt19937& gen,
                                                        int count,
                                                        double road_length) {
  std::uniform_real_distribution<double> uni(0.0, road_length);
  std::vector<double> positions(count);
  for (double& p : positions) p = uni(gen);
  return world_at(positions);
}

inline std::vector<OracleNode> as_nodes(
    const std::vector<relaysim::VehicleState>& world,
    const std::vector<relaysim::Rsu>& rsus = {}) {
  std::vector<OracleNode> nodes;
  for (const auto& v : world) nodes.push_back({v.id, v.position_m, v.d2d_enabled});
  for (const auto& r : rsus) nodes.push_back({r.id, r.position_m, false});
  return nodes;
}

// Chi-square statistic for uniformity over equal-width bins on [0, 1).
inline double chi_square_uniform(const std::vector<double>& samples,
                                 int bins) {
  std::vector<int> counts(bins, 0);
  for (double s : samples) {
    int b = static_cast<int>(s * bins);
    if (b >= bins) b = bins - 1;
    counts[b]++;
  }
  const double expected = double(samples.size()) / bins;
  double stat = 0.0;
  for (int c : counts) stat += (c - expected) * (c - expected) / expected;
  return stat;
}

// Chi-square independence statistic over a k x k contingency grid.
inline double chi_square_pairs(const std::vector<double>& a,
                               const std::vector<double>& b, int k) {
  std::vector<std::vector<int>> grid(k, std::vector<int>(k, 0));
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int ia = std::min(k - 1, static_cast<int>(a[i] * k));
    int ib = std::min(k - 1, static_cast<int>(b[i] * k));
    grid[ia][ib]++;
  }
  const double expected = double(n) / (k * k);
  double stat = 0.0;
  for (const auto& row : grid) {
    for (int c : row) stat += (c - expected) * (c - expected) / expected;
  }
  return stat;
}

}  // namespace testutil
