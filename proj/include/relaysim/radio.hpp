#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "relaysim/mobility.hpp"

namespace relaysim {

// RSU node ids live far above any vehicle id.
constexpr int kRsuIdBase = 1'000'000;

struct Rsu {
  int id = kRsuIdBase;
  double position_m = 0.0;
};

inline Rsu make_rsu(int index, double position_m) {
  return Rsu{kRsuIdBase + index, position_m};
}

struct NeighborEntry {
  int vehicle_id = 0;
  double position_m = 0.0;
  double last_seen_s = 0.0;
};

struct NeighborTable {
  int owner_id = 0;
  std::vector<NeighborEntry> entries;  // sorted by position
};

/// Per-vehicle neighbor tables for one world snapshot.
class NeighborTables {
 public:
  explicit NeighborTables(std::vector<NeighborTable> tables);
  const NeighborTable* by_owner(int vehicle_id) const;
  const std::vector<NeighborTable>& all() const { return tables_; }

 private:
  std::vector<NeighborTable> tables_;  // sorted by owner_id
};

/// Inclusive unit-disk membership: |pos_a - pos_b| <= range_m.
bool in_range(double pos_a, double pos_b, double range_m);

/// Symmetric tables over the snapshot; every entry carries last_seen = now_s.
NeighborTables build_neighbor_tables(const std::vector<VehicleState>& world,
                                     double range_m, double now_s);

/// base * (1 + coeff * max(0, neighbor_count - 1)): contention inflates the
/// hop cost, a lone neighbor does not.
double per_hop_delay(double base_ms, int neighbor_count,
                     double interference_coeff);

enum class EdgeKind { v2v, d2d };

struct GraphEdge {
  int a = 0;
  int b = 0;  // a < b
  EdgeKind kind = EdgeKind::v2v;
};

/// Ground-truth connectivity snapshot: vehicles plus RSU nodes, one edge per
/// in-range pair and kind. Primarily the oracle surface for routing tests.
struct ConnectivityGraph {
  std::vector<int> nodes;
  std::vector<GraphEdge> edges;

  bool has_edge(int a, int b, EdgeKind kind) const;
  std::vector<int> neighbors(int node, EdgeKind kind) const;
};

ConnectivityGraph connectivity_graph(const std::vector<VehicleState>& world,
                                     const std::vector<Rsu>& rsus,
                                     double v2v_range_m, double d2d_range_m);

/// Debug export, one `node_a,node_b,kind` row per edge.
void write_edge_list_csv(const ConnectivityGraph& graph, std::ostream& out);

}  // namespace relaysim
