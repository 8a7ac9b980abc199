#include "relaysim/radio.hpp"

#include <algorithm>
#include <cmath>

namespace relaysim {

NeighborTables::NeighborTables(std::vector<NeighborTable> tables)
    : tables_(std::move(tables)) {
  std::sort(tables_.begin(), tables_.end(),
            [](const NeighborTable& a, const NeighborTable& b) {
              return a.owner_id < b.owner_id;
            });
}

const NeighborTable* NeighborTables::by_owner(int vehicle_id) const {
  const auto it = std::lower_bound(
      tables_.begin(), tables_.end(), vehicle_id,
      [](const NeighborTable& t, int id) { return t.owner_id < id; });
  if (it == tables_.end() || it->owner_id != vehicle_id) return nullptr;
  return &*it;
}

bool in_range(double pos_a, double pos_b, double range_m) {
  return std::abs(pos_a - pos_b) <= range_m;
}

NeighborTables build_neighbor_tables(const std::vector<VehicleState>& world,
                                     double range_m, double now_s) {
  const int n = static_cast<int>(world.size());
  std::vector<VehicleState> sorted = world;
  std::sort(sorted.begin(), sorted.end(),
            [](const VehicleState& a, const VehicleState& b) {
              return a.position_m < b.position_m;
            });

  std::vector<NeighborTable> tables(n);
  // Sliding window over the sorted positions.
  int lo = 0;
  for (int i = 0; i < n; ++i) {
    while (sorted[i].position_m - sorted[lo].position_m > range_m) ++lo;
    NeighborTable& table = tables[i];
    table.owner_id = sorted[i].id;
    for (int j = lo; j < n; ++j) {
      if (j == i) continue;
      if (sorted[j].position_m - sorted[i].position_m > range_m) break;
      table.entries.push_back(
          NeighborEntry{sorted[j].id, sorted[j].position_m, now_s});
    }
  }
  return NeighborTables(std::move(tables));
}

double per_hop_delay(double base_ms, int neighbor_count,
                     double interference_coeff) {
  const int contenders = std::max(0, neighbor_count - 1);
  return base_ms * (1.0 + interference_coeff * contenders);
}

bool ConnectivityGraph::has_edge(int a, int b, EdgeKind kind) const {
  if (a > b) std::swap(a, b);
  for (const GraphEdge& e : edges) {
    if (e.a == a && e.b == b && e.kind == kind) return true;
  }
  return false;
}

std::vector<int> ConnectivityGraph::neighbors(int node, EdgeKind kind) const {
  std::vector<int> out;
  for (const GraphEdge& e : edges) {
    if (e.kind != kind) continue;
    if (e.a == node) out.push_back(e.b);
    if (e.b == node) out.push_back(e.a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ConnectivityGraph connectivity_graph(const std::vector<VehicleState>& world,
                                     const std::vector<Rsu>& rsus,
                                     double v2v_range_m, double d2d_range_m) {
  // RSUs join the v2v edge set (vehicles deliver into them over .11p) but
  // are not D2D endpoints.
  struct Node {
    int id;
    double pos;
    bool d2d;
  };
  std::vector<Node> nodes;
  nodes.reserve(world.size() + rsus.size());
  for (const VehicleState& v : world) {
    nodes.push_back({v.id, v.position_m, v.d2d_enabled});
  }
  for (const Rsu& r : rsus) {
    nodes.push_back({r.id, r.position_m, false});
  }
  std::sort(nodes.begin(), nodes.end(),
            [](const Node& a, const Node& b) { return a.id < b.id; });

  ConnectivityGraph graph;
  for (const Node& n : nodes) graph.nodes.push_back(n.id);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      const double dist = std::abs(nodes[i].pos - nodes[j].pos);
      if (dist <= v2v_range_m) {
        graph.edges.push_back({nodes[i].id, nodes[j].id, EdgeKind::v2v});
      }
      if (nodes[i].d2d && nodes[j].d2d && dist <= d2d_range_m) {
        graph.edges.push_back({nodes[i].id, nodes[j].id, EdgeKind::d2d});
      }
    }
  }
  return graph;
}

void write_edge_list_csv(const ConnectivityGraph& graph, std::ostream& out) {
  out << "node_a,node_b,kind\n";
  for (const GraphEdge& e : graph.edges) {
    out << e.a << ',' << e.b << ','
        << (e.kind == EdgeKind::v2v ? "v2v" : "d2d") << '\n';
  }
}

}  // namespace relaysim
