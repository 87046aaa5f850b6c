#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace khopnet {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

double distance(const Vec3& a, const Vec3& b);

/// Position and straight-line motion of one node. A node without a
/// destination is stationary and has speed 0.
struct NodeKinematics {
  int id = 0;
  Vec3 position;
  std::optional<Vec3> destination;
  double speed = 0.0;
  friend bool operator==(const NodeKinematics&, const NodeKinematics&) = default;
};

struct Topology {
  std::string tag;   // e.g. "coordS12N100"
  std::string kind;  // section label, e.g. "BACKBONE"
  std::vector<NodeKinematics> nodes;

  std::size_t count() const { return nodes.size(); }
  friend bool operator==(const Topology&, const Topology&) = default;
};

struct RadioConfig {
  double range = 250.0;  // meters
};

/// Undirected link graph over node ids 0..n-1. Neighbor lists are kept sorted.
class VisibilityGraph {
 public:
  VisibilityGraph() = default;
  explicit VisibilityGraph(std::size_t node_count) : adjacency_(node_count) {}

  /// Adds the undirected edge (u, v). Self-loops and duplicates are ignored.
  void add_edge(int u, int v);

  std::size_t size() const { return adjacency_.size(); }
  bool contains(int node) const {
    return node >= 0 && static_cast<std::size_t>(node) < adjacency_.size();
  }
  std::span<const int> neighbors(int node) const;
  int degree(int node) const { return static_cast<int>(neighbors(node).size()); }
  bool adjacent(int u, int v) const;
  std::size_t edge_count() const;

  friend bool operator==(const VisibilityGraph&, const VisibilityGraph&) = default;

 private:
  std::vector<std::vector<int>> adjacency_;
};

/// Parameters for a random topology: positions uniform over width x height,
/// z fixed at 0.
struct TopologySpec {
  std::size_t nodes = 100;
  double width = 1000.0;
  double height = 1000.0;
  double min_speed = 0.0;
  double max_speed = 0.0;
  bool with_motion = false;
  std::uint64_t seed = 1;
};

/// Parses the topology text format:
///   line 1  tag
///   line 2  kind label
///   line 3  node count
///   then one row per node, either `x y z` or `x y z dx dy dz speed`.
/// Blank lines and lines starting with '#' are skipped.
Topology parse_topology(std::string_view text);
std::string emit_topology(const Topology& topology);

Topology generate_topology(const TopologySpec& spec);

/// Edge (u, v) iff the 3-D distance is <= range.
VisibilityGraph build_visibility_graph(const Topology& topology, const RadioConfig& radio);

/// Moves every node with a destination speed*dt meters toward it, clamping at
/// the destination. Arrived nodes drop their destination and stop.
Topology advance_mobility(const Topology& topology, double dt);

/// Nodes within `k` hops of `origin` (origin included), ascending.
std::vector<int> k_hop_set(const VisibilityGraph& graph, int origin, int k);

/// Breadth-first hop counts from `origin`; -1 marks unreachable nodes.
std::vector<int> hop_distances(const VisibilityGraph& graph, int origin);

bool is_connected(const VisibilityGraph& graph);

/// File name used for topology `index` with `nodes` nodes: coordS<index>N<nodes>.
std::string topology_file_name(int index, std::size_t nodes);

}  // namespace khopnet
