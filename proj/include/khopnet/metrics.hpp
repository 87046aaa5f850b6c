#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "khopnet/ledger.hpp"
#include "khopnet/protocol.hpp"
#include "khopnet/topology.hpp"

namespace khopnet {

/// Frozen clustering state. Pairs in cluster_adjacency are ordered (low, high).
struct ClusteringSnapshot {
  std::vector<Role> roles;
  std::vector<std::optional<int>> membership;
  std::vector<std::optional<int>> hop_to_ch;
  VisibilityGraph visibility;
  std::set<std::pair<int, int>> cluster_adjacency;

  std::size_t size() const { return roles.size(); }
  std::vector<int> heads() const;
};

struct RoleCounts {
  std::size_t heads = 0;
  std::size_t gateways = 0;
  std::size_t ordinary = 0;
  std::size_t unclustered = 0;
  friend bool operator==(const RoleCounts&, const RoleCounts&) = default;
};

struct TrafficTotals {
  std::uint64_t packets = 0;
  std::uint64_t bytes = 0;
  friend bool operator==(const TrafficTotals&, const TrafficTotals&) = default;
};

/// One experiment's figures. n_ordinary also counts nodes left unclustered so
/// the three role counts always sum to the node count.
struct MetricsReport {
  int k = 0;
  std::size_t nodes = 0;
  std::size_t n_clusterheads = 0;
  std::size_t n_gateways = 0;
  std::size_t n_ordinary = 0;
  double avg_connected_clusterheads = 0.0;
  double backbone_avg_shortest_path = 0.0;
  std::uint64_t packets_total = 0;
  std::uint64_t bytes_total = 0;
  // Sweep bookkeeping for plot recipes; not part of the serialized line.
  int index = 0;
  bool degree_version = false;
};

RoleCounts count_roles(const ClusteringSnapshot& snapshot);

/// CHs with at least one bridged neighbor cluster, over the summed bridge
/// degree of all CHs. 0 when nothing is bridged.
double avg_connected_clusterheads(const ClusteringSnapshot& snapshot);

/// Mean hop distance over CH pairs that can reach each other. 0 with fewer
/// than two CHs or no reachable pair.
double backbone_avg_shortest_path(const ClusteringSnapshot& snapshot);

TrafficTotals traffic_totals(std::span<const EnergyLedger> ledgers);

MetricsReport make_report(int k, const ClusteringSnapshot& snapshot,
                          std::span<const EnergyLedger> ledgers);

/// `K N n_ch n_gw n_ord avg_conn backbone_asp packets bytes`
std::string format_report_line(const MetricsReport& report);
MetricsReport parse_report_line(const std::string& line);

}  // namespace khopnet
