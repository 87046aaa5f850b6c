#pragma once

#include <vector>

#include "khopnet/metrics.hpp"
#include "khopnet/protocol.hpp"
#include "khopnet/topology.hpp"

namespace khopnet {

/// Centralized one-hop clustering of a frozen graph. Members adjacent to a
/// head other than their own are marked Gateway.
struct BaselineResult {
  std::vector<Role> roles;
  std::vector<int> membership;  // head id per node; heads map to themselves
};

BaselineResult lowest_id_clustering(const VisibilityGraph& graph);
BaselineResult highest_degree_clustering(const VisibilityGraph& graph);

/// Snapshot for metric evaluation; gateways bridge every pair of heads they touch.
ClusteringSnapshot baseline_snapshot(const BaselineResult& result, const VisibilityGraph& graph);

}  // namespace khopnet
