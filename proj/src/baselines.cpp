#include "khopnet/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace khopnet {

namespace {

constexpr int kNone = -1;

void mark_gateways(BaselineResult& result, const VisibilityGraph& graph) {
  for (std::size_t v = 0; v < graph.size(); ++v) {
    if (result.roles[v] == Role::ClusterHead) continue;
    bool foreign = false;
    for (int u : graph.neighbors(static_cast<int>(v))) {
      if (result.roles[u] == Role::ClusterHead && u != result.membership[v]) foreign = true;
    }
    result.roles[v] = foreign ? Role::Gateway : Role::Ordinary;
  }
}

}  // namespace

BaselineResult lowest_id_clustering(const VisibilityGraph& graph) {
  const std::size_t n = graph.size();
  BaselineResult result{std::vector<Role>(n, Role::Unclustered), std::vector<int>(n, kNone)};
  for (std::size_t v = 0; v < n; ++v) {
    int head = kNone;
    for (int u : graph.neighbors(static_cast<int>(v))) {
      if (u >= static_cast<int>(v)) break;
      if (result.roles[u] == Role::ClusterHead) {
        head = u;
        break;
      }
    }
    if (head == kNone) {
      result.roles[v] = Role::ClusterHead;
      result.membership[v] = static_cast<int>(v);
    } else {
      result.roles[v] = Role::Ordinary;
      result.membership[v] = head;
    }
  }
  mark_gateways(result, graph);
  return result;
}

BaselineResult highest_degree_clustering(const VisibilityGraph& graph) {
  const std::size_t n = graph.size();
  BaselineResult result{std::vector<Role>(n, Role::Unclustered), std::vector<int>(n, kNone)};
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return graph.degree(a) > graph.degree(b); });
  for (int v : order) {
    if (result.membership[v] != kNone) continue;
    result.roles[v] = Role::ClusterHead;
    result.membership[v] = v;
    for (int u : graph.neighbors(v)) {
      if (result.membership[u] == kNone) {
        result.membership[u] = v;
        result.roles[u] = Role::Ordinary;
      }
    }
  }
  mark_gateways(result, graph);
  return result;
}

ClusteringSnapshot baseline_snapshot(const BaselineResult& result, const VisibilityGraph& graph) {
  ClusteringSnapshot snap;
  snap.roles = result.roles;
  snap.visibility = graph;
  snap.membership.resize(result.membership.size());
  snap.hop_to_ch.resize(result.membership.size());
  for (std::size_t v = 0; v < result.membership.size(); ++v) {
    if (result.membership[v] == kNone) continue;
    snap.membership[v] = result.membership[v];
    snap.hop_to_ch[v] = result.membership[v] == static_cast<int>(v) ? 0 : 1;
  }
  for (std::size_t v = 0; v < graph.size(); ++v) {
    if (result.roles[v] != Role::Gateway) continue;
    std::set<int> heads{result.membership[v]};
    for (int u : graph.neighbors(static_cast<int>(v))) {
      if (result.roles[u] == Role::ClusterHead) heads.insert(u);
    }
    for (auto a = heads.begin(); a != heads.end(); ++a) {
      for (auto b = std::next(a); b != heads.end(); ++b) snap.cluster_adjacency.emplace(*a, *b);
    }
  }
  return snap;
}

}  // namespace khopnet
