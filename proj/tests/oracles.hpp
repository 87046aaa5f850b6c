#pragma once

// Reference computations written independently of the library code paths
// they check: adjacency matrices and Floyd-Warshall instead of BFS over
// sorted lists, fixed-point iteration instead of single sweeps.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "khopnet/engine.hpp"

namespace oracle {

inline double priority(double b, double m, double mc, int ns, double pp, int tau,
                       double w1 = 3, double w2 = 4, double w3 = 2, double w4 = 2,
                       double w5 = 1) {
  const double ns_term = ns <= tau ? ns : -ns;
  return w1 * b + w2 / std::max(m, 0.01) + w3 * mc + w4 * ns_term + w5 * pp;
}

using Matrix = std::vector<std::vector<int>>;
inline constexpr int kInf = std::numeric_limits<int>::max() / 4;

inline Matrix adjacency_matrix(const khopnet::VisibilityGraph& g) {
  const std::size_t n = g.size();
  Matrix m(n, std::vector<int>(n, 0));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u != v && g.adjacent(static_cast<int>(u), static_cast<int>(v))) m[u][v] = 1;
    }
  }
  return m;
}

inline Matrix all_pairs(const Matrix& adj) {
  const std::size_t n = adj.size();
  Matrix d(n, std::vector<int>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (adj[i][j]) d[i][j] = 1;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
      }
    }
  }
  return d;
}

inline double backbone_asp(const Matrix& dist, const std::vector<int>& heads) {
  double sum = 0;
  int pairs = 0;
  for (std::size_t i = 0; i < heads.size(); ++i) {
    for (std::size_t j = i + 1; j < heads.size(); ++j) {
      const int d = dist[heads[i]][heads[j]];
      if (d >= kInf) continue;
      sum += d;
      ++pairs;
    }
  }
  return pairs == 0 ? 0.0 : sum / pairs;
}

/// Lowest-ID rule as a fixed point: v is a head iff no lower-id neighbor is a
/// head. Members join their lowest-id head neighbor.
inline std::vector<int> lowest_id_membership(const Matrix& adj) {
  const std::size_t n = adj.size();
  std::vector<char> head(n, 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t v = 0; v < n; ++v) {
      bool covered = false;
      for (std::size_t u = 0; u < v; ++u) covered = covered || (adj[v][u] && head[u]);
      const char want = covered ? 0 : 1;
      if (head[v] != want) {
        head[v] = want;
        changed = true;
      }
    }
  }
  std::vector<int> member(n, -1);
  for (std::size_t v = 0; v < n; ++v) {
    if (head[v]) {
      member[v] = static_cast<int>(v);
      continue;
    }
    for (std::size_t u = 0; u < n; ++u) {
      if (adj[v][u] && head[u]) {
        member[v] = static_cast<int>(u);
        break;
      }
    }
  }
  return member;
}

inline khopnet::VisibilityGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution edge(p);
  khopnet::VisibilityGraph g(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (edge(rng)) g.add_edge(static_cast<int>(u), static_cast<int>(v));
    }
  }
  return g;
}

/// Rebuilds every traffic counter from the message trace.
inline std::vector<khopnet::EnergyLedger> replay_tally(std::span<const khopnet::TraceEvent> trace,
                                                       std::size_t n) {
  std::vector<khopnet::EnergyLedger> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i].node = static_cast<int>(i);
  for (const auto& ev : trace) {
    const bool bcast = ev.broadcast;
    if (ev.action == khopnet::TraceAction::Transmit) {
      auto& l = out[ev.from];
      (bcast ? l.bcast_msgs_tx : l.ucast_msgs_tx) += 1;
      (bcast ? l.bcast_bytes_tx : l.ucast_bytes_tx) += ev.bytes;
    } else if (ev.action == khopnet::TraceAction::Receive) {
      auto& l = out[ev.to];
      (bcast ? l.bcast_msgs_rx : l.ucast_msgs_rx) += 1;
      (bcast ? l.bcast_bytes_rx : l.ucast_bytes_rx) += ev.bytes;
    }
  }
  return out;
}

}  // namespace oracle
