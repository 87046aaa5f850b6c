#include "khopnet/metrics.hpp"

#include <map>
#include <sstream>

#include "khopnet/error.hpp"
#include "khopnet/format.hpp"

namespace khopnet {

std::vector<int> ClusteringSnapshot::heads() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < roles.size(); ++i) {
    if (roles[i] == Role::ClusterHead) out.push_back(static_cast<int>(i));
  }
  return out;
}

RoleCounts count_roles(const ClusteringSnapshot& snapshot) {
  RoleCounts counts;
  for (Role role : snapshot.roles) {
    switch (role) {
      case Role::ClusterHead: ++counts.heads; break;
      case Role::Gateway: ++counts.gateways; break;
      case Role::Ordinary: ++counts.ordinary; break;
      case Role::Unclustered: ++counts.unclustered; break;
    }
  }
  return counts;
}

double avg_connected_clusterheads(const ClusteringSnapshot& snapshot) {
  if (snapshot.heads().empty()) throw NoClusterheads();
  std::map<int, std::size_t> degree;
  for (const auto& [a, b] : snapshot.cluster_adjacency) {
    ++degree[a];
    ++degree[b];
  }
  std::size_t connected = 0;
  std::size_t total = 0;
  for (int head : snapshot.heads()) {
    auto it = degree.find(head);
    if (it == degree.end()) continue;
    ++connected;
    total += it->second;
  }
  if (total == 0) return 0.0;
  return static_cast<double>(connected) / static_cast<double>(total);
}

double backbone_avg_shortest_path(const ClusteringSnapshot& snapshot) {
  const auto heads = snapshot.heads();
  if (heads.size() < 2) return 0.0;
  std::uint64_t sum = 0;
  std::uint64_t pairs = 0;
  for (std::size_t i = 0; i < heads.size(); ++i) {
    const auto dist = hop_distances(snapshot.visibility, heads[i]);
    for (std::size_t j = i + 1; j < heads.size(); ++j) {
      const int d = dist[heads[j]];
      if (d < 0) continue;
      sum += static_cast<std::uint64_t>(d);
      ++pairs;
    }
  }
  if (pairs == 0) return 0.0;
  return static_cast<double>(sum) / static_cast<double>(pairs);
}

TrafficTotals traffic_totals(std::span<const EnergyLedger> ledgers) {
  TrafficTotals totals;
  for (const auto& l : ledgers) {
    totals.packets += l.ucast_msgs_tx + l.bcast_msgs_tx;
    totals.bytes += l.ucast_bytes_tx + l.bcast_bytes_tx;
  }
  return totals;
}

MetricsReport make_report(int k, const ClusteringSnapshot& snapshot,
                          std::span<const EnergyLedger> ledgers) {
  MetricsReport report;
  report.k = k;
  report.nodes = snapshot.size();
  const auto counts = count_roles(snapshot);
  report.n_clusterheads = counts.heads;
  report.n_gateways = counts.gateways;
  report.n_ordinary = counts.ordinary + counts.unclustered;
  report.avg_connected_clusterheads =
      counts.heads == 0 ? 0.0 : avg_connected_clusterheads(snapshot);
  report.backbone_avg_shortest_path = backbone_avg_shortest_path(snapshot);
  const auto totals = traffic_totals(ledgers);
  report.packets_total = totals.packets;
  report.bytes_total = totals.bytes;
  return report;
}

std::string format_report_line(const MetricsReport& r) {
  std::ostringstream out;
  out << r.k << ' ' << r.nodes << ' ' << r.n_clusterheads << ' ' << r.n_gateways << ' '
      << r.n_ordinary << ' ' << format_dump_number(r.avg_connected_clusterheads) << ' '
      << format_dump_number(r.backbone_avg_shortest_path) << ' ' << r.packets_total << ' '
      << r.bytes_total;
  return out.str();
}

MetricsReport parse_report_line(const std::string& line) {
  std::istringstream in(line);
  std::string fields[9];
  for (auto& f : fields) {
    if (!(in >> f)) throw ParseError(1, "metrics line needs 9 fields");
  }
  std::string extra;
  if (in >> extra) throw ParseError(1, "metrics line has trailing fields");
  auto as_size = [](const std::string& s) {
    auto v = parse_int<std::uint64_t>(s);
    if (!v) throw ParseError(1, "bad integer '" + s + "'");
    return *v;
  };
  auto as_double = [](const std::string& s) {
    auto v = parse_double(s);
    if (!v) throw ParseError(1, "bad number '" + s + "'");
    return *v;
  };
  MetricsReport r;
  auto k = parse_int<int>(fields[0]);
  if (!k) throw ParseError(1, "bad K '" + fields[0] + "'");
  r.k = *k;
  r.nodes = as_size(fields[1]);
  r.n_clusterheads = as_size(fields[2]);
  r.n_gateways = as_size(fields[3]);
  r.n_ordinary = as_size(fields[4]);
  r.avg_connected_clusterheads = as_double(fields[5]);
  r.backbone_avg_shortest_path = as_double(fields[6]);
  r.packets_total = as_size(fields[7]);
  r.bytes_total = as_size(fields[8]);
  return r;
}

}  // namespace khopnet
