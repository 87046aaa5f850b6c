#include "khopnet/topology.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <random>
#include <sstream>

#include "khopnet/error.hpp"
#include "khopnet/format.hpp"
#include "rng.hpp"

namespace khopnet {

double distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void VisibilityGraph::add_edge(int u, int v) {
  if (!contains(u)) throw UnknownNode(u);
  if (!contains(v)) throw UnknownNode(v);
  if (u == v) return;
  auto insert_sorted = [](std::vector<int>& list, int value) {
    auto it = std::lower_bound(list.begin(), list.end(), value);
    if (it == list.end() || *it != value) list.insert(it, value);
  };
  insert_sorted(adjacency_[u], v);
  insert_sorted(adjacency_[v], u);
}

std::span<const int> VisibilityGraph::neighbors(int node) const {
  if (!contains(node)) throw UnknownNode(node);
  return adjacency_[node];
}

bool VisibilityGraph::adjacent(int u, int v) const {
  auto list = neighbors(u);
  return std::binary_search(list.begin(), list.end(), v);
}

std::size_t VisibilityGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& list : adjacency_) twice += list.size();
  return twice / 2;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Topology parse_topology(std::string_view text) {
  if (trim(text).empty()) throw ParseError(1, "empty topology text");

  struct Line {
    std::size_t number;
    std::string_view content;
  };
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    auto content = trim(text.substr(pos, end - pos));
    if (!content.empty() && content.front() != '#') lines.push_back({number, content});
    pos = end + 1;
  }

  if (lines.size() < 3) {
    throw ParseError(lines.empty() ? 1 : lines.back().number,
                     "expected tag, kind and count lines");
  }
  Topology topo;
  topo.tag = std::string(lines[0].content);
  topo.kind = std::string(lines[1].content);
  if (split_ws(topo.tag).size() != 1) throw ParseError(lines[0].number, "malformed tag");
  auto count = parse_int<std::size_t>(lines[2].content);
  if (!count) throw ParseError(lines[2].number, "malformed node count");

  const std::size_t rows = lines.size() - 3;
  if (rows != *count) throw CountMismatch(*count, rows);

  topo.nodes.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const Line& line = lines[3 + i];
    auto fields = split_ws(line.content);
    if (fields.size() != 3 && fields.size() != 7) {
      throw ParseError(line.number, "expected 3 or 7 fields, got " + std::to_string(fields.size()));
    }
    double v[7] = {};
    for (std::size_t f = 0; f < fields.size(); ++f) {
      auto parsed = parse_double(fields[f]);
      if (!parsed || !std::isfinite(*parsed)) {
        throw ParseError(line.number, "non-numeric field '" + std::string(fields[f]) + "'");
      }
      v[f] = *parsed;
    }
    NodeKinematics node;
    node.id = static_cast<int>(i);
    node.position = {v[0], v[1], v[2]};
    if (fields.size() == 7) {
      if (v[6] < 0) throw ParseError(line.number, "negative speed");
      node.destination = Vec3{v[3], v[4], v[5]};
      node.speed = v[6];
    }
    topo.nodes.push_back(node);
  }
  return topo;
}

std::string emit_topology(const Topology& topology) {
  std::string out;
  out += topology.tag + "\n";
  out += topology.kind + "\n";
  out += std::to_string(topology.count()) + "\n";
  for (const auto& node : topology.nodes) {
    out += format_shortest(node.position.x) + " " + format_shortest(node.position.y) + " " +
           format_shortest(node.position.z);
    if (node.destination) {
      out += " " + format_shortest(node.destination->x) + " " +
             format_shortest(node.destination->y) + " " + format_shortest(node.destination->z) +
             " " + format_shortest(node.speed);
    }
    out += "\n";
  }
  return out;
}

Topology generate_topology(const TopologySpec& spec) {
  Topology topo;
  topo.tag = "coordS" + std::to_string(spec.seed) + "N" + std::to_string(spec.nodes);
  topo.kind = "BACKBONE";
  topo.nodes.reserve(spec.nodes);
  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = 0; i < spec.nodes; ++i) {
    NodeKinematics node;
    node.id = static_cast<int>(i);
    node.position = {detail::uniform(rng, 0.0, spec.width), detail::uniform(rng, 0.0, spec.height),
                     0.0};
    if (spec.with_motion) {
      node.destination = Vec3{detail::uniform(rng, 0.0, spec.width),
                              detail::uniform(rng, 0.0, spec.height), 0.0};
      node.speed = detail::uniform(rng, spec.min_speed, spec.max_speed);
    }
    topo.nodes.push_back(node);
  }
  return topo;
}

VisibilityGraph build_visibility_graph(const Topology& topology, const RadioConfig& radio) {
  const std::size_t n = topology.count();
  VisibilityGraph graph(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (distance(topology.nodes[u].position, topology.nodes[v].position) <= radio.range) {
        graph.add_edge(static_cast<int>(u), static_cast<int>(v));
      }
    }
  }
  return graph;
}

Topology advance_mobility(const Topology& topology, double dt) {
  Topology next = topology;
  if (dt <= 0.0) return next;
  for (auto& node : next.nodes) {
    if (!node.destination) continue;
    const Vec3 dest = *node.destination;
    const double remaining = distance(node.position, dest);
    const double step = node.speed * dt;
    if (step >= remaining) {
      node.position = dest;
      node.destination.reset();
      node.speed = 0.0;
    } else if (step > 0.0) {
      const double f = step / remaining;
      node.position.x += (dest.x - node.position.x) * f;
      node.position.y += (dest.y - node.position.y) * f;
      node.position.z += (dest.z - node.position.z) * f;
    }
  }
  return next;
}

std::vector<int> hop_distances(const VisibilityGraph& graph, int origin) {
  if (!graph.contains(origin)) throw UnknownNode(origin);
  std::vector<int> dist(graph.size(), -1);
  std::deque<int> queue{origin};
  dist[origin] = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : graph.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

std::vector<int> k_hop_set(const VisibilityGraph& graph, int origin, int k) {
  auto dist = hop_distances(graph, origin);
  std::vector<int> out;
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (dist[v] >= 0 && dist[v] <= k) out.push_back(static_cast<int>(v));
  }
  return out;
}

bool is_connected(const VisibilityGraph& graph) {
  if (graph.size() == 0) return true;
  auto dist = hop_distances(graph, 0);
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

std::string topology_file_name(int index, std::size_t nodes) {
  return "coordS" + std::to_string(index) + "N" + std::to_string(nodes);
}

}  // namespace khopnet
