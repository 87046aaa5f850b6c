#include "khopnet/dump.hpp"

#include <algorithm>
#include <sstream>

#include "khopnet/error.hpp"
#include "khopnet/format.hpp"
#include "khopnet/metrics.hpp"

namespace khopnet {

namespace {

void append_ids(std::string& out, std::string_view label, const std::vector<int>& ids) {
  out += label;
  for (int id : ids) out += ' ' + std::to_string(id);
  out += '\n';
}

struct Line {
  std::size_t number;
  std::vector<std::string> fields;
};

class Reader {
 public:
  explicit Reader(std::string_view text) {
    std::size_t number = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
      ++number;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      if (raw.empty() || raw.front() == '#') continue;
      std::istringstream words(raw);
      Line line{number, {}};
      for (std::string w; words >> w;) line.fields.push_back(w);
      if (!line.fields.empty()) lines_.push_back(std::move(line));
    }
  }

  bool done() const { return pos_ >= lines_.size(); }
  const Line& peek() const {
    if (done()) throw ParseError(last_number(), "unexpected end of dump");
    return lines_[pos_];
  }
  const Line& next() {
    const Line& l = peek();
    ++pos_;
    return l;
  }
  std::size_t last_number() const { return lines_.empty() ? 0 : lines_.back().number; }

 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

template <typename T>
T as_int(const Line& line, const std::string& field) {
  auto v = parse_int<T>(field);
  if (!v) throw ParseError(line.number, "bad integer '" + field + "'");
  return *v;
}

double as_double(const Line& line, const std::string& field) {
  auto v = parse_double(field);
  if (!v) throw ParseError(line.number, "bad number '" + field + "'");
  return *v;
}

std::size_t read_count(Reader& in) {
  const Line& line = in.next();
  if (line.fields.size() != 1) throw ParseError(line.number, "expected a single count");
  return as_int<std::size_t>(line, line.fields[0]);
}

std::vector<int> read_ids(const Line& line, std::size_t from) {
  std::vector<int> ids;
  for (std::size_t i = from; i < line.fields.size(); ++i) {
    ids.push_back(as_int<int>(line, line.fields[i]));
  }
  return ids;
}

}  // namespace

DumpData make_dump(const Topology& topology, std::span<const EnergyLedger> ledgers,
                   std::span<const Role> roles, const VisibilityGraph& graph) {
  DumpData d;
  d.tag = topology.tag.empty() ? topology_file_name(0, ledgers.size()) : topology.tag;
  d.kind = topology.kind.empty() ? "BACKBONE" : topology.kind;
  d.rows.assign(ledgers.begin(), ledgers.end());
  const auto totals = traffic_totals(ledgers);
  d.packets = totals.packets;
  d.bytes = totals.bytes;
  for (std::size_t i = 0; i < roles.size(); ++i) {
    const int id = static_cast<int>(i);
    switch (roles[i]) {
      case Role::ClusterHead: d.black.push_back(id); break;
      case Role::Gateway: d.grey.push_back(id); break;
      default: d.white.push_back(id); break;
    }
  }
  for (std::size_t i = 0; i < graph.size(); ++i) {
    auto nb = graph.neighbors(static_cast<int>(i));
    d.adjacency.emplace_back(nb.begin(), nb.end());
  }
  return d;
}

std::string emit_dump(const DumpData& d) {
  std::string out;
  out += d.tag + '\n';
  out += d.kind + '\n';
  out += "#Number of nodes\n";
  out += std::to_string(d.rows.size()) + '\n';
  out += "#id ucast_bytes_tx ucast_msgs_tx bcast_bytes_tx bcast_msgs_tx ucast_bytes_rx "
         "ucast_msgs_rx bcast_bytes_rx bcast_msgs_rx exec_time consumed_energy\n";
  for (const auto& r : d.rows) {
    out += std::to_string(r.node);
    for (auto v : {r.ucast_bytes_tx, r.ucast_msgs_tx, r.bcast_bytes_tx, r.bcast_msgs_tx,
                   r.ucast_bytes_rx, r.ucast_msgs_rx, r.bcast_bytes_rx, r.bcast_msgs_rx}) {
      out += ' ' + std::to_string(v);
    }
    out += ' ' + format_dump_number(r.exec_time);
    out += ' ' + format_dump_number(r.consumed_energy);
    out += '\n';
  }
  out += "#Total packets and bytes transmitted\n";
  out += std::to_string(d.packets) + ' ' + std::to_string(d.bytes) + '\n';
  out += "#Colours\n";
  out += d.grey.empty() ? "2\n" : "3\n";
  append_ids(out, "black", d.black);
  if (!d.grey.empty()) append_ids(out, "grey", d.grey);
  append_ids(out, "white", d.white);
  out += "#Nodes and their connectivity\n";
  out += std::to_string(d.adjacency.size()) + '\n';
  for (std::size_t i = 0; i < d.adjacency.size(); ++i) {
    out += std::to_string(i);
    for (int v : d.adjacency[i]) out += ' ' + std::to_string(v);
    out += '\n';
  }
  return out;
}

DumpData parse_dump(std::string_view text) {
  Reader in(text);
  DumpData d;
  d.tag = in.next().fields.at(0);
  d.kind = in.next().fields.at(0);

  const std::size_t n = read_count(in);
  for (std::size_t i = 0; i < n; ++i) {
    if (in.done() || in.peek().fields.size() != 11) {
      throw CountMismatch(n, i);
    }
    const Line& line = in.next();
    const auto& f = line.fields;
    EnergyLedger r;
    r.node = as_int<int>(line, f[0]);
    std::uint64_t* counters[] = {&r.ucast_bytes_tx, &r.ucast_msgs_tx, &r.bcast_bytes_tx,
                                 &r.bcast_msgs_tx,  &r.ucast_bytes_rx, &r.ucast_msgs_rx,
                                 &r.bcast_bytes_rx, &r.bcast_msgs_rx};
    for (std::size_t c = 0; c < 8; ++c) *counters[c] = as_int<std::uint64_t>(line, f[c + 1]);
    r.exec_time = as_double(line, f[9]);
    r.consumed_energy = as_double(line, f[10]);
    d.rows.push_back(r);
  }

  const Line& totals = in.next();
  if (totals.fields.size() != 2) throw ParseError(totals.number, "totals line needs 2 values");
  d.packets = as_int<std::uint64_t>(totals, totals.fields[0]);
  d.bytes = as_int<std::uint64_t>(totals, totals.fields[1]);

  const Line& colours_line = in.peek();
  const std::size_t colours = read_count(in);
  for (std::size_t i = 0; i < colours; ++i) {
    const Line& line = in.next();
    const std::string& label = line.fields[0];
    auto ids = read_ids(line, 1);
    if (label == "black") d.black = std::move(ids);
    else if (label == "grey") d.grey = std::move(ids);
    else if (label == "white") d.white = std::move(ids);
    else throw ParseError(line.number, "unknown colour '" + label + "'");
  }
  if (colours < 2 || colours > 3) throw ParseError(colours_line.number, "bad colour count");

  const std::size_t m = read_count(in);
  for (std::size_t i = 0; i < m; ++i) {
    if (in.done()) throw CountMismatch(m, i);
    const Line& line = in.next();
    if (as_int<std::size_t>(line, line.fields[0]) != i) {
      throw ParseError(line.number, "adjacency rows must be in id order");
    }
    d.adjacency.push_back(read_ids(line, 1));
  }
  if (!in.done()) throw ParseError(in.peek().number, "trailing content after adjacency");
  return d;
}

}  // namespace khopnet
