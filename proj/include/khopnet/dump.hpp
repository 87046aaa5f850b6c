#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "khopnet/ledger.hpp"
#include "khopnet/protocol.hpp"
#include "khopnet/topology.hpp"

namespace khopnet {

/// Contents of a dump file. Heads are black, gateways grey, everyone else white.
struct DumpData {
  std::string tag;
  std::string kind;
  std::vector<EnergyLedger> rows;
  std::uint64_t packets = 0;
  std::uint64_t bytes = 0;
  std::vector<int> black;
  std::vector<int> grey;
  std::vector<int> white;
  std::vector<std::vector<int>> adjacency;

  friend bool operator==(const DumpData&, const DumpData&) = default;
};

DumpData make_dump(const Topology& topology, std::span<const EnergyLedger> ledgers,
                   std::span<const Role> roles, const VisibilityGraph& graph);

/// Section order: tag, kind, node count, 11-column rows, `packets bytes`,
/// colour count, black, grey (only with gateways), white, node count,
/// adjacency rows. Lines starting with '#' are annotations.
std::string emit_dump(const DumpData& dump);

/// Inverse of emit_dump. Throws ParseError or CountMismatch.
DumpData parse_dump(std::string_view text);

}  // namespace khopnet
