#pragma once

#include <cstdint>

namespace khopnet {

/// Linear radio energy model: joules per byte sent or received plus an idle
/// draw per simulated second.
struct EnergyModel {
  double tx_per_byte = 1.0e-6;
  double rx_per_byte = 0.5e-6;
  double idle_per_second = 0.0;
};

/// Per-node traffic counters and energy, one dump row per node.
struct EnergyLedger {
  int node = 0;
  std::uint64_t ucast_bytes_tx = 0;
  std::uint64_t ucast_msgs_tx = 0;
  std::uint64_t bcast_bytes_tx = 0;
  std::uint64_t bcast_msgs_tx = 0;
  std::uint64_t ucast_bytes_rx = 0;
  std::uint64_t ucast_msgs_rx = 0;
  std::uint64_t bcast_bytes_rx = 0;
  std::uint64_t bcast_msgs_rx = 0;
  // Retried unicasts; already included in the ucast tx counters.
  std::uint64_t retransmissions = 0;
  double exec_time = 0.0;        // simulated seconds
  double consumed_energy = 0.0;  // joules

  friend bool operator==(const EnergyLedger&, const EnergyLedger&) = default;
};

enum class Direction { Tx, Rx };

void charge_energy(EnergyLedger& ledger, std::uint64_t bytes, Direction direction,
                   const EnergyModel& model);

}  // namespace khopnet
