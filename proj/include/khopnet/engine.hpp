#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "khopnet/ledger.hpp"
#include "khopnet/message.hpp"
#include "khopnet/metrics.hpp"
#include "khopnet/protocol.hpp"
#include "khopnet/topology.hpp"

namespace khopnet {

struct SimConfig {
  std::uint64_t seed = 1;
  double duration = 900.0;          // seconds
  double per_hop_latency = 0.001;   // seconds
  EnergyModel energy;
  double battery_capacity = 1.0;    // joules held by a full battery
  ProtocolParams protocol;
  RadioConfig radio;
  double mobility_step = 1.0;       // seconds between position updates
  double boot_window = 100.0;       // boot times are spread uniformly over this window
  double election_backoff = 5.0;    // headless nodes wait up to this long before E
  double head_tick = 1.0;           // granularity of the head's T4 / battery check
  bool boot_join = true;            // run the solicitation phase first
};

/// Per-node overrides, mainly for scripted scenarios.
struct NodeSetup {
  std::optional<NodeAttributes> attributes;  // single_hop_count is ignored
  std::optional<double> backoff;             // fixed election backoff
};

struct FloodKey {
  int origin = 0;
  std::uint32_t serial = 0;
  friend auto operator<=>(const FloodKey&, const FloodKey&) = default;
};

inline constexpr int kBroadcast = -1;

/// A MAC frame. Floods carry their key and hop scope; routed replies follow
/// the reverse path of the flood they answer.
struct Frame {
  Message msg;
  int from = 0;
  int to = kBroadcast;
  std::optional<FloodKey> flood;
  int scope = 0;
  std::optional<FloodKey> reverse_path;
  int final_dest = kBroadcast;
  int attempt = 0;
};

enum class TimerKind : std::uint8_t {
  StartModule,
  Boot,
  JoinTimeout,
  ReplyWait,
  HigherWait,
  Refresh,
  HeadTick,
  CooldownEnd,
  NoHeadCheck,
};
inline constexpr std::size_t kTimerKinds = 9;

namespace event {
struct Deliver {
  int dest = 0;
  Frame frame;
};
struct Retry {
  Frame frame;
};
struct Timer {
  int node = 0;
  TimerKind kind = TimerKind::StartModule;
  std::uint64_t generation = 0;
};
struct MobilityStep {};
}  // namespace event

using EventPayload =
    std::variant<event::Deliver, event::Retry, event::Timer, event::MobilityStep>;

struct SimEvent {
  double time = 0.0;
  std::uint64_t order_key = 0;  // seeded shuffle among equal times
  std::uint64_t seq = 0;
  EventPayload payload;
};

/// Min-queue over (time, order_key, seq).
class EventQueue {
 public:
  explicit EventQueue(std::uint64_t seed) : rng_(seed) {}
  std::uint64_t schedule(double time, EventPayload payload);
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const SimEvent& top() const { return heap_.top(); }
  SimEvent pop();

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.order_key != b.order_key) return a.order_key > b.order_key;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
  std::mt19937_64 rng_;
  std::uint64_t next_seq_ = 0;
};

enum class TraceAction : std::uint8_t { Transmit, Receive, Drop };

struct TraceEvent {
  double time = 0.0;
  std::uint64_t seq = 0;
  TraceAction action = TraceAction::Transmit;
  Message msg;
  int from = 0;
  int to = kBroadcast;  // receiver for Receive, addressee (or broadcast) otherwise
  std::size_t bytes = 0;
  bool broadcast = false;
};

/// MAC layer over the current visibility graph: fan-out, link checks, and the
/// per-node traffic and energy ledgers.
class Network {
 public:
  Network(VisibilityGraph graph, EnergyModel energy, double latency);

  void set_graph(VisibilityGraph graph) { graph_ = std::move(graph); }
  const VisibilityGraph& graph() const { return graph_; }

  /// Schedules one Deliver per current neighbor; returns how many.
  std::size_t broadcast(int sender, Frame frame, double now, EventQueue& queue);

  /// Delivers when `dest` is adjacent at send time. Otherwise records a Drop
  /// and, on a first attempt, schedules one retry. Throws UnknownDest.
  bool unicast(int sender, int dest, Frame frame, double now, EventQueue& queue);

  /// Books receive-side counters for a delivery.
  void receive(const event::Deliver& delivery, double now);

  std::span<const EnergyLedger> ledgers() const { return ledgers_; }
  std::vector<EnergyLedger>& ledgers() { return ledgers_; }
  const std::vector<TraceEvent>& trace() const { return trace_; }
  std::vector<TraceEvent>& trace() { return trace_; }
  double latency() const { return latency_; }

 private:
  void record(double now, TraceAction action, const Frame& frame, int to, std::size_t bytes);

  VisibilityGraph graph_;
  EnergyModel energy_;
  double latency_;
  std::vector<EnergyLedger> ledgers_;
  std::vector<TraceEvent> trace_;
  std::uint64_t trace_seq_ = 0;
};

struct RoleChange {
  double time = 0.0;
  int node = 0;
  Role from = Role::Unclustered;
  Role to = Role::Unclustered;
};

struct PhaseStats {
  std::string name;
  double start = 0.0;
  double end = 0.0;
  std::uint64_t packets = 0;
  std::uint64_t bytes = 0;
};

struct SimResult {
  Topology final_topology;
  std::vector<NodeFsm> nodes;
  ClusteringSnapshot snapshot;
  std::vector<EnergyLedger> ledgers;
  std::vector<TraceEvent> trace;
  std::vector<RoleChange> role_log;
  std::vector<PhaseStats> phases;
  std::uint64_t packets = 0;
  std::uint64_t bytes = 0;
};

/// Snapshot of node states; gateways bridge every pair of live heads they know.
ClusteringSnapshot make_snapshot(std::span<const NodeFsm> nodes, const VisibilityGraph& graph);

/// Runs the join phase (when enabled) and then the election/maintenance phase
/// until cfg.duration. Deterministic in (cfg, topology, setups).
SimResult run(const SimConfig& cfg, const Topology& topology,
              std::span<const NodeSetup> setups = {});

/// Trace file text: one `time seq kind sender dest bytes` line per transmission
/// or drop. Drops use the kind tag prefixed with "DROP:".
std::string format_trace(std::span<const TraceEvent> trace);

}  // namespace khopnet
