#include "khopnet/engine.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

#include "khopnet/error.hpp"
#include "khopnet/format.hpp"
#include "rng.hpp"

namespace khopnet {

void charge_energy(EnergyLedger& ledger, std::uint64_t bytes, Direction direction,
                   const EnergyModel& model) {
  const double per_byte = direction == Direction::Tx ? model.tx_per_byte : model.rx_per_byte;
  ledger.consumed_energy += per_byte * static_cast<double>(bytes);
}

std::uint64_t EventQueue::schedule(double time, EventPayload payload) {
  SimEvent ev;
  ev.time = time;
  ev.order_key = rng_();
  ev.seq = next_seq_++;
  ev.payload = std::move(payload);
  heap_.push(std::move(ev));
  return next_seq_ - 1;
}

SimEvent EventQueue::pop() {
  SimEvent ev = heap_.top();
  heap_.pop();
  return ev;
}

Network::Network(VisibilityGraph graph, EnergyModel energy, double latency)
    : graph_(std::move(graph)), energy_(energy), latency_(latency), ledgers_(graph_.size()) {
  for (std::size_t i = 0; i < ledgers_.size(); ++i) ledgers_[i].node = static_cast<int>(i);
}

void Network::record(double now, TraceAction action, const Frame& frame, int to,
                     std::size_t bytes) {
  trace_.push_back(TraceEvent{now, trace_seq_++, action, frame.msg, frame.from, to, bytes,
                             frame.to == kBroadcast});
}

std::size_t Network::broadcast(int sender, Frame frame, double now, EventQueue& queue) {
  if (!graph_.contains(sender)) throw UnknownNode(sender);
  frame.from = sender;
  frame.to = kBroadcast;
  const std::size_t bytes = encoded_size(frame.msg);
  auto& ledger = ledgers_[sender];
  ledger.bcast_msgs_tx += 1;
  ledger.bcast_bytes_tx += bytes;
  charge_energy(ledger, bytes, Direction::Tx, energy_);
  record(now, TraceAction::Transmit, frame, kBroadcast, bytes);
  const auto neighbors = graph_.neighbors(sender);
  for (int v : neighbors) queue.schedule(now + latency_, event::Deliver{v, frame});
  return neighbors.size();
}

bool Network::unicast(int sender, int dest, Frame frame, double now, EventQueue& queue) {
  if (!graph_.contains(sender)) throw UnknownNode(sender);
  if (!graph_.contains(dest)) throw UnknownDest(dest);
  frame.from = sender;
  frame.to = dest;
  const std::size_t bytes = encoded_size(frame.msg);
  auto& ledger = ledgers_[sender];
  ledger.ucast_msgs_tx += 1;
  ledger.ucast_bytes_tx += bytes;
  if (frame.attempt > 0) ledger.retransmissions += 1;
  charge_energy(ledger, bytes, Direction::Tx, energy_);
  record(now, TraceAction::Transmit, frame, dest, bytes);
  if (graph_.adjacent(sender, dest)) {
    queue.schedule(now + latency_, event::Deliver{dest, frame});
    return true;
  }
  record(now, TraceAction::Drop, frame, dest, bytes);
  if (frame.attempt == 0) {
    frame.attempt = 1;
    queue.schedule(now + latency_, event::Retry{frame});
  }
  return false;
}

void Network::receive(const event::Deliver& delivery, double now) {
  const std::size_t bytes = encoded_size(delivery.frame.msg);
  auto& ledger = ledgers_.at(delivery.dest);
  if (delivery.frame.to == kBroadcast) {
    ledger.bcast_msgs_rx += 1;
    ledger.bcast_bytes_rx += bytes;
  } else {
    ledger.ucast_msgs_rx += 1;
    ledger.ucast_bytes_rx += bytes;
  }
  charge_energy(ledger, bytes, Direction::Rx, energy_);
  record(now, TraceAction::Receive, delivery.frame, delivery.dest, bytes);
}

ClusteringSnapshot make_snapshot(std::span<const NodeFsm> nodes, const VisibilityGraph& graph) {
  ClusteringSnapshot snap;
  snap.visibility = graph;
  snap.roles.reserve(nodes.size());
  for (const auto& fsm : nodes) {
    snap.roles.push_back(fsm.role);
    snap.membership.push_back(fsm.current_ch);
    snap.hop_to_ch.push_back(fsm.hop_to_ch);
  }
  auto is_head = [&](int id) {
    return id >= 0 && static_cast<std::size_t>(id) < nodes.size() &&
           nodes[id].role == Role::ClusterHead;
  };
  for (const auto& fsm : nodes) {
    if (fsm.role != Role::Gateway) continue;
    std::set<int> heads;
    if (fsm.current_ch && is_head(*fsm.current_ch)) heads.insert(*fsm.current_ch);
    for (const auto& [head, seen] : fsm.iamc_sources) {
      if (is_head(head)) heads.insert(head);
    }
    for (int head : fsm.join_clusters) {
      if (is_head(head)) heads.insert(head);
    }
    for (auto a = heads.begin(); a != heads.end(); ++a) {
      for (auto b = std::next(a); b != heads.end(); ++b) snap.cluster_adjacency.emplace(*a, *b);
    }
  }
  return snap;
}

namespace {

constexpr std::uint64_t kAttributeStream = 0x6a09e667f3bcc908ULL;
constexpr std::uint64_t kTimingStream = 0xbb67ae8584caa73bULL;
constexpr std::uint64_t kQueueStream = 0x3c6ef372fe94f82bULL;

struct NodeRuntime {
  NodeFsm fsm;
  std::array<std::uint64_t, kTimerKinds> generation{};
  std::vector<Message> replies;
  std::vector<Message> join_replies;
  std::map<FloodKey, int> seen;  // flood -> previous hop
  std::uint32_t next_serial = 0;
  bool check_pending = false;
  std::optional<double> fixed_backoff;
  bool fixed_mobility = false;
  double initial_battery = 1.0;
  bool signalled = false;
  double module_start = 0.0;
};

enum class Phase { Join, Maintenance };

class Simulator {
 public:
  Simulator(const SimConfig& cfg, const Topology& topology, std::span<const NodeSetup> setups)
      : cfg_(cfg),
        params_(cfg.protocol),
        topology_(topology),
        queue_(cfg.seed ^ kQueueStream),
        net_(build_visibility_graph(topology, cfg.radio), cfg.energy, cfg.per_hop_latency),
        timing_rng_(cfg.seed ^ kTimingStream) {
    std::mt19937_64 attr_rng(cfg.seed ^ kAttributeStream);
    nodes_.resize(topology.count());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      auto& rt = nodes_[i];
      rt.fsm.id = static_cast<int>(i);
      // Draw for every node so overrides do not shift other nodes' attributes.
      NodeAttributes attrs;
      attrs.battery = detail::uniform(attr_rng, 0.5, 1.0);
      attrs.memory = detail::uniform(attr_rng, 1.0, 10.0);
      attrs.processing = detail::uniform(attr_rng, 1.0, 10.0);
      attrs.serve_time = detail::uniform_int(attr_rng, 0, 30);
      attrs.mobility = std::max(kMinMobility, topology.nodes[i].speed);
      if (i < setups.size()) {
        if (setups[i].attributes) {
          attrs = *setups[i].attributes;
          attrs.mobility = std::max(kMinMobility, attrs.mobility);
          rt.fixed_mobility = true;
        }
        rt.fixed_backoff = setups[i].backoff;
      }
      rt.fsm.attrs = attrs;
      rt.initial_battery = attrs.battery;
    }
  }

  SimResult run() {
    SimResult result;
    double phase_start = 0.0;
    if (cfg_.duration > 0.0 && !nodes_.empty()) {
      if (cfg_.boot_join) {
        run_phase(Phase::Join, phase_start, cfg_.duration);
        phase_start = now_;
      }
      run_phase(Phase::Maintenance, phase_start, cfg_.duration);
    }

    const double elapsed = std::max(cfg_.duration, 0.0);
    auto& ledgers = net_.ledgers();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      ledgers[i].consumed_energy += cfg_.energy.idle_per_second * elapsed;
    }
    result.final_topology = topology_;
    for (auto& rt : nodes_) result.nodes.push_back(rt.fsm);
    result.snapshot = make_snapshot(result.nodes, net_.graph());
    result.ledgers = ledgers;
    result.trace = std::move(net_.trace());
    result.role_log = std::move(role_log_);
    result.phases = std::move(phases_);
    const auto totals = traffic_totals(result.ledgers);
    result.packets = totals.packets;
    result.bytes = totals.bytes;
    return result;
  }

 private:
  int k() const { return params_.thresholds.max_hops; }

  // Processes events up to `deadline`. The join phase drains its queue and
  // requires every node to leave Unclustered; the maintenance phase simply
  // runs to the deadline.
  void run_phase(Phase phase, double start, double deadline) {
    phase_ = phase;
    now_ = start;
    const auto before = traffic_totals(net_.ledgers());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      schedule_timer(static_cast<int>(i), TimerKind::StartModule, start);
    }
    if (phase == Phase::Maintenance && any_motion()) {
      queue_.schedule(start + cfg_.mobility_step, event::MobilityStep{});
    }
    while (!queue_.empty() && queue_.top().time <= deadline) {
      SimEvent ev = queue_.pop();
      now_ = ev.time;
      std::visit([&](auto& payload) { handle(payload); }, ev.payload);
    }
    const auto after = traffic_totals(net_.ledgers());
    PhaseStats stats;
    stats.name = phase == Phase::Join ? "join" : "maintenance";
    stats.start = start;
    stats.end = phase == Phase::Join ? now_ : deadline;
    stats.packets = after.packets - before.packets;
    stats.bytes = after.bytes - before.bytes;
    phases_.push_back(stats);

    if (phase == Phase::Join) {
      std::vector<int> pending;
      for (const auto& rt : nodes_) {
        if (!rt.signalled) pending.push_back(rt.fsm.id);
      }
      if (!pending.empty()) throw PhaseTimeout("join", std::move(pending));
      // Events left beyond the deadline belong to no phase.
      while (!queue_.empty()) queue_.pop();
    }
  }

  bool any_motion() const {
    return cfg_.mobility_step > 0.0 &&
           std::any_of(topology_.nodes.begin(), topology_.nodes.end(),
                       [](const NodeKinematics& n) { return n.destination.has_value(); });
  }

  // --- timers -------------------------------------------------------------

  void schedule_timer(int node, TimerKind kind, double at) {
    auto& gen = nodes_[node].generation[static_cast<std::size_t>(kind)];
    ++gen;
    queue_.schedule(at, event::Timer{node, kind, gen});
  }

  void cancel_timer(int node, TimerKind kind) {
    ++nodes_[node].generation[static_cast<std::size_t>(kind)];
    if (kind == TimerKind::NoHeadCheck) nodes_[node].check_pending = false;
  }

  double backoff(int node) {
    const auto& rt = nodes_[node];
    if (rt.fixed_backoff) return *rt.fixed_backoff;
    return detail::uniform(timing_rng_, 0.0, cfg_.election_backoff);
  }

  void schedule_check(int node, double extra_delay = 0.0) {
    nodes_[node].check_pending = true;
    schedule_timer(node, TimerKind::NoHeadCheck, now_ + extra_delay + backoff(node));
  }

  // --- transport ----------------------------------------------------------

  void flood(int node, Message msg, int scope) {
    auto& rt = nodes_[node];
    const FloodKey key{node, rt.next_serial++};
    rt.seen[key] = node;
    msg.hop_distance = 1;
    Frame frame;
    frame.msg = std::move(msg);
    frame.flood = key;
    frame.scope = scope;
    net_.broadcast(node, std::move(frame), now_, queue_);
  }

  void send_direct(int from, int to, const Message& msg) {
    Frame frame;
    frame.msg = msg;
    frame.final_dest = to;
    net_.unicast(from, to, std::move(frame), now_, queue_);
  }

  // Hop-by-hop unicast back along the path the flood `key` arrived on.
  void send_along_reverse(int at, Frame frame) {
    const auto& seen = nodes_[at].seen;
    auto it = seen.find(*frame.reverse_path);
    if (it == seen.end() || it->second == at) {
      net_.trace().push_back(TraceEvent{now_, 0, TraceAction::Drop, frame.msg, at,
                                        frame.final_dest, encoded_size(frame.msg), false});
      return;
    }
    frame.attempt = 0;
    net_.unicast(at, it->second, std::move(frame), now_, queue_);
  }

  void reply_along(int node, const Message& msg, const FloodKey& key) {
    Frame frame;
    frame.msg = msg;
    frame.reverse_path = key;
    frame.final_dest = key.origin;
    send_along_reverse(node, std::move(frame));
  }

  // --- event handlers -----------------------------------------------------

  void handle(event::Deliver& d) {
    net_.receive(d, now_);
    const Frame& f = d.frame;
    const int v = d.dest;
    if (f.flood) {
      auto& seen = nodes_[v].seen;
      if (seen.contains(*f.flood)) return;
      seen[*f.flood] = f.from;
      const int hops = f.msg.hop_distance.value_or(1);
      if (hops < f.scope) {
        Frame relay = f;
        relay.msg.hop_distance = hops + 1;
        net_.broadcast(v, std::move(relay), now_, queue_);
      }
      if (hops <= f.scope) dispatch(v, f.msg, f);
      return;
    }
    if (f.reverse_path && v != f.final_dest) {
      send_along_reverse(v, f);
      return;
    }
    dispatch(v, f.msg, f);
  }

  void handle(event::Retry& r) {
    net_.unicast(r.frame.from, r.frame.to, r.frame, now_, queue_);
  }

  void handle(event::MobilityStep&) {
    topology_ = advance_mobility(topology_, cfg_.mobility_step);
    net_.set_graph(build_visibility_graph(topology_, cfg_.radio));
    if (any_motion()) queue_.schedule(now_ + cfg_.mobility_step, event::MobilityStep{});
  }

  void handle(event::Timer& t) {
    auto& rt = nodes_[t.node];
    if (rt.generation[static_cast<std::size_t>(t.kind)] != t.generation) return;
    const Role before = rt.fsm.role;
    on_timer(t.node, t.kind);
    after_change(t.node, before);
  }

  void after_change(int node, Role before) {
    auto& rt = nodes_[node];
    if (rt.fsm.role != before) role_log_.push_back(RoleChange{now_, node, before, rt.fsm.role});
    if (phase_ == Phase::Join && !rt.signalled && rt.fsm.role != Role::Unclustered) {
      rt.signalled = true;
      rt.fsm.join_deadline.reset();
      net_.ledgers()[node].exec_time += now_ - rt.module_start;
    }
  }

  void update_battery(int node) {
    auto& rt = nodes_[node];
    const double used =
        net_.ledgers()[node].consumed_energy + cfg_.energy.idle_per_second * now_;
    const double level = rt.initial_battery - used / cfg_.battery_capacity;
    rt.fsm.attrs.battery = std::clamp(level, 0.0, 1.0);
  }

  void refresh(int node) {
    auto& rt = nodes_[node];
    update_battery(node);
    if (!rt.fixed_mobility) {
      rt.fsm.attrs.mobility = std::max(kMinMobility, topology_.nodes[node].speed);
    }
    refresh_priority(rt.fsm, now_, net_.graph().degree(node), params_);
  }

  void begin_election(int node) {
    auto& rt = nodes_[node];
    cancel_timer(node, TimerKind::NoHeadCheck);
    cancel_timer(node, TimerKind::HigherWait);
    Message e = start_elect_me(rt.fsm, now_, params_);
    rt.replies.clear();
    flood(node, std::move(e), k());
    schedule_timer(node, TimerKind::ReplyWait, now_ + params_.timers.reply_wait);
  }

  void become_head(int node, Message announce) {
    cancel_timer(node, TimerKind::NoHeadCheck);
    flood(node, std::move(announce), k());
    if (phase_ == Phase::Maintenance) {
      schedule_timer(node, TimerKind::HeadTick, now_ + cfg_.head_tick);
    }
  }

  void step_down(int node, Message quit) {
    cancel_timer(node, TimerKind::HeadTick);
    flood(node, std::move(quit), k());
    const auto until = nodes_[node].fsm.cooldown_until;
    if (until) schedule_timer(node, TimerKind::CooldownEnd, *until);
  }

  void on_timer(int node, TimerKind kind) {
    auto& rt = nodes_[node];
    auto& fsm = rt.fsm;
    const auto& timers = params_.timers;
    switch (kind) {
      case TimerKind::StartModule:
        refresh(node);
        if (phase_ == Phase::Join) {
          rt.module_start = now_;
          schedule_timer(node, TimerKind::Boot,
                         now_ + detail::uniform(timing_rng_, 0.0, cfg_.boot_window));
        } else {
          schedule_timer(node, TimerKind::Refresh, now_ + timers.refresh);
          if (fsm.role == Role::ClusterHead) {
            schedule_timer(node, TimerKind::HeadTick, now_ + cfg_.head_tick);
          } else if (!fsm.clustered()) {
            schedule_check(node);
          }
        }
        break;

      case TimerKind::Boot:
        if (!fsm.clustered()) {
          Message solicit = boot_join(fsm, now_, params_);
          rt.join_replies.clear();
          Frame frame;
          frame.msg = solicit;
          net_.broadcast(node, std::move(frame), now_, queue_);
          schedule_timer(node, TimerKind::JoinTimeout, *fsm.join_deadline);
        }
        break;

      case TimerKind::JoinTimeout: {
        if (!fsm.join_deadline || fsm.clustered()) {
          fsm.join_deadline.reset();
          rt.join_replies.clear();
          break;
        }
        auto outcome = on_join_timeout(fsm, rt.join_replies, now_, params_);
        rt.join_replies.clear();
        if (auto* declare = std::get_if<DeclareHead>(&outcome)) {
          become_head(node, declare->announce);
        } else {
          const auto& [accept, notify] = std::visit(
              [](auto& o) -> std::pair<Message, std::vector<int>> {
                if constexpr (std::is_same_v<std::decay_t<decltype(o)>, DeclareHead>) {
                  return {};
                } else {
                  return {o.accept, o.notify};
                }
              },
              outcome);
          for (int replier : notify) send_direct(node, replier, accept);
        }
        break;
      }

      case TimerKind::ReplyWait: {
        if (!std::holds_alternative<election::AwaitingReplies>(fsm.election)) break;
        auto outcome = on_t2_expiry(fsm, rt.replies, now_, params_);
        rt.replies.clear();
        if (auto* w = std::get_if<Withdraw>(&outcome)) {
          schedule_timer(node, TimerKind::HigherWait, w->deadline);
        } else {
          become_head(node, std::get<DeclareHead>(outcome).announce);
        }
        break;
      }

      case TimerKind::HigherWait:
        if (!std::holds_alternative<election::AwaitingHigherElect>(fsm.election)) break;
        if (fsm.clustered() || in_cooldown(fsm, now_)) {
          fsm.election = election::Idle{};
          if (!fsm.clustered()) schedule_check(node);
          break;
        }
        {
          Message e = on_t3_expiry(fsm, now_, params_);
          rt.replies.clear();
          flood(node, std::move(e), k());
          schedule_timer(node, TimerKind::ReplyWait, now_ + timers.reply_wait);
        }
        break;

      case TimerKind::Refresh: {
        refresh(node);
        const bool orphaned = expire_sightings(fsm, now_, params_);
        if (fsm.role == Role::ClusterHead) flood(node, head_beacon(fsm), k());
        if (!fsm.clustered() && fsm.idle() && (orphaned || !rt.check_pending)) {
          schedule_check(node);
        }
        schedule_timer(node, TimerKind::Refresh, now_ + timers.refresh);
        break;
      }

      case TimerKind::HeadTick:
        if (fsm.role != Role::ClusterHead) break;
        update_battery(node);
        if (auto quit = ch_tick(fsm, now_, params_)) {
          step_down(node, *quit);
        } else {
          schedule_timer(node, TimerKind::HeadTick, now_ + cfg_.head_tick);
        }
        break;

      case TimerKind::CooldownEnd:
        refresh(node);
        if (!fsm.clustered() && fsm.idle()) schedule_check(node);
        break;

      case TimerKind::NoHeadCheck: {
        rt.check_pending = false;
        if (fsm.clustered() || !fsm.idle()) break;
        const bool heard = now_ - fsm.head_heard_at <= params_.liveness_window();
        if (!detect_no_ch(fsm, heard)) break;
        if (in_cooldown(fsm, now_)) {
          schedule_check(node, *fsm.cooldown_until - now_);
          break;
        }
        begin_election(node);
        break;
      }
    }
  }

  void dispatch(int node, const Message& msg, const Frame& frame) {
    auto& rt = nodes_[node];
    auto& fsm = rt.fsm;
    const Role before = fsm.role;
    const bool was_clustered = fsm.clustered();
    switch (msg.kind) {
      case MessageKind::Elect:
        on_elect(node, msg, frame);
        break;
      case MessageKind::Stop:
        if (std::holds_alternative<election::AwaitingReplies>(fsm.election)) {
          rt.replies.push_back(msg);
        }
        break;
      case MessageKind::IAmHead:
        if (auto resign = on_receive_iamc(fsm, msg, now_, params_)) step_down(node, *resign);
        break;
      case MessageKind::Quit:
        if (on_receive_quit(fsm, msg, now_, params_) && phase_ == Phase::Maintenance) {
          schedule_check(node);
        }
        break;
      case MessageKind::Solicit:
        if (auto reply = on_receive_solicit(fsm, msg)) send_direct(node, frame.from, *reply);
        break;
      case MessageKind::SolicitReply:
        if (fsm.join_deadline && !fsm.clustered()) rt.join_replies.push_back(msg);
        break;
      case MessageKind::Accept:
        break;
    }
    if (!was_clustered && fsm.clustered()) {
      cancel_timer(node, TimerKind::NoHeadCheck);
      cancel_timer(node, TimerKind::ReplyWait);
      cancel_timer(node, TimerKind::HigherWait);
      rt.replies.clear();
    }
    after_change(node, before);
  }

  // Only headless nodes take part in an election; members of a live cluster
  // and serving heads ignore E.
  void on_elect(int node, const Message& msg, const Frame& frame) {
    auto& fsm = nodes_[node].fsm;
    if (fsm.clustered()) return;
    note_elect_heard(fsm, msg.sender);
    if (auto reply = on_receive_elect(fsm, msg)) {
      reply_along(node, *reply, *frame.flood);
      // The higher node runs its own cycle.
      if (fsm.idle() && !in_cooldown(fsm, now_)) begin_election(node);
    } else if (fsm.idle()) {
      schedule_check(node, params_.timers.reply_wait + params_.timers.higher_wait);
    }
  }

  SimConfig cfg_;
  ProtocolParams params_;
  Topology topology_;
  EventQueue queue_;
  Network net_;
  std::mt19937_64 timing_rng_;
  std::vector<NodeRuntime> nodes_;
  std::vector<RoleChange> role_log_;
  std::vector<PhaseStats> phases_;
  Phase phase_ = Phase::Join;
  double now_ = 0.0;
};

}  // namespace

SimResult run(const SimConfig& cfg, const Topology& topology, std::span<const NodeSetup> setups) {
  Simulator sim(cfg, topology, setups);
  return sim.run();
}

std::string format_trace(std::span<const TraceEvent> trace) {
  std::string out;
  for (const auto& ev : trace) {
    if (ev.action == TraceAction::Receive) continue;
    std::string kind(tag(ev.msg.kind));
    if (ev.action == TraceAction::Drop) kind = "DROP:" + kind;
    out += format_shortest(ev.time) + " " + std::to_string(ev.seq) + " " + kind + " " +
           std::to_string(ev.from) + " " + std::to_string(ev.to) + " " +
           std::to_string(ev.bytes) + "\n";
  }
  return out;
}

}  // namespace khopnet
