#include "khopnet/protocol.hpp"

#include <algorithm>
#include <tuple>

#include "khopnet/error.hpp"

namespace khopnet {

namespace {

constexpr double kSecondsPerMinute = 60.0;

// Role follows from membership: a member hearing two heads, or one that joined
// with replies from two clusters, bridges them.
void update_role(NodeFsm& fsm) {
  if (fsm.role == Role::ClusterHead) return;
  if (!fsm.current_ch) {
    fsm.role = Role::Unclustered;
    return;
  }
  const bool bridges = fsm.iamc_sources.size() >= 2 || fsm.join_clusters.size() >= 2;
  fsm.role = bridges ? Role::Gateway : Role::Ordinary;
}

void join_head(NodeFsm& fsm, int head, int hops, double now, double energy) {
  fsm.current_ch = head;
  fsm.hop_to_ch = hops;
  fsm.head_heard_at = now;
  fsm.head_energy = energy;
  fsm.election = election::Idle{};
  fsm.join_deadline.reset();
}

// Falls back to another live head within reach, else leaves the node headless.
bool lose_head(NodeFsm& fsm, double now, const ProtocolParams& params) {
  fsm.join_clusters.clear();
  const HeadSighting* best = nullptr;
  int best_id = -1;
  for (const auto& [head, seen] : fsm.iamc_sources) {
    if (head == fsm.current_ch) continue;
    if (seen.heard_at < now - params.liveness_window()) continue;
    if (seen.hops > params.thresholds.max_hops) continue;
    if (!best || seen.hops < best->hops) {
      best = &seen;
      best_id = head;
    }
  }
  if (fsm.current_ch) fsm.iamc_sources.erase(*fsm.current_ch);
  if (best) {
    fsm.current_ch = best_id;
    fsm.hop_to_ch = best->hops;
    fsm.head_heard_at = best->heard_at;
    fsm.head_energy = best->energy;
    update_role(fsm);
    return false;
  }
  fsm.current_ch.reset();
  fsm.hop_to_ch.reset();
  update_role(fsm);
  return true;
}

Message quit_as_head(NodeFsm& fsm, double now, const ProtocolParams& params) {
  const double served = now - fsm.serve_started_at.value_or(now);
  fsm.attrs.serve_time += served / kSecondsPerMinute;
  fsm.priority = 0.0;
  fsm.cooldown_until = now + params.timers.cooldown;
  fsm.role = Role::Unclustered;
  fsm.current_ch.reset();
  fsm.hop_to_ch.reset();
  fsm.serve_started_at.reset();
  fsm.iamc_sources.erase(fsm.id);
  Message q;
  q.kind = MessageKind::Quit;
  q.sender = fsm.id;
  q.priority = 0.0;
  q.serve_time = fsm.attrs.serve_time;
  q.hop_distance = 0;
  return q;
}

}  // namespace

std::string_view to_string(Role role) {
  switch (role) {
    case Role::ClusterHead: return "ClusterHead";
    case Role::Gateway: return "Gateway";
    case Role::Ordinary: return "Ordinary";
    case Role::Unclustered: return "Unclustered";
  }
  return "?";
}

int effective_ns(int ns, int threshold) { return ns <= threshold ? ns : -ns; }

double compute_priority(const NodeAttributes& attrs, const PriorityWeights& w, int ns_threshold) {
  const double mobility = std::max(attrs.mobility, kMinMobility);
  return w.w1 * attrs.battery + w.w2 * (1.0 / mobility) + w.w3 * attrs.memory +
         w.w4 * effective_ns(attrs.single_hop_count, ns_threshold) + w.w5 * attrs.processing;
}

bool in_cooldown(const NodeFsm& fsm, double now) {
  return fsm.cooldown_until && now < *fsm.cooldown_until;
}

bool detect_no_ch(const NodeFsm& fsm, bool heard_ch_recently) {
  if (fsm.role == Role::ClusterHead) return false;
  return fsm.role == Role::Unclustered || !fsm.current_ch || !heard_ch_recently;
}

Message start_elect_me(NodeFsm& fsm, double now, const ProtocolParams& params) {
  if (in_cooldown(fsm, now)) throw CooldownActive(fsm.id);
  fsm.election = election::AwaitingReplies{now + params.timers.reply_wait};
  Message e;
  e.kind = MessageKind::Elect;
  e.sender = fsm.id;
  e.priority = fsm.priority;
  e.serve_time = fsm.attrs.serve_time;
  e.hop_distance = 0;
  return e;
}

std::optional<Message> on_receive_elect(const NodeFsm& fsm, const Message& msg) {
  if (msg.sender == fsm.id || fsm.priority < msg.priority) return std::nullopt;
  Message s;
  s.kind = MessageKind::Stop;
  s.sender = fsm.id;
  s.priority = fsm.priority;
  s.serve_time = fsm.attrs.serve_time;
  return s;
}

void note_elect_heard(NodeFsm& fsm, int sender) {
  if (auto* wait = std::get_if<election::AwaitingHigherElect>(&fsm.election)) {
    if (wait->expected == sender) fsm.election = election::Idle{};
  }
}

ElectionOutcome on_t2_expiry(NodeFsm& fsm, std::span<const Message> replies, double now,
                             const ProtocolParams& params) {
  const Message* best = nullptr;
  for (const Message& r : replies) {
    if (r.kind != MessageKind::Stop || r.serve_time >= fsm.attrs.serve_time) continue;
    // Most deserving replier: least served, then highest priority, then lowest id.
    if (!best || std::make_tuple(r.serve_time, -r.priority, r.sender) <
                     std::make_tuple(best->serve_time, -best->priority, best->sender)) {
      best = &r;
    }
  }
  if (best) {
    const double deadline = now + params.timers.higher_wait;
    fsm.election = election::AwaitingHigherElect{deadline, best->sender};
    return Withdraw{best->sender, deadline};
  }
  return DeclareHead{declare_head(fsm, now)};
}

Message on_t3_expiry(NodeFsm& fsm, double now, const ProtocolParams& params) {
  fsm.election = election::Idle{};
  return start_elect_me(fsm, now, params);
}

Message declare_head(NodeFsm& fsm, double now) {
  fsm.role = Role::ClusterHead;
  fsm.current_ch = fsm.id;
  fsm.hop_to_ch = 0;
  fsm.serve_started_at = now;
  fsm.election = election::Idle{};
  fsm.join_deadline.reset();
  fsm.join_clusters.clear();
  fsm.head_heard_at = now;
  fsm.head_energy = fsm.attrs.battery;
  return head_beacon(fsm);
}

Message head_beacon(const NodeFsm& fsm) {
  Message m;
  m.kind = MessageKind::IAmHead;
  m.sender = fsm.id;
  m.priority = fsm.priority;
  m.serve_time = fsm.attrs.serve_time;
  m.hop_distance = 0;
  m.residual_energy = fsm.attrs.battery;
  return m;
}

std::optional<Message> on_receive_iamc(NodeFsm& fsm, const Message& msg, double now,
                                       const ProtocolParams& params) {
  if (msg.sender == fsm.id) return std::nullopt;
  const int hops = msg.hop_distance.value_or(1);
  if (hops > params.thresholds.max_hops) return std::nullopt;
  const double energy = msg.residual_energy.value_or(0.0);
  fsm.iamc_sources[msg.sender] = HeadSighting{hops, now, energy};

  if (fsm.role == Role::ClusterHead) {
    const bool tie = msg.priority == fsm.priority && msg.serve_time == fsm.attrs.serve_time;
    if (tie && msg.sender < fsm.id) {
      Message q = quit_as_head(fsm, now, params);
      join_head(fsm, msg.sender, hops, now, energy);
      update_role(fsm);
      return q;
    }
    return std::nullopt;
  }

  if (fsm.current_ch == msg.sender) {
    fsm.hop_to_ch = hops;
    fsm.head_heard_at = now;
    fsm.head_energy = energy;
  } else if (!fsm.current_ch) {
    join_head(fsm, msg.sender, hops, now, energy);
  }
  update_role(fsm);
  return std::nullopt;
}

bool on_receive_quit(NodeFsm& fsm, const Message& msg, double now, const ProtocolParams& params) {
  if (msg.sender == fsm.id) return false;
  if (fsm.role != Role::ClusterHead && fsm.current_ch == msg.sender) {
    return lose_head(fsm, now, params);
  }
  fsm.iamc_sources.erase(msg.sender);
  fsm.join_clusters.erase(msg.sender);
  update_role(fsm);
  return false;
}

std::optional<Message> ch_tick(NodeFsm& fsm, double now, const ProtocolParams& params) {
  if (fsm.role != Role::ClusterHead) return std::nullopt;
  const double served = now - fsm.serve_started_at.value_or(now);
  if (served >= params.timers.serve_slot || fsm.attrs.battery < params.thresholds.battery_quit) {
    return quit_as_head(fsm, now, params);
  }
  return std::nullopt;
}

Message boot_join(NodeFsm& fsm, double now, const ProtocolParams& params) {
  fsm.join_deadline = now + params.timers.join_wait;
  Message m;
  m.kind = MessageKind::Solicit;
  m.sender = fsm.id;
  m.priority = fsm.priority;
  m.serve_time = fsm.attrs.serve_time;
  return m;
}

std::optional<Message> on_receive_solicit(const NodeFsm& fsm, const Message& msg) {
  if (msg.sender == fsm.id) return std::nullopt;
  Message r;
  r.kind = MessageKind::SolicitReply;
  r.sender = fsm.id;
  r.priority = fsm.priority;
  r.serve_time = fsm.attrs.serve_time;
  if (fsm.role == Role::ClusterHead) {
    r.cluster_head = fsm.id;
    r.hop_distance = 1;
    r.residual_energy = fsm.attrs.battery;
    return r;
  }
  if (fsm.current_ch && fsm.hop_to_ch) {
    r.cluster_head = *fsm.current_ch;
    r.hop_distance = *fsm.hop_to_ch + 1;
    r.residual_energy = fsm.head_energy;
    return r;
  }
  return std::nullopt;
}

JoinOutcome on_join_timeout(NodeFsm& fsm, std::span<const Message> replies, double now,
                            const ProtocolParams& params) {
  fsm.join_deadline.reset();
  std::set<int> clusters;
  std::set<int> repliers;
  const Message* best = nullptr;
  for (const Message& r : replies) {
    if (r.kind != MessageKind::SolicitReply || !r.cluster_head || !r.hop_distance) continue;
    clusters.insert(*r.cluster_head);
    repliers.insert(r.sender);
    if (*r.hop_distance > params.thresholds.max_hops) continue;
    if (r.residual_energy.value_or(0.0) < params.thresholds.join_energy) continue;
    if (!best || std::make_pair(*r.hop_distance, *r.cluster_head) <
                     std::make_pair(*best->hop_distance, *best->cluster_head)) {
      best = &r;
    }
  }
  if (!best) return DeclareHead{declare_head(fsm, now)};

  const int head = *best->cluster_head;
  const int hops = *best->hop_distance;
  join_head(fsm, head, hops, now, best->residual_energy.value_or(0.0));
  if (clusters.size() >= 2) fsm.join_clusters = clusters;
  update_role(fsm);

  Message accept;
  accept.kind = MessageKind::Accept;
  accept.sender = fsm.id;
  accept.priority = fsm.priority;
  accept.serve_time = fsm.attrs.serve_time;
  accept.cluster_head = head;
  std::vector<int> notify(repliers.begin(), repliers.end());
  if (clusters.size() >= 2) return JoinAsGateway{head, hops, accept, std::move(notify)};
  return Join{head, hops, accept, std::move(notify)};
}

void refresh_priority(NodeFsm& fsm, double now, int degree, const ProtocolParams& params) {
  fsm.attrs.single_hop_count = degree;
  fsm.last_refresh = now;
  if (in_cooldown(fsm, now)) {
    fsm.priority = 0.0;
    return;
  }
  fsm.priority = compute_priority(fsm.attrs, params.weights, params.thresholds.ns_threshold);
}

bool expire_sightings(NodeFsm& fsm, double now, const ProtocolParams& params) {
  const double horizon = now - params.liveness_window();
  for (auto it = fsm.iamc_sources.begin(); it != fsm.iamc_sources.end();) {
    if (it->second.heard_at < horizon && it->first != fsm.current_ch) {
      it = fsm.iamc_sources.erase(it);
    } else {
      ++it;
    }
  }
  if (fsm.role != Role::ClusterHead && fsm.current_ch && fsm.head_heard_at < horizon) {
    return lose_head(fsm, now, params);
  }
  update_role(fsm);
  return false;
}

}  // namespace khopnet
