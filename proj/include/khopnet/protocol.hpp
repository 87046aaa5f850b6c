#pragma once

#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "khopnet/message.hpp"

namespace khopnet {

/// Lower clamp for the mobility attribute so 1/M stays finite.
inline constexpr double kMinMobility = 0.01;

struct NodeAttributes {
  double battery = 1.0;          // fraction of full charge, [0, 1]
  double mobility = kMinMobility;  // m/s, >= kMinMobility
  double memory = 0.0;           // capacity score, [0, 10]
  int single_hop_count = 0;      // 1-hop neighbors
  double processing = 0.0;       // processing score, [0, 10]
  double serve_time = 0.0;       // cumulative minutes served as cluster head

  friend bool operator==(const NodeAttributes&, const NodeAttributes&) = default;
};

struct PriorityWeights {
  int w1 = 3;  // battery
  int w2 = 4;  // 1 / mobility
  int w3 = 2;  // memory
  int w4 = 2;  // single-hop count
  int w5 = 1;  // processing
};

/// All values in simulated seconds.
struct ProtocolTimers {
  double refresh = 60.0;      // T1: priority refresh and head beacon period
  double reply_wait = 2.0;    // T2: collect S replies
  double higher_wait = 4.0;   // T3: wait for the higher node's own E
  double serve_slot = 600.0;  // T4: longest continuous head service
  double cooldown = 30.0;     // T5: priority forced to 0 after quitting
  double join_wait = 2.0;     // boot solicitation timeout
};

struct ProtocolThresholds {
  int ns_threshold = 10;       // single-hop counts above this are penalized
  double join_energy = 0.2;    // minimum head energy accepted at join
  double battery_quit = 0.10;  // head abdicates below this battery fraction
  int max_hops = 1;            // K
};

struct ProtocolParams {
  PriorityWeights weights;
  ProtocolTimers timers;
  ProtocolThresholds thresholds;

  /// Silence after which a head is presumed gone: two refresh periods.
  double liveness_window() const { return 2.0 * timers.refresh; }
};

enum class Role { ClusterHead, Gateway, Ordinary, Unclustered };
std::string_view to_string(Role role);

namespace election {
struct Idle {
  friend bool operator==(const Idle&, const Idle&) = default;
};
struct AwaitingReplies {
  double deadline = 0.0;
  friend bool operator==(const AwaitingReplies&, const AwaitingReplies&) = default;
};
struct AwaitingHigherElect {
  double deadline = 0.0;
  int expected = 0;
  friend bool operator==(const AwaitingHigherElect&, const AwaitingHigherElect&) = default;
};
}  // namespace election

using ElectionState =
    std::variant<election::Idle, election::AwaitingReplies, election::AwaitingHigherElect>;

/// Last IAMC heard from a cluster head.
struct HeadSighting {
  int hops = 0;
  double heard_at = 0.0;
  double energy = 0.0;
};

struct NodeFsm {
  int id = 0;
  Role role = Role::Unclustered;
  NodeAttributes attrs;
  double priority = 0.0;
  std::optional<int> current_ch;
  std::optional<int> hop_to_ch;
  ElectionState election = election::Idle{};
  std::optional<double> serve_started_at;
  std::map<int, HeadSighting> iamc_sources;
  std::set<int> join_clusters;  // distinct heads named by join-time replies
  std::optional<double> cooldown_until;
  std::optional<double> join_deadline;
  double head_heard_at = 0.0;
  double head_energy = 0.0;  // last known battery of current_ch
  double last_refresh = -std::numeric_limits<double>::infinity();

  bool idle() const { return std::holds_alternative<election::Idle>(election); }
  bool clustered() const { return current_ch.has_value(); }
};

int effective_ns(int ns, int threshold);

double compute_priority(const NodeAttributes& attrs, const PriorityWeights& weights,
                        int ns_threshold);

bool in_cooldown(const NodeFsm& fsm, double now);

/// True when the node has no usable cluster head.
bool detect_no_ch(const NodeFsm& fsm, bool heard_ch_recently);

/// Opens an elect-me cycle. Throws CooldownActive during T5.
Message start_elect_me(NodeFsm& fsm, double now, const ProtocolParams& params);

/// S reply when this node's priority is >= the initiator's.
std::optional<Message> on_receive_elect(const NodeFsm& fsm, const Message& msg);

/// Settles a pending T3 wait when the awaited node's E arrives.
void note_elect_heard(NodeFsm& fsm, int sender);

struct Withdraw {
  int awaited = 0;
  double deadline = 0.0;
};
struct DeclareHead {
  Message announce;
};
using ElectionOutcome = std::variant<Withdraw, DeclareHead>;

ElectionOutcome on_t2_expiry(NodeFsm& fsm, std::span<const Message> replies, double now,
                             const ProtocolParams& params);

Message on_t3_expiry(NodeFsm& fsm, double now, const ProtocolParams& params);

/// Records the announcing head and joins it when unclustered. A head that
/// loses the equal-priority, equal-serve-time tie to a lower id resigns; the
/// returned Q must then be flooded.
std::optional<Message> on_receive_iamc(NodeFsm& fsm, const Message& msg, double now,
                                       const ProtocolParams& params);

/// Handles a head's Q. Returns true when the node was left without a head.
bool on_receive_quit(NodeFsm& fsm, const Message& msg, double now, const ProtocolParams& params);

/// Head housekeeping: abdicates with a Q once T4 is reached or the battery
/// drops below the quit fraction.
std::optional<Message> ch_tick(NodeFsm& fsm, double now, const ProtocolParams& params);

Message boot_join(NodeFsm& fsm, double now, const ProtocolParams& params);

std::optional<Message> on_receive_solicit(const NodeFsm& fsm, const Message& msg);

struct Join {
  int ch = 0;
  int hops = 0;
  Message accept;
  std::vector<int> notify;  // repliers, ascending
};
struct JoinAsGateway {
  int ch = 0;
  int hops = 0;
  Message accept;
  std::vector<int> notify;
};
using JoinOutcome = std::variant<Join, DeclareHead, JoinAsGateway>;

JoinOutcome on_join_timeout(NodeFsm& fsm, std::span<const Message> replies, double now,
                            const ProtocolParams& params);

/// Recomputes the priority with NS taken from the current degree. Stays 0
/// during cooldown.
void refresh_priority(NodeFsm& fsm, double now, int degree, const ProtocolParams& params);

/// Drops head sightings older than the liveness window and lets go of a silent
/// head. Returns true when the node was left without a head.
bool expire_sightings(NodeFsm& fsm, double now, const ProtocolParams& params);

/// The periodic IAMC a serving head floods.
Message head_beacon(const NodeFsm& fsm);

/// Makes the node a cluster head and returns its IAMC.
Message declare_head(NodeFsm& fsm, double now);

}  // namespace khopnet
