#include <doctest.h>

#include "khopnet/error.hpp"
#include "khopnet/protocol.hpp"
#include "oracles.hpp"

using namespace khopnet;

namespace {

NodeFsm node(int id, double priority, double serve) {
  NodeFsm f;
  f.id = id;
  f.priority = priority;
  f.attrs.serve_time = serve;
  return f;
}

Message msg(MessageKind kind, int sender, double priority, double serve, int hops = 1) {
  Message m;
  m.kind = kind;
  m.sender = sender;
  m.priority = priority;
  m.serve_time = static_cast<float>(serve);
  m.hop_distance = hops;
  return m;
}

}  // namespace

TEST_SUITE("protocol") {

TEST_CASE("priority formula") {
  NodeAttributes a{0.8, 4, 4, 1, 5, 7};
  CHECK(compute_priority(a, {}, 10) == doctest::Approx(18.4).epsilon(1e-12));
  a = {0.25, 1, 10, 1, 7, 12};
  CHECK(compute_priority(a, {}, 10) == doctest::Approx(33.75).epsilon(1e-12));
  a = {0.6, 6, 3, 2, 10, 5};
  CHECK(compute_priority(a, {}, 10) == doctest::Approx(22.4667).epsilon(1e-5));
}

TEST_CASE("single-hop count above the threshold is penalized") {
  CHECK(effective_ns(3, 5) == 3);
  CHECK(effective_ns(5, 5) == 5);
  CHECK(effective_ns(6, 5) == -6);
  NodeAttributes a{1, 1, 1, 12, 1, 0};
  CHECK(compute_priority(a, {}, 10) ==
        doctest::Approx(oracle::priority(1, 1, 1, 12, 1, 10)));
}

TEST_CASE("mobility is floored") {
  NodeAttributes a{0, 0, 0, 0, 0, 0};
  PriorityWeights w{0, 4, 0, 0, 0};
  CHECK(compute_priority(a, w, 10) == doctest::Approx(400));
}

TEST_CASE("elect-me is refused during cooldown") {
  auto f = node(1, 10, 0);
  f.cooldown_until = 30;
  CHECK_THROWS_AS(start_elect_me(f, 10, {}), CooldownActive);
  const auto e = start_elect_me(f, 30, {});
  CHECK(e.kind == MessageKind::Elect);
  CHECK(std::holds_alternative<election::AwaitingReplies>(f.election));
}

TEST_CASE("only equal or higher priority replies S") {
  auto f = node(1, 20, 3);
  CHECK(on_receive_elect(f, msg(MessageKind::Elect, 2, 20, 0)));
  CHECK(on_receive_elect(f, msg(MessageKind::Elect, 2, 19, 0)));
  CHECK_FALSE(on_receive_elect(f, msg(MessageKind::Elect, 2, 21, 0)));
  const auto s = on_receive_elect(f, msg(MessageKind::Elect, 2, 1, 0));
  CHECK(s->priority == 20);
  CHECK(s->serve_time == 3);
}

TEST_CASE("T2 expiry withdraws only for a less-served replier") {
  ProtocolParams p;
  auto f = node(1, 10, 7);
  start_elect_me(f, 0, p);
  std::vector<Message> replies{msg(MessageKind::Stop, 4, 30, 9), msg(MessageKind::Stop, 3, 20, 5),
                               msg(MessageKind::Stop, 2, 25, 5)};
  auto out = on_t2_expiry(f, replies, 2, p);
  REQUIRE(std::holds_alternative<Withdraw>(out));
  CHECK(std::get<Withdraw>(out).awaited == 2);
  CHECK(std::get<Withdraw>(out).deadline == 2 + p.timers.higher_wait);

  auto g = node(1, 10, 7);
  start_elect_me(g, 0, p);
  std::vector<Message> more_served{msg(MessageKind::Stop, 4, 30, 9)};
  out = on_t2_expiry(g, more_served, 2, p);
  REQUIRE(std::holds_alternative<DeclareHead>(out));
  CHECK(g.role == Role::ClusterHead);
  CHECK(std::get<DeclareHead>(out).announce.kind == MessageKind::IAmHead);

  auto h = node(1, 10, 7);
  start_elect_me(h, 0, p);
  CHECK(std::holds_alternative<DeclareHead>(on_t2_expiry(h, {}, 2, p)));
}

TEST_CASE("awaited E settles the T3 wait") {
  ProtocolParams p;
  auto f = node(1, 10, 7);
  start_elect_me(f, 0, p);
  std::vector<Message> r{msg(MessageKind::Stop, 2, 20, 1)};
  on_t2_expiry(f, r, 2, p);
  note_elect_heard(f, 3);
  CHECK_FALSE(f.idle());
  note_elect_heard(f, 2);
  CHECK(f.idle());
}

TEST_CASE("IAMC membership and gateways") {
  ProtocolParams p;
  p.thresholds.max_hops = 2;
  auto f = node(5, 1, 0);
  auto iamc = msg(MessageKind::IAmHead, 1, 30, 0, 2);
  iamc.residual_energy = 0.9;
  on_receive_iamc(f, iamc, 1, p);
  CHECK(f.current_ch == 1);
  CHECK(f.role == Role::Ordinary);
  CHECK(f.hop_to_ch == 2);
  on_receive_iamc(f, msg(MessageKind::IAmHead, 2, 30, 0, 3), 1, p);
  CHECK(f.role == Role::Ordinary);
  on_receive_iamc(f, msg(MessageKind::IAmHead, 2, 30, 0, 1), 1, p);
  CHECK(f.role == Role::Gateway);
  CHECK(f.current_ch == 1);
}

TEST_CASE("tied heads: the higher id resigns") {
  ProtocolParams p;
  auto low = node(1, 20, 4);
  auto high = node(2, 20, 4);
  declare_head(low, 0);
  declare_head(high, 0);
  CHECK_FALSE(on_receive_iamc(low, msg(MessageKind::IAmHead, 2, 20, 4), 1, p));
  const auto q = on_receive_iamc(high, msg(MessageKind::IAmHead, 1, 20, 4), 1, p);
  REQUIRE(q);
  CHECK(q->kind == MessageKind::Quit);
  CHECK(high.current_ch == 1);
  CHECK(high.role == Role::Ordinary);
  CHECK(in_cooldown(high, 1));
}

TEST_CASE("serve slot and battery end a head's term") {
  ProtocolParams p;
  auto f = node(1, 20, 2);
  declare_head(f, 0);
  CHECK_FALSE(ch_tick(f, 599, p));
  const auto q = ch_tick(f, 600, p);
  REQUIRE(q);
  CHECK(q->priority == 0);
  CHECK(q->serve_time == doctest::Approx(12));
  CHECK(f.priority == 0);
  CHECK(*f.cooldown_until == 630);
  refresh_priority(f, 629, 3, p);
  CHECK(f.priority == 0);
  refresh_priority(f, 630, 3, p);
  CHECK(f.priority > 0);

  auto g = node(2, 20, 0);
  declare_head(g, 0);
  g.attrs.battery = 0.05;
  CHECK(ch_tick(g, 1, p));
}

TEST_CASE("quit orphans members or falls back to another head") {
  ProtocolParams p;
  auto f = node(5, 1, 0);
  on_receive_iamc(f, msg(MessageKind::IAmHead, 1, 30, 0), 0, p);
  CHECK(on_receive_quit(f, msg(MessageKind::Quit, 1, 0, 10), 5, p));
  CHECK(f.role == Role::Unclustered);

  auto g = node(6, 1, 0);
  on_receive_iamc(g, msg(MessageKind::IAmHead, 1, 30, 0), 0, p);
  on_receive_iamc(g, msg(MessageKind::IAmHead, 2, 30, 0), 0, p);
  CHECK_FALSE(on_receive_quit(g, msg(MessageKind::Quit, 1, 0, 10), 5, p));
  CHECK(g.current_ch == 2);
}

TEST_CASE("no-head detection") {
  auto f = node(1, 1, 0);
  CHECK(detect_no_ch(f, true));
  f.current_ch = 2;
  f.role = Role::Ordinary;
  CHECK_FALSE(detect_no_ch(f, true));
  CHECK(detect_no_ch(f, false));
  f.role = Role::ClusterHead;
  CHECK_FALSE(detect_no_ch(f, false));
}

TEST_CASE("boot join picks the nearest energetic head") {
  ProtocolParams p;
  p.thresholds.max_hops = 2;
  auto f = node(9, 1, 0);
  boot_join(f, 0, p);
  auto reply = [](int sender, int ch, int hops, double energy) {
    Message m;
    m.kind = MessageKind::SolicitReply;
    m.sender = sender;
    m.cluster_head = ch;
    m.hop_distance = hops;
    m.residual_energy = energy;
    return m;
  };
  std::vector<Message> replies{reply(1, 7, 1, 0.1), reply(2, 4, 2, 0.9), reply(3, 3, 2, 0.9)};
  auto out = on_join_timeout(f, replies, 2, p);
  REQUIRE(std::holds_alternative<JoinAsGateway>(out));
  CHECK(std::get<JoinAsGateway>(out).ch == 3);
  CHECK(std::get<JoinAsGateway>(out).notify == std::vector<int>{1, 2, 3});
  CHECK(f.role == Role::Gateway);

  auto g = node(8, 1, 0);
  boot_join(g, 0, p);
  std::vector<Message> single{reply(1, 4, 1, 0.9), reply(2, 4, 2, 0.9)};
  out = on_join_timeout(g, single, 2, p);
  REQUIRE(std::holds_alternative<Join>(out));
  CHECK(g.role == Role::Ordinary);

  auto h = node(7, 1, 0);
  boot_join(h, 0, p);
  out = on_join_timeout(h, {}, 2, p);
  CHECK(std::holds_alternative<DeclareHead>(out));
  CHECK(h.role == Role::ClusterHead);
}

TEST_CASE("solicit replies report the head's energy") {
  auto member = node(3, 1, 0);
  member.current_ch = 1;
  member.hop_to_ch = 1;
  member.head_energy = 0.7;
  member.role = Role::Ordinary;
  const auto r = on_receive_solicit(member, msg(MessageKind::Solicit, 4, 0, 0));
  REQUIRE(r);
  CHECK(r->cluster_head == 1);
  CHECK(r->hop_distance == 2);
  CHECK(r->residual_energy == 0.7);
  CHECK_FALSE(on_receive_solicit(node(5, 1, 0), msg(MessageKind::Solicit, 4, 0, 0)));
}

}
