#include <doctest.h>

#include "khopnet/engine.hpp"
#include "khopnet/error.hpp"
#include "oracles.hpp"

using namespace khopnet;

namespace {

Topology line(int n, double spacing) {
  Topology t;
  t.tag = "line";
  t.kind = "BACKBONE";
  for (int i = 0; i < n; ++i) t.nodes.push_back({i, {i * spacing, 0, 0}, {}, 0});
  return t;
}

Topology random_topology(std::size_t n, double area, std::uint64_t seed) {
  TopologySpec spec;
  spec.nodes = n;
  spec.width = spec.height = area;
  spec.seed = seed;
  return generate_topology(spec);
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("broadcast fans out and counts once") {
  VisibilityGraph g(4);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  g.add_edge(0, 3);
  Network net(g, EnergyModel{}, 0.5);
  EventQueue q(1);
  Frame f;
  f.msg.kind = MessageKind::Elect;
  CHECK(net.broadcast(0, f, 0, q) == 3);
  CHECK(q.size() == 3);
  CHECK(net.ledgers()[0].bcast_msgs_tx == 1);
  CHECK(net.ledgers()[0].bcast_bytes_tx == encoded_size(f.msg));
  CHECK(q.top().time == 0.5);

  Network lonely(VisibilityGraph(1), EnergyModel{}, 0.5);
  CHECK(lonely.broadcast(0, f, 0, q) == 0);
  CHECK(lonely.ledgers()[0].bcast_msgs_tx == 1);
}

TEST_CASE("unicast delivers, drops, and retries once") {
  VisibilityGraph g(3);
  g.add_edge(0, 1);
  Network net(g, EnergyModel{}, 0.001);
  EventQueue q(1);
  Frame f;
  CHECK(net.unicast(0, 1, f, 0, q));
  CHECK_FALSE(net.unicast(0, 2, f, 0, q));
  CHECK_THROWS_AS(net.unicast(0, 7, f, 0, q), UnknownDest);
  CHECK(net.ledgers()[0].ucast_msgs_tx == 2);
  CHECK(net.ledgers()[2].ucast_msgs_rx == 0);
  int drops = 0;
  for (const auto& ev : net.trace()) drops += ev.action == TraceAction::Drop;
  CHECK(drops == 1);
  CHECK(q.size() == 2);  // one delivery and one retry
}

TEST_CASE("energy is charged per byte") {
  EnergyLedger l;
  EnergyModel m{2e-6, 1e-6, 0};
  charge_energy(l, 10, Direction::Tx, m);
  charge_energy(l, 10, Direction::Rx, m);
  CHECK(l.consumed_energy == doctest::Approx(30e-6));
}

TEST_CASE("same-time events are ordered by a seeded shuffle") {
  auto order = [](std::uint64_t seed) {
    EventQueue q(seed);
    for (int i = 0; i < 20; ++i) q.schedule(1.0, event::Timer{i, TimerKind::Boot, 0});
    q.schedule(0.5, event::MobilityStep{});
    std::vector<int> out;
    CHECK(std::holds_alternative<event::MobilityStep>(q.pop().payload));
    while (!q.empty()) out.push_back(std::get<event::Timer>(q.pop().payload).node);
    return out;
  };
  CHECK(order(3) == order(3));
  CHECK(order(3) != order(4));
}

TEST_CASE("runs are deterministic") {
  const auto t = random_topology(60, 1200, 5);
  SimConfig cfg;
  cfg.seed = 11;
  cfg.protocol.thresholds.max_hops = 2;
  const auto a = run(cfg, t);
  const auto b = run(cfg, t);
  CHECK(format_trace(a.trace) == format_trace(b.trace));
  CHECK(a.ledgers == b.ledgers);
  cfg.seed = 12;
  CHECK(format_trace(run(cfg, t).trace) != format_trace(a.trace));
}

TEST_CASE("ledgers match a replay of the trace") {
  const auto t = random_topology(40, 1000, 2);
  SimConfig cfg;
  cfg.protocol.thresholds.max_hops = 2;
  const auto r = run(cfg, t);
  const auto tally = oracle::replay_tally(r.trace, t.count());
  for (std::size_t i = 0; i < t.count(); ++i) {
    CHECK(tally[i].ucast_msgs_tx == r.ledgers[i].ucast_msgs_tx);
    CHECK(tally[i].ucast_bytes_tx == r.ledgers[i].ucast_bytes_tx);
    CHECK(tally[i].bcast_msgs_tx == r.ledgers[i].bcast_msgs_tx);
    CHECK(tally[i].bcast_bytes_tx == r.ledgers[i].bcast_bytes_tx);
    CHECK(tally[i].ucast_msgs_rx == r.ledgers[i].ucast_msgs_rx);
    CHECK(tally[i].bcast_bytes_rx == r.ledgers[i].bcast_bytes_rx);
  }
  const auto totals = traffic_totals(r.ledgers);
  CHECK(totals.packets == r.packets);
  CHECK(totals.bytes == r.bytes);
}

TEST_CASE("an isolated node declares itself head during the join phase") {
  auto t = line(3, 100);
  t.nodes.push_back({3, {5000, 5000, 0}, {}, 0});
  SimConfig cfg;
  const auto r = run(cfg, t);
  CHECK(r.nodes[3].role == Role::ClusterHead);
  REQUIRE(r.phases.size() == 2);
  CHECK(r.phases[0].name == "join");
  CHECK(r.phases[0].end <= cfg.boot_window + 1);
}

TEST_CASE("join phase that cannot finish times out") {
  SimConfig cfg;
  cfg.duration = 1;
  cfg.boot_window = 100;
  try {
    run(cfg, line(5, 100));
    FAIL("expected PhaseTimeout");
  } catch (const PhaseTimeout& e) {
    CHECK(e.phase() == "join");
    CHECK_FALSE(e.pending().empty());
  }
}

TEST_CASE("zero duration leaves everyone unclustered") {
  SimConfig cfg;
  cfg.duration = 0;
  const auto r = run(cfg, line(4, 100));
  CHECK(r.trace.empty());
  for (const auto& n : r.nodes) CHECK(n.role == Role::Unclustered);
}

TEST_CASE("heads rotate after the serve slot") {
  SimConfig cfg;
  cfg.boot_join = false;
  cfg.duration = 2000;
  cfg.protocol.thresholds.max_hops = 2;
  const auto r = run(cfg, line(3, 200));
  int quits = 0;
  for (const auto& ev : r.trace) {
    quits += ev.action == TraceAction::Transmit && ev.msg.kind == MessageKind::Quit &&
             ev.from == ev.msg.sender;
  }
  CHECK(quits >= 2);
  int heads = 0;
  for (const auto& n : r.nodes) heads += n.role == Role::ClusterHead;
  CHECK(heads <= 1);
}

TEST_CASE("mobile nodes keep moving and metrics stay sane") {
  TopologySpec spec;
  spec.nodes = 30;
  spec.width = spec.height = 800;
  spec.with_motion = true;
  spec.min_speed = 1;
  spec.max_speed = 10;
  spec.seed = 4;
  const auto t = generate_topology(spec);
  SimConfig cfg;
  const auto r = run(cfg, t);
  CHECK(r.final_topology.nodes != t.nodes);
  CHECK(r.snapshot.visibility == build_visibility_graph(r.final_topology, cfg.radio));
}

TEST_CASE("trace text lists transmissions and drops") {
  const auto r = run(SimConfig{}, line(2, 100));
  const auto text = format_trace(r.trace);
  CHECK(text.find("SOLICIT") != std::string::npos);
  CHECK(text.find("Receive") == std::string::npos);
}

}
