#include <doctest.h>

#include "khopnet/error.hpp"
#include "khopnet/topology.hpp"
#include "oracles.hpp"

using namespace khopnet;

TEST_SUITE("topology") {

TEST_CASE("parse static and mobile rows") {
  const auto t = parse_topology(
      "coordS12N3\nBACKBONE\n# comment\n3\n0 0 0\n\n100 0 0 200 0 0 5\n0 300 0\n");
  CHECK(t.tag == "coordS12N3");
  CHECK(t.kind == "BACKBONE");
  REQUIRE(t.count() == 3);
  CHECK_FALSE(t.nodes[0].destination);
  REQUIRE(t.nodes[1].destination);
  CHECK(t.nodes[1].destination->x == 200.0);
  CHECK(t.nodes[1].speed == 5.0);
  CHECK(t.nodes[2].position.y == 300.0);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_topology("t\nBACKBONE\n3\n0 0 0\n1 1 1\n"), CountMismatch);
  CHECK_THROWS_AS(parse_topology("t\nBACKBONE\n1\n0 0\n"), ParseError);
  CHECK_THROWS_AS(parse_topology("t\nBACKBONE\n1\n0 zero 0\n"), ParseError);
  try {
    parse_topology("t\nBACKBONE\n2\n0 0 0\n1 1 1\n2 2 2\n");
    FAIL("expected CountMismatch");
  } catch (const CountMismatch& e) {
    CHECK(e.declared() == 2);
    CHECK(e.found() == 3);
  }
}

TEST_CASE("emit and parse round trip") {
  TopologySpec spec;
  spec.nodes = 25;
  spec.with_motion = true;
  spec.max_speed = 4;
  spec.seed = 9;
  const auto t = generate_topology(spec);
  CHECK(t.tag == "coordS9N25");
  CHECK(parse_topology(emit_topology(t)) == t);
  CHECK(generate_topology(spec) == t);
}

TEST_CASE("visibility uses an inclusive range") {
  Topology t;
  t.nodes = {{0, {0, 0, 0}, {}, 0}, {1, {250, 0, 0}, {}, 0}, {2, {500.5, 0, 0}, {}, 0}};
  const auto g = build_visibility_graph(t, RadioConfig{250});
  CHECK(g.adjacent(0, 1));
  CHECK(g.adjacent(1, 0));
  CHECK_FALSE(g.adjacent(1, 2));
  CHECK(g.edge_count() == 1);
  CHECK(build_visibility_graph(Topology{}, RadioConfig{}).size() == 0);
}

TEST_CASE("add_edge validates ids") {
  VisibilityGraph g(3);
  CHECK_THROWS_AS(g.add_edge(0, 3), UnknownNode);
  g.add_edge(2, 0);
  g.add_edge(0, 2);
  g.add_edge(1, 1);
  CHECK(g.edge_count() == 1);
  CHECK(g.degree(1) == 0);
}

TEST_CASE("k-hop sets match an all-pairs oracle") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto g = oracle::random_graph(15, 0.15, s);
    const auto dist = oracle::all_pairs(oracle::adjacency_matrix(g));
    for (int k = 0; k <= 3; ++k) {
      for (int v = 0; v < 15; ++v) {
        std::vector<int> want;
        for (int u = 0; u < 15; ++u) {
          if (dist[v][u] <= k) want.push_back(u);
        }
        CHECK(k_hop_set(g, v, k) == want);
      }
    }
  }
}

TEST_CASE("connectivity") {
  VisibilityGraph g(4);
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  CHECK_FALSE(is_connected(g));
  g.add_edge(1, 2);
  CHECK(is_connected(g));
  CHECK(hop_distances(g, 0) == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("mobility clamps at the destination") {
  Topology t;
  t.nodes = {{0, {0, 0, 0}, Vec3{10, 0, 0}, 4}};
  t = advance_mobility(t, 1);
  CHECK(t.nodes[0].position.x == doctest::Approx(4));
  t = advance_mobility(t, 2);
  CHECK(t.nodes[0].position.x == doctest::Approx(10));
  CHECK_FALSE(t.nodes[0].destination);
  CHECK(t.nodes[0].speed == 0.0);
}

TEST_CASE("topology file names") {
  CHECK(topology_file_name(4, 100) == "coordS4N100");
}

}
