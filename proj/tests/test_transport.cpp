// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "avgrid/errors.hpp"
#include "avgrid/transport/network.hpp"
#include "avgrid/transport/routing.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace avgrid;
using namespace avgrid::transport;

namespace {

// 1 -> 2 -> 4 (cost 6) against 1 -> 3 -> 4 (cost 5).
TransportNetwork diamond() {
  return TransportNetwork(4, {Edge{1, 2, 1.0}, Edge{1, 3, 4.0}, Edge{2, 4, 5.0},
                              Edge{3, 4, 1.0}});
}

}  // namespace

TEST_SUITE_BEGIN("transport");

TEST_CASE("network validation") {
  CHECK_THROWS_AS(TransportNetwork(2, {Edge{1, 1, 2.0}}), ValidationError);
  CHECK_THROWS_AS(TransportNetwork(2, {Edge{1, 3, 2.0}}), ValidationError);
  CHECK_THROWS_AS(TransportNetwork(2, {Edge{1, 2, 0.0}}), ValidationError);
  CHECK_THROWS_AS(TransportNetwork(2, {Edge{1, 2, -1.0}}), ValidationError);
  CHECK_THROWS_AS(TransportNetwork(2, {Edge{1, 2, 1.0}, Edge{1, 2, 2.0}}),
                  ValidationError);
  CHECK_THROWS_AS(TransportNetwork(2, {Edge{1, 2, 1.0}}, {5}), ValidationError);
}

TEST_CASE("routing model: single edge") {
  const TransportNetwork net(2, {Edge{1, 2, 3.0}});
  const milp::Model model = build_routing_model(net, 1, 2);
  CHECK(model.binary_variables().size() == 1);
  const milp::Solution s = milp::solve_milp(model);
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("routing model: diamond picks the cheaper branch") {
  const milp::Model model = build_routing_model(diamond(), 1, 4);
  const milp::Solution s = milp::solve_milp(model);
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("routing model: destination with only restricted inflow") {
  // Both edges into node 4 restricted: no feasible route.
  const TransportNetwork net(4, {Edge{1, 2, 1.0}, Edge{1, 3, 4.0},
                                 Edge{2, 4, 5.0}, Edge{3, 4, 1.0}},
                             {2, 3});
  const milp::Solution s = milp::solve_milp(build_routing_model(net, 1, 4));
  CHECK(s.status == milp::SolveStatus::Infeasible);
}

TEST_CASE("routing model rejects identical endpoints") {
  CHECK_THROWS_AS(build_routing_model(diamond(), 2, 2), ValidationError);
  CHECK_THROWS_AS(build_routing_model(diamond(), 0, 2), ValidationError);
}

TEST_CASE("shortest_path: identity, diamond, unreachable") {
  const TransportNetwork net = diamond();
  const auto self = shortest_path(net, 2, 2);
  REQUIRE(self.has_value());
  CHECK(self->total_cost == 0.0);
  CHECK(self->route.empty());

  const auto route = shortest_path(net, 1, 4);
  REQUIRE(route.has_value());
  CHECK(route->total_cost == 5.0);
  REQUIRE(route->route.size() == 2);
  CHECK(route->route[0].to == 3);
  CHECK(route->route[1].to == 4);

  CHECK(!shortest_path(net, 4, 1).has_value());
}

TEST_CASE("solve_route matches shortest_path on the diamond") {
  const TransportNetwork net = diamond();
  const auto milp_route = solve_route(net, 1, 4);
  const auto dijkstra_route = shortest_path(net, 1, 4);
  REQUIRE(milp_route.has_value());
  REQUIRE(dijkstra_route.has_value());
  CHECK(milp_route->total_cost == dijkstra_route->total_cost);
  REQUIRE(milp_route->route.size() == dijkstra_route->route.size());
  for (size_t i = 0; i < milp_route->route.size(); ++i) {
    CHECK(milp_route->route[i].from == dijkstra_route->route[i].from);
    CHECK(milp_route->route[i].to == dijkstra_route->route[i].to);
  }
}

TEST_CASE("solve_route: restriction on the only path means no route") {
  const TransportNetwork net(2, {Edge{1, 2, 3.0}}, {0});
  CHECK(!solve_route(net, 1, 2).has_value());
  CHECK(!shortest_path(net, 1, 2).has_value());
}

TEST_CASE("all_pairs_costs: diamond and a sink origin") {
  const TransportNetwork net = diamond();
  const CostTable table = all_pairs_costs(net, {1, 4});
  CHECK(table.at(0, 1) == 0.0);
  CHECK(table.at(0, 2) == 1.0);
  CHECK(table.at(0, 3) == 4.0);
  CHECK(table.at(0, 4) == 5.0);
  // Node 4 has no outgoing edges: everything else is unreachable.
  CHECK(table.at(1, 4) == 0.0);
  CHECK(!table.reachable(1, 1));
  CHECK(!table.reachable(1, 2));
  CHECK(!table.reachable(1, 3));
}

TEST_CASE("property: milp route cost equals dijkstra on random digraphs") {
  std::mt19937 rng(404);
  std::uniform_real_distribution<double> pick(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    TransportNetwork net = testutil::random_strongly_connected(rng, 2, 12);
    // Restrict a few edges; connectivity may break, which both sides must
    // then agree on.
    std::vector<int> restricted;
    for (int id = 0; id < net.edge_count(); ++id) {
      if (pick(rng) < 0.15) restricted.push_back(id);
    }
    net = TransportNetwork(net.node_count(), net.edges(), restricted);

    std::uniform_int_distribution<int> node(1, net.node_count());
    const int s = node(rng);
    int e = node(rng);
    if (s == e) e = s % net.node_count() + 1;

    const auto via_milp = solve_route(net, s, e);
    const auto via_dijkstra = shortest_path(net, s, e);
    REQUIRE(via_milp.has_value() == via_dijkstra.has_value());
    if (via_milp.has_value()) {
      CHECK(via_milp->total_cost == via_dijkstra->total_cost);  // exact
      CHECK(testutil::is_simple_path(*via_milp));
      CHECK(testutil::is_simple_path(*via_dijkstra));
      for (const Edge& edge : via_milp->route) {
        CHECK(!net.is_restricted(net.find_edge(edge.from, edge.to)));
      }
    }
  }
}

TEST_CASE("property: cost table satisfies the triangle inequality") {
  std::mt19937 rng(808);
  for (int trial = 0; trial < 8; ++trial) {
    const TransportNetwork net = testutil::random_strongly_connected(rng, 2, 10);
    std::vector<int> everyone(net.node_count());
    std::iota(everyone.begin(), everyone.end(), 1);
    const CostTable table = all_pairs_costs(net, everyone);
    for (int v = 0; v < net.node_count(); ++v) {
      CHECK(table.at(v, v + 1) == 0.0);  // diagonal
      for (int i = 1; i <= net.node_count(); ++i) {
        for (int k = 1; k <= net.node_count(); ++k) {
          const double direct = table.at(v, i);
          const double through = table.at(v, k) + table.at(k - 1, i);
          CHECK(direct <= through + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("transport parser: happy path and failures") {
  const std::string good =
      "# demo network\n"
      "transport v1\n"
      "4\n"
      "1 2 1\n"
      "1 3 4\n"
      "2 4 5\n"
      "3 4 1 restricted\n";
  const TransportNetwork net = parse_transport(good, "good");
  CHECK(net.node_count() == 4);
  CHECK(net.edge_count() == 4);
  CHECK(net.is_restricted(3));
  CHECK(net.restricted_ids() == std::vector<int>{3});

  CHECK_THROWS_AS(parse_transport("nodes 4\n", "bad"), ParseError);
  CHECK_THROWS_AS(parse_transport("transport v1\n2\n1 2 1\n1 2 2\n", "dup"),
                  ParseError);
  CHECK_THROWS_AS(parse_transport("transport v1\n2\n1 2 0\n", "zero"),
                  ParseError);
  CHECK_THROWS_AS(parse_transport("transport v1\n2\n1 2 1 closed\n", "flag"),
                  ParseError);
  CHECK_THROWS_AS(parse_transport("transport v1\n2\n1 2 1 restricted zzz\n",
                                  "extra"),
                  ParseError);
  CHECK_THROWS_AS(parse_transport("transport v1\n", "nocount"), ParseError);

  // Line numbers point at the offending row.
  try {
    parse_transport("transport v1\n2\n1 2 1\n1 2 2\n", "dup");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("with_closures restricts listed edges only") {
  const TransportNetwork net = diamond();
  const TransportNetwork closed = net.with_closures({{1, 3}});
  CHECK(closed.is_restricted(closed.find_edge(1, 3)));
  CHECK(!closed.is_restricted(closed.find_edge(1, 2)));
  // The cheap branch is gone; routing falls back to 1->2->4.
  const auto route = shortest_path(closed, 1, 4);
  REQUIRE(route.has_value());
  CHECK(route->total_cost == 6.0);
  CHECK_THROWS_AS(net.with_closures({{2, 3}}), ValidationError);
}

TEST_SUITE_END();
