// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "avgrid/dispatch/model.hpp"
#include "avgrid/dispatch/solve.hpp"
#include "avgrid/errors.hpp"
#include "avgrid/grid/opf.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace avgrid;
using namespace avgrid::dispatch;

namespace {

// Fleet helper with all nodes candidate and the given travel-cost row.
VehicleFleet make_fleet(std::string id, int origin, double p_min, double p_max,
                        double energy_cost, std::vector<double> travel_costs) {
  VehicleFleet f;
  f.id = std::move(id);
  f.origin = origin;
  f.p_min_mw = p_min;
  f.p_max_mw = p_max;
  f.energy_cost = energy_cost;
  f.travel_costs = std::move(travel_costs);
  f.excluded.assign(f.travel_costs.size(), 0);
  return f;
}

grid::GridCase two_bus(double gen_cost) {
  using namespace avgrid::grid;
  return GridCase("twobus", 1, {Bus{1, 0.0}, Bus{2, 50.0}},
                  {Line{1, 2, 10.0, -100.0, 100.0}},
                  {Generator{1, 0.0, 100.0, gen_cost}});
}

}  // namespace

TEST_SUITE_BEGIN("dispatch");

TEST_CASE("mccormick envelope: binary factor makes it exact") {
  // Free-standing model: p in [pmin,pmax], z binary, y enveloped. For each
  // grid point (p0, z0), minimizing and maximizing y both land on p0*z0.
  const double p_min = 0.0;
  const double p_max = 20.0;
  for (int step = 0; step < 50; ++step) {
    const double p0 = p_min + (p_max - p_min) * step / 49.0;
    for (int z0 = 0; z0 <= 1; ++z0) {
      for (int direction = 0; direction < 2; ++direction) {
        milp::Model m;
        const int p = m.add_continuous("p", p0, p0, 0.0);
        const int z = m.add_variable("z", z0, z0, milp::VarKind::Binary, 0.0);
        const int y =
            m.add_continuous("y", std::min(p_min, 0.0), p_max,
                             direction == 0 ? 1.0 : -1.0);
        for (milp::Constraint& c :
             mccormick_envelope(p, z, y, p_min, p_max)) {
          m.add_constraint(c.name, std::move(c.coeffs), c.sense, c.rhs);
        }
        const milp::Solution s = milp::solve_lp(m);
        REQUIRE(s.optimal());
        CHECK(std::abs(s.values[y] - p0 * z0) <= 1e-9);
      }
    }
  }
}

TEST_CASE("mccormick envelope rejects inverted bounds") {
  CHECK_THROWS_AS(mccormick_envelope(0, 1, 2, 5.0, 4.0), ValidationError);
}

TEST_CASE("dispatch model: no vehicles reduces to the baseline") {
  const grid::GridCase gc = two_bus(10.0);
  const DispatchModel dm = build_dispatch_model(gc, {});
  const milp::Solution mip = milp::solve_milp(dm.model);
  const grid::BaselineResult base = grid::solve_baseline_opf(gc);
  REQUIRE(mip.optimal());
  REQUIRE(base.solution.optimal());
  CHECK(mip.objective == doctest::Approx(base.solution.objective).epsilon(1e-12));
}

TEST_CASE("dispatch model: exclusions drop variables entirely") {
  const grid::GridCase gc = two_bus(10.0);
  VehicleFleet f = make_fleet("a", 2, 0.0, 20.0, 5.0, {3.0, 0.0});
  f.excluded = {1, 0};  // only the origin (bus 2) stays
  const DispatchModel dm = build_dispatch_model(gc, {f});
  CHECK(dm.model.binary_variables().size() == 1);
  CHECK(dm.fleets[0].candidates.size() == 1);
  CHECK(dm.fleets[0].candidates[0].node == 2);
}

TEST_CASE("dispatch model: full candidate grid gives buses-times-fleets binaries") {
  const grid::GridCase gc = two_bus(10.0);
  const std::vector<VehicleFleet> fleets = {
      make_fleet("a", 1, 0.0, 5.0, 4.0, {0.0, 2.0}),
      make_fleet("b", 2, 0.0, 5.0, 4.0, {2.0, 0.0}),
      make_fleet("c", 2, 0.0, 9.0, 4.0, {7.0, 0.0}),
  };
  const DispatchModel dm = build_dispatch_model(gc, fleets);
  CHECK(dm.model.binary_variables().size() == 3 * 2);
}

TEST_CASE("dispatch model: unreachable unexcluded node is rejected") {
  const grid::GridCase gc = two_bus(10.0);
  VehicleFleet f = make_fleet("a", 2, 0.0, 20.0, 5.0,
                              {transport::CostTable::kUnreachable, 0.0});
  CHECK_THROWS_AS(build_dispatch_model(gc, {f}), ValidationError);
}

TEST_CASE("solve_dispatch: overpriced fleet stays undispatched") {
  const grid::GridCase gc = two_bus(10.0);
  // Far costlier than any generator; p_min = 0 lets the optimizer park it.
  const VehicleFleet f = make_fleet("a", 2, 0.0, 20.0, 500.0, {3.0, 0.0});
  const DispatchPlan plan = solve_dispatch(gc, {f});
  const grid::BaselineResult base = grid::solve_baseline_opf(gc);
  CHECK(!plan.vehicles[0].destination.has_value());
  CHECK(plan.vehicles[0].injection_mw == doctest::Approx(0.0));
  CHECK(plan.objective ==
        doctest::Approx(base.solution.objective).epsilon(1e-12));
}

TEST_CASE("solve_dispatch: cheap fleet at the load displaces the generator") {
  const grid::GridCase gc = two_bus(50.0);  // expensive conventional unit
  const VehicleFleet f = make_fleet("a", 2, 0.0, 50.0, 10.0, {3.0, 0.0});
  const DispatchPlan plan = solve_dispatch(gc, {f});
  REQUIRE(plan.vehicles[0].destination.has_value());
  CHECK(*plan.vehicles[0].destination == 2);  // stays at its origin
  CHECK(plan.vehicles[0].injection_mw == doctest::Approx(50.0).epsilon(1e-9));
  CHECK(plan.state.gen_setpoints[0] == doctest::Approx(0.0).epsilon(1e-9));
  // 2-assignment enumeration: undispatched costs 50*50 = 2500,
  // dispatched costs 50*10 = 500.
  CHECK(plan.objective == doctest::Approx(500.0).epsilon(1e-9));
  CHECK(plan.breakdown.vehicle_energy_cost ==
        doctest::Approx(500.0).epsilon(1e-9));
}

TEST_CASE("brute force: empty fleet list is the baseline, counts one LP") {
  const grid::GridCase gc = two_bus(10.0);
  const DispatchPlan plan = brute_force_dispatch(gc, {});
  const grid::BaselineResult base = grid::solve_baseline_opf(gc);
  CHECK(plan.stats.nodes_explored == 1);
  CHECK(plan.objective ==
        doctest::Approx(base.solution.objective).epsilon(1e-12));
}

TEST_CASE("brute force: one vehicle with two candidates solves three LPs") {
  const grid::GridCase gc = two_bus(10.0);
  const VehicleFleet f = make_fleet("a", 2, 0.0, 20.0, 5.0, {3.0, 0.0});
  const DispatchPlan plan = brute_force_dispatch(gc, {f});
  CHECK(plan.stats.nodes_explored == 3);
}

TEST_CASE("brute force: enumeration cap raises a resource error") {
  const grid::GridCase gc = two_bus(10.0);
  const VehicleFleet f = make_fleet("a", 2, 0.0, 20.0, 5.0, {3.0, 0.0});
  DispatchOptions opts;
  opts.enumeration_cap = 2;
  CHECK_THROWS_AS(brute_force_dispatch(gc, {f}, opts), ResourceLimitError);
}

TEST_CASE("exactness: relaxed dispatch equals brute force on random instances") {
  std::mt19937 rng(1234);
  int with_fleets = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const testutil::DispatchInstance inst =
        testutil::random_dispatch_instance(rng);
    const DispatchPlan fast = solve_dispatch(inst.grid_case, inst.fleets);
    const DispatchPlan oracle =
        brute_force_dispatch(inst.grid_case, inst.fleets);
    const double scale = std::max(1.0, std::abs(oracle.objective));
    CHECK(std::abs(fast.objective - oracle.objective) / scale <= 1e-6);
    if (!inst.fleets.empty()) ++with_fleets;
  }
  CHECK(with_fleets >= 10);
}

TEST_CASE("invariants: destination binaries behave per the formulation") {
  std::mt19937 rng(4321);
  for (int trial = 0; trial < 12; ++trial) {
    const testutil::DispatchInstance inst =
        testutil::random_dispatch_instance(rng);
    if (inst.fleets.empty()) continue;
    const DispatchModel dm = build_dispatch_model(inst.grid_case, inst.fleets);
    const milp::Solution sol = milp::solve_milp(dm.model);
    REQUIRE(sol.optimal());
    for (size_t v = 0; v < inst.fleets.size(); ++v) {
      const FleetVars& vars = dm.fleets[v];
      const double p = sol.values[vars.p];
      double z_sum = 0.0;
      for (const FleetVars::Candidate& c : vars.candidates) {
        const double z = sol.values[c.z];
        const double y = sol.values[c.y];
        z_sum += z;
        // Injection consistency: the linearization recovers the product.
        CHECK(std::abs(y - p * z) <= 1e-6 * std::max(1.0, std::abs(p)));
      }
      // At most one destination.
      CHECK(z_sum <= 1.0 + 1e-6);
      CHECK(std::abs(z_sum - std::round(z_sum)) <= 1e-6);
    }
    // Power balance with vehicles: generation plus injections covers load.
    const grid::GridState state =
        grid::extract_state(inst.grid_case, sol.values);
    double total = 0.0;
    for (double p : state.gen_setpoints) total += p;
    for (size_t v = 0; v < inst.fleets.size(); ++v) {
      for (const FleetVars::Candidate& c : dm.fleets[v].candidates) {
        total += sol.values[c.y];
      }
    }
    CHECK(std::abs(total - inst.grid_case.total_load_mw()) <= 1e-6);
  }
}

TEST_CASE("monotone benefit: adding a free-floored fleet never hurts") {
  std::mt19937 rng(2468);
  for (int trial = 0; trial < 8; ++trial) {
    testutil::DispatchInstance inst = testutil::random_dispatch_instance(rng);
    std::vector<VehicleFleet> without = inst.fleets;
    if (!without.empty() && without.back().p_min_mw == 0.0) {
      std::vector<VehicleFleet> with = without;
      without.pop_back();
      const DispatchPlan fewer = solve_dispatch(inst.grid_case, without);
      const DispatchPlan more = solve_dispatch(inst.grid_case, with);
      CHECK(more.objective <=
            fewer.objective + 1e-7 * std::max(1.0, std::abs(fewer.objective)));
    }
  }
}

TEST_CASE("undispatched fleet with a positive floor pays its ghost cost") {
  // The generator's own floor equals the full load, so any vehicle delivery
  // would overfill the balance; the fleet is forced to stay undispatched yet
  // its 5 MW energy floor stays in the objective.
  const grid::GridCase gc("pinned", 1, {grid::Bus{1, 0.0}, grid::Bus{2, 50.0}},
                          {grid::Line{1, 2, 10.0, -100.0, 100.0}},
                          {grid::Generator{1, 50.0, 100.0, 10.0}});
  const VehicleFleet f = make_fleet("a", 2, 5.0, 20.0, 500.0, {3.0, 0.0});
  const DispatchPlan plan = solve_dispatch(gc, {f});
  CHECK(!plan.vehicles[0].destination.has_value());
  CHECK(plan.vehicles[0].injection_mw == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(plan.objective == doctest::Approx(500.0 + 5.0 * 500.0).epsilon(1e-9));
  CHECK(plan.bus_injections_mw == std::vector<double>{0.0, 0.0});
}

TEST_CASE("run_schedule: empty fleet list returns the plain baseline") {
  const grid::GridCase gc = two_bus(10.0);
  const transport::TransportNetwork net(
      2, {transport::Edge{1, 2, 3.0}, transport::Edge{2, 1, 3.0}});
  const DispatchPlan plan = run_schedule(gc, net, {});
  REQUIRE(plan.baseline_objective.has_value());
  CHECK(plan.objective == doctest::Approx(*plan.baseline_objective));
  CHECK(plan.vehicles.empty());
}

TEST_CASE("run_schedule: layers must share the node set") {
  const grid::GridCase gc = two_bus(10.0);
  const transport::TransportNetwork net(3, {transport::Edge{1, 2, 3.0},
                                            transport::Edge{2, 3, 1.0}});
  CHECK_THROWS_AS(run_schedule(gc, net, {}), ValidationError);
}

TEST_CASE("run_schedule: radius and unreachable nodes compile into exclusions") {
  using transport::Edge;
  // 3-bus chain grid; fleet at bus 1; node 3 reachable only at cost 14.
  const grid::GridCase gc("chain", 1,
                          {grid::Bus{1, 0.0}, grid::Bus{2, 30.0},
                           grid::Bus{3, 20.0}},
                          {grid::Line{1, 2, 10.0, -100, 100},
                           grid::Line{2, 3, 10.0, -100, 100}},
                          {grid::Generator{1, 0.0, 100.0, 10.0}});
  const transport::TransportNetwork net(
      3, {Edge{1, 2, 6.0}, Edge{2, 1, 6.0}, Edge{2, 3, 8.0}, Edge{3, 2, 8.0}});
  FleetSpec spec;
  spec.id = "a";
  spec.origin = 1;
  spec.p_max_mw = 10.0;
  spec.energy_cost = 2.0;
  spec.max_travel_cost = 10.0;  // node 3 (cost 14) is out of range
  const DispatchPlan plan = run_schedule(gc, net, {spec});
  REQUIRE(plan.vehicles.size() == 1);
  if (plan.vehicles[0].destination.has_value()) {
    CHECK(*plan.vehicles[0].destination != 3);
  }
}

TEST_CASE("run_schedule: closures re-route the plan") {
  using transport::Edge;
  // Symmetric triangle grid, all susceptances 10, all line limits +-20 MW.
  // Loads of 25 MW at buses 2 and 3, an expensive generator at bus 1. Serving
  // both loads from bus 1 puts 25 MW on line 1-2 (over the limit), so the
  // cheap 50 MW fleet parked at bus 1 must drive into the load pocket; the
  // split flows of an injection at bus 2 or 3 stay within limits
  // (16.67 / 8.33 MW). Travel costs make bus 2 (cost 3) beat bus 3 (cost 4).
  const grid::GridCase gc(
      "triangle", 1,
      {grid::Bus{1, 0.0}, grid::Bus{2, 25.0}, grid::Bus{3, 25.0}},
      {grid::Line{1, 2, 10.0, -20, 20}, grid::Line{1, 3, 10.0, -20, 20},
       grid::Line{2, 3, 10.0, -20, 20}},
      {grid::Generator{1, 0.0, 100.0, 50.0}});
  const transport::TransportNetwork net(
      3, {Edge{1, 2, 3.0}, Edge{2, 1, 3.0}, Edge{1, 3, 4.0}, Edge{3, 1, 4.0},
          Edge{2, 3, 5.0}, Edge{3, 2, 5.0}});
  FleetSpec spec;
  spec.id = "a";
  spec.origin = 1;
  spec.p_max_mw = 50.0;
  spec.energy_cost = 10.0;

  const DispatchPlan open_plan = run_schedule(gc, net, {spec});
  REQUIRE(open_plan.vehicles[0].destination.has_value());
  CHECK(*open_plan.vehicles[0].destination == 2);
  CHECK(open_plan.objective == doctest::Approx(503.0).epsilon(1e-9));
  REQUIRE(open_plan.vehicles[0].route.has_value());
  CHECK(open_plan.vehicles[0].route->total_cost == 3.0);

  // Close every edge incident to the chosen destination and re-run: node 2
  // becomes unreachable and the plan re-optimizes to bus 3.
  const DispatchPlan closed_plan = run_schedule(
      gc, net, {spec}, {{1, 2}, {2, 1}, {2, 3}, {3, 2}});
  REQUIRE(closed_plan.vehicles[0].destination.has_value());
  CHECK(*closed_plan.vehicles[0].destination == 3);
  CHECK(closed_plan.objective == doctest::Approx(504.0).epsilon(1e-9));
  REQUIRE(closed_plan.vehicles[0].route.has_value());
  for (const Edge& e : closed_plan.vehicles[0].route->route) {
    const int id = net.find_edge(e.from, e.to);
    CHECK((e.from != 2 && e.to != 2));
    CHECK(id >= 0);
  }
}

TEST_CASE("infeasible dispatch names the binding subsystem") {
  // Load beyond both line capacity and generation: grid side binds.
  const grid::GridCase gc("overload", 1, {grid::Bus{1, 0.0}, grid::Bus{2, 500.0}},
                          {grid::Line{1, 2, 10.0, -100, 100}},
                          {grid::Generator{1, 0.0, 100.0, 10.0}});
  try {
    solve_dispatch(gc, {});
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.subsystem() == "grid");
  }
}

TEST_SUITE_END();
