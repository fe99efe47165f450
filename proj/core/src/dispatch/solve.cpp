/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "avgrid/dispatch/solve.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace avgrid::dispatch {

namespace {

// Reruns a stage and prefixes any avgrid error with the stage name, keeping
// the error category intact for exit-code mapping.
template <typename F>
auto with_stage(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InfeasibleError& e) {
    throw InfeasibleError("stage " + stage + ": " + e.what(), e.subsystem());
  } catch (const ValidationError& e) {
    throw ValidationError("stage " + stage + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError("stage " + stage + ": " + e.what(), e.line());
  } catch (const ResourceLimitError& e) {
    throw ResourceLimitError("stage " + stage + ": " + e.what());
  } catch (const Error& e) {
    throw Error("stage " + stage + ": " + e.what());
  }
}

[[noreturn]] void report_infeasible(const grid::GridCase& grid_case,
                                    const DispatchOptions& options) {
  const grid::BaselineResult baseline =
      grid::solve_baseline_opf(grid_case, options.solver);
  const std::string subsystem =
      baseline.solution.optimal() ? "fleet" : "grid";
  throw InfeasibleError(
      "dispatch problem infeasible; binding subsystem: " + subsystem +
          (subsystem == "grid"
               ? " (the vehicle-free optimal power flow is already infeasible)"
               : " (the grid alone is feasible; fleet data pins it down)"),
      subsystem);
}

void attach_route(VehiclePlan& vehicle, const transport::TransportNetwork& net,
                  const milp::SolverOptions& solver_options) {
  if (!vehicle.destination.has_value()) return;
  if (*vehicle.destination == vehicle.origin) {
    vehicle.route = transport::RouteSolution{vehicle.origin, vehicle.origin,
                                             {}, 0.0};
    return;
  }
  std::optional<transport::RouteSolution> route = transport::solve_route(
      net, vehicle.origin, *vehicle.destination, solver_options);
  if (!route.has_value()) {
    throw Error("fleet '" + vehicle.fleet_id +
                "' was dispatched to node " +
                std::to_string(*vehicle.destination) +
                " but no feasible route exists; the travel-cost table and the "
                "network disagree");
  }
  vehicle.route = std::move(*route);
}

}  // namespace

DispatchPlan solve_dispatch(const grid::GridCase& grid_case,
                            const std::vector<VehicleFleet>& fleets,
                            const transport::TransportNetwork* net,
                            const DispatchOptions& options) {
  DispatchModel dm =
      build_dispatch_model(grid_case, fleets, options.travel_cost_scale);
  const milp::Solution solution = milp::solve_milp(dm.model, options.solver);
  if (solution.status == milp::SolveStatus::Infeasible) {
    report_infeasible(grid_case, options);
  }
  if (!solution.optimal()) {
    throw Error("dispatch problem is unbounded; case data is inconsistent");
  }

  DispatchPlan plan;
  plan.stats = solution.stats;
  plan.objective = solution.objective;
  plan.state = grid::extract_state(grid_case, solution.values);
  plan.bus_injections_mw.assign(grid_case.bus_count(), 0.0);

  for (int k = 0; k < grid_case.generator_count(); ++k) {
    plan.breakdown.generation_cost +=
        grid_case.generators()[k].cost_per_mwh * solution.values[k];
  }

  for (size_t v = 0; v < fleets.size(); ++v) {
    const VehicleFleet& fleet = fleets[v];
    const FleetVars& vars = dm.fleets[v];
    VehiclePlan vehicle;
    vehicle.fleet_id = fleet.id;
    vehicle.origin = fleet.origin;
    vehicle.injection_mw = solution.values[vars.p];
    plan.breakdown.vehicle_energy_cost +=
        fleet.energy_cost * vehicle.injection_mw;

    double z_sum = 0.0;
    double best_z = 0.0;
    int best_node = 0;
    for (const FleetVars::Candidate& c : vars.candidates) {
      const double z = solution.values[c.z];
      z_sum += z;
      if (z > best_z) {
        best_z = z;
        best_node = c.node;
      }
      plan.bus_injections_mw[c.node - 1] += solution.values[c.y];
      plan.breakdown.travel_cost += options.travel_cost_scale *
                                    fleet.travel_costs[c.node - 1] * z;
    }
    if (z_sum > 0.5) {
      vehicle.destination = best_node;
      vehicle.travel_cost_units = fleet.travel_costs[best_node - 1];
      if (net != nullptr) attach_route(vehicle, *net, options.solver);
    }
    plan.vehicles.push_back(std::move(vehicle));
  }
  return plan;
}

DispatchPlan brute_force_dispatch(const grid::GridCase& grid_case,
                                  const std::vector<VehicleFleet>& fleets,
                                  const DispatchOptions& options) {
  validate_fleets(grid_case, fleets);

  std::vector<std::vector<int>> candidates;
  double combination_count = 1.0;
  for (const VehicleFleet& f : fleets) {
    candidates.push_back(f.candidates());
    combination_count *= static_cast<double>(candidates.back().size()) + 1.0;
  }
  if (combination_count > static_cast<double>(options.enumeration_cap)) {
    throw ResourceLimitError(
        "brute-force enumeration would need " +
        std::to_string(static_cast<long long>(combination_count)) +
        " LP solves, above the cap of " +
        std::to_string(options.enumeration_cap) +
        "; exclude candidate nodes (travel-cost radius) to shrink it");
  }

  const int gen_count = grid_case.generator_count();
  const int bus_count = grid_case.bus_count();
  const int fleet_count = static_cast<int>(fleets.size());

  // assignment[v] = -1 for undispatched, else the candidate-list position.
  std::vector<int> assignment(fleets.size(), -1);
  bool have_best = false;
  double best_objective = 0.0;
  std::vector<int> best_assignment;
  std::vector<double> best_values;
  milp::SolveStats stats;

  while (true) {
    // Continuous OPF for this fixed assignment: z is implied, y = p at the
    // assigned bus.
    milp::Model m;
    for (int k = 0; k < gen_count; ++k) {
      const grid::Generator& g = grid_case.generators()[k];
      m.add_continuous("pg_" + std::to_string(k), g.p_min_mw, g.p_max_mw,
                       g.cost_per_mwh);
    }
    for (int bus = 1; bus <= bus_count; ++bus) {
      const bool is_ref = bus == grid_case.ref_bus();
      m.add_continuous("theta_" + std::to_string(bus),
                       is_ref ? 0.0 : -milp::kInfinity,
                       is_ref ? 0.0 : milp::kInfinity, 0.0);
    }
    double travel_constant = 0.0;
    for (int v = 0; v < fleet_count; ++v) {
      const VehicleFleet& f = fleets[v];
      m.add_continuous("pv_" + f.id, f.p_min_mw, f.p_max_mw, f.energy_cost);
      if (assignment[v] >= 0) {
        travel_constant += options.travel_cost_scale *
                           f.travel_costs[candidates[v][assignment[v]] - 1];
      }
    }
    const auto theta = [&](int bus) { return gen_count + bus - 1; };
    for (int l = 0; l < grid_case.line_count(); ++l) {
      const grid::Line& line = grid_case.lines()[l];
      const std::string tag = std::to_string(l);
      m.add_constraint("flow_hi_" + tag,
                       {{theta(line.from), line.susceptance},
                        {theta(line.to), -line.susceptance}},
                       milp::Sense::LessEqual, line.flow_max_mw);
      m.add_constraint("flow_lo_" + tag,
                       {{theta(line.from), line.susceptance},
                        {theta(line.to), -line.susceptance}},
                       milp::Sense::GreaterEqual, line.flow_min_mw);
    }
    for (int bus = 1; bus <= bus_count; ++bus) {
      std::vector<std::pair<int, double>> terms;
      for (const grid::Line& line : grid_case.lines()) {
        if (line.from == bus) {
          terms.emplace_back(theta(line.from), line.susceptance);
          terms.emplace_back(theta(line.to), -line.susceptance);
        } else if (line.to == bus) {
          terms.emplace_back(theta(line.to), line.susceptance);
          terms.emplace_back(theta(line.from), -line.susceptance);
        }
      }
      for (int k = 0; k < gen_count; ++k) {
        if (grid_case.generators()[k].bus == bus) terms.emplace_back(k, -1.0);
      }
      for (int v = 0; v < fleet_count; ++v) {
        if (assignment[v] >= 0 && candidates[v][assignment[v]] == bus) {
          terms.emplace_back(gen_count + bus_count + v, -1.0);
        }
      }
      m.add_constraint("balance_" + std::to_string(bus), std::move(terms),
                       milp::Sense::Equal, -grid_case.load_mw(bus));
    }

    const milp::Solution sol = milp::solve_lp(m, options.solver);
    ++stats.nodes_explored;
    stats.lp_iterations += sol.stats.lp_iterations;
    if (sol.optimal()) {
      const double total = sol.objective + travel_constant;
      if (!have_best || total < best_objective) {
        have_best = true;
        best_objective = total;
        best_assignment = assignment;
        best_values = sol.values;
      }
    }

    // Advance the odometer: undispatched first, then candidates ascending.
    int v = fleet_count - 1;
    for (; v >= 0; --v) {
      if (assignment[v] + 1 < static_cast<int>(candidates[v].size())) {
        ++assignment[v];
        break;
      }
      assignment[v] = -1;
    }
    if (v < 0) break;
  }

  if (!have_best) report_infeasible(grid_case, options);

  DispatchPlan plan;
  plan.stats = stats;
  plan.objective = best_objective;
  plan.state = grid::extract_state(grid_case, best_values);
  plan.bus_injections_mw.assign(bus_count, 0.0);
  for (int k = 0; k < gen_count; ++k) {
    plan.breakdown.generation_cost +=
        grid_case.generators()[k].cost_per_mwh * best_values[k];
  }
  for (int v = 0; v < fleet_count; ++v) {
    const VehicleFleet& fleet = fleets[v];
    VehiclePlan vehicle;
    vehicle.fleet_id = fleet.id;
    vehicle.origin = fleet.origin;
    vehicle.injection_mw = best_values[gen_count + bus_count + v];
    plan.breakdown.vehicle_energy_cost +=
        fleet.energy_cost * vehicle.injection_mw;
    if (best_assignment[v] >= 0) {
      const int node = candidates[v][best_assignment[v]];
      vehicle.destination = node;
      vehicle.travel_cost_units = fleet.travel_costs[node - 1];
      plan.breakdown.travel_cost +=
          options.travel_cost_scale * vehicle.travel_cost_units;
      plan.bus_injections_mw[node - 1] += vehicle.injection_mw;
    }
    plan.vehicles.push_back(std::move(vehicle));
  }
  return plan;
}

DispatchPlan run_schedule(const grid::GridCase& grid_case,
                          const transport::TransportNetwork& net,
                          const std::vector<FleetSpec>& fleet_specs,
                          const std::vector<std::pair<int, int>>& road_closures,
                          const DispatchOptions& options) {
  if (net.node_count() != grid_case.bus_count()) {
    throw ValidationError(
        "transport network has " + std::to_string(net.node_count()) +
        " nodes but the grid case has " + std::to_string(grid_case.bus_count()) +
        " buses; the layers must share one node set");
  }

  // Road conditions first: the restricted set shapes every travel cost.
  const transport::TransportNetwork closed = with_stage(
      "closures", [&] { return net.with_closures(road_closures); });

  std::vector<int> origins;
  origins.reserve(fleet_specs.size());
  for (const FleetSpec& spec : fleet_specs) {
    if (!closed.valid_node(spec.origin)) {
      throw ValidationError("stage routing: fleet '" + spec.id + "' origin " +
                            std::to_string(spec.origin) +
                            " is not a transport node");
    }
    origins.push_back(spec.origin);
  }
  const transport::CostTable costs = with_stage(
      "routing", [&] { return transport::all_pairs_costs(closed, origins); });

  std::vector<VehicleFleet> fleets = with_stage("fleets", [&] {
    std::vector<VehicleFleet> out;
    for (size_t v = 0; v < fleet_specs.size(); ++v) {
      const FleetSpec& spec = fleet_specs[v];
      VehicleFleet fleet;
      fleet.id = spec.id;
      fleet.origin = spec.origin;
      fleet.p_min_mw = spec.p_min_mw;
      fleet.p_max_mw = spec.p_max_mw;
      fleet.energy_cost = spec.energy_cost;
      fleet.travel_costs = costs.row(static_cast<int>(v));
      fleet.excluded.assign(closed.node_count(), 0);
      for (int node : spec.exclude) {
        if (node < 1 || node > closed.node_count()) {
          throw ValidationError("fleet '" + spec.id + "' excludes node " +
                                std::to_string(node) +
                                " which does not exist");
        }
        fleet.excluded[node - 1] = 1;
      }
      for (int node = 1; node <= closed.node_count(); ++node) {
        const double cost = fleet.travel_costs[node - 1];
        if (cost == transport::CostTable::kUnreachable) {
          fleet.excluded[node - 1] = 1;
        } else if (spec.max_travel_cost.has_value() &&
                   cost > *spec.max_travel_cost) {
          fleet.excluded[node - 1] = 1;
        }
      }
      out.push_back(std::move(fleet));
    }
    return out;
  });

  DispatchPlan plan = with_stage("dispatch", [&] {
    return solve_dispatch(grid_case, fleets, &closed, options);
  });

  const grid::BaselineResult baseline = with_stage("baseline", [&] {
    return grid::solve_baseline_opf(grid_case, options.solver);
  });
  if (baseline.solution.optimal()) {
    plan.baseline_objective = baseline.solution.objective;
  }
  return plan;
}

}  // namespace avgrid::dispatch
