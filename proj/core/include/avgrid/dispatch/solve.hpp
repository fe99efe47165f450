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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "avgrid/dispatch/model.hpp"
#include "avgrid/errors.hpp"
#include "avgrid/grid/opf.hpp"
#include "avgrid/milp/solver.hpp"
#include "avgrid/transport/routing.hpp"

namespace avgrid::dispatch {

/// The dispatch problem admits no operating point; `subsystem` names the
/// binding side ("grid" when even the vehicle-free OPF is infeasible,
/// "fleet" otherwise).
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, std::string subsystem)
      : Error(what), subsystem_(std::move(subsystem)) {}
  const std::string& subsystem() const { return subsystem_; }

 private:
  std::string subsystem_;
};

struct VehiclePlan {
  std::string fleet_id;
  int origin = 0;
  // Destination node, or empty when the fleet stays undispatched (all its
  // destination binaries at zero).
  std::optional<int> destination;
  // Travel route to the destination; an empty edge list when the fleet is
  // dispatched at its own origin. Only attached when a transport network is
  // supplied.
  std::optional<transport::RouteSolution> route;
  double injection_mw = 0.0;       // the solved p^v
  double travel_cost_units = 0.0;  // c^v at the chosen destination
};

struct CostBreakdown {
  double generation_cost = 0.0;      // $
  double vehicle_energy_cost = 0.0;  // $
  double travel_cost = 0.0;          // $, after scaling
};

struct DispatchPlan {
  std::vector<VehiclePlan> vehicles;
  grid::GridState state;
  // Vehicle injection actually delivered per bus (index = bus-1).
  std::vector<double> bus_injections_mw;
  double objective = 0.0;  // $; equals the breakdown sum
  CostBreakdown breakdown;
  std::optional<double> baseline_objective;  // vehicle-free OPF, if computed
  milp::SolveStats stats;
};

struct DispatchOptions {
  milp::SolverOptions solver;
  double travel_cost_scale = 1.0;   // $ per travel cost unit
  std::int64_t enumeration_cap = 100000;  // brute-force assignment limit
};

/// Solves the vehicle-integration problem and maps the binaries back to a
/// destination per fleet (argmax over z when any is set). When `net` is
/// given, routes are attached via the routing program.
DispatchPlan solve_dispatch(const grid::GridCase& grid_case,
                            const std::vector<VehicleFleet>& fleets,
                            const transport::TransportNetwork* net = nullptr,
                            const DispatchOptions& options = {});

/// Independent exactness oracle: enumerates every assignment of each fleet to
/// undispatched-or-candidate, solves the continuous OPF for each combination
/// and keeps the best. stats.nodes_explored counts the enumerated LPs.
/// Throws ResourceLimitError when the assignment space exceeds the cap.
DispatchPlan brute_force_dispatch(const grid::GridCase& grid_case,
                                  const std::vector<VehicleFleet>& fleets,
                                  const DispatchOptions& options = {});

/// End-to-end scheduling pipeline: applies road closures, computes the
/// offline travel-cost table, assembles fleets (explicit exclusions, cost
/// radius, unreachable nodes), solves the dispatch problem, and attaches
/// destinations and routes. Also solves the vehicle-free baseline for the
/// plan's cost comparison.
DispatchPlan run_schedule(const grid::GridCase& grid_case,
                          const transport::TransportNetwork& net,
                          const std::vector<FleetSpec>& fleet_specs,
                          const std::vector<std::pair<int, int>>& road_closures = {},
                          const DispatchOptions& options = {});

}  // namespace avgrid::dispatch
