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

#include <array>
#include <string>
#include <vector>

#include "avgrid/dispatch/fleet.hpp"
#include "avgrid/grid/case.hpp"
#include "avgrid/milp/model.hpp"

namespace avgrid::dispatch {

/// The four-inequality envelope that linearizes y = p * z for binary z and
/// bounded p. Because one factor is binary the envelope is exact: z = 0
/// forces y = 0, z = 1 forces y = p. Bounds must satisfy p_min <= p_max.
std::array<milp::Constraint, 4> mccormick_envelope(int p_var, int z_var,
                                                   int y_var, double p_min,
                                                   double p_max,
                                                   const std::string& tag = "mc");

/// Throws ValidationError unless every fleet is well-formed against the case:
/// unique ids, origin on the grid, 0 <= p_min <= p_max, travel-cost and
/// exclusion rows covering every bus, finite travel cost for every
/// non-excluded node, zero travel cost at a non-excluded origin.
void validate_fleets(const grid::GridCase& grid_case,
                     const std::vector<VehicleFleet>& fleets);

/// Index bookkeeping for one fleet's destination variables.
struct FleetVars {
  struct Candidate {
    int node = 0;  // 1-based
    int z = -1;    // binary: travel to `node`
    int y = -1;    // linearized injection p*z at `node`
  };
  int p = -1;  // injection magnitude p^v
  std::vector<Candidate> candidates;  // ascending node order
};

struct DispatchModel {
  milp::Model model;
  // Layout: generator setpoints, then bus angles (matching the baseline OPF
  // prefix), then per-fleet p, then per-fleet z/y blocks.
  std::vector<FleetVars> fleets;
};

/// Vehicle-integration optimal power flow: the baseline OPF plus, per fleet,
/// a bounded injection p, per-candidate destination binaries z (at most one
/// set), their exact product linearizations y, travel costs on z, and y
/// folded into the nodal balance. Excluded nodes get no variables at all.
///
/// Travel costs are bridged into the objective as
/// `travel_cost_scale` dollars per cost unit.
DispatchModel build_dispatch_model(const grid::GridCase& grid_case,
                                   const std::vector<VehicleFleet>& fleets,
                                   double travel_cost_scale = 1.0);

}  // namespace avgrid::dispatch
