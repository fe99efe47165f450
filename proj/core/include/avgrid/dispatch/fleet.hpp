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

#include <optional>
#include <string>
#include <vector>

namespace avgrid::dispatch {

/// A dispatchable group of autonomous vehicles, aggregated as one injection
/// unit, with its offline travel-cost row and candidate-node exclusions
/// already resolved.
struct VehicleFleet {
  std::string id;
  int origin = 0;             // shared transport/grid node id
  double p_min_mw = 0.0;      // injection bounds, 0 <= p_min <= p_max
  double p_max_mw = 0.0;
  double energy_cost = 0.0;   // $/MWh linear coefficient
  // Travel cost from the origin to each node (index = node-1), in cost
  // units; +inf where unreachable. The origin entry is zero.
  std::vector<double> travel_costs;
  // Nodes the fleet may not be sent to (index = node-1). Unreachable nodes
  // must be excluded here. May exclude every node, including the origin, in
  // which case the fleet can only stay undispatched.
  std::vector<char> excluded;

  /// Candidate destination nodes (1-based), ascending.
  std::vector<int> candidates() const {
    std::vector<int> out;
    for (size_t i = 0; i < excluded.size(); ++i) {
      if (!excluded[i]) out.push_back(static_cast<int>(i) + 1);
    }
    return out;
  }
};

/// Fleet description as read from a fleet file, before travel costs are
/// computed. Exclusions may be given explicitly and/or as a travel-cost
/// radius; both compile into VehicleFleet::excluded.
struct FleetSpec {
  std::string id;
  int origin = 0;
  double p_min_mw = 0.0;
  double p_max_mw = 0.0;
  double energy_cost = 0.0;
  std::vector<int> exclude;            // explicit node ids
  std::optional<double> max_travel_cost;  // exclude nodes costlier than this
};

}  // namespace avgrid::dispatch
