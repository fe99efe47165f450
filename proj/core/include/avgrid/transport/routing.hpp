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

#include <limits>
#include <optional>
#include <vector>

#include "avgrid/milp/model.hpp"
#include "avgrid/milp/solver.hpp"
#include "avgrid/transport/network.hpp"

namespace avgrid::transport {

/// A simple origin->destination path: edges chain head to tail and the total
/// cost is exactly the sum of the edge weights. An empty route with zero cost
/// represents "no movement".
struct RouteSolution {
  int origin = 0;
  int destination = 0;
  std::vector<Edge> route;
  double total_cost = 0.0;
};

/// Builds the binary routing program for one origin/destination pair: one
/// binary per directed edge, minimize total weight, subject to unit outflow
/// at the origin, zero outflow and unit inflow at the destination, flow
/// conservation elsewhere, no antiparallel edge pair used twice, and
/// restricted edges forced to zero. Requires origin != destination.
milp::Model build_routing_model(const TransportNetwork& net, int origin,
                                int destination);

/// Dijkstra over the non-restricted edges; the independent reference for the
/// routing program. Returns std::nullopt when the destination is unreachable;
/// origin == destination yields an empty zero-cost route.
std::optional<RouteSolution> shortest_path(const TransportNetwork& net,
                                           int origin, int destination);

/// Solves the routing program via branch and bound and reconstructs the route
/// from the selected edges. Returns std::nullopt when no feasible route
/// exists. Requires origin != destination (callers use shortest_path for the
/// trivial identity case).
std::optional<RouteSolution> solve_route(const TransportNetwork& net,
                                         int origin, int destination,
                                         const milp::SolverOptions& options = {});

/// Travel-cost table for a set of origins; entry (k, node) is the cheapest
/// feasible travel cost from origins[k] to node, kUnreachable when no route
/// exists. Diagonal entries are zero.
class CostTable {
 public:
  static constexpr double kUnreachable = std::numeric_limits<double>::infinity();

  CostTable(std::vector<int> origins, int node_count);

  const std::vector<int>& origins() const { return origins_; }
  int node_count() const { return node_count_; }

  /// Cost from origins[origin_index] to `node` (1-based).
  double at(int origin_index, int node) const;
  void set(int origin_index, int node, double cost);
  bool reachable(int origin_index, int node) const {
    return at(origin_index, node) != kUnreachable;
  }
  /// Full row for one origin, indexed by node-1.
  const std::vector<double>& row(int origin_index) const;

 private:
  std::vector<int> origins_;
  int node_count_ = 0;
  std::vector<std::vector<double>> costs_;
};

/// Offline travel-cost sweep: one shortest-path tree per origin.
CostTable all_pairs_costs(const TransportNetwork& net,
                          const std::vector<int>& origins);

}  // namespace avgrid::transport
