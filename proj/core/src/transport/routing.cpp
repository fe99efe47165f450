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

#include "avgrid/transport/routing.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "avgrid/errors.hpp"

namespace avgrid::transport {

namespace {

std::string edge_var_name(const Edge& e) {
  return "x_" + std::to_string(e.from) + "_" + std::to_string(e.to);
}

void require_endpoints(const TransportNetwork& net, int origin, int destination) {
  if (!net.valid_node(origin) || !net.valid_node(destination)) {
    throw ValidationError("route endpoints " + std::to_string(origin) + "->" +
                          std::to_string(destination) + " outside 1.." +
                          std::to_string(net.node_count()));
  }
}

}  // namespace

milp::Model build_routing_model(const TransportNetwork& net, int origin,
                                int destination) {
  require_endpoints(net, origin, destination);
  if (origin == destination) {
    throw ValidationError(
        "routing model needs distinct endpoints; identical origin and "
        "destination is the trivial zero-cost case");
  }

  milp::Model model;
  // One binary per directed edge, weight as its cost.
  for (const Edge& e : net.edges()) {
    model.add_binary(edge_var_name(e), e.weight);
  }

  // Unit outflow at the origin.
  {
    std::vector<std::pair<int, double>> terms;
    for (int id : net.out_edges(origin)) terms.emplace_back(id, 1.0);
    model.add_constraint("origin_outflow", std::move(terms), milp::Sense::Equal,
                         1.0);
  }
  // No outflow at the destination.
  {
    std::vector<std::pair<int, double>> terms;
    for (int id : net.out_edges(destination)) terms.emplace_back(id, 1.0);
    model.add_constraint("destination_outflow", std::move(terms),
                         milp::Sense::Equal, 0.0);
  }
  // Flow conservation at intermediate nodes.
  for (int node = 1; node <= net.node_count(); ++node) {
    if (node == origin || node == destination) continue;
    std::vector<std::pair<int, double>> terms;
    for (int id : net.in_edges(node)) terms.emplace_back(id, 1.0);
    for (int id : net.out_edges(node)) terms.emplace_back(id, -1.0);
    if (terms.empty()) continue;
    model.add_constraint("conserve_" + std::to_string(node), std::move(terms),
                         milp::Sense::Equal, 0.0);
  }
  // Each antiparallel pair used at most once (no immediate backtracking).
  for (int id = 0; id < net.edge_count(); ++id) {
    const Edge& e = net.edge(id);
    const int reverse = net.find_edge(e.to, e.from);
    if (reverse > id) {
      model.add_constraint(
          "pair_" + std::to_string(e.from) + "_" + std::to_string(e.to),
          {{id, 1.0}, {reverse, 1.0}}, milp::Sense::LessEqual, 1.0);
    }
  }
  // Restricted edges are unusable.
  for (int id : net.restricted_ids()) {
    model.add_constraint("restricted_" + edge_var_name(net.edge(id)),
                         {{id, 1.0}}, milp::Sense::Equal, 0.0);
  }
  // Unit inflow at the destination. Implied by the flow constraints on any
  // connected solution; stated explicitly to rule out degenerate circulations.
  {
    std::vector<std::pair<int, double>> terms;
    for (int id : net.in_edges(destination)) terms.emplace_back(id, 1.0);
    model.add_constraint("destination_inflow", std::move(terms),
                         milp::Sense::Equal, 1.0);
  }
  return model;
}

std::optional<RouteSolution> shortest_path(const TransportNetwork& net,
                                           int origin, int destination) {
  require_endpoints(net, origin, destination);
  if (origin == destination) {
    return RouteSolution{origin, destination, {}, 0.0};
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(net.node_count() + 1, kInf);
  std::vector<int> via_edge(net.node_count() + 1, -1);
  using Item = std::pair<double, int>;  // (distance, node)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[origin] = 0.0;
  heap.push({0.0, origin});

  while (!heap.empty()) {
    const auto [d, node] = heap.top();
    heap.pop();
    if (d > dist[node]) continue;
    if (node == destination) break;
    for (int id : net.out_edges(node)) {
      if (net.is_restricted(id)) continue;
      const Edge& e = net.edge(id);
      const double candidate = d + e.weight;
      if (candidate < dist[e.to]) {
        dist[e.to] = candidate;
        via_edge[e.to] = id;
        heap.push({candidate, e.to});
      }
    }
  }

  if (dist[destination] == kInf) return std::nullopt;

  RouteSolution route{origin, destination, {}, 0.0};
  for (int node = destination; node != origin;) {
    const Edge& e = net.edge(via_edge[node]);
    route.route.push_back(e);
    node = e.from;
  }
  std::reverse(route.route.begin(), route.route.end());
  for (const Edge& e : route.route) route.total_cost += e.weight;
  return route;
}

std::optional<RouteSolution> solve_route(const TransportNetwork& net, int origin,
                                         int destination,
                                         const milp::SolverOptions& options) {
  const milp::Model model = build_routing_model(net, origin, destination);
  const milp::Solution solution = milp::solve_milp(model, options);
  if (solution.status == milp::SolveStatus::Infeasible) return std::nullopt;
  if (!solution.optimal()) {
    throw Error("routing program ended neither optimal nor infeasible");
  }

  // Selected edge set, then walked from the origin into travel order. With
  // strictly positive weights an optimal solution has no spare cycles, so a
  // failed walk means the solution is corrupt.
  std::vector<int> next_edge(net.node_count() + 1, -1);
  int selected = 0;
  for (int id = 0; id < net.edge_count(); ++id) {
    if (solution.values[id] > 0.5) {
      const Edge& e = net.edge(id);
      if (next_edge[e.from] != -1) {
        throw Error("route reconstruction failed: node " +
                    std::to_string(e.from) + " has two outgoing route edges");
      }
      next_edge[e.from] = id;
      ++selected;
    }
  }

  RouteSolution route{origin, destination, {}, 0.0};
  int node = origin;
  while (node != destination) {
    const int id = next_edge[node];
    if (id < 0) {
      throw Error("route reconstruction failed: dead end at node " +
                  std::to_string(node));
    }
    const Edge& e = net.edge(id);
    next_edge[node] = -1;
    route.route.push_back(e);
    route.total_cost += e.weight;
    node = e.to;
    if (static_cast<int>(route.route.size()) > net.edge_count()) {
      throw Error("route reconstruction failed: cycle detected");
    }
  }
  if (static_cast<int>(route.route.size()) != selected) {
    throw Error("route reconstruction failed: " +
                std::to_string(selected - static_cast<int>(route.route.size())) +
                " selected edges lie outside the walked path");
  }
  return route;
}

CostTable::CostTable(std::vector<int> origins, int node_count)
    : origins_(std::move(origins)), node_count_(node_count) {
  costs_.assign(origins_.size(), std::vector<double>(node_count_, kUnreachable));
}

double CostTable::at(int origin_index, int node) const {
  return costs_.at(origin_index).at(node - 1);
}

void CostTable::set(int origin_index, int node, double cost) {
  costs_.at(origin_index).at(node - 1) = cost;
}

const std::vector<double>& CostTable::row(int origin_index) const {
  return costs_.at(origin_index);
}

CostTable all_pairs_costs(const TransportNetwork& net,
                          const std::vector<int>& origins) {
  for (int origin : origins) {
    if (!net.valid_node(origin)) {
      throw ValidationError("cost-table origin " + std::to_string(origin) +
                            " outside 1.." + std::to_string(net.node_count()));
    }
  }
  CostTable table(origins, net.node_count());
  for (size_t k = 0; k < origins.size(); ++k) {
    // One shortest-path tree per origin over the non-restricted edges.
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(net.node_count() + 1, kInf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[origins[k]] = 0.0;
    heap.push({0.0, origins[k]});
    while (!heap.empty()) {
      const auto [d, node] = heap.top();
      heap.pop();
      if (d > dist[node]) continue;
      for (int id : net.out_edges(node)) {
        if (net.is_restricted(id)) continue;
        const Edge& e = net.edge(id);
        if (d + e.weight < dist[e.to]) {
          dist[e.to] = d + e.weight;
          heap.push({dist[e.to], e.to});
        }
      }
    }
    for (int node = 1; node <= net.node_count(); ++node) {
      if (dist[node] != kInf) table.set(static_cast<int>(k), node, dist[node]);
    }
  }
  return table;
}

}  // namespace avgrid::transport
