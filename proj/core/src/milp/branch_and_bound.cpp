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

#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "avgrid/milp/solver.hpp"
#include "simplex.hpp"

namespace avgrid::milp {

namespace {

struct Node {
  double bound;  // LP value of the parent, a valid lower bound
  std::int64_t id;
  std::vector<std::pair<int, bool>> fixings;  // (binary index, value)
};

struct NodeOrder {
  // Best bound first; ties resolved by creation order for determinism.
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

// Index of the most fractional binary, ties to the lowest variable index;
// -1 when all binaries are integral within tolerance.
int most_fractional(const std::vector<double>& x, const std::vector<int>& binaries,
                    double integrality_tol) {
  int best = -1;
  double best_frac = integrality_tol;
  for (int j : binaries) {
    const double frac = std::abs(x[j] - std::round(x[j]));
    if (frac > best_frac) {
      best_frac = frac;
      best = j;
    }
  }
  return best;
}

}  // namespace

Solution solve_milp(const Model& model, const SolverOptions& options) {
  model.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::vector<int> binaries = model.binary_variables();

  Model scratch = model;
  std::vector<std::pair<double, double>> root_bounds;
  root_bounds.reserve(binaries.size());
  for (int j : binaries) {
    root_bounds.emplace_back(model.variable(j).lower, model.variable(j).upper);
  }

  std::priority_queue<Node, std::vector<Node>, NodeOrder> queue;
  queue.push(Node{-std::numeric_limits<double>::infinity(), 0, {}});
  std::int64_t next_id = 1;

  bool have_incumbent = false;
  double incumbent_objective = 0.0;
  std::vector<double> incumbent_values;

  SolveStats stats;
  const auto incumbent_cutoff = [&]() {
    return incumbent_objective -
           options.relative_gap * std::max(1.0, std::abs(incumbent_objective));
  };
  const auto make_incumbent_solution = [&]() {
    Solution s;
    s.status = SolveStatus::Optimal;
    s.objective = incumbent_objective;
    s.values = incumbent_values;
    s.stats = stats;
    s.stats.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return s;
  };

  while (!queue.empty()) {
    const Node node = queue.top();
    queue.pop();
    // Best-bound order: once the best open bound cannot beat the incumbent,
    // nothing remaining can.
    if (have_incumbent && node.bound >= incumbent_cutoff()) break;

    if (stats.nodes_explored >= options.max_nodes) {
      std::optional<Solution> incumbent;
      if (have_incumbent) incumbent = make_incumbent_solution();
      throw NodeLimitError("branch-and-bound node limit (" +
                               std::to_string(options.max_nodes) + ") exceeded",
                           std::move(incumbent));
    }

    for (size_t k = 0; k < binaries.size(); ++k) {
      scratch.set_bounds(binaries[k], root_bounds[k].first,
                         root_bounds[k].second);
    }
    for (const auto& [var, value] : node.fixings) {
      const double fixed = value ? 1.0 : 0.0;
      scratch.set_bounds(var, fixed, fixed);
    }

    detail::LpResult lp = detail::solve_relaxation(scratch, options);
    ++stats.nodes_explored;
    stats.lp_iterations += lp.iterations;

    if (lp.status == detail::LpStatus::IterationLimit) {
      throw IterationLimitError("LP iteration limit (" +
                                std::to_string(options.max_lp_iterations) +
                                ") exceeded in branch and bound");
    }
    if (lp.status == detail::LpStatus::Infeasible) continue;
    if (lp.status == detail::LpStatus::Unbounded) {
      // Binaries are bounded, so an unbounded relaxation rides a purely
      // continuous ray; it can only surface at the root.
      Solution s;
      s.status = SolveStatus::Unbounded;
      s.stats = stats;
      s.stats.wall_time_s = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - start)
                                .count();
      return s;
    }

    if (have_incumbent && lp.objective >= incumbent_cutoff()) continue;

    const int branch_var =
        most_fractional(lp.x, binaries, options.integrality_tol);
    if (branch_var < 0) {
      if (!have_incumbent || lp.objective < incumbent_objective) {
        have_incumbent = true;
        incumbent_objective = lp.objective;
        incumbent_values = std::move(lp.x);
      }
      continue;
    }

    Node down{lp.objective, next_id++, node.fixings};
    down.fixings.emplace_back(branch_var, false);
    Node up{lp.objective, next_id++, node.fixings};
    up.fixings.emplace_back(branch_var, true);
    queue.push(std::move(down));
    queue.push(std::move(up));
  }

  if (have_incumbent) return make_incumbent_solution();

  Solution s;
  s.status = SolveStatus::Infeasible;
  s.stats = stats;
  s.stats.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return s;
}

}  // namespace avgrid::milp
