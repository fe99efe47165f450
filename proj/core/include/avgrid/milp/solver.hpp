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
#include <vector>

#include "avgrid/errors.hpp"
#include "avgrid/milp/model.hpp"

namespace avgrid::milp {

enum class SolveStatus { Optimal, Infeasible, Unbounded };

struct SolveStats {
  std::int64_t nodes_explored = 0;
  std::int64_t lp_iterations = 0;
  double wall_time_s = 0.0;
};

/// Dual information attached to LP solves; used by the optimality audit.
struct LpDuals {
  std::vector<double> row_duals;      // one per constraint
  std::vector<double> reduced_costs;  // one per variable
};

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> values;  // by variable index; empty unless Optimal
  SolveStats stats;
  std::optional<LpDuals> duals;  // LP solves only

  bool optimal() const { return status == SolveStatus::Optimal; }
};

/// All tolerances of the solving core. The defaults are the tested contract.
struct SolverOptions {
  double feasibility_tol = 1e-6;
  double pivot_tol = 1e-9;
  double dual_tol = 1e-7;
  double integrality_tol = 1e-6;
  double relative_gap = 1e-8;
  // Consecutive degenerate pivots tolerated before Bland's rule engages.
  int degenerate_stall_limit = 50;
  std::int64_t max_lp_iterations = 200000;
  std::int64_t max_nodes = 1000000;
};

/// LP iteration cap hit before reaching optimality.
class IterationLimitError : public ResourceLimitError {
 public:
  using ResourceLimitError::ResourceLimitError;
};

/// Branch-and-bound node cap hit; carries the best incumbent found, if any.
class NodeLimitError : public ResourceLimitError {
 public:
  NodeLimitError(const std::string& what, std::optional<Solution> incumbent)
      : ResourceLimitError(what), incumbent_(std::move(incumbent)) {}
  const std::optional<Solution>& incumbent() const { return incumbent_; }

 private:
  std::optional<Solution> incumbent_;
};

/// Solves the LP relaxation (binary variables treated as continuous within
/// their bounds) by two-phase bounded revised simplex. Duals are attached on
/// optimal solves.
Solution solve_lp(const Model& model, const SolverOptions& options = {});

/// Solves the mixed-binary program by best-bound branch and bound over LP
/// relaxations. Deterministic: branching on the most fractional binary, ties
/// to the lowest variable index.
Solution solve_milp(const Model& model, const SolverOptions& options = {});

/// Post-solve audit of an optimal LP solution: primal feasibility, dual
/// feasibility, complementary slackness and strong duality. Returns the
/// largest normalized violation found (0 for a clean certificate). Requires
/// `solution.duals`.
double audit_lp_optimality(const Model& model, const Solution& solution);

}  // namespace avgrid::milp
