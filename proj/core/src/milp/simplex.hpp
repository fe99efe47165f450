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

// Internal LP engine. Not installed.

#pragma once

#include <cstdint>
#include <vector>

#include "avgrid/milp/model.hpp"
#include "avgrid/milp/solver.hpp"

namespace avgrid::milp::detail {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;              // structural values, size = variable_count
  std::vector<double> row_duals;      // y, one per constraint
  std::vector<double> reduced_costs;  // structural reduced costs
  std::int64_t iterations = 0;
};

// Solves the LP relaxation of `model` (binary kinds treated as continuous
// within their bounds) with a bounded-variable two-phase revised simplex.
// The model must already be validated.
LpResult solve_relaxation(const Model& model, const SolverOptions& options);

}  // namespace avgrid::milp::detail
