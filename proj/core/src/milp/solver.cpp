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

#include "avgrid/milp/solver.hpp"

#include <chrono>
#include <cmath>

#include "simplex.hpp"

namespace avgrid::milp {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

Solution solve_lp(const Model& model, const SolverOptions& options) {
  model.validate();
  const auto start = std::chrono::steady_clock::now();
  detail::LpResult lp = detail::solve_relaxation(model, options);

  if (lp.status == detail::LpStatus::IterationLimit) {
    throw IterationLimitError("LP iteration limit (" +
                              std::to_string(options.max_lp_iterations) +
                              ") exceeded");
  }

  Solution solution;
  solution.stats.lp_iterations = lp.iterations;
  solution.stats.wall_time_s = seconds_since(start);
  switch (lp.status) {
    case detail::LpStatus::Infeasible:
      solution.status = SolveStatus::Infeasible;
      break;
    case detail::LpStatus::Unbounded:
      solution.status = SolveStatus::Unbounded;
      break;
    case detail::LpStatus::Optimal:
      solution.status = SolveStatus::Optimal;
      solution.objective = lp.objective;
      solution.values = std::move(lp.x);
      solution.duals =
          LpDuals{std::move(lp.row_duals), std::move(lp.reduced_costs)};
      break;
    case detail::LpStatus::IterationLimit:
      break;  // unreachable
  }
  solution.stats.wall_time_s = seconds_since(start);
  return solution;
}

double audit_lp_optimality(const Model& model, const Solution& solution) {
  if (!solution.optimal() || !solution.duals.has_value()) {
    throw ValidationError(
        "audit_lp_optimality requires an optimal LP solution with duals");
  }
  const std::vector<double>& x = solution.values;
  const std::vector<double>& y = solution.duals->row_duals;
  const int n = model.variable_count();
  const int m = model.constraint_count();
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != m) {
    throw ValidationError("audit_lp_optimality: dimension mismatch");
  }

  double worst = 0.0;
  const auto note = [&worst](double v) { worst = std::max(worst, v); };

  // Primal feasibility: rows and bounds.
  std::vector<double> activity(m, 0.0);
  for (int i = 0; i < m; ++i) {
    const Constraint& c = model.constraints()[i];
    double act = 0.0;
    for (const auto& [var, coeff] : c.coeffs) act += coeff * x[var];
    activity[i] = act;
    const double scale = 1.0 + std::abs(c.rhs);
    switch (c.sense) {
      case Sense::LessEqual:
        note(std::max(0.0, act - c.rhs) / scale);
        break;
      case Sense::GreaterEqual:
        note(std::max(0.0, c.rhs - act) / scale);
        break;
      case Sense::Equal:
        note(std::abs(act - c.rhs) / scale);
        break;
    }
  }
  for (int j = 0; j < n; ++j) {
    const Variable& v = model.variables()[j];
    if (std::isfinite(v.lower)) {
      note(std::max(0.0, v.lower - x[j]) / (1.0 + std::abs(v.lower)));
    }
    if (std::isfinite(v.upper)) {
      note(std::max(0.0, x[j] - v.upper) / (1.0 + std::abs(v.upper)));
    }
  }

  // Row dual signs and complementary slackness. With the minimization
  // convention used here, active <= rows carry nonpositive duals and active
  // >= rows nonnegative ones; inactive rows carry zero duals.
  for (int i = 0; i < m; ++i) {
    const Constraint& c = model.constraints()[i];
    const double slack = std::abs(c.rhs - activity[i]);
    switch (c.sense) {
      case Sense::LessEqual:
        note(std::max(0.0, y[i]) / (1.0 + std::abs(y[i])));
        note(std::abs(y[i]) * slack / ((1.0 + std::abs(y[i])) * (1.0 + slack)));
        break;
      case Sense::GreaterEqual:
        note(std::max(0.0, -y[i]) / (1.0 + std::abs(y[i])));
        note(std::abs(y[i]) * slack / ((1.0 + std::abs(y[i])) * (1.0 + slack)));
        break;
      case Sense::Equal:
        break;
    }
  }

  // Stationarity: recomputed reduced costs must respect each variable's
  // position, and the induced dual objective must close the duality gap.
  double dual_objective = 0.0;
  for (int i = 0; i < m; ++i) dual_objective += y[i] * model.constraints()[i].rhs;
  std::vector<double> col_dual(n, 0.0);
  for (int i = 0; i < m; ++i) {
    for (const auto& [var, coeff] : model.constraints()[i].coeffs) {
      col_dual[var] += y[i] * coeff;
    }
  }
  for (int j = 0; j < n; ++j) {
    const Variable& v = model.variables()[j];
    const double d = v.objective - col_dual[j];
    const double scale = 1.0 + std::abs(v.objective) + std::abs(col_dual[j]);
    if (v.lower >= v.upper) {
      // Fixed column: any reduced cost is dual feasible.
      dual_objective += d * v.lower;
      continue;
    }
    const double lo_gap = std::isfinite(v.lower) ? x[j] - v.lower : kInfinity;
    const double hi_gap = std::isfinite(v.upper) ? v.upper - x[j] : kInfinity;
    const double at_eps = 1e-6 * (1.0 + std::abs(x[j]));
    const bool at_lower = lo_gap <= at_eps;
    const bool at_upper = hi_gap <= at_eps;
    if (at_lower && !at_upper) {
      note(std::max(0.0, -d) / scale);
    } else if (at_upper && !at_lower) {
      note(std::max(0.0, d) / scale);
    } else if (!at_lower && !at_upper) {
      note(std::abs(d) / scale);
    }
    if (d > 0.0) {
      if (std::isfinite(v.lower)) {
        dual_objective += d * v.lower;
      } else {
        note(std::abs(d) / scale);
      }
    } else if (d < 0.0) {
      if (std::isfinite(v.upper)) {
        dual_objective += d * v.upper;
      } else {
        note(std::abs(d) / scale);
      }
    }
  }
  note(std::abs(solution.objective - dual_objective) /
       (1.0 + std::abs(solution.objective)));

  return worst;
}

}  // namespace avgrid::milp
