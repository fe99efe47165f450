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

#include "avgrid/grid/opf.hpp"

#include <cmath>

#include "avgrid/errors.hpp"

namespace avgrid::grid {

milp::Model build_baseline_opf(const GridCase& grid_case) {
  milp::Model model;
  for (int k = 0; k < grid_case.generator_count(); ++k) {
    const Generator& g = grid_case.generators()[k];
    model.add_continuous("pg_" + std::to_string(k), g.p_min_mw, g.p_max_mw,
                         g.cost_per_mwh);
  }
  for (int bus = 1; bus <= grid_case.bus_count(); ++bus) {
    const bool is_ref = bus == grid_case.ref_bus();
    model.add_continuous("theta_" + std::to_string(bus),
                         is_ref ? 0.0 : -milp::kInfinity,
                         is_ref ? 0.0 : milp::kInfinity, 0.0);
  }

  // Line flow limits: fmin <= b (theta_i - theta_j) <= fmax.
  for (int l = 0; l < grid_case.line_count(); ++l) {
    const Line& line = grid_case.lines()[l];
    const int ti = baseline_theta_var(grid_case, line.from);
    const int tj = baseline_theta_var(grid_case, line.to);
    const std::string tag =
        std::to_string(line.from) + "_" + std::to_string(line.to) + "_" +
        std::to_string(l);
    model.add_constraint("flow_hi_" + tag,
                         {{ti, line.susceptance}, {tj, -line.susceptance}},
                         milp::Sense::LessEqual, line.flow_max_mw);
    model.add_constraint("flow_lo_" + tag,
                         {{ti, line.susceptance}, {tj, -line.susceptance}},
                         milp::Sense::GreaterEqual, line.flow_min_mw);
  }

  // Nodal balance: net dc outflow equals local generation minus load.
  for (int bus = 1; bus <= grid_case.bus_count(); ++bus) {
    std::vector<std::pair<int, double>> terms;
    for (const Line& line : grid_case.lines()) {
      if (line.from == bus) {
        terms.emplace_back(baseline_theta_var(grid_case, line.from),
                           line.susceptance);
        terms.emplace_back(baseline_theta_var(grid_case, line.to),
                           -line.susceptance);
      } else if (line.to == bus) {
        terms.emplace_back(baseline_theta_var(grid_case, line.to),
                           line.susceptance);
        terms.emplace_back(baseline_theta_var(grid_case, line.from),
                           -line.susceptance);
      }
    }
    for (int k = 0; k < grid_case.generator_count(); ++k) {
      if (grid_case.generators()[k].bus == bus) {
        terms.emplace_back(baseline_gen_var(grid_case, k), -1.0);
      }
    }
    model.add_constraint("balance_" + std::to_string(bus), std::move(terms),
                         milp::Sense::Equal, -grid_case.load_mw(bus));
  }
  return model;
}

GridState extract_state(const GridCase& grid_case,
                        const std::vector<double>& values, int gen_offset) {
  const int gen_count = grid_case.generator_count();
  const int bus_count = grid_case.bus_count();
  if (static_cast<int>(values.size()) < gen_offset + gen_count + bus_count) {
    throw ValidationError("solution vector too short for this grid case");
  }
  GridState state;
  state.gen_setpoints.assign(values.begin() + gen_offset,
                             values.begin() + gen_offset + gen_count);
  state.angles.assign(values.begin() + gen_offset + gen_count,
                      values.begin() + gen_offset + gen_count + bus_count);
  state.flows.reserve(grid_case.line_count());
  for (const Line& line : grid_case.lines()) {
    state.flows.push_back(dc_line_flow(line.susceptance,
                                       state.angles[line.from - 1],
                                       state.angles[line.to - 1]));
  }
  return state;
}

BaselineResult solve_baseline_opf(const GridCase& grid_case,
                                  const milp::SolverOptions& options) {
  const milp::Model model = build_baseline_opf(grid_case);
  milp::Solution solution = milp::solve_lp(model, options);
  BaselineResult result;
  if (solution.optimal()) {
    result.state = extract_state(grid_case, solution.values);
  }
  result.solution = std::move(solution);
  return result;
}

std::vector<Violation> validate_state(const GridCase& grid_case,
                                      const GridState& state,
                                      const std::vector<double>& bus_injections_mw,
                                      double tol_mw) {
  const int n = grid_case.bus_count();
  if (static_cast<int>(state.angles.size()) != n ||
      static_cast<int>(state.gen_setpoints.size()) !=
          grid_case.generator_count() ||
      static_cast<int>(state.flows.size()) != grid_case.line_count()) {
    throw ValidationError("state dimensions do not match the grid case");
  }
  if (!bus_injections_mw.empty() &&
      static_cast<int>(bus_injections_mw.size()) != n) {
    throw ValidationError("bus injection vector must have one entry per bus");
  }

  std::vector<Violation> violations;
  const auto flag = [&violations](std::string kind, std::string subject,
                                  double magnitude) {
    violations.push_back(
        Violation{std::move(kind), std::move(subject), magnitude});
  };

  const double ref_angle = state.angles[grid_case.ref_bus() - 1];
  if (std::abs(ref_angle) > tol_mw) {
    flag("ref-angle", "bus " + std::to_string(grid_case.ref_bus()),
         std::abs(ref_angle));
  }

  std::vector<double> net_outflow(n + 1, 0.0);
  for (int l = 0; l < grid_case.line_count(); ++l) {
    const Line& line = grid_case.lines()[l];
    const std::string tag =
        "line " + std::to_string(line.from) + "-" + std::to_string(line.to);
    const double implied = dc_line_flow(line.susceptance,
                                        state.angles[line.from - 1],
                                        state.angles[line.to - 1]);
    const double gap = std::abs(state.flows[l] - implied);
    if (gap > tol_mw) flag("flow-equation", tag, gap);
    if (state.flows[l] > line.flow_max_mw + tol_mw) {
      flag("flow-limit", tag, state.flows[l] - line.flow_max_mw);
    } else if (state.flows[l] < line.flow_min_mw - tol_mw) {
      flag("flow-limit", tag, line.flow_min_mw - state.flows[l]);
    }
    net_outflow[line.from] += state.flows[l];
    net_outflow[line.to] -= state.flows[l];
  }

  std::vector<double> generation(n + 1, 0.0);
  for (int k = 0; k < grid_case.generator_count(); ++k) {
    const Generator& g = grid_case.generators()[k];
    const double p = state.gen_setpoints[k];
    generation[g.bus] += p;
    const std::string tag =
        "generator " + std::to_string(k) + " at bus " + std::to_string(g.bus);
    if (p > g.p_max_mw + tol_mw) {
      flag("gen-bound", tag, p - g.p_max_mw);
    } else if (p < g.p_min_mw - tol_mw) {
      flag("gen-bound", tag, g.p_min_mw - p);
    }
  }

  for (int bus = 1; bus <= n; ++bus) {
    const double injection =
        bus_injections_mw.empty() ? 0.0 : bus_injections_mw[bus - 1];
    const double residual = net_outflow[bus] -
                            (generation[bus] - grid_case.load_mw(bus) + injection);
    if (std::abs(residual) > tol_mw) {
      flag("balance", "bus " + std::to_string(bus), std::abs(residual));
    }
  }
  return violations;
}

}  // namespace avgrid::grid
