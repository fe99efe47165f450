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

#include <string>
#include <vector>

#include "avgrid/grid/case.hpp"
#include "avgrid/milp/model.hpp"
#include "avgrid/milp/solver.hpp"

namespace avgrid::grid {

/// Line flow under the dc model: susceptance times the angle difference.
/// Antisymmetric in the angle arguments.
inline double dc_line_flow(double susceptance, double theta_from,
                           double theta_to) {
  return susceptance * (theta_from - theta_to);
}

/// Operating point: per-bus angles (radians, reference fixed at zero),
/// per-generator setpoints and per-line flows (MW).
struct GridState {
  std::vector<double> angles;
  std::vector<double> gen_setpoints;
  std::vector<double> flows;
};

/// Baseline optimal power flow without vehicle support: minimize linear
/// generation cost over generator setpoints and bus angles, subject to
/// generation limits, line flow limits and nodal balance.
///
/// Variable layout: generator setpoints first (one per generator, in case
/// order), then one angle per bus; the reference angle is fixed to zero
/// through its bounds.
milp::Model build_baseline_opf(const GridCase& grid_case);

inline int baseline_gen_var(const GridCase&, int generator_index) {
  return generator_index;
}
inline int baseline_theta_var(const GridCase& grid_case, int bus) {
  return grid_case.generator_count() + bus - 1;
}

/// Reads a GridState out of an optimal baseline-layout solution. Flows are
/// recomputed from the angles.
GridState extract_state(const GridCase& grid_case,
                        const std::vector<double>& values,
                        int gen_offset = 0);

/// Convenience wrapper: build, solve and extract in one step.
struct BaselineResult {
  milp::Solution solution;
  GridState state;
};
BaselineResult solve_baseline_opf(const GridCase& grid_case,
                                  const milp::SolverOptions& options = {});

/// One violated condition found by validate_state.
struct Violation {
  std::string kind;     // "ref-angle", "flow-equation", "balance", ...
  std::string subject;  // bus, line or generator identification
  double magnitude = 0.0;
};

/// Checks a state against the case: reference angle pinned, flow equations
/// consistent, nodal balance, generator and flow limits. `bus_injections_mw`
/// optionally adds external per-bus injections (vehicle support) to the
/// balance; pass one value per bus. Violations are data, not errors.
std::vector<Violation> validate_state(
    const GridCase& grid_case, const GridState& state,
    const std::vector<double>& bus_injections_mw = {}, double tol_mw = 1e-6);

}  // namespace avgrid::grid
