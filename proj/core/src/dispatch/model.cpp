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

#include "avgrid/dispatch/model.hpp"

#include <cmath>
#include <set>

#include "avgrid/errors.hpp"
#include "avgrid/grid/opf.hpp"

namespace avgrid::dispatch {

std::array<milp::Constraint, 4> mccormick_envelope(int p_var, int z_var,
                                                   int y_var, double p_min,
                                                   double p_max,
                                                   const std::string& tag) {
  if (!std::isfinite(p_min) || !std::isfinite(p_max) || p_min > p_max) {
    throw ValidationError("mccormick envelope for '" + tag +
                          "' needs finite bounds with p_min <= p_max");
  }
  using milp::Constraint;
  using milp::Sense;
  // y >= z*pmin          y >= p + z*pmax - pmax
  // y <= z*pmax          y <= p + z*pmin - pmin
  return {
      Constraint{tag + "_lo_z", {{y_var, 1.0}, {z_var, -p_min}},
                 Sense::GreaterEqual, 0.0},
      Constraint{tag + "_lo_p", {{y_var, 1.0}, {p_var, -1.0}, {z_var, -p_max}},
                 Sense::GreaterEqual, -p_max},
      Constraint{tag + "_up_z", {{y_var, 1.0}, {z_var, -p_max}},
                 Sense::LessEqual, 0.0},
      Constraint{tag + "_up_p", {{y_var, 1.0}, {p_var, -1.0}, {z_var, -p_min}},
                 Sense::LessEqual, -p_min},
  };
}

void validate_fleets(const grid::GridCase& grid_case,
                     const std::vector<VehicleFleet>& fleets) {
  const int n = grid_case.bus_count();
  std::set<std::string> ids;
  for (const VehicleFleet& f : fleets) {
    const std::string tag = "fleet '" + f.id + "'";
    if (f.id.empty()) throw ValidationError("fleet without an id");
    if (!ids.insert(f.id).second) {
      throw ValidationError("duplicate fleet id '" + f.id + "'");
    }
    if (!grid_case.valid_bus(f.origin)) {
      throw ValidationError(tag + " origin " + std::to_string(f.origin) +
                            " is not a grid bus");
    }
    if (!(f.p_min_mw >= 0.0) || f.p_min_mw > f.p_max_mw ||
        !std::isfinite(f.p_max_mw)) {
      throw ValidationError(tag + " needs 0 <= p_min <= p_max");
    }
    if (!std::isfinite(f.energy_cost)) {
      throw ValidationError(tag + " has a non-finite energy cost");
    }
    if (static_cast<int>(f.travel_costs.size()) != n ||
        static_cast<int>(f.excluded.size()) != n) {
      throw ValidationError(tag +
                            " travel-cost/exclusion rows must cover every bus");
    }
    for (int node = 1; node <= n; ++node) {
      if (f.excluded[node - 1]) continue;
      const double cost = f.travel_costs[node - 1];
      if (!std::isfinite(cost) || cost < 0.0) {
        throw ValidationError(tag + " has no usable travel cost to node " +
                              std::to_string(node) +
                              "; unreachable nodes must be excluded explicitly");
      }
    }
    if (!f.excluded[f.origin - 1] && f.travel_costs[f.origin - 1] != 0.0) {
      throw ValidationError(tag + " must have zero travel cost at its origin");
    }
  }
}

DispatchModel build_dispatch_model(const grid::GridCase& grid_case,
                                   const std::vector<VehicleFleet>& fleets,
                                   double travel_cost_scale) {
  validate_fleets(grid_case, fleets);
  if (!std::isfinite(travel_cost_scale) || travel_cost_scale < 0.0) {
    throw ValidationError("travel cost scale must be a nonnegative real");
  }

  DispatchModel dm;
  milp::Model& m = dm.model;

  // Prefix matches the baseline OPF layout: generators, then angles.
  for (int k = 0; k < grid_case.generator_count(); ++k) {
    const grid::Generator& g = grid_case.generators()[k];
    m.add_continuous("pg_" + std::to_string(k), g.p_min_mw, g.p_max_mw,
                     g.cost_per_mwh);
  }
  for (int bus = 1; bus <= grid_case.bus_count(); ++bus) {
    const bool is_ref = bus == grid_case.ref_bus();
    m.add_continuous("theta_" + std::to_string(bus),
                     is_ref ? 0.0 : -milp::kInfinity,
                     is_ref ? 0.0 : milp::kInfinity, 0.0);
  }

  dm.fleets.resize(fleets.size());
  for (size_t v = 0; v < fleets.size(); ++v) {
    const VehicleFleet& f = fleets[v];
    dm.fleets[v].p =
        m.add_continuous("pv_" + f.id, f.p_min_mw, f.p_max_mw, f.energy_cost);
  }
  for (size_t v = 0; v < fleets.size(); ++v) {
    const VehicleFleet& f = fleets[v];
    for (int node : f.candidates()) {
      FleetVars::Candidate c;
      c.node = node;
      c.z = m.add_binary("z_" + f.id + "_" + std::to_string(node),
                         travel_cost_scale * f.travel_costs[node - 1]);
      c.y = m.add_continuous("y_" + f.id + "_" + std::to_string(node),
                             std::min(f.p_min_mw, 0.0), f.p_max_mw, 0.0);
      dm.fleets[v].candidates.push_back(c);
    }
  }

  const auto theta = [&grid_case](int bus) {
    return grid::baseline_theta_var(grid_case, bus);
  };

  for (int l = 0; l < grid_case.line_count(); ++l) {
    const grid::Line& line = grid_case.lines()[l];
    const std::string tag = std::to_string(line.from) + "_" +
                            std::to_string(line.to) + "_" + std::to_string(l);
    m.add_constraint("flow_hi_" + tag,
                     {{theta(line.from), line.susceptance},
                      {theta(line.to), -line.susceptance}},
                     milp::Sense::LessEqual, line.flow_max_mw);
    m.add_constraint("flow_lo_" + tag,
                     {{theta(line.from), line.susceptance},
                      {theta(line.to), -line.susceptance}},
                     milp::Sense::GreaterEqual, line.flow_min_mw);
  }

  // Per fleet: at most one destination, and the exact envelope tying each
  // y to p and z.
  for (size_t v = 0; v < fleets.size(); ++v) {
    const VehicleFleet& f = fleets[v];
    const FleetVars& vars = dm.fleets[v];
    if (!vars.candidates.empty()) {
      std::vector<std::pair<int, double>> terms;
      for (const FleetVars::Candidate& c : vars.candidates) {
        terms.emplace_back(c.z, 1.0);
      }
      m.add_constraint("one_dest_" + f.id, std::move(terms),
                       milp::Sense::LessEqual, 1.0);
    }
    for (const FleetVars::Candidate& c : vars.candidates) {
      for (milp::Constraint& mc : mccormick_envelope(
               vars.p, c.z, c.y, f.p_min_mw, f.p_max_mw,
               "mc_" + f.id + "_" + std::to_string(c.node))) {
        m.add_constraint(mc.name, std::move(mc.coeffs), mc.sense, mc.rhs);
      }
    }
  }

  // Nodal balance with the vehicle injections folded in.
  for (int bus = 1; bus <= grid_case.bus_count(); ++bus) {
    std::vector<std::pair<int, double>> terms;
    for (const grid::Line& line : grid_case.lines()) {
      if (line.from == bus) {
        terms.emplace_back(theta(line.from), line.susceptance);
        terms.emplace_back(theta(line.to), -line.susceptance);
      } else if (line.to == bus) {
        terms.emplace_back(theta(line.to), line.susceptance);
        terms.emplace_back(theta(line.from), -line.susceptance);
      }
    }
    for (int k = 0; k < grid_case.generator_count(); ++k) {
      if (grid_case.generators()[k].bus == bus) {
        terms.emplace_back(grid::baseline_gen_var(grid_case, k), -1.0);
      }
    }
    for (const FleetVars& vars : dm.fleets) {
      for (const FleetVars::Candidate& c : vars.candidates) {
        if (c.node == bus) terms.emplace_back(c.y, -1.0);
      }
    }
    m.add_constraint("balance_" + std::to_string(bus), std::move(terms),
                     milp::Sense::Equal, -grid_case.load_mw(bus));
  }

  return dm;
}

}  // namespace avgrid::dispatch
