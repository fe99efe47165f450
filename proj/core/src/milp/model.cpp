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

#include "avgrid/milp/model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "avgrid/errors.hpp"

namespace avgrid::milp {

int Model::add_variable(std::string name, double lower, double upper,
                        VarKind kind, double objective) {
  variables_.push_back(
      Variable{std::move(name), lower, upper, kind, objective});
  return static_cast<int>(variables_.size()) - 1;
}

int Model::add_continuous(std::string name, double lower, double upper,
                          double objective) {
  return add_variable(std::move(name), lower, upper, VarKind::Continuous,
                      objective);
}

int Model::add_binary(std::string name, double objective) {
  return add_variable(std::move(name), 0.0, 1.0, VarKind::Binary, objective);
}

void Model::add_constraint(std::string name,
                           std::vector<std::pair<int, double>> coeffs,
                           Sense sense, double rhs) {
  std::sort(coeffs.begin(), coeffs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // Merge duplicate variable entries.
  std::vector<std::pair<int, double>> merged;
  merged.reserve(coeffs.size());
  for (const auto& [var, coeff] : coeffs) {
    if (!merged.empty() && merged.back().first == var) {
      merged.back().second += coeff;
    } else {
      merged.emplace_back(var, coeff);
    }
  }
  constraints_.push_back(Constraint{std::move(name), std::move(merged), sense, rhs});
}

void Model::set_bounds(int var, double lower, double upper) {
  variables_.at(var).lower = lower;
  variables_.at(var).upper = upper;
}

void Model::set_objective_coeff(int var, double coeff) {
  variables_.at(var).objective = coeff;
}

std::vector<int> Model::binary_variables() const {
  std::vector<int> out;
  for (int i = 0; i < variable_count(); ++i) {
    if (variables_[i].kind == VarKind::Binary) out.push_back(i);
  }
  return out;
}

int Model::find_variable(const std::string& name) const {
  for (int i = 0; i < variable_count(); ++i) {
    if (variables_[i].name == name) return i;
  }
  return -1;
}

void Model::validate() const {
  std::unordered_set<std::string> names;
  for (int i = 0; i < variable_count(); ++i) {
    const Variable& v = variables_[i];
    if (v.name.empty()) {
      throw ValidationError("variable " + std::to_string(i) + " has no name");
    }
    if (!names.insert(v.name).second) {
      throw ValidationError("duplicate variable name '" + v.name + "'");
    }
    if (std::isnan(v.lower) || std::isnan(v.upper) || !std::isfinite(v.objective)) {
      throw ValidationError("variable '" + v.name + "' has non-finite data");
    }
    if (v.lower > v.upper) {
      throw ValidationError("variable '" + v.name + "' has lower > upper");
    }
    if (v.kind == VarKind::Binary && (v.lower < 0.0 || v.upper > 1.0)) {
      throw ValidationError("binary variable '" + v.name +
                            "' has bounds outside [0,1]");
    }
  }
  for (const Constraint& c : constraints_) {
    for (const auto& [var, coeff] : c.coeffs) {
      if (var < 0 || var >= variable_count()) {
        throw ValidationError("constraint '" + c.name +
                              "' references undeclared variable index " +
                              std::to_string(var));
      }
      if (!std::isfinite(coeff)) {
        throw ValidationError("constraint '" + c.name +
                              "' has a non-finite coefficient");
      }
    }
    if (!std::isfinite(c.rhs)) {
      throw ValidationError("constraint '" + c.name + "' has a non-finite rhs");
    }
  }
}

}  // namespace avgrid::milp
