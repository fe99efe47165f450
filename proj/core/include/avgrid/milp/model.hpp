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
#include <string>
#include <utility>
#include <vector>

namespace avgrid::milp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary };

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  VarKind kind = VarKind::Continuous;
  double objective = 0.0;
};

/// One linear row: sum(coeffs) sense rhs. Coefficients are kept sorted by
/// variable index with duplicates merged.
struct Constraint {
  std::string name;
  std::vector<std::pair<int, double>> coeffs;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

/// A minimization model over continuous and binary variables.
///
/// The model is a plain value type: cheap to copy, immutable during a solve,
/// and safe to share read-only across threads.
class Model {
 public:
  /// Adds a variable and returns its index.
  int add_variable(std::string name, double lower, double upper, VarKind kind,
                   double objective = 0.0);
  int add_continuous(std::string name, double lower, double upper,
                     double objective = 0.0);
  int add_binary(std::string name, double objective = 0.0);

  /// Adds a row. Coefficients are canonicalized (sorted, duplicates summed).
  void add_constraint(std::string name,
                      std::vector<std::pair<int, double>> coeffs, Sense sense,
                      double rhs);

  void set_bounds(int var, double lower, double upper);
  void set_objective_coeff(int var, double coeff);

  int variable_count() const { return static_cast<int>(variables_.size()); }
  int constraint_count() const { return static_cast<int>(constraints_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Variable& variable(int i) const { return variables_.at(i); }

  /// Indices of all binary variables, ascending.
  std::vector<int> binary_variables() const;

  /// Index of the variable with the given name, or -1.
  int find_variable(const std::string& name) const;

  /// Throws ValidationError unless all model invariants hold:
  /// unique nonempty names, finite coefficients, lower <= upper,
  /// binaries bounded within [0,1], rows referencing declared variables.
  void validate() const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
};

}  // namespace avgrid::milp
