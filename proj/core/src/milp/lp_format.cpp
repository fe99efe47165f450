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

#include "avgrid/milp/lp_format.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace avgrid::milp {

namespace {

std::string num(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void append_terms(std::ostringstream& out,
                  const std::vector<std::pair<int, double>>& coeffs,
                  const Model& model) {
  bool first = true;
  for (const auto& [var, coeff] : coeffs) {
    if (coeff == 0.0) continue;
    if (first) {
      if (coeff < 0.0) out << "- ";
      first = false;
    } else {
      out << (coeff < 0.0 ? " - " : " + ");
    }
    const double mag = std::abs(coeff);
    if (mag != 1.0) out << num(mag) << " ";
    out << model.variable(var).name;
  }
  if (first) out << "0";
}

}  // namespace

std::string write_lp_format(const Model& model) {
  std::ostringstream out;

  out << "Minimize\n obj: ";
  std::vector<std::pair<int, double>> objective;
  for (int j = 0; j < model.variable_count(); ++j) {
    if (model.variable(j).objective != 0.0) {
      objective.emplace_back(j, model.variable(j).objective);
    }
  }
  append_terms(out, objective, model);
  out << "\n";

  out << "Subject To\n";
  int row = 0;
  for (const Constraint& c : model.constraints()) {
    out << " " << (c.name.empty() ? "c" + std::to_string(row) : c.name) << ": ";
    append_terms(out, c.coeffs, model);
    switch (c.sense) {
      case Sense::LessEqual:
        out << " <= ";
        break;
      case Sense::Equal:
        out << " = ";
        break;
      case Sense::GreaterEqual:
        out << " >= ";
        break;
    }
    out << num(c.rhs) << "\n";
    ++row;
  }

  out << "Bounds\n";
  for (const Variable& v : model.variables()) {
    if (v.lower == v.upper) {
      out << " " << v.name << " = " << num(v.lower) << "\n";
    } else if (!std::isfinite(v.lower) && !std::isfinite(v.upper)) {
      out << " " << v.name << " free\n";
    } else {
      out << " " << (std::isfinite(v.lower) ? num(v.lower) : "-inf") << " <= "
          << v.name << " <= " << (std::isfinite(v.upper) ? num(v.upper) : "+inf")
          << "\n";
    }
  }

  out << "Binaries\n";
  for (const Variable& v : model.variables()) {
    if (v.kind == VarKind::Binary) out << " " << v.name << "\n";
  }
  out << "End\n";
  return out.str();
}

}  // namespace avgrid::milp
