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

#include "avgrid/milp/model.hpp"

namespace avgrid::milp {

/// Renders the model in LP-style text for cross-checking against external
/// solvers. Section order: objective, constraints in declaration order,
/// bounds, binary list.
std::string write_lp_format(const Model& model);

}  // namespace avgrid::milp
