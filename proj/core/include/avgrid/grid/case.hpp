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

#include <iosfwd>
#include <string>
#include <vector>

namespace avgrid::grid {

struct Bus {
  int id = 0;          // 1-based
  double load_mw = 0.0;  // p^d
};

/// A transmission line under the dc flow model. `susceptance` is the flow
/// coefficient in MW per radian (per-unit susceptance times the MVA base;
/// the file loader applies that conversion).
struct Line {
  int from = 0;
  int to = 0;
  double susceptance = 0.0;
  double flow_min_mw = 0.0;
  double flow_max_mw = 0.0;
};

struct Generator {
  int bus = 0;
  double p_min_mw = 0.0;
  double p_max_mw = 0.0;
  double cost_per_mwh = 0.0;  // linear coefficient c^g
};

/// Immutable power-system case. Construction validates bus ids (1..N, each
/// listed once), the reference bus, line/generator cross-references, bound
/// ordering, positive susceptances, and connectivity over the lines.
class GridCase {
 public:
  GridCase(std::string name, int ref_bus, std::vector<Bus> buses,
           std::vector<Line> lines, std::vector<Generator> generators);

  const std::string& name() const { return name_; }
  int ref_bus() const { return ref_bus_; }
  int bus_count() const { return static_cast<int>(buses_.size()); }
  int line_count() const { return static_cast<int>(lines_.size()); }
  int generator_count() const { return static_cast<int>(generators_.size()); }
  const std::vector<Bus>& buses() const { return buses_; }
  const std::vector<Line>& lines() const { return lines_; }
  const std::vector<Generator>& generators() const { return generators_; }

  double load_mw(int bus) const { return buses_.at(bus - 1).load_mw; }
  double total_load_mw() const;
  double total_generation_capacity_mw() const;

  bool valid_bus(int bus) const { return bus >= 1 && bus <= bus_count(); }

 private:
  std::string name_;
  int ref_bus_ = 0;
  std::vector<Bus> buses_;
  std::vector<Line> lines_;
  std::vector<Generator> generators_;
};

/// Parses the grid case text format (sections `bus`, `line`, `gen` closed by
/// `end`, preceded by `case v1` plus `name`, `basemva` and `ref` keys).
/// Susceptance is read in per-unit and scaled by the MVA base. Unknown
/// sections are rejected. Throws ParseError with a 1-based line number.
GridCase parse_grid_case(std::istream& in,
                         const std::string& source_name = "<stream>");
GridCase parse_grid_case(const std::string& text,
                         const std::string& source_name = "<string>");
GridCase load_grid_case_file(const std::string& path);

}  // namespace avgrid::grid
