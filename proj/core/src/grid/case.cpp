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

#include "avgrid/grid/case.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "avgrid/errors.hpp"

namespace avgrid::grid {

GridCase::GridCase(std::string name, int ref_bus, std::vector<Bus> buses,
                   std::vector<Line> lines, std::vector<Generator> generators)
    : name_(std::move(name)),
      ref_bus_(ref_bus),
      buses_(std::move(buses)),
      lines_(std::move(lines)),
      generators_(std::move(generators)) {
  const int n = bus_count();
  if (n < 1) throw ValidationError("grid case has no buses");

  std::vector<char> seen(n + 1, 0);
  for (const Bus& b : buses_) {
    if (b.id < 1 || b.id > n || seen[b.id]) {
      throw ValidationError("bus ids must cover 1.." + std::to_string(n) +
                            " exactly once (offending id " +
                            std::to_string(b.id) + ")");
    }
    if (!std::isfinite(b.load_mw)) {
      throw ValidationError("bus " + std::to_string(b.id) +
                            " has a non-finite load");
    }
    seen[b.id] = 1;
  }
  std::sort(buses_.begin(), buses_.end(),
            [](const Bus& a, const Bus& b) { return a.id < b.id; });

  if (!valid_bus(ref_bus_)) {
    throw ValidationError("reference bus " + std::to_string(ref_bus_) +
                          " does not exist");
  }

  for (const Line& l : lines_) {
    const std::string tag =
        "line " + std::to_string(l.from) + "-" + std::to_string(l.to);
    if (!valid_bus(l.from) || !valid_bus(l.to) || l.from == l.to) {
      throw ValidationError(tag + " has invalid endpoints");
    }
    if (!(l.susceptance > 0.0) || !std::isfinite(l.susceptance)) {
      throw ValidationError(tag + " needs a strictly positive susceptance");
    }
    if (l.flow_min_mw > l.flow_max_mw || !std::isfinite(l.flow_min_mw) ||
        !std::isfinite(l.flow_max_mw)) {
      throw ValidationError(tag + " has inverted or non-finite flow limits");
    }
  }

  for (const Generator& g : generators_) {
    const std::string tag = "generator at bus " + std::to_string(g.bus);
    if (!valid_bus(g.bus)) throw ValidationError(tag + ": no such bus");
    if (g.p_min_mw > g.p_max_mw || !std::isfinite(g.p_min_mw) ||
        !std::isfinite(g.p_max_mw)) {
      throw ValidationError(tag + " has inverted or non-finite limits");
    }
    if (!std::isfinite(g.cost_per_mwh)) {
      throw ValidationError(tag + " has a non-finite cost");
    }
  }

  // Connectivity over the lines.
  std::vector<char> reached(n + 1, 0);
  std::vector<int> stack{ref_bus_};
  reached[ref_bus_] = 1;
  while (!stack.empty()) {
    const int bus = stack.back();
    stack.pop_back();
    for (const Line& l : lines_) {
      const int other = l.from == bus ? l.to : (l.to == bus ? l.from : 0);
      if (other != 0 && !reached[other]) {
        reached[other] = 1;
        stack.push_back(other);
      }
    }
  }
  for (int bus = 1; bus <= n; ++bus) {
    if (!reached[bus]) {
      throw ValidationError("grid is disconnected: bus " + std::to_string(bus) +
                            " is unreachable from the reference bus");
    }
  }
}

double GridCase::total_load_mw() const {
  double total = 0.0;
  for (const Bus& b : buses_) total += b.load_mw;
  return total;
}

double GridCase::total_generation_capacity_mw() const {
  double total = 0.0;
  for (const Generator& g : generators_) total += g.p_max_mw;
  return total;
}

namespace {

std::string clean_line(const std::string& raw) {
  std::string line = raw;
  if (const auto hash = line.find('#'); hash != std::string::npos) {
    line.erase(hash);
  }
  const auto begin = line.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = line.find_last_not_of(" \t\r");
  return line.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& source, const std::string& message,
                       int line_no) {
  throw ParseError(source + ": " + message, line_no);
}

}  // namespace

GridCase parse_grid_case(std::istream& in, const std::string& source_name) {
  enum class Section { None, Bus, Line, Gen };
  Section section = Section::None;
  bool header_seen = false;
  std::string name;
  double base_mva = 100.0;
  int ref_bus = -1;
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Generator> generators;

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = clean_line(raw);
    if (line.empty()) continue;

    if (!header_seen) {
      if (line != "case v1") {
        fail(source_name, "expected header 'case v1', got '" + line + "'",
             line_no);
      }
      header_seen = true;
      continue;
    }

    std::istringstream fields(line);
    std::string word;
    fields >> word;

    if (section == Section::None) {
      if (word == "name") {
        if (!(fields >> name)) fail(source_name, "'name' needs a value", line_no);
      } else if (word == "basemva") {
        if (!(fields >> base_mva) || base_mva <= 0.0) {
          fail(source_name, "'basemva' needs a positive value", line_no);
        }
      } else if (word == "ref") {
        if (!(fields >> ref_bus)) fail(source_name, "'ref' needs a bus id", line_no);
      } else if (word == "bus") {
        section = Section::Bus;
      } else if (word == "line") {
        section = Section::Line;
      } else if (word == "gen") {
        section = Section::Gen;
      } else {
        fail(source_name, "unknown section or key '" + word + "'", line_no);
      }
      std::string extra;
      if (section == Section::None && fields >> extra) {
        fail(source_name, "trailing tokens after '" + word + "'", line_no);
      }
      continue;
    }

    if (word == "end") {
      section = Section::None;
      continue;
    }

    std::istringstream row(line);
    if (section == Section::Bus) {
      Bus b;
      if (!(row >> b.id >> b.load_mw)) {
        fail(source_name, "bus row needs 'id load_mw'", line_no);
      }
      std::string extra;
      if (row >> extra) fail(source_name, "bus row has trailing tokens", line_no);
      buses.push_back(b);
    } else if (section == Section::Line) {
      Line l;
      double susceptance_pu = 0.0;
      if (!(row >> l.from >> l.to >> susceptance_pu >> l.flow_min_mw >>
            l.flow_max_mw)) {
        fail(source_name,
             "line row needs 'from to susceptance_pu fmin_mw fmax_mw'", line_no);
      }
      std::string extra;
      if (row >> extra) fail(source_name, "line row has trailing tokens", line_no);
      l.susceptance = susceptance_pu * base_mva;
      lines.push_back(l);
    } else {
      Generator g;
      if (!(row >> g.bus >> g.p_min_mw >> g.p_max_mw >> g.cost_per_mwh)) {
        fail(source_name, "gen row needs 'bus pmin_mw pmax_mw cost_per_mwh'",
             line_no);
      }
      std::string extra;
      if (row >> extra) fail(source_name, "gen row has trailing tokens", line_no);
      generators.push_back(g);
    }
  }

  if (!header_seen) fail(source_name, "missing 'case v1' header", line_no);
  if (section != Section::None) {
    fail(source_name, "unterminated section (missing 'end')", line_no);
  }
  if (ref_bus < 0) fail(source_name, "missing 'ref' key", line_no);
  if (name.empty()) name = "unnamed";

  try {
    return GridCase(name, ref_bus, std::move(buses), std::move(lines),
                    std::move(generators));
  } catch (const ValidationError& e) {
    throw ParseError(source_name + ": " + e.what(), 0);
  }
}

GridCase parse_grid_case(const std::string& text,
                         const std::string& source_name) {
  std::istringstream in(text);
  return parse_grid_case(in, source_name);
}

GridCase load_grid_case_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open grid case file '" + path + "'");
  }
  return parse_grid_case(in, path);
}

}  // namespace avgrid::grid
