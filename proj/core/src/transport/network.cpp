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

#include "avgrid/transport/network.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "avgrid/errors.hpp"

namespace avgrid::transport {

TransportNetwork::TransportNetwork(int node_count, std::vector<Edge> edges,
                                   std::vector<int> restricted_edge_ids)
    : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count_ < 1) {
    throw ValidationError("transport network needs at least one node");
  }
  out_.assign(node_count_ + 1, {});
  in_.assign(node_count_ + 1, {});
  restricted_.assign(edges_.size(), 0);

  std::map<std::pair<int, int>, int> seen;
  for (int id = 0; id < edge_count(); ++id) {
    const Edge& e = edges_[id];
    if (!valid_node(e.from) || !valid_node(e.to)) {
      throw ValidationError("edge " + std::to_string(e.from) + "->" +
                            std::to_string(e.to) + " references nodes outside 1.." +
                            std::to_string(node_count_));
    }
    if (e.from == e.to) {
      throw ValidationError("self-loop at node " + std::to_string(e.from));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw ValidationError("edge " + std::to_string(e.from) + "->" +
                            std::to_string(e.to) +
                            " must have a strictly positive finite weight");
    }
    if (!seen.emplace(std::make_pair(e.from, e.to), id).second) {
      throw ValidationError("duplicate directed edge " + std::to_string(e.from) +
                            "->" + std::to_string(e.to));
    }
    out_[e.from].push_back(id);
    in_[e.to].push_back(id);
  }
  for (int id : restricted_edge_ids) {
    if (id < 0 || id >= edge_count()) {
      throw ValidationError("restricted edge id " + std::to_string(id) +
                            " does not name an edge");
    }
    restricted_[id] = 1;
  }
}

std::vector<int> TransportNetwork::restricted_ids() const {
  std::vector<int> ids;
  for (int id = 0; id < edge_count(); ++id) {
    if (restricted_[id]) ids.push_back(id);
  }
  return ids;
}

const std::vector<int>& TransportNetwork::out_edges(int node) const {
  if (!valid_node(node)) {
    throw ValidationError("node " + std::to_string(node) + " out of range");
  }
  return out_[node];
}

const std::vector<int>& TransportNetwork::in_edges(int node) const {
  if (!valid_node(node)) {
    throw ValidationError("node " + std::to_string(node) + " out of range");
  }
  return in_[node];
}

int TransportNetwork::find_edge(int from, int to) const {
  if (!valid_node(from)) return -1;
  for (int id : out_[from]) {
    if (edges_[id].to == to) return id;
  }
  return -1;
}

TransportNetwork TransportNetwork::with_closures(
    const std::vector<std::pair<int, int>>& closures) const {
  std::vector<int> restricted = restricted_ids();
  for (const auto& [from, to] : closures) {
    const int id = find_edge(from, to);
    if (id < 0) {
      throw ValidationError("closure names unknown edge " +
                            std::to_string(from) + "->" + std::to_string(to));
    }
    restricted.push_back(id);
  }
  return TransportNetwork(node_count_, edges_, std::move(restricted));
}

namespace {

// Strips comments and surrounding whitespace; empty result means skip.
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

}  // namespace

TransportNetwork parse_transport(std::istream& in,
                                 const std::string& source_name) {
  std::string raw;
  int line_no = 0;
  bool header_seen = false;
  int node_count = -1;
  std::vector<Edge> edges;
  std::vector<int> restricted;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = clean_line(raw);
    if (line.empty()) continue;

    if (!header_seen) {
      if (line != "transport v1") {
        throw ParseError(source_name + ": expected header 'transport v1', got '" +
                             line + "'",
                         line_no);
      }
      header_seen = true;
      continue;
    }
    if (node_count < 0) {
      std::istringstream fields(line);
      if (!(fields >> node_count) || node_count < 1 || !fields.eof()) {
        throw ParseError(source_name + ": expected the node count, got '" + line +
                             "'",
                         line_no);
      }
      continue;
    }

    std::istringstream fields(line);
    int from = 0;
    int to = 0;
    double weight = 0.0;
    if (!(fields >> from >> to >> weight)) {
      throw ParseError(source_name + ": expected 'from to weight [restricted]'",
                       line_no);
    }
    std::string flag;
    if (fields >> flag) {
      if (flag != "restricted") {
        throw ParseError(source_name + ": unknown edge flag '" + flag + "'",
                         line_no);
      }
      restricted.push_back(static_cast<int>(edges.size()));
    }
    std::string extra;
    if (fields >> extra) {
      throw ParseError(source_name + ": trailing tokens after edge definition",
                       line_no);
    }
    for (const Edge& e : edges) {
      if (e.from == from && e.to == to) {
        throw ParseError(source_name + ": duplicate directed edge " +
                             std::to_string(from) + "->" + std::to_string(to),
                         line_no);
      }
    }
    edges.push_back(Edge{from, to, weight});
  }

  if (!header_seen) {
    throw ParseError(source_name + ": missing 'transport v1' header", line_no);
  }
  if (node_count < 0) {
    throw ParseError(source_name + ": missing node count", line_no);
  }
  try {
    return TransportNetwork(node_count, std::move(edges), std::move(restricted));
  } catch (const ValidationError& e) {
    throw ParseError(source_name + ": " + e.what(), 0);
  }
}

TransportNetwork parse_transport(const std::string& text,
                                 const std::string& source_name) {
  std::istringstream in(text);
  return parse_transport(in, source_name);
}

TransportNetwork load_transport_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open transport file '" + path + "'");
  }
  return parse_transport(in, path);
}

}  // namespace avgrid::transport
