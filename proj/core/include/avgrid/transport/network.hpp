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

namespace avgrid::transport {

/// A directed road segment between two (1-based) nodes. Weights are abstract
/// travel cost units (distance, congestion, tolls) and must be strictly
/// positive.
struct Edge {
  int from = 0;
  int to = 0;
  double weight = 0.0;
};

/// Directed weighted road graph with a set of restricted (closed or
/// limited-access) edges. Immutable after construction; construction
/// validates node ids, positive weights, absence of self-loops and of
/// duplicate directed edges.
class TransportNetwork {
 public:
  TransportNetwork(int node_count, std::vector<Edge> edges,
                   std::vector<int> restricted_edge_ids = {});

  int node_count() const { return node_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_.at(id); }

  bool is_restricted(int edge_id) const { return restricted_.at(edge_id) != 0; }
  /// Ascending ids of all restricted edges (the set E').
  std::vector<int> restricted_ids() const;

  /// Outgoing / incoming edge ids of a node, ascending.
  const std::vector<int>& out_edges(int node) const;
  const std::vector<int>& in_edges(int node) const;

  /// Id of the directed edge from->to, or -1.
  int find_edge(int from, int to) const;

  /// Copy of this network with additional edges marked restricted, given as
  /// (from, to) pairs. Unknown pairs raise ValidationError.
  TransportNetwork with_closures(
      const std::vector<std::pair<int, int>>& closures) const;

  bool valid_node(int node) const { return node >= 1 && node <= node_count_; }

 private:
  int node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<char> restricted_;
  std::vector<std::vector<int>> out_, in_;
};

/// Parses the transport text format:
///   transport v1
///   <node-count>
///   <from> <to> <weight> [restricted]
/// '#' starts a comment; blank lines are ignored. Duplicate directed edges
/// are rejected. Throws ParseError with a 1-based line number.
TransportNetwork parse_transport(std::istream& in,
                                 const std::string& source_name = "<stream>");
TransportNetwork parse_transport(const std::string& text,
                                 const std::string& source_name = "<string>");
TransportNetwork load_transport_file(const std::string& path);

}  // namespace avgrid::transport
