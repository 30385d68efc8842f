// Copyright 2026 The Watertransport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WATERTRANSPORT_GRAPH_HPP_
#define WATERTRANSPORT_GRAPH_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "watertransport/rational.hpp"

namespace wtp {

using Vertex = std::uint32_t;

// Unordered pair stored with first < second.
struct Edge {
  Vertex first = 0;
  Vertex second = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : first(a < b ? a : b), second(a < b ? b : a) {}

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Finite simple undirected graph on vertices 0..n-1. Immutable once built.
class Graph {
 public:
  Graph() = default;

  // Throws InputError on self-loops, duplicate edges or out-of-range ids.
  // Connectivity is not required here; see require_connected().
  Graph(std::size_t num_vertices, std::span<const Edge> edges);

  std::size_t num_vertices() const { return adjacency_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  // Sorted ascending.
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Vertex> neighbors(Vertex u) const { return adjacency_[u]; }
  std::size_t degree(Vertex u) const { return adjacency_[u].size(); }
  bool has_edge(Vertex a, Vertex b) const;
  bool contains(Vertex u) const { return u < adjacency_.size(); }

  bool is_connected() const;
  void require_connected() const;

  // True when `members` (a vertex list) induces a connected subgraph.
  bool is_connected_subset(std::span<const Vertex> members) const;

  // True when the edges connect exactly the vertices they touch.
  static bool edges_connect(std::span<const Edge> edges);

  // Canonical connecting edge set for a connected vertex set: BFS tree from
  // the smallest member, neighbors visited in ascending order.
  std::vector<Edge> spanning_edges(std::span<const Vertex> members) const;

  std::size_t max_degree() const;

  // Shortest-path hop distances from `source`.
  std::vector<std::size_t> distances_from(Vertex source) const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adjacency_;
};

// Line graph (path) detection: exactly two degree-1 vertices, the rest
// degree 2, connected. A single edge qualifies.
bool is_line_graph(const Graph& g);

// Vertices of a line graph in path order starting from endpoint `start`.
std::vector<Vertex> line_order(const Graph& g, Vertex start);

bool is_complete_graph(const Graph& g);

// Levels in [0, capacity] indexed by vertex.
struct WaterProfile {
  std::vector<Rational> levels;
  Rational capacity = 1;

  std::size_t size() const { return levels.size(); }
  const Rational& operator[](Vertex u) const { return levels[u]; }
  Rational& operator[](Vertex u) { return levels[u]; }

  Rational total() const;
  Rational max_level() const;
  Rational min_level() const;

  // Throws InputError if a level falls outside [0, capacity] or the size
  // does not match.
  void validate(std::size_t num_vertices) const;

  friend bool operator==(const WaterProfile&, const WaterProfile&) = default;
};

// A parsed instance: graph, profile, external vertex names and an optional
// target named in the file.
struct Instance {
  Graph graph;
  WaterProfile profile;
  std::vector<std::string> names;
  std::optional<Vertex> target;

  // Throws InputError for unknown names.
  Vertex vertex_by_name(std::string_view name) const;
};

// Parses the JSON instance format:
//   {"capacity": "1", "vertices": [{"id": "a", "level": "1/2"}, ...],
//    "edges": [["a", "b"], ...], "target": "a"}
// "capacity" defaults to 1 and "target" is optional. Throws InputError.
Instance load_instance(std::string_view text);

// Inverse of load_instance; levels written as exact rational strings.
std::string serialize_instance(const Instance& instance, int indent = 2);

// Convenience for tests and generators: names "0".."n-1".
Instance make_instance(Graph graph, std::vector<Rational> levels, Rational capacity = 1);

// Visits every connected vertex set that contains `v` and has at most
// `max_size` members, exactly once. Members are reported in ascending order.
// Enumeration extends the current set by frontier vertices in ascending order
// and permanently excludes a vertex once its branch has been explored.
void for_each_connected_subset(const Graph& g, Vertex v, std::size_t max_size,
                               const std::function<void(std::span<const Vertex>)>& visit);

std::vector<std::vector<Vertex>> connected_subsets_containing(const Graph& g, Vertex v,
                                                              std::size_t max_size);

// Small graph builders used throughout tests and tools.
Graph path_graph(std::size_t n);
Graph complete_graph(std::size_t n);
Graph star_graph(std::size_t n);  // center 0

}  // namespace wtp

#endif  // WATERTRANSPORT_GRAPH_HPP_
