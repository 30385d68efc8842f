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

#include "watertransport/graph.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "json.hpp"

namespace wtp {

using nlohmann::json;

Graph::Graph(std::size_t num_vertices, std::span<const Edge> edges)
    : edges_(edges.begin(), edges.end()), adjacency_(num_vertices) {
  for (const Edge& e : edges_) {
    if (e.first == e.second) {
      throw InputError("self-loop at vertex " + std::to_string(e.first));
    }
    if (e.second >= num_vertices) {
      throw InputError("edge endpoint " + std::to_string(e.second) + " out of range");
    }
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
    throw InputError("duplicate edge (" + std::to_string(dup->first) + "," +
                     std::to_string(dup->second) + ")");
  }
  for (const Edge& e : edges_) {
    adjacency_[e.first].push_back(e.second);
    adjacency_[e.second].push_back(e.first);
  }
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

bool Graph::has_edge(Vertex a, Vertex b) const {
  if (!contains(a) || !contains(b)) return false;
  const auto& nbrs = adjacency_[a];
  return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

bool Graph::is_connected() const {
  if (adjacency_.empty()) return true;
  auto dist = distances_from(0);
  return std::none_of(dist.begin(), dist.end(),
                      [](std::size_t d) { return d == static_cast<std::size_t>(-1); });
}

void Graph::require_connected() const {
  if (!is_connected()) throw InputError("graph is disconnected");
}

bool Graph::is_connected_subset(std::span<const Vertex> members) const {
  if (members.empty()) return false;
  std::vector<char> in(num_vertices(), 0);
  for (Vertex u : members) {
    if (!contains(u)) return false;
    in[u] = 1;
  }
  std::vector<char> seen(num_vertices(), 0);
  std::vector<Vertex> stack{members.front()};
  seen[members.front()] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    for (Vertex w : adjacency_[u]) {
      if (in[w] && !seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  std::size_t distinct = static_cast<std::size_t>(std::count(in.begin(), in.end(), 1));
  return reached == distinct;
}

bool Graph::edges_connect(std::span<const Edge> edges) {
  if (edges.empty()) return false;
  std::unordered_map<Vertex, Vertex> parent;
  auto find = [&parent](Vertex x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : edges) {
    parent.try_emplace(e.first, e.first);
    parent.try_emplace(e.second, e.second);
  }
  std::size_t components = parent.size();
  for (const Edge& e : edges) {
    Vertex a = find(e.first);
    Vertex b = find(e.second);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

std::vector<Edge> Graph::spanning_edges(std::span<const Vertex> members) const {
  std::vector<char> in(num_vertices(), 0);
  Vertex root = members.front();
  for (Vertex u : members) {
    in[u] = 1;
    root = std::min(root, u);
  }
  std::vector<Edge> tree;
  std::vector<char> seen(num_vertices(), 0);
  std::deque<Vertex> queue{root};
  seen[root] = 1;
  while (!queue.empty()) {
    Vertex u = queue.front();
    queue.pop_front();
    for (Vertex w : adjacency_[u]) {
      if (in[w] && !seen[w]) {
        seen[w] = 1;
        tree.emplace_back(u, w);
        queue.push_back(w);
      }
    }
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (const auto& nbrs : adjacency_) best = std::max(best, nbrs.size());
  return best;
}

std::vector<std::size_t> Graph::distances_from(Vertex source) const {
  constexpr std::size_t kUnreached = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(num_vertices(), kUnreached);
  std::deque<Vertex> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    Vertex u = queue.front();
    queue.pop_front();
    for (Vertex w : adjacency_[u]) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

bool is_line_graph(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n < 2 || g.num_edges() != n - 1 || !g.is_connected()) return false;
  std::size_t ends = 0;
  for (Vertex u = 0; u < n; ++u) {
    if (g.degree(u) == 1) {
      ++ends;
    } else if (g.degree(u) != 2) {
      return false;
    }
  }
  return ends == 2;
}

std::vector<Vertex> line_order(const Graph& g, Vertex start) {
  if (!is_line_graph(g) || g.degree(start) != 1) {
    throw InputError("line_order needs a line graph and an endpoint");
  }
  std::vector<Vertex> order{start};
  Vertex prev = start;
  Vertex cur = g.neighbors(start).front();
  order.push_back(cur);
  while (g.degree(cur) == 2) {
    auto nbrs = g.neighbors(cur);
    Vertex next = nbrs[0] == prev ? nbrs[1] : nbrs[0];
    prev = cur;
    cur = next;
    order.push_back(cur);
  }
  return order;
}

bool is_complete_graph(const Graph& g) {
  const std::size_t n = g.num_vertices();
  return n >= 1 && g.num_edges() == n * (n - 1) / 2;
}

Rational WaterProfile::total() const {
  Rational sum = 0;
  for (const auto& x : levels) sum += x;
  return sum;
}

Rational WaterProfile::max_level() const {
  return *std::max_element(levels.begin(), levels.end());
}

Rational WaterProfile::min_level() const {
  return *std::min_element(levels.begin(), levels.end());
}

void WaterProfile::validate(std::size_t num_vertices) const {
  if (capacity <= 0) throw InputError("capacity must be positive");
  if (levels.size() != num_vertices) {
    throw InputError("profile has " + std::to_string(levels.size()) + " levels for " +
                     std::to_string(num_vertices) + " vertices");
  }
  for (std::size_t u = 0; u < levels.size(); ++u) {
    if (levels[u] < 0 || levels[u] > capacity) {
      throw InputError("level " + to_exact_string(levels[u]) + " at vertex " +
                       std::to_string(u) + " outside [0, " + to_exact_string(capacity) + "]");
    }
  }
}

Vertex Instance::vertex_by_name(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<Vertex>(i);
  }
  throw InputError("unknown vertex '" + std::string(name) + "'");
}

namespace {

std::string number_text(const json& j, const char* what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_number()) return j.dump();
  throw InputError(std::string(what) + " must be a string or number");
}

}  // namespace

Instance load_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("parse error: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("instance must be a JSON object");
  if (!doc.contains("vertices") || !doc["vertices"].is_array()) {
    throw InputError("instance needs a \"vertices\" array");
  }

  Instance inst;
  inst.profile.capacity = doc.contains("capacity")
                              ? parse_rational(number_text(doc["capacity"], "capacity"))
                              : Rational(1);

  std::unordered_map<std::string, Vertex> index;
  for (const auto& vj : doc["vertices"]) {
    if (!vj.is_object() || !vj.contains("id")) throw InputError("vertex entry needs an \"id\"");
    std::string id = vj["id"].is_string() ? vj["id"].get<std::string>() : vj["id"].dump();
    if (index.count(id)) throw InputError("duplicate vertex id '" + id + "'");
    index.emplace(id, static_cast<Vertex>(inst.names.size()));
    inst.names.push_back(id);
    inst.profile.levels.push_back(
        vj.contains("level") ? parse_rational(number_text(vj["level"], "level")) : Rational(0));
  }

  auto lookup = [&index](const json& idj) {
    std::string id = idj.is_string() ? idj.get<std::string>() : idj.dump();
    auto it = index.find(id);
    if (it == index.end()) throw InputError("edge references unknown vertex '" + id + "'");
    return it->second;
  };

  std::vector<Edge> edges;
  if (doc.contains("edges")) {
    for (const auto& ej : doc["edges"]) {
      if (!ej.is_array() || ej.size() != 2) throw InputError("edge must be a pair of ids");
      Vertex a = lookup(ej[0]);
      Vertex b = lookup(ej[1]);
      if (a == b) throw InputError("self-loop at '" + inst.names[a] + "'");
      edges.emplace_back(a, b);
    }
  }
  inst.graph = Graph(inst.names.size(), edges);
  if (inst.names.empty()) throw InputError("instance has no vertices");
  inst.graph.require_connected();
  inst.profile.validate(inst.names.size());
  if (doc.contains("target") && !doc["target"].is_null()) inst.target = lookup(doc["target"]);
  return inst;
}

std::string serialize_instance(const Instance& instance, int indent) {
  json doc;
  doc["capacity"] = to_exact_string(instance.profile.capacity);
  json vertices = json::array();
  for (std::size_t i = 0; i < instance.names.size(); ++i) {
    vertices.push_back({{"id", instance.names[i]},
                        {"level", to_exact_string(instance.profile.levels[i])}});
  }
  doc["vertices"] = std::move(vertices);
  json edges = json::array();
  for (const Edge& e : instance.graph.edges()) {
    edges.push_back({instance.names[e.first], instance.names[e.second]});
  }
  doc["edges"] = std::move(edges);
  if (instance.target) doc["target"] = instance.names[*instance.target];
  return doc.dump(indent);
}

Instance make_instance(Graph graph, std::vector<Rational> levels, Rational capacity) {
  Instance inst;
  inst.names.reserve(graph.num_vertices());
  for (std::size_t i = 0; i < graph.num_vertices(); ++i) inst.names.push_back(std::to_string(i));
  inst.graph = std::move(graph);
  inst.profile.levels = std::move(levels);
  inst.profile.capacity = std::move(capacity);
  inst.profile.validate(inst.graph.num_vertices());
  return inst;
}

namespace {

struct SubsetEnumerator {
  const Graph& g;
  std::size_t max_size;
  const std::function<void(std::span<const Vertex>)>& visit;
  std::vector<char> in_set;
  std::vector<char> excluded;
  std::vector<Vertex> members;
  std::vector<Vertex> sorted;

  void emit() {
    sorted = members;
    std::sort(sorted.begin(), sorted.end());
    visit(sorted);
  }

  // `candidates` holds the frontier N(S) \ S \ excluded in ascending order.
  void extend(std::vector<Vertex> candidates) {
    emit();
    if (members.size() >= max_size) return;
    std::vector<Vertex> newly_excluded;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      Vertex w = candidates[i];
      std::vector<Vertex> next(candidates.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                               candidates.end());
      in_set[w] = 1;
      members.push_back(w);
      for (Vertex x : g.neighbors(w)) {
        if (!in_set[x] && !excluded[x] && std::find(next.begin(), next.end(), x) == next.end()) {
          next.push_back(x);
        }
      }
      std::sort(next.begin(), next.end());
      extend(std::move(next));
      members.pop_back();
      in_set[w] = 0;
      excluded[w] = 1;
      newly_excluded.push_back(w);
    }
    for (Vertex w : newly_excluded) excluded[w] = 0;
  }
};

}  // namespace

void for_each_connected_subset(const Graph& g, Vertex v, std::size_t max_size,
                               const std::function<void(std::span<const Vertex>)>& visit) {
  if (!g.contains(v) || max_size == 0) return;
  SubsetEnumerator e{g, max_size, visit, std::vector<char>(g.num_vertices(), 0),
                     std::vector<char>(g.num_vertices(), 0), {}, {}};
  e.in_set[v] = 1;
  e.members.push_back(v);
  std::vector<Vertex> frontier(g.neighbors(v).begin(), g.neighbors(v).end());
  e.extend(std::move(frontier));
}

std::vector<std::vector<Vertex>> connected_subsets_containing(const Graph& g, Vertex v,
                                                              std::size_t max_size) {
  std::vector<std::vector<Vertex>> out;
  for_each_connected_subset(g, v, max_size, [&out](std::span<const Vertex> s) {
    out.emplace_back(s.begin(), s.end());
  });
  return out;
}

Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(i + 1));
  }
  return Graph(n, edges);
}

Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
    }
  }
  return Graph(n, edges);
}

Graph star_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) edges.emplace_back(0, static_cast<Vertex>(i));
  return Graph(n, edges);
}

}  // namespace wtp
