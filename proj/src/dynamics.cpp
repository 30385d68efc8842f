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

#include "watertransport/dynamics.hpp"

#include <algorithm>

namespace wtp {

Move Move::edge(Vertex x, Vertex y, Rational mu) {
  Move m;
  m.kind = Kind::kEdge;
  m.edges.emplace_back(x, y);
  m.mu = std::move(mu);
  return m;
}

Move Move::macro(std::vector<Edge> edges, Rational mu) {
  Move m;
  m.kind = Kind::kMacro;
  std::sort(edges.begin(), edges.end());
  m.edges = std::move(edges);
  m.mu = std::move(mu);
  return m;
}

Move Move::average(const Graph& g, std::span<const Vertex> members) {
  if (members.size() == 2) return edge(members[0], members[1]);
  return macro(g.spanning_edges(members));
}

std::vector<Vertex> Move::vertex_set() const {
  std::vector<Vertex> out;
  out.reserve(edges.size() + 1);
  for (const Edge& e : edges) {
    out.push_back(e.first);
    out.push_back(e.second);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void validate_move(const Graph& g, const Move& move) {
  if (move.mu < 0 || move.mu > half()) {
    throw InputError("mu " + to_exact_string(move.mu) + " outside [0, 1/2]");
  }
  for (const Edge& e : move.edges) {
    if (!g.has_edge(e.first, e.second)) {
      throw InputError("edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                       ") not in graph");
    }
  }
  if (move.kind == Move::Kind::kEdge) {
    if (move.edges.size() != 1) throw InputError("edge move needs exactly one edge");
    return;
  }
  if (!Graph::edges_connect(move.edges)) throw InputError("macro edge set is not connected");
  if (move.vertex_set().size() < 3) throw InputError("macro move needs at least 3 vertices");
}

void validate_sequence(const Graph& g, const MoveSequence& seq) {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    try {
      validate_move(g, seq[i]);
    } catch (const InputError& e) {
      throw InputError("move " + std::to_string(i + 1) + ": " + e.what());
    }
  }
}

void apply_move_unchecked(std::vector<Rational>& levels, const Move& move) {
  if (move.mu == 0) return;
  if (move.kind == Move::Kind::kEdge) {
    const Edge& e = move.edges.front();
    Rational a = levels[e.first];
    Rational b = levels[e.second];
    Rational delta = move.mu * (b - a);
    levels[e.first] = a + delta;
    levels[e.second] = b - delta;
    return;
  }
  const std::vector<Vertex> members = move.vertex_set();
  Rational sum = 0;
  for (Vertex u : members) sum += levels[u];
  Rational mean = sum / static_cast<long>(members.size());
  if (move.mu == half()) {
    for (Vertex u : members) levels[u] = mean;
    return;
  }
  Rational keep = 1 - 2 * move.mu;
  Rational pull = 2 * move.mu * mean;
  for (Vertex u : members) levels[u] = keep * levels[u] + pull;
}

WaterProfile apply_move(const Graph& g, const WaterProfile& profile, const Move& move) {
  validate_move(g, move);
  WaterProfile out = profile;
  apply_move_unchecked(out.levels, move);
  return out;
}

WaterProfile apply_sequence(const Graph& g, const WaterProfile& profile, const MoveSequence& seq,
                            std::vector<WaterProfile>* trace) {
  validate_sequence(g, seq);
  WaterProfile cur = profile;
  if (trace) trace->push_back(cur);
  for (const Move& m : seq) {
    apply_move_unchecked(cur.levels, m);
    if (trace) trace->push_back(cur);
  }
  return cur;
}

SadProfile SadProfile::delta(std::size_t num_vertices, Vertex start) {
  SadProfile p;
  p.weights.assign(num_vertices, Rational(0));
  p.weights[start] = 1;
  p.start_vertex = start;
  return p;
}

Rational SadProfile::total() const {
  Rational sum = 0;
  for (const auto& w : weights) sum += w;
  return sum;
}

Rational SadProfile::dot(const WaterProfile& profile) const {
  Rational sum = 0;
  for (std::size_t u = 0; u < weights.size(); ++u) {
    if (weights[u] != 0) sum += weights[u] * profile.levels[u];
  }
  return sum;
}

SadProfile dual_sad(const Graph& g, const MoveSequence& seq, Vertex target) {
  if (!g.contains(target)) throw InputError("target vertex out of range");
  validate_sequence(g, seq);
  SadProfile xi = SadProfile::delta(g.num_vertices(), target);
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) apply_move_unchecked(xi.weights, *it);
  return xi;
}

EnergyLedger EnergyLedger::start(std::vector<Vertex> subset, const WaterProfile& profile) {
  EnergyLedger ledger;
  std::sort(subset.begin(), subset.end());
  ledger.subset = std::move(subset);
  ledger.history.emplace_back(0, ledger.energy(profile));
  return ledger;
}

Rational EnergyLedger::energy(const WaterProfile& profile) const {
  Rational w = 0;
  for (Vertex u : subset) w += profile.levels[u] * profile.levels[u];
  return w;
}

Rational EnergyLedger::last_drop() const {
  if (history.size() < 2) return 0;
  return history[history.size() - 2].second - history.back().second;
}

EnergyLedger energy_step(EnergyLedger ledger, const WaterProfile&, const Move&,
                         const WaterProfile& after) {
  std::size_t round = ledger.history.empty() ? 0 : ledger.history.back().first + 1;
  ledger.history.emplace_back(round, ledger.energy(after));
  return ledger;
}

Rational predicted_energy_drop(const Rational& a, const Rational& b, const Rational& mu) {
  Rational d = b - a;
  return 2 * mu * (1 - mu) * d * d;
}

void sweep_levels(std::vector<Rational>& levels, std::span<const Edge> sorted_edges) {
  for (const Edge& e : sorted_edges) {
    Rational& a = levels[e.first];
    Rational& b = levels[e.second];
    if (a == b) continue;
    Rational mean = a + b;
    mpq_div_2exp(mean.get_mpq_t(), mean.get_mpq_t(), 1);
    a = mean;
    b = mean;
  }
}

WaterProfile sweep_to_balance(const Graph& g, const WaterProfile& profile,
                              std::span<const Edge> edge_set, std::size_t rounds) {
  std::vector<Edge> sorted(edge_set.begin(), edge_set.end());
  std::sort(sorted.begin(), sorted.end());
  for (const Edge& e : sorted) {
    if (!g.has_edge(e.first, e.second)) throw InputError("sweep edge not in graph");
  }
  if (!Graph::edges_connect(sorted)) throw InputError("sweep edge set is not connected");
  WaterProfile out = profile;
  for (std::size_t r = 0; r < rounds; ++r) sweep_levels(out.levels, sorted);
  return out;
}

bool is_unimodal(std::span<const Rational> values) {
  std::size_t i = 0;
  const std::size_t n = values.size();
  while (i + 1 < n && values[i] <= values[i + 1]) ++i;
  while (i + 1 < n && values[i] >= values[i + 1]) ++i;
  return i + 1 >= n;
}

SadReport check_sad_properties(const SadProfile& profile, const Graph& g) {
  SadReport report;
  report.max_other_weight = 0;
  for (std::size_t w = 0; w < profile.weights.size(); ++w) {
    if (w != profile.start_vertex && profile.weights[w] > report.max_other_weight) {
      report.max_other_weight = profile.weights[w];
    }
  }
  report.max_other_ok = report.max_other_weight <= half();

  if (!is_line_graph(g)) return report;
  report.line_checks_applied = true;
  Vertex end = 0;
  while (g.degree(end) != 1) ++end;
  std::vector<Rational> along;
  for (Vertex u : line_order(g, end)) along.push_back(profile.weights[u]);
  report.unimodal = is_unimodal(along);

  auto dist = g.distances_from(profile.start_vertex);
  for (std::size_t w = 0; w < profile.weights.size(); ++w) {
    if (profile.weights[w] * static_cast<long>(dist[w] + 1) > 1) {
      report.distance_bound_ok = false;
      report.distance_violations.push_back(static_cast<Vertex>(w));
    }
  }
  return report;
}

}  // namespace wtp
