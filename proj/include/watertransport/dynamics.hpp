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

#ifndef WATERTRANSPORT_DYNAMICS_HPP_
#define WATERTRANSPORT_DYNAMICS_HPP_

#include <span>
#include <utility>
#include <vector>

#include "watertransport/graph.hpp"
#include "watertransport/moves.hpp"
#include "watertransport/rational.hpp"

namespace wtp {

// In-place update on a raw level vector. No validation; callers that take
// user input go through apply_move.
void apply_move_unchecked(std::vector<Rational>& levels, const Move& move);

WaterProfile apply_move(const Graph& g, const WaterProfile& profile, const Move& move);

// Left fold of apply_move. With `trace` set, the initial profile and every
// intermediate profile are appended to it (size seq.size() + 1).
WaterProfile apply_sequence(const Graph& g, const WaterProfile& profile, const MoveSequence& seq,
                            std::vector<WaterProfile>* trace = nullptr);

// Dual "sharing a drink" profile: a unit mass at the start vertex, shared by
// the moves of a sequence taken in reverse chronological order.
struct SadProfile {
  std::vector<Rational> weights;
  Vertex start_vertex = 0;

  static SadProfile delta(std::size_t num_vertices, Vertex start);

  Rational total() const;
  Rational dot(const WaterProfile& profile) const;
};

// Weights xi_T with  sum_u xi_T(u) * eta_0(u) == eta_T(target)  for every
// initial profile eta_0.
SadProfile dual_sad(const Graph& g, const MoveSequence& seq, Vertex target);

// Sum of squared levels over a vertex set, recorded round by round.
struct EnergyLedger {
  std::vector<Vertex> subset;
  std::vector<std::pair<std::size_t, Rational>> history;

  static EnergyLedger start(std::vector<Vertex> subset, const WaterProfile& profile);
  Rational energy(const WaterProfile& profile) const;
  // Drop between the last two records; zero with fewer than two.
  Rational last_drop() const;
};

EnergyLedger energy_step(EnergyLedger ledger, const WaterProfile& before, const Move& move,
                         const WaterProfile& after);

// Energy lost by a single-edge move: 2 mu (1 - mu) (b - a)^2.
Rational predicted_energy_drop(const Rational& a, const Rational& b, const Rational& mu);

// Lexicographic order of the given edges, each opened with mu = 1/2, repeated
// `rounds` times.
WaterProfile sweep_to_balance(const Graph& g, const WaterProfile& profile,
                              std::span<const Edge> edge_set, std::size_t rounds);
void sweep_levels(std::vector<Rational>& levels, std::span<const Edge> sorted_edges);

struct SadReport {
  Rational max_other_weight;          // max over w != start
  bool max_other_ok = true;           // <= 1/2
  bool line_checks_applied = false;   // only on line graphs
  bool unimodal = true;
  bool distance_bound_ok = true;      // xi(w) <= 1/(d(v,w)+1)
  std::vector<Vertex> distance_violations;

  bool all_ok() const { return max_other_ok && unimodal && distance_bound_ok; }
};

SadReport check_sad_properties(const SadProfile& profile, const Graph& g);

// Weak unimodality of a sequence: non-decreasing then non-increasing.
bool is_unimodal(std::span<const Rational> values);

}  // namespace wtp

#endif  // WATERTRANSPORT_DYNAMICS_HPP_
