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

#ifndef WATERTRANSPORT_MOVES_HPP_
#define WATERTRANSPORT_MOVES_HPP_

#include <vector>

#include "watertransport/graph.hpp"
#include "watertransport/rational.hpp"

namespace wtp {

// One round: either a single pipe <x,y> or a macro move that opens a
// connected edge set simultaneously. mu lies in [0, 1/2].
struct Move {
  enum class Kind { kEdge, kMacro };

  Kind kind = Kind::kEdge;
  std::vector<Edge> edges;  // exactly one for kEdge
  Rational mu = half();

  static Move edge(Vertex x, Vertex y, Rational mu = half());
  static Move macro(std::vector<Edge> edges, Rational mu = half());
  // Full average over a connected vertex set: an edge move for two vertices,
  // a macro move on the canonical spanning edges otherwise.
  static Move average(const Graph& g, std::span<const Vertex> members);

  bool is_macro() const { return kind == Kind::kMacro; }

  // Sorted vertex set touched by the move.
  std::vector<Vertex> vertex_set() const;

  friend bool operator==(const Move&, const Move&) = default;
};

using MoveSequence = std::vector<Move>;

// Throws InputError when the move is not realizable on `g`: unknown edge,
// mu outside [0, 1/2], or a macro edge set that is not connected or spans
// fewer than 3 vertices.
void validate_move(const Graph& g, const Move& move);
void validate_sequence(const Graph& g, const MoveSequence& seq);

}  // namespace wtp

#endif  // WATERTRANSPORT_MOVES_HPP_
