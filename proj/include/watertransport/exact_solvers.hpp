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

#ifndef WATERTRANSPORT_EXACT_SOLVERS_HPP_
#define WATERTRANSPORT_EXACT_SOLVERS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "watertransport/dynamics.hpp"
#include "watertransport/graph.hpp"
#include "watertransport/moves.hpp"

namespace wtp {

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Greedy lattice animal: a connected set containing the target whose mean
// level is maximal.
struct GlaResult {
  std::vector<Vertex> set;  // sorted
  Rational value;
  std::optional<Move> witness;  // full average over `set`; empty for a singleton
  bool exact = true;        // false for the greedy lower bound
};

enum class GlaMode { kExact, kGreedy };

inline constexpr std::size_t kDefaultGlaCap = 20;

// Exact mode enumerates every connected set containing v (smallest, then
// lexicographically first maximizer). Greedy mode grows {v} by the boundary
// vertex giving the best new mean while the mean strictly rises.
GlaResult gla(const Graph& g, const WaterProfile& profile, Vertex v,
              GlaMode mode = GlaMode::kExact, std::size_t cap = kDefaultGlaCap);

// Two-level SAD profile on a line, positions 1-based along line_order from
// the lower-id endpoint. Unmirrored: weight `partial_weight` on [l, q-1] and
// 1/(r-v+1) on [q, r]. Mirrored: 1/(v-l+1) on [l, q] and `partial_weight`
// on [q+1, r].
struct TwoLevelProfile {
  std::size_t l = 0;
  std::size_t q = 0;
  std::size_t r = 0;
  bool mirrored = false;
  Rational partial_weight;
  Rational full_weight;
};

struct KappaResult {
  enum class Kind {
    kFinite,        // certificate is a finite single-edge sequence
    kMacro,         // certificate uses macro moves; single edges only approach it
  };

  Rational value;
  MoveSequence certificate;
  bool attained = false;  // a finite single-edge sequence reaches `value`
  Kind kind = Kind::kFinite;
  SadProfile witness;     // SAD weights whose dot product with eta_0 is `value`
  std::string solver;
  std::optional<TwoLevelProfile> two_level;
  // Set by kappa_line_interior: a single interval average already attains it.
  bool gla_attains = false;
};

// Complete graph, or any graph in which v is adjacent to every other vertex
// (for instance the center of a star).
KappaResult kappa_complete(const Graph& g, const WaterProfile& profile, Vertex v);

// Line graph, v an endpoint: best prefix average from v.
KappaResult kappa_line_endpoint(const Graph& g, const WaterProfile& profile, Vertex v);

// Line graph, any v: maximum over all two-level SAD profiles.
KappaResult kappa_line_interior(const Graph& g, const WaterProfile& profile, Vertex v);

// Line on three vertices, v in the middle.
KappaResult kappa_line3_middle(const Graph& g, const WaterProfile& profile, Vertex v);

enum class ExactClass { kNone, kComplete, kStarCenter, kLineEndpoint, kLine3Middle, kLineInterior };

// Which closed form (if any) applies to (g, v).
ExactClass detect_exact_class(const Graph& g, Vertex v);
std::string to_string(ExactClass c);

// Dispatches on detect_exact_class; nullopt when no closed form applies.
std::optional<KappaResult> kappa_closed_form(const Graph& g, const WaterProfile& profile, Vertex v);

}  // namespace wtp

#endif  // WATERTRANSPORT_EXACT_SOLVERS_HPP_
