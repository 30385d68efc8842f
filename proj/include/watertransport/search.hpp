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

#ifndef WATERTRANSPORT_SEARCH_HPP_
#define WATERTRANSPORT_SEARCH_HPP_

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "watertransport/exact_solvers.hpp"
#include "watertransport/graph.hpp"
#include "watertransport/moves.hpp"

namespace wtp {

enum class CandidateSets { kAllConnected, kEdgesOnly };

struct SearchConfig {
  std::size_t max_depth = 2;
  std::optional<std::size_t> beam_width;  // unset: exhaustive depth-first search
  CandidateSets candidates = CandidateSets::kAllConnected;
  std::size_t max_set_size = 0;  // 0: no cap (beam mode defaults to 3)
  // Close every node with the full average over the best lattice animal.
  bool final_average = true;
  // Also prune with the complete-graph value of the current state, which
  // can only exceed the value on any subgraph.
  bool relaxation_bound = true;
  double time_budget_seconds = 0;  // 0: unlimited
  std::size_t workers = 1;
  std::size_t exhaustive_cap = 12;
  std::size_t beam_cap = 64;

  void validate() const;
};

struct SearchResult {
  Rational best_value;
  MoveSequence best_sequence;
  std::size_t nodes_expanded = 0;
  bool exhausted = false;
  std::string mode;  // "exhaustive" or "beam"
};

SearchResult search_kappa(const Graph& g, const WaterProfile& profile, Vertex v,
                          const SearchConfig& cfg = {});

// Max level over V.
Rational upper_bound(const Graph& g, const WaterProfile& profile, Vertex v);

// Value of v if every pair of vertices were joined by a pipe.
Rational complete_relaxation(const std::vector<Rational>& levels, Vertex v);

struct Bottleneck {
  Vertex vertex = 0;
  Rational level;
  bool cut_vertex = false;
  // Connected sets through the bottleneck, outside the animal otherwise,
  // whose average exceeds its level. Best first.
  std::vector<std::vector<Vertex>> improving_sets;
};

struct Enlargement {
  Vertex boundary = 0;
  std::vector<Vertex> added;  // joins the current animal
  Vertex improved = 0;        // bottleneck of `added` raised first
  Vertex donor = 0;           // outside neighbour that raises it
  Rational average_after;     // animal plus `added` after the raise
};

struct ImprovementPlan {
  GlaResult current;
  std::vector<Bottleneck> bottlenecks;
  std::vector<Enlargement> enlargements;

  bool empty() const { return bottlenecks.empty() && enlargements.empty(); }
};

ImprovementPlan improvement_plan(const Graph& g, const WaterProfile& profile, Vertex v,
                                 std::size_t set_cap = 4);

}  // namespace wtp

#endif  // WATERTRANSPORT_SEARCH_HPP_
