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

#ifndef WATERTRANSPORT_SAT_REDUCTION_HPP_
#define WATERTRANSPORT_SAT_REDUCTION_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "watertransport/graph.hpp"
#include "watertransport/moves.hpp"
#include "watertransport/search.hpp"

namespace wtp {

using Literal = int;  // +i for x_i, -i for its negation

struct CnfFormula {
  std::size_t num_vars = 0;
  std::vector<std::vector<Literal>> clauses;

  std::size_t num_clauses() const { return clauses.size(); }
  bool satisfied_by(const std::vector<bool>& assignment) const;
};

// DIMACS: comment lines start with 'c', an optional "p cnf K N" header,
// clauses terminated by 0. Repeated literals inside a clause collapse.
CnfFormula parse_cnf(std::string_view text);

// Brute force over all assignments; throws CapExceeded above 20 variables.
std::optional<std::vector<bool>> find_satisfying_assignment(const CnfFormula& f);

enum class Role { kTooth, kLiteral, kLink, kReservoir, kShaft3, kClause, kConnector, kPath2, kTarget };

std::string to_string(Role r);

struct CombInstance {
  Instance instance;
  std::vector<Role> roles;
  std::size_t n = 0;
  std::size_t k = 0;
  CnfFormula formula;

  std::vector<std::vector<Vertex>> teeth;  // per variable, lower endvertex first
  std::vector<Vertex> positive;            // x_i
  std::vector<Vertex> negative;            // negated x_i
  std::vector<Vertex> links;               // leftmost first; links[i] sits between teeth i and i+1
  Vertex reservoir = 0;
  std::vector<Vertex> shaft;               // left to right, ends with the target
  std::vector<Vertex> clause_vertices;
  std::vector<Vertex> left_path;           // from the shaft towards the leftmost link
  // (clause index, literal) -> path vertices, literal side first
  std::map<std::pair<std::size_t, Literal>, std::vector<Vertex>> connectors;

  Vertex target() const { return shaft.back(); }
  Vertex literal_vertex(Literal lit) const;
};

CombInstance build_comb(const CnfFormula& f);

// JSON sidecar: {"n", "k", "target", "roles": {role: [ids]}}.
std::string roles_json(const CombInstance& inst, int indent = 2);

struct WitnessResult {
  MoveSequence sequence;
  Rational level;
  std::vector<Rational> clause_levels;  // after phase 1
  std::vector<std::size_t> tree_sizes;
  std::size_t final_set_size = 0;
  bool trees_disjoint = true;
  bool linking_path_ok = true;  // levels >= 2 along it after phase 1
};

// Throws InputError if the assignment does not satisfy the formula.
WitnessResult witness_schedule(const CombInstance& inst, const std::vector<bool>& assignment);

struct BoundCheck {
  std::string name;
  bool ok = true;
  std::string detail;
};

struct BoundsReport {
  std::vector<BoundCheck> checks;
  bool all_ok() const;
};

// Structural and arithmetic checks on a built instance.
BoundsReport verify_bounds(const CombInstance& inst);

// The arithmetic part alone, for sizes too large to build.
BoundsReport verify_bound_identities(std::size_t n, std::size_t k);

struct ProbeResult {
  Rational best_level;
  MoveSequence best_sequence;
  std::size_t candidates = 0;
  std::size_t nodes = 0;
  bool budget_exhausted = false;
  std::string label;
};

// Heuristic beam search for a high level at v on an instance built from an
// unsatisfiable formula, over role-derived candidate sets. Uses max_depth,
// beam_width (default 4) and time_budget_seconds of the config. Throws
// InputError for satisfiable formulas.
ProbeResult adversarial_probe(const CombInstance& inst, const SearchConfig& cfg);

}  // namespace wtp

#endif  // WATERTRANSPORT_SAT_REDUCTION_HPP_
