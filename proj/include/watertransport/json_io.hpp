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

#ifndef WATERTRANSPORT_JSON_IO_HPP_
#define WATERTRANSPORT_JSON_IO_HPP_

#include <string>
#include <string_view>

#include <json.hpp>

#include "watertransport/dynamics.hpp"
#include "watertransport/exact_solvers.hpp"
#include "watertransport/graph.hpp"
#include "watertransport/moves.hpp"
#include "watertransport/search.hpp"

namespace wtp {

using Json = nlohmann::ordered_json;

// {"exact": "7261/3600", "decimal": 2.0169...}
Json rational_json(const Rational& q);

// Accepts a rational string ("1/2", "0.25") or a JSON number.
Rational rational_from_json(const Json& j, const char* what);

// Ordered list of {"edge": [a, b], "mu": "1/2"} or
// {"macro": [[a, b], ...], "mu": "1/2"}; ids are instance names. Errors
// carry the move index and its line in `text`; each move is validated
// against the graph.
MoveSequence parse_move_sequence(std::string_view text, const Instance& inst);
MoveSequence move_sequence_from_json(const Json& doc, const Instance& inst);

Json move_json(const Move& move, const Instance& inst);
Json move_sequence_json(const MoveSequence& seq, const Instance& inst);

// [{"id": name, "level": "1/2", "decimal": 0.5}, ...] in id order.
Json levels_json(const std::vector<Rational>& levels, const Instance& inst);

Json vertex_set_json(std::span<const Vertex> set, const Instance& inst);
Json gla_json(const GlaResult& r, const Instance& inst);
Json kappa_json(const KappaResult& r, const Instance& inst);
Json search_json(const SearchResult& r, const Instance& inst);

}  // namespace wtp

#endif  // WATERTRANSPORT_JSON_IO_HPP_
