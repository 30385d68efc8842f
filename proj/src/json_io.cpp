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

#include "watertransport/json_io.hpp"

#include <cctype>
#include <vector>

namespace wtp {
namespace {

// Line of the opening brace of each top-level array element.
std::vector<std::size_t> element_lines(std::string_view text) {
  std::vector<std::size_t> lines;
  std::size_t line = 1;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  bool expect_element = false;
  for (char c : text) {
    if (c == '\n') ++line;
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (depth == 1 && expect_element && !std::isspace(static_cast<unsigned char>(c)) && c != ']') {
      lines.push_back(line);
      expect_element = false;
    }
    switch (c) {
      case '"': in_string = true; break;
      case '[':
      case '{':
        if (++depth == 1) expect_element = true;
        break;
      case ']':
      case '}': --depth; break;
      case ',':
        if (depth == 1) expect_element = true;
        break;
      default: break;
    }
  }
  return lines;
}

Vertex vertex_from_json(const Json& j, const Instance& inst) {
  std::string id = j.is_string() ? j.get<std::string>() : j.dump();
  return inst.vertex_by_name(id);
}

Move move_from_json(const Json& mj, const Instance& inst) {
  if (!mj.is_object()) throw InputError("move must be an object");
  Rational mu = mj.contains("mu") ? rational_from_json(mj["mu"], "mu") : half();
  if (mj.contains("edge") == mj.contains("macro")) {
    throw InputError("move needs exactly one of \"edge\" or \"macro\"");
  }
  auto edge = [&](const Json& ej) {
    if (!ej.is_array() || ej.size() != 2) throw InputError("edge must be a pair of ids");
    Vertex a = vertex_from_json(ej[0], inst);
    Vertex b = vertex_from_json(ej[1], inst);
    if (a == b) throw InputError("edge joins a vertex to itself");
    return Edge(a, b);
  };
  if (mj.contains("edge")) {
    Edge e = edge(mj["edge"]);
    return Move::edge(e.first, e.second, mu);
  }
  const Json& list = mj["macro"];
  if (!list.is_array() || list.empty()) throw InputError("macro needs a non-empty edge list");
  std::vector<Edge> edges;
  for (const Json& ej : list) edges.push_back(edge(ej));
  return Move::macro(std::move(edges), mu);
}

}  // namespace

Json rational_json(const Rational& q) {
  return Json{{"exact", to_exact_string(q)}, {"decimal", to_double(q)}};
}

Rational rational_from_json(const Json& j, const char* what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
  if (j.is_number()) return parse_rational(j.dump());
  throw InputError(std::string(what) + " must be a string or number");
}

namespace {

MoveSequence sequence_from(const Json& doc, const Instance& inst, const std::vector<std::size_t>& lines) {
  if (!doc.is_array()) throw InputError("move sequence must be a JSON array");
  MoveSequence seq;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    try {
      Move m = move_from_json(doc[i], inst);
      for (const Edge& e : m.edges) {
        if (!inst.graph.has_edge(e.first, e.second)) {
          throw InputError("edge (" + inst.names[e.first] + "," + inst.names[e.second] + ") not in graph");
        }
      }
      validate_move(inst.graph, m);
      seq.push_back(std::move(m));
    } catch (const InputError& e) {
      std::string where = "move " + std::to_string(i + 1);
      if (i < lines.size()) where += " (line " + std::to_string(lines[i]) + ")";
      throw InputError(where + ": " + e.what());
    }
  }
  return seq;
}

}  // namespace

MoveSequence move_sequence_from_json(const Json& doc, const Instance& inst) {
  return sequence_from(doc, inst, {});
}

MoveSequence parse_move_sequence(std::string_view text, const Instance& inst) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("move sequence parse error: ") + e.what());
  }
  return sequence_from(doc, inst, element_lines(text));
}

Json move_json(const Move& move, const Instance& inst) {
  auto edge = [&](const Edge& e) { return Json::array({inst.names[e.first], inst.names[e.second]}); };
  Json out = Json::object();
  if (move.is_macro()) {
    Json list = Json::array();
    for (const Edge& e : move.edges) list.push_back(edge(e));
    out["macro"] = std::move(list);
  } else {
    out["edge"] = edge(move.edges.front());
  }
  out["mu"] = to_exact_string(move.mu);
  return out;
}

Json move_sequence_json(const MoveSequence& seq, const Instance& inst) {
  Json out = Json::array();
  for (const Move& m : seq) out.push_back(move_json(m, inst));
  return out;
}

Json levels_json(const std::vector<Rational>& levels, const Instance& inst) {
  Json out = Json::array();
  for (std::size_t u = 0; u < levels.size(); ++u) {
    out.push_back({{"id", inst.names[u]}, {"level", to_exact_string(levels[u])}, {"decimal", to_double(levels[u])}});
  }
  return out;
}

Json vertex_set_json(std::span<const Vertex> set, const Instance& inst) {
  Json out = Json::array();
  for (Vertex u : set) out.push_back(inst.names[u]);
  return out;
}

Json gla_json(const GlaResult& r, const Instance& inst) {
  Json out{{"set", vertex_set_json(r.set, inst)}, {"value", rational_json(r.value)}, {"exact", r.exact}};
  out["witness"] = r.witness ? move_json(*r.witness, inst) : Json(nullptr);
  return out;
}

Json kappa_json(const KappaResult& r, const Instance& inst) {
  Json out{{"solver", r.solver},
           {"value", rational_json(r.value)},
           {"attained_by_single_edges", r.attained},
           {"certificate_kind", r.kind == KappaResult::Kind::kFinite ? "finite" : "macro"},
           {"certificate", move_sequence_json(r.certificate, inst)},
           {"sad_witness", levels_json(r.witness.weights, inst)}};
  if (r.two_level) {
    const auto& t = *r.two_level;
    out["two_level"] = {{"l", t.l},
                        {"q", t.q},
                        {"r", t.r},
                        {"mirrored", t.mirrored},
                        {"partial_weight", to_exact_string(t.partial_weight)},
                        {"full_weight", to_exact_string(t.full_weight)}};
    out["interval_average_attains"] = r.gla_attains;
  }
  return out;
}

Json search_json(const SearchResult& r, const Instance& inst) {
  return Json{{"mode", r.mode},
              {"best_value", rational_json(r.best_value)},
              {"best_sequence", move_sequence_json(r.best_sequence, inst)},
              {"nodes_expanded", r.nodes_expanded},
              {"exhausted", r.exhausted}};
}

}  // namespace wtp
