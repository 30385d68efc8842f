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

#include "watertransport/sat_reduction.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <set>
#include <sstream>

#include <json.hpp>

#include "watertransport/dynamics.hpp"

namespace wtp {
namespace {

std::string literal_name(Literal lit) {
  return (lit > 0 ? "x" : "~x") + std::to_string(std::abs(lit));
}

class Builder {
 public:
  Vertex add(std::string name, Rational level, Role role) {
    names_.push_back(std::move(name));
    levels_.push_back(std::move(level));
    roles_.push_back(role);
    return static_cast<Vertex>(names_.size() - 1);
  }

  void link(Vertex a, Vertex b) { edges_.emplace_back(a, b); }

  std::vector<Vertex> path(const std::string& prefix, std::size_t length, const Rational& level,
                           Role role) {
    std::vector<Vertex> out;
    for (std::size_t j = 1; j <= length; ++j) {
      out.push_back(add(prefix + std::to_string(j), level, role));
      if (j > 1) link(out[j - 2], out[j - 1]);
    }
    return out;
  }

  void finish(CombInstance& inst) {
    inst.instance = make_instance(Graph(names_.size(), edges_), std::move(levels_), 4);
    inst.instance.names = std::move(names_);
    inst.roles = std::move(roles_);
  }

 private:
  std::vector<std::string> names_;
  std::vector<Rational> levels_;
  std::vector<Role> roles_;
  std::vector<Edge> edges_;
};

Rational level_sum(const std::vector<Rational>& levels, std::span<const Vertex> set) {
  Rational sum = 0;
  for (Vertex u : set) sum += levels[u];
  return sum;
}

std::vector<Vertex> sorted_unique(std::vector<Vertex> set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

void add_check(BoundsReport& r, std::string name, bool ok, std::string detail = {}) {
  r.checks.push_back({std::move(name), ok, std::move(detail)});
}

}  // namespace

bool CnfFormula::satisfied_by(const std::vector<bool>& assignment) const {
  if (assignment.size() != num_vars) return false;
  return std::all_of(clauses.begin(), clauses.end(), [&](const std::vector<Literal>& c) {
    return std::any_of(c.begin(), c.end(), [&](Literal lit) {
      return assignment[static_cast<std::size_t>(std::abs(lit)) - 1] == (lit > 0);
    });
  });
}

CnfFormula parse_cnf(std::string_view text) {
  CnfFormula f;
  std::optional<std::size_t> declared_vars;
  std::optional<std::size_t> declared_clauses;
  std::vector<Literal> current;
  std::size_t max_var = 0;
  std::istringstream lines{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string tok;
    if (!(tokens >> tok)) continue;
    if (tok == "c") continue;
    if (tok[0] == 'c' && line.find_first_not_of(" \t") == line.find('c')) continue;
    if (tok == "%") break;
    if (tok == "p") {
      std::string kind;
      long vars = -1;
      long count = -1;
      if (!(tokens >> kind >> vars >> count) || kind != "cnf" || vars < 0 || count < 0) {
        throw InputError("line " + std::to_string(line_no) + ": malformed header");
      }
      declared_vars = static_cast<std::size_t>(vars);
      declared_clauses = static_cast<std::size_t>(count);
      continue;
    }
    do {
      char* end = nullptr;
      long value = std::strtol(tok.c_str(), &end, 10);
      if (end == tok.c_str() || *end != '\0') {
        throw InputError("line " + std::to_string(line_no) + ": bad literal '" + tok + "'");
      }
      if (value == 0) {
        if (current.empty()) throw InputError("line " + std::to_string(line_no) + ": empty clause");
        std::sort(current.begin(), current.end());
        current.erase(std::unique(current.begin(), current.end()), current.end());
        for (Literal lit : current) {
          if (std::binary_search(current.begin(), current.end(), -lit)) {
            throw InputError("line " + std::to_string(line_no) + ": tautological clause on x" +
                             std::to_string(std::abs(lit)));
          }
        }
        if (current.size() > 3) {
          throw InputError("line " + std::to_string(line_no) + ": clause has more than 3 literals");
        }
        std::sort(current.begin(), current.end(),
                  [](Literal a, Literal b) { return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a > b; });
        f.clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (declared_vars && static_cast<std::size_t>(std::labs(value)) > *declared_vars) {
          throw InputError("line " + std::to_string(line_no) + ": variable " +
                           std::to_string(std::labs(value)) + " exceeds the header");
        }
        max_var = std::max(max_var, static_cast<std::size_t>(std::labs(value)));
        current.push_back(static_cast<Literal>(value));
      }
    } while (tokens >> tok);
  }
  if (!current.empty()) throw InputError("last clause is not terminated by 0");
  if (f.clauses.empty()) throw InputError("formula has no clauses");
  if (declared_clauses && *declared_clauses != f.clauses.size()) {
    throw InputError("header declares " + std::to_string(*declared_clauses) + " clauses, found " +
                     std::to_string(f.clauses.size()));
  }
  f.num_vars = declared_vars.value_or(max_var);
  return f;
}

std::optional<std::vector<bool>> find_satisfying_assignment(const CnfFormula& f) {
  if (f.num_vars > 20) throw CapExceeded("brute-force satisfiability limited to 20 variables");
  std::vector<bool> a(f.num_vars);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f.num_vars); ++mask) {
    for (std::size_t i = 0; i < f.num_vars; ++i) a[i] = (mask >> i) & 1;
    if (f.satisfied_by(a)) return a;
  }
  return std::nullopt;
}

std::string to_string(Role r) {
  switch (r) {
    case Role::kTooth: return "tooth";
    case Role::kLiteral: return "literal";
    case Role::kLink: return "link";
    case Role::kReservoir: return "reservoir";
    case Role::kShaft3: return "shaft-3";
    case Role::kClause: return "clause";
    case Role::kConnector: return "connector";
    case Role::kPath2: return "path-2";
    case Role::kTarget: return "target";
  }
  return "unknown";
}

Vertex CombInstance::literal_vertex(Literal lit) const {
  const std::size_t i = static_cast<std::size_t>(std::abs(lit));
  if (lit == 0 || i > k) throw InputError("literal out of range");
  return lit > 0 ? positive[i - 1] : negative[i - 1];
}

CombInstance build_comb(const CnfFormula& f) {
  if (f.clauses.empty()) throw InputError("formula has no clauses");
  CombInstance inst;
  inst.formula = f;
  inst.n = f.num_clauses();
  inst.k = f.num_vars;
  const std::size_t n = inst.n;
  const std::size_t k = inst.k;
  Builder b;

  for (std::size_t j = 0; j <= n; ++j) {
    inst.shaft.push_back(b.add("shaft" + std::to_string(j), 3, Role::kShaft3));
    if (j < n) {
      inst.shaft.push_back(b.add("C" + std::to_string(j + 1), 0, Role::kClause));
      inst.clause_vertices.push_back(inst.shaft.back());
    }
  }
  inst.shaft.push_back(b.add("v", 0, Role::kTarget));
  for (std::size_t j = 1; j < inst.shaft.size(); ++j) b.link(inst.shaft[j - 1], inst.shaft[j]);

  inst.left_path = b.path("left", 4 * n - 1, 2, Role::kPath2);
  b.link(inst.shaft.front(), inst.left_path.front());

  inst.links.push_back(b.add("link0", 2, Role::kLink));
  b.link(inst.left_path.back(), inst.links.front());
  for (std::size_t i = 1; i <= k; ++i) {
    inst.positive.push_back(b.add(literal_name(static_cast<Literal>(i)), 2, Role::kLiteral));
    inst.negative.push_back(b.add(literal_name(-static_cast<Literal>(i)), 2, Role::kLiteral));
    if (i < k) inst.links.push_back(b.add("link" + std::to_string(i), 2, Role::kLink));
  }
  inst.reservoir = b.add("reservoir", Rational(7, 2), Role::kReservoir);
  for (std::size_t i = 1; i <= k; ++i) {
    for (Vertex lit : {inst.positive[i - 1], inst.negative[i - 1]}) {
      b.link(inst.links[i - 1], lit);
      if (i < k) b.link(inst.links[i], lit);
      if (i == k) b.link(lit, inst.reservoir);
    }
  }

  const std::size_t tooth_len = 240 * n * n * n * n - 1;
  for (std::size_t i = 1; i <= k; ++i) {
    inst.teeth.push_back(b.path("tooth" + std::to_string(i) + "_", tooth_len, 1, Role::kTooth));
    b.link(inst.teeth.back().front(), inst.positive[i - 1]);
    b.link(inst.teeth.back().front(), inst.negative[i - 1]);
  }

  const std::size_t conn_len = 120 * n * n - 1;
  for (std::size_t c = 0; c < n; ++c) {
    for (Literal lit : f.clauses[c]) {
      auto path = b.path("conn" + std::to_string(c + 1) + "_" + literal_name(lit) + "_", conn_len, 0,
                         Role::kConnector);
      b.link(inst.literal_vertex(lit), path.front());
      b.link(path.back(), inst.clause_vertices[c]);
      inst.connectors[{c, lit}] = std::move(path);
    }
  }

  b.finish(inst);
  inst.instance.target = inst.target();
  return inst;
}

std::string roles_json(const CombInstance& inst, int indent) {
  nlohmann::ordered_json roles = nlohmann::ordered_json::object();
  for (Role r : {Role::kTarget, Role::kShaft3, Role::kClause, Role::kPath2, Role::kLink,
                 Role::kLiteral, Role::kReservoir, Role::kTooth, Role::kConnector}) {
    roles[to_string(r)] = nlohmann::ordered_json::array();
  }
  for (std::size_t u = 0; u < inst.roles.size(); ++u) roles[to_string(inst.roles[u])].push_back(u);
  nlohmann::ordered_json doc{{"n", inst.n}, {"k", inst.k}, {"target", inst.target()}, {"roles", roles}};
  return doc.dump(indent);
}

WitnessResult witness_schedule(const CombInstance& inst, const std::vector<bool>& assignment) {
  if (!inst.formula.satisfied_by(assignment)) {
    throw InputError("assignment does not satisfy the formula");
  }
  const Graph& g = inst.instance.graph;
  WitnessResult r;

  // Each clause goes to its true literal of lowest variable index.
  std::vector<Literal> chosen(inst.n, 0);
  for (std::size_t c = 0; c < inst.n; ++c) {
    for (Literal lit : inst.formula.clauses[c]) {
      bool value = assignment[static_cast<std::size_t>(std::abs(lit)) - 1] == (lit > 0);
      if (value && (chosen[c] == 0 || std::abs(lit) < std::abs(chosen[c]))) chosen[c] = lit;
    }
  }

  std::vector<char> used(g.num_vertices(), 0);
  for (std::size_t i = 1; i <= inst.k; ++i) {
    const Literal lit = assignment[i - 1] ? static_cast<Literal>(i) : -static_cast<Literal>(i);
    std::vector<Vertex> tree = inst.teeth[i - 1];
    tree.push_back(inst.literal_vertex(lit));
    for (std::size_t c = 0; c < inst.n; ++c) {
      if (chosen[c] != lit) continue;
      const auto& path = inst.connectors.at({c, lit});
      tree.insert(tree.end(), path.begin(), path.end());
      tree.push_back(inst.clause_vertices[c]);
    }
    tree = sorted_unique(std::move(tree));
    for (Vertex u : tree) {
      if (used[u]) r.trees_disjoint = false;
      used[u] = 1;
    }
    r.tree_sizes.push_back(tree.size());
    r.sequence.push_back(Move::average(g, tree));
  }

  WaterProfile after = apply_sequence(g, inst.instance.profile, r.sequence);
  for (Vertex c : inst.clause_vertices) r.clause_levels.push_back(after.levels[c]);

  std::vector<Vertex> final_set = inst.shaft;
  final_set.insert(final_set.end(), inst.left_path.begin(), inst.left_path.end());
  final_set.insert(final_set.end(), inst.links.begin(), inst.links.end());
  for (std::size_t i = 1; i <= inst.k; ++i) {
    Vertex off = assignment[i - 1] ? inst.negative[i - 1] : inst.positive[i - 1];
    final_set.push_back(off);
    if (after.levels[off] < 2) r.linking_path_ok = false;
  }
  final_set.push_back(inst.reservoir);
  for (Vertex u : inst.links) {
    if (after.levels[u] < 2) r.linking_path_ok = false;
  }
  final_set = sorted_unique(std::move(final_set));
  r.final_set_size = final_set.size();
  Move last = Move::average(g, final_set);
  after = apply_move(g, after, last);
  r.sequence.push_back(std::move(last));
  r.level = after.levels[inst.target()];
  return r;
}

bool BoundsReport::all_ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.ok; });
}

BoundsReport verify_bound_identities(std::size_t n, std::size_t k) {
  BoundsReport r;
  if (n == 0) {
    add_check(r, "clauses", false, "n must be positive");
    return r;
  }
  const Rational N(static_cast<long>(n));
  const Rational K(static_cast<long>(k));
  add_check(r, "variables at most 3n", k <= 3 * n, std::to_string(k) + " <= " + std::to_string(3 * n));

  Rational above = Rational(5, 2) + 3 * K + (4 * N - 1) + 2 * (N + 1);
  Rational cap = 15 * N + Rational(7, 2);
  add_check(r, "mass above level 1 within 15n+7/2", above <= cap,
            to_exact_string(above) + " <= " + to_exact_string(cap));
  add_check(r, "mass above level 1 below 20n-1", cap < 20 * N - 1,
            to_exact_string(cap) + " vs " + to_exact_string(Rational(20 * N - 1)));

  Rational lhs = 60 * N / (120 * N * N + 1);
  Rational rhs = 1 / (2 * N);
  add_check(r, "clause raise through connectors", lhs <= rhs,
            to_exact_string(lhs) + " <= " + to_exact_string(rhs));
  Rational ident = 15 * N / (120 * N * N);
  add_check(r, "connector identity 15n/(120n^2) = 1/(8n)", ident == 1 / (8 * N), to_exact_string(ident));

  Rational threshold = (12 * N + 4 * K + 4) / (6 * N + 2 * K + 2);
  add_check(r, "threshold identity", threshold == 2, to_exact_string(threshold));
  Rational pooled = (Rational(7, 2) + (2 * K + 4 * N - 1) * 2 + (N + 1) * 3 + N * (1 - 1 / (2 * N))) /
                    (6 * N + 2 * K + 2);
  add_check(r, "pooled level at the clause bound", pooled == 2, to_exact_string(pooled));

  Rational n4 = N * N * N * N;
  Rational clause_low = (240 * n4 + 1) / (240 * n4 + 120 * N * N * N);
  add_check(r, "clause level after pooling above 1-1/(2n)", clause_low > 1 - 1 / (2 * N),
            to_exact_string(clause_low));

  // Worst case: k = 3n teeth and 3n connecting paths.
  Rational worst = 3 * N * (240 * n4 - 1) + 3 * N * (120 * N * N - 1) + (2 * N + 2) + (4 * N - 1) +
                   3 * (3 * N) + 1;
  Rational bound = 720 * n4 * N + 360 * N * N * N + 9 * N + 2;
  add_check(r, "vertex bound (worst case)", worst <= bound,
            to_exact_string(worst) + " <= " + to_exact_string(bound));
  return r;
}

BoundsReport verify_bounds(const CombInstance& inst) {
  const std::size_t n = inst.n;
  const std::size_t k = inst.k;
  BoundsReport r = verify_bound_identities(n, k);
  const Graph& g = inst.instance.graph;
  const auto& lv = inst.instance.profile.levels;
  auto all_at = [&](std::span<const Vertex> set, const Rational& level) {
    return std::all_of(set.begin(), set.end(), [&](Vertex u) { return lv[u] == level; });
  };

  bool teeth_ok = inst.teeth.size() == k;
  for (const auto& t : inst.teeth) teeth_ok = teeth_ok && t.size() == 240 * n * n * n * n - 1 && all_at(t, 1);
  add_check(r, "teeth", teeth_ok);

  std::size_t occurrences = 0;
  for (const auto& c : inst.formula.clauses) occurrences += c.size();
  bool conn_ok = inst.connectors.size() == occurrences;
  for (const auto& [key, path] : inst.connectors) {
    conn_ok = conn_ok && path.size() == 120 * n * n - 1 && all_at(path, 0) &&
              g.has_edge(path.front(), inst.literal_vertex(key.second)) &&
              g.has_edge(path.back(), inst.clause_vertices[key.first]);
  }
  add_check(r, "connecting paths", conn_ok);

  bool shaft_ok = inst.shaft.size() == 2 * n + 2 && lv[inst.target()] == 0;
  for (std::size_t j = 0; j + 1 < inst.shaft.size(); ++j) {
    const bool three = j % 2 == 0;
    shaft_ok = shaft_ok && lv[inst.shaft[j]] == (three ? 3 : 0) &&
               inst.roles[inst.shaft[j]] == (three ? Role::kShaft3 : Role::kClause) &&
               g.has_edge(inst.shaft[j], inst.shaft[j + 1]);
  }
  add_check(r, "shaft", shaft_ok);
  add_check(r, "left path", inst.left_path.size() == 4 * n - 1 && all_at(inst.left_path, 2) &&
                                g.has_edge(inst.left_path.front(), inst.shaft.front()) &&
                                g.has_edge(inst.left_path.back(), inst.links.front()));
  add_check(r, "literals and links at level 2",
            all_at(inst.positive, 2) && all_at(inst.negative, 2) && all_at(inst.links, 2));
  add_check(r, "reservoir at 7/2", lv[inst.reservoir] == Rational(7, 2));

  std::map<Role, std::size_t> counts;
  for (Role role : inst.roles) ++counts[role];
  add_check(r, "role counts",
            counts[Role::kClause] == n && inst.teeth.size() == k && counts[Role::kLiteral] == 2 * k &&
                counts[Role::kLink] == k && counts[Role::kReservoir] == 1 && counts[Role::kTarget] == 1,
            std::to_string(counts[Role::kClause]) + " clauses, " + std::to_string(counts[Role::kLiteral]) +
                " literals, " + std::to_string(counts[Role::kLink]) + " links");

  const std::size_t total = g.num_vertices();
  const std::size_t expected = k * (240 * n * n * n * n - 1) + occurrences * (120 * n * n - 1) +
                               (2 * n + 2) + (4 * n - 1) + 3 * k + 1;
  const std::size_t bound = 720 * n * n * n * n * n + 360 * n * n * n + 9 * n + 2;
  add_check(r, "vertex count", total == expected && total <= bound,
            std::to_string(total) + " <= " + std::to_string(bound));

  const std::size_t deg_cap = n == 1 ? 5 : n + 3;
  add_check(r, "max degree", g.max_degree() <= deg_cap,
            std::to_string(g.max_degree()) + " <= " + std::to_string(deg_cap));

  Rational above = 0;
  for (const Rational& q : lv) {
    if (q > 1) above += q - 1;
  }
  const Rational formula = Rational(5, 2) + 3 * static_cast<long>(k) + static_cast<long>(4 * n - 1) +
                           2 * static_cast<long>(n + 1);
  add_check(r, "mass above level 1 matches", above == formula,
            to_exact_string(above) + " == " + to_exact_string(formula));
  add_check(r, "connected", g.is_connected());
  return r;
}

ProbeResult adversarial_probe(const CombInstance& inst, const SearchConfig& cfg) {
  if (find_satisfying_assignment(inst.formula)) {
    throw InputError("formula is satisfiable; the probe is meant for unsatisfiable formulas");
  }
  cfg.validate();
  const Graph& g = inst.instance.graph;
  const Vertex v = inst.target();
  const std::size_t width = cfg.beam_width.value_or(4);
  std::optional<std::chrono::steady_clock::time_point> deadline;
  if (cfg.time_budget_seconds > 0) {
    deadline = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                   std::chrono::duration<double>(cfg.time_budget_seconds));
  }

  std::set<std::vector<Vertex>> moves_set;
  std::set<std::vector<Vertex>> finals_set;
  auto add = [&](std::vector<Vertex> s, bool final_candidate) {
    s = sorted_unique(std::move(s));
    if (s.size() < 2) return;
    moves_set.insert(s);
    if (final_candidate) finals_set.insert(std::move(s));
  };

  // Star trees around each literal.
  for (std::size_t i = 1; i <= inst.k; ++i) {
    for (Literal lit : {static_cast<Literal>(i), -static_cast<Literal>(i)}) {
      std::vector<std::size_t> clauses;
      for (std::size_t c = 0; c < inst.n; ++c) {
        if (inst.connectors.count({c, lit})) clauses.push_back(c);
      }
      const std::size_t subsets = std::size_t{1} << std::min<std::size_t>(clauses.size(), 6);
      for (std::size_t mask = 0; mask < subsets; ++mask) {
        std::vector<Vertex> tree = inst.teeth[i - 1];
        tree.push_back(inst.literal_vertex(lit));
        for (std::size_t j = 0; j < clauses.size() && j < 6; ++j) {
          if (!((mask >> j) & 1)) continue;
          const auto& path = inst.connectors.at({clauses[j], lit});
          tree.insert(tree.end(), path.begin(), path.end());
          tree.push_back(inst.clause_vertices[clauses[j]]);
        }
        add(std::move(tree), false);
      }
    }
  }
  for (const auto& [key, path] : inst.connectors) {
    std::vector<Vertex> s = path;
    s.push_back(inst.clause_vertices[key.first]);
    s.push_back(inst.literal_vertex(key.second));
    add(std::move(s), false);
  }
  // Shaft suffixes and the pooled line through one literal per variable.
  for (std::size_t j = 0; j + 1 < inst.shaft.size(); ++j) {
    add(std::vector<Vertex>(inst.shaft.begin() + static_cast<std::ptrdiff_t>(j), inst.shaft.end()), true);
  }
  std::vector<Vertex> base = inst.shaft;
  base.insert(base.end(), inst.left_path.begin(), inst.left_path.end());
  add(base, true);
  base.push_back(inst.links.front());
  add(base, true);
  const std::size_t choice_bits = std::min<std::size_t>(inst.k, 10);
  for (std::size_t mask = 0; mask < (std::size_t{1} << choice_bits); ++mask) {
    std::vector<Vertex> s = base;
    s.insert(s.end(), inst.links.begin(), inst.links.end());
    for (std::size_t i = 1; i <= inst.k; ++i) {
      bool pos = i <= choice_bits ? ((mask >> (i - 1)) & 1) : true;
      s.push_back(pos ? inst.positive[i - 1] : inst.negative[i - 1]);
    }
    s.push_back(inst.reservoir);
    add(std::move(s), true);
  }

  std::vector<std::vector<Vertex>> candidates(moves_set.begin(), moves_set.end());
  std::vector<std::vector<Vertex>> finals(finals_set.begin(), finals_set.end());

  ProbeResult result;
  result.candidates = candidates.size();
  result.label = "evidence only: heuristic search over role-derived sets, not a proof";

  struct Node {
    std::vector<Rational> levels;
    MoveSequence path;
    Rational score;
  };
  auto evaluate = [&](const std::vector<Rational>& levels) {
    Rational best = levels[v];
    const std::vector<Vertex>* pick = nullptr;
    for (const auto& s : finals) {
      Rational avg = level_sum(levels, s) / static_cast<long>(s.size());
      if (avg > best) {
        best = avg;
        pick = &s;
      }
    }
    return std::make_pair(best, pick);
  };
  auto offer = [&](const Node& node, const std::vector<Vertex>* pick) {
    if (node.score <= result.best_level && !result.best_sequence.empty()) return;
    result.best_level = node.score;
    result.best_sequence = node.path;
    if (pick) result.best_sequence.push_back(Move::average(g, *pick));
  };

  Node root{inst.instance.profile.levels, {}, 0};
  auto [root_score, root_pick] = evaluate(root.levels);
  root.score = root_score;
  result.best_level = root.levels[v];
  offer(root, root_pick);

  std::vector<Node> layer{root};
  for (std::size_t depth = 1; depth <= cfg.max_depth && !result.budget_exhausted; ++depth) {
    std::vector<Node> next;
    for (const Node& node : layer) {
      for (const auto& s : candidates) {
        if (deadline && std::chrono::steady_clock::now() > *deadline) {
          result.budget_exhausted = true;
          break;
        }
        Rational avg = level_sum(node.levels, s) / static_cast<long>(s.size());
        bool flat = std::all_of(s.begin(), s.end(), [&](Vertex u) { return node.levels[u] == avg; });
        if (flat) continue;
        Node child{node.levels, node.path, 0};
        for (Vertex u : s) child.levels[u] = avg;
        child.path.push_back(Move::average(g, s));
        auto [score, pick] = evaluate(child.levels);
        child.score = score;
        ++result.nodes;
        offer(child, pick);
        next.push_back(std::move(child));
      }
      if (result.budget_exhausted) break;
    }
    std::stable_sort(next.begin(), next.end(), [](const Node& a, const Node& b) { return a.score > b.score; });
    if (next.size() > width) next.resize(width);
    layer = std::move(next);
  }

  WaterProfile replay = apply_sequence(g, inst.instance.profile, result.best_sequence);
  result.best_level = replay.levels[v];
  return result;
}

}  // namespace wtp
