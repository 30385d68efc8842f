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

// wtp: command-line front end for the water transport toolkit.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "watertransport/dynamics.hpp"
#include "watertransport/exact_solvers.hpp"
#include "watertransport/explorer.hpp"
#include "watertransport/json_io.hpp"
#include "watertransport/sat_reduction.hpp"
#include "watertransport/search.hpp"
#include "watertransport/stochastic.hpp"

namespace {

using wtp::Json;
using wtp::Rational;

struct Outcome {
  Json results = Json::object();
  bool ok = true;
};

class RunRecord {
 public:
  explicit RunRecord(std::string command) : start_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::move(command);
    doc_["config"] = Json::object();
    doc_["inputs"] = Json::object();
  }

  Json& config() { return doc_["config"]; }

  std::string read_input(const std::string& role, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw wtp::InputError("cannot read " + role + " file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) h = (h ^ c) * 0x100000001b3ULL;
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << h;
    doc_["inputs"][role] = {{"path", path}, {"bytes", text.size()}, {"fnv1a64", hex.str()}};
    return text;
  }

  int finish(const Outcome& out) {
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    doc_["results"] = out.results;
    doc_["ok"] = out.ok;
    doc_["timings"] = {{"total_ms", ms}};
    std::cout << doc_.dump(2) << "\n";
    return out.ok ? 0 : 1;
  }

 private:
  Json doc_ = Json::object();
  std::chrono::steady_clock::time_point start_;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw wtp::InputError("cannot write '" + path + "'");
  out << text;
}

wtp::Vertex resolve_target(const wtp::Instance& inst, const std::string& name) {
  if (!name.empty()) return inst.vertex_by_name(name);
  if (inst.target) return *inst.target;
  throw wtp::InputError("no target: pass --target or set \"target\" in the instance");
}

struct KappaArgs {
  std::string graph;
  std::string target;
  std::string exact_class = "auto";
  std::size_t depth = 2;
  std::size_t beam = 0;
  double budget = 10;
  std::size_t workers = 1;
  bool edges_only = false;
};

Outcome run_kappa(const KappaArgs& a, RunRecord& rec) {
  wtp::Instance inst = wtp::load_instance(rec.read_input("graph", a.graph));
  const wtp::Vertex v = resolve_target(inst, a.target);
  rec.config() = {{"target", inst.names[v]}, {"exact_class", a.exact_class}, {"depth", a.depth},
                  {"beam", a.beam},          {"time_budget", a.budget},     {"workers", a.workers},
                  {"edges_only", a.edges_only}};
  const wtp::Graph& g = inst.graph;
  Outcome out;
  out.results["detected_class"] = wtp::to_string(wtp::detect_exact_class(g, v));

  std::optional<wtp::KappaResult> closed;
  if (a.exact_class == "auto") {
    closed = wtp::kappa_closed_form(g, inst.profile, v);
  } else if (a.exact_class == "complete") {
    closed = wtp::kappa_complete(g, inst.profile, v);
  } else if (a.exact_class == "line") {
    if (!wtp::is_line_graph(g)) throw wtp::InputError("--exact-class line: graph is not a line");
    closed = wtp::kappa_closed_form(g, inst.profile, v);
  } else if (a.exact_class != "none") {
    throw wtp::InputError("--exact-class must be auto, complete, line or none");
  }

  if (closed) {
    std::cerr << "kappa: closed form '" << closed->solver << "'\n";
    out.results["solver"] = closed->solver;
    out.results["certification"] = "proven exact";
    out.results["kappa"] = wtp::kappa_json(*closed, inst);
    out.results["value"] = wtp::rational_json(closed->value);
    return out;
  }

  wtp::SearchConfig cfg;
  cfg.max_depth = a.depth;
  if (a.beam > 0) cfg.beam_width = a.beam;
  cfg.candidates = a.edges_only ? wtp::CandidateSets::kEdgesOnly : wtp::CandidateSets::kAllConnected;
  cfg.time_budget_seconds = a.budget;
  cfg.workers = a.workers;
  std::cerr << "kappa: no closed form applies; running " << (a.beam ? "beam" : "exhaustive")
            << " search to depth " << a.depth << "\n";
  wtp::SearchResult r = wtp::search_kappa(g, inst.profile, v, cfg);
  out.results["solver"] = "search";
  out.results["certification"] = r.exhausted ? "conjectured exact" : "lower bound";
  out.results["search"] = wtp::search_json(r, inst);
  out.results["value"] = wtp::rational_json(r.best_value);
  out.results["upper_bound"] = wtp::rational_json(wtp::upper_bound(g, inst.profile, v));
  wtp::WaterProfile replay = wtp::apply_sequence(g, inst.profile, r.best_sequence);
  out.results["replay_matches"] = replay.levels[v] == r.best_value;
  out.ok = replay.levels[v] == r.best_value;
  return out;
}

Outcome run_simulate(const std::string& graph, const std::string& moves, const std::string& target,
                     bool trace, RunRecord& rec) {
  wtp::Instance inst = wtp::load_instance(rec.read_input("graph", graph));
  wtp::MoveSequence seq = wtp::parse_move_sequence(rec.read_input("moves", moves), inst);
  const wtp::Vertex v = resolve_target(inst, target);
  rec.config() = {{"target", inst.names[v]}, {"trace", trace}};
  std::vector<wtp::WaterProfile> snapshots;
  wtp::WaterProfile final_profile = wtp::apply_sequence(inst.graph, inst.profile, seq, &snapshots);
  wtp::SadProfile sad = wtp::dual_sad(inst.graph, seq, v);

  Outcome out;
  out.results["moves"] = seq.size();
  if (trace) {
    Json rounds = Json::array();
    for (const auto& p : snapshots) rounds.push_back(wtp::levels_json(p.levels, inst));
    out.results["trace"] = std::move(rounds);
  }
  out.results["final_profile"] = wtp::levels_json(final_profile.levels, inst);
  out.results["level"] = wtp::rational_json(final_profile.levels[v]);
  out.results["dual_sad"] = wtp::levels_json(sad.weights, inst);
  const Rational dot = sad.dot(inst.profile);
  out.results["dual_dot"] = wtp::rational_json(dot);
  out.results["duality_holds"] = dot == final_profile.levels[v];
  out.results["total_water_conserved"] = final_profile.total() == inst.profile.total();
  wtp::SadReport rep = wtp::check_sad_properties(sad, inst.graph);
  out.results["sad_properties"] = {{"max_other_weight", wtp::rational_json(rep.max_other_weight)},
                                   {"max_other_ok", rep.max_other_ok},
                                   {"line_checks_applied", rep.line_checks_applied},
                                   {"unimodal", rep.unimodal},
                                   {"distance_bound_ok", rep.distance_bound_ok}};
  out.ok = dot == final_profile.levels[v];
  return out;
}

struct CdfArgs {
  std::string name;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  std::string out;
  std::size_t grid = 200;
  std::size_t workers = 1;
  double tolerance = 0;
};

Outcome run_cdf(const CdfArgs& a, RunRecord& rec) {
  rec.config() = {{"case", a.name}, {"samples", a.samples}, {"seed", a.seed},
                  {"grid", a.grid}, {"workers", a.workers}, {"tolerance", a.tolerance}};
  const wtp::CdfOracle oracle = wtp::cdf_oracle(a.name);
  wtp::Graph g = a.name == "k2_v1" ? wtp::complete_graph(2) : wtp::path_graph(3);
  const wtp::Vertex v = a.name == "line3_v2" ? 1 : 0;
  if (a.samples == 0) throw wtp::InputError("--samples must be positive");
  wtp::EmpiricalCdf cdf = wtp::sample_kappa(g, v, wtp::closed_form_solver(g, v),
                                            {a.samples, a.seed, a.workers});
  auto f = [&oracle](double x) { return oracle(x); };
  const double ks = cdf.sup_distance(f);

  std::ostringstream csv;
  csv << "x,empirical,oracle,diff\n" << std::setprecision(10);
  double grid_max = 0;
  for (std::size_t i = 0; i <= a.grid; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(a.grid);
    const double e = cdf(x);
    const double o = oracle(x);
    grid_max = std::max(grid_max, std::abs(e - o));
    csv << x << "," << e << "," << o << "," << e - o << "\n";
  }
  if (!a.out.empty()) {
    write_file(a.out, csv.str());
  } else {
    std::cerr << csv.str();
  }

  Outcome out;
  out.results = {{"vertex", v}, {"sup_distance", ks}, {"grid_max_diff", grid_max}, {"csv", a.out.empty() ? "stderr" : a.out}};
  if (a.tolerance > 0) {
    out.ok = ks < a.tolerance;
    out.results["within_tolerance"] = out.ok;
  }
  return out;
}

std::vector<bool> parse_assignment(const std::string& text, std::size_t num_vars) {
  std::vector<bool> a(num_vars, false);
  std::istringstream in(text);
  long lit = 0;
  while (in >> lit) {
    if (lit == 0) continue;
    const std::size_t i = static_cast<std::size_t>(std::labs(lit));
    if (i > num_vars) throw wtp::InputError("assignment names variable " + std::to_string(i) + " beyond the formula");
    a[i - 1] = lit > 0;
  }
  if (!in.eof()) throw wtp::InputError("assignment must be a list of signed variable indices");
  return a;
}

struct ReduceArgs {
  std::string cnf;
  std::string out;
  std::string roles;
  std::string witness;
  bool probe = false;
  double probe_budget = 60;
  std::size_t probe_depth = 4;
  std::size_t probe_beam = 4;
};

Json report_json(const wtp::BoundsReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  return {{"all_ok", r.all_ok()}, {"checks", checks}};
}

Outcome run_reduce(const ReduceArgs& a, RunRecord& rec) {
  rec.config() = {{"witness", a.witness}, {"probe", a.probe}, {"probe_budget", a.probe_budget},
                  {"probe_depth", a.probe_depth}, {"probe_beam", a.probe_beam}};
  wtp::CnfFormula f = wtp::parse_cnf(rec.read_input("cnf", a.cnf));
  wtp::CombInstance inst = wtp::build_comb(f);
  Outcome out;
  out.results["n"] = inst.n;
  out.results["k"] = inst.k;
  out.results["vertices"] = inst.instance.graph.num_vertices();
  out.results["edges"] = inst.instance.graph.num_edges();
  out.results["max_degree"] = inst.instance.graph.max_degree();
  wtp::BoundsReport bounds = wtp::verify_bounds(inst);
  out.results["bounds"] = report_json(bounds);
  out.ok = bounds.all_ok();
  if (!a.out.empty()) {
    write_file(a.out, wtp::serialize_instance(inst.instance, 1));
    std::string roles = a.roles.empty() ? a.out + ".roles.json" : a.roles;
    write_file(roles, wtp::roles_json(inst));
    out.results["instance_file"] = a.out;
    out.results["roles_file"] = roles;
  }
  if (!a.witness.empty()) {
    std::vector<bool> assignment;
    if (a.witness == "auto") {
      auto found = wtp::find_satisfying_assignment(f);
      if (!found) throw wtp::InputError("formula is unsatisfiable; no witness exists");
      assignment = *found;
    } else {
      assignment = parse_assignment(a.witness, f.num_vars);
    }
    wtp::WitnessResult w = wtp::witness_schedule(inst, assignment);
    Json clause_levels = Json::array();
    for (const auto& q : w.clause_levels) clause_levels.push_back(wtp::rational_json(q));
    out.results["witness"] = {{"level", wtp::rational_json(w.level)},
                              {"exceeds_2", w.level > 2},
                              {"moves", w.sequence.size()},
                              {"tree_sizes", w.tree_sizes},
                              {"final_set_size", w.final_set_size},
                              {"clause_levels_after_phase1", clause_levels},
                              {"trees_disjoint", w.trees_disjoint},
                              {"linking_path_ok", w.linking_path_ok}};
    out.ok = out.ok && w.level > 2 && w.trees_disjoint && w.linking_path_ok;
  }
  if (a.probe) {
    wtp::SearchConfig cfg;
    cfg.max_depth = a.probe_depth;
    cfg.beam_width = a.probe_beam;
    cfg.time_budget_seconds = a.probe_budget;
    wtp::ProbeResult p = wtp::adversarial_probe(inst, cfg);
    out.results["probe"] = {{"best_level", wtp::rational_json(p.best_level)},
                            {"at_most_2", p.best_level <= 2},
                            {"candidates", p.candidates},
                            {"nodes", p.nodes},
                            {"budget_exhausted", p.budget_exhausted},
                            {"moves", p.best_sequence.size()},
                            {"label", p.label}};
    out.ok = out.ok && p.best_level <= 2;
  }
  return out;
}

wtp::IndexMap parse_family(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw wtp::InputError("--family must look like affine:A,B or table:F1,F2,...");
  const std::string kind = text.substr(0, colon);
  std::vector<std::size_t> values;
  std::istringstream in(text.substr(colon + 1));
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      values.push_back(std::stoul(item));
    } catch (const std::exception&) {
      throw wtp::InputError("bad number '" + item + "' in --family");
    }
  }
  if (kind == "affine") {
    if (values.size() != 2) throw wtp::InputError("affine family needs A,B");
    return wtp::IndexMap::affine(values[0], values[1]);
  }
  if (kind == "table") return wtp::IndexMap::table(values);
  throw wtp::InputError("unknown family '" + kind + "'");
}

struct HalfLineArgs {
  std::string family = "affine:3,0";
  std::size_t m = 30;
  std::string eps = "1/20";
  std::string line_level = "0";
  std::string pendant_level = "1";
  std::size_t sweep_cap = 10000;
  std::string target_level;
  std::string moves_out;
  bool exact = false;
};

Outcome run_halfline(const HalfLineArgs& a, RunRecord& rec) {
  wtp::HalfLineSpec spec;
  spec.f = parse_family(a.family);
  spec.m = a.m;
  spec.epsilon = wtp::parse_rational(a.eps);
  spec.sweep_cap = a.sweep_cap;
  rec.config() = {{"family", spec.f.describe()}, {"m", a.m}, {"epsilon", wtp::to_exact_string(spec.epsilon)},
                  {"line_level", a.line_level}, {"pendant_level", a.pendant_level}, {"sweep_cap", a.sweep_cap}};
  wtp::HalfLine h = wtp::build_half_line(spec);
  wtp::WaterProfile profile;
  profile.levels.assign(h.graph.num_vertices(), wtp::parse_rational(a.line_level));
  for (std::size_t k = 1; k <= a.m; ++k) profile.levels[h.pendant(k)] = wtp::parse_rational(a.pendant_level);
  profile.validate(h.graph.num_vertices());
  wtp::HalfLineResult r = wtp::half_line_schedule(spec, h, profile, !a.moves_out.empty());

  auto num = [&](const Rational& q) { return a.exact ? wtp::rational_json(q) : Json(wtp::to_double(q)); };
  Outcome out;
  Json stages = Json::array();
  bool increasing = true;
  bool bound_ok = true;
  bool floor_ok = true;
  Rational previous = r.initial_level;
  Rational captured = 0;
  for (const auto& s : r.stages) {
    captured += s.captured;
    increasing = increasing && s.level > previous;
    bound_ok = bound_ok && s.residual <= s.product_bound;
    floor_ok = floor_ok && s.level >= (1 - spec.epsilon) * captured;
    previous = s.level;
    stages.push_back({{"k", s.k}, {"f", s.f}, {"sweeps", s.sweeps}, {"captured", num(s.captured)},
                      {"level", num(s.level)}, {"residual", num(s.residual)},
                      {"product_bound", num(s.product_bound)}, {"residual_within_bound", s.residual <= s.product_bound}});
  }
  out.results = {{"vertices", h.graph.num_vertices()},
                 {"selected", r.selected.size()},
                 {"level", num(r.level)},
                 {"level_decimal", wtp::to_decimal_string(r.level, 12)},
                 {"residual", num(r.residual)},
                 {"product_bound", num(r.product_bound)},
                 {"levels_strictly_increasing", increasing},
                 {"residual_bound_each_stage", bound_ok},
                 {"level_at_least_captured_floor", floor_ok},
                 {"divergence_declared", spec.f.divergence_declared()},
                 {"warnings", r.warnings},
                 {"stages", stages}};
  out.ok = increasing && bound_ok && floor_ok;
  if (!a.target_level.empty()) {
    const bool reached = r.level > wtp::parse_rational(a.target_level);
    out.results["target_level"] = a.target_level;
    out.results["target_reached"] = reached;
    out.ok = out.ok && reached;
  }
  if (!a.moves_out.empty()) {
    wtp::Instance inst = wtp::make_instance(h.graph, profile.levels, profile.capacity);
    write_file(a.moves_out, wtp::move_sequence_json(r.sequence, inst).dump());
    out.results["moves"] = r.sequence.size();
    out.results["moves_file"] = a.moves_out;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Water transport toolkit: exact kappa values, simulation, sampling, reductions."};
  app.require_subcommand(1);

  KappaArgs ka;
  auto* kappa = app.add_subcommand("kappa", "Supremum of the achievable level at a target vertex");
  kappa->add_option("--graph", ka.graph, "Instance JSON")->required();
  kappa->add_option("--target", ka.target, "Target vertex id (defaults to the instance target)");
  kappa->add_option("--exact-class", ka.exact_class, "auto|complete|line|none");
  kappa->add_option("--depth", ka.depth, "Search depth when no closed form applies");
  kappa->add_option("--beam", ka.beam, "Beam width (0 = exhaustive)");
  kappa->add_option("--time-budget", ka.budget, "Search budget in seconds (0 = unlimited)");
  kappa->add_option("--workers", ka.workers, "Search worker threads");
  kappa->add_flag("--edges-only", ka.edges_only, "Branch on single edges only");

  std::string sim_graph, sim_moves, sim_target;
  bool sim_trace = false;
  auto* simulate = app.add_subcommand("simulate", "Apply a move sequence and report the dual SAD profile");
  simulate->add_option("--graph", sim_graph, "Instance JSON")->required();
  simulate->add_option("--moves", sim_moves, "Move-sequence JSON")->required();
  simulate->add_option("--target", sim_target, "Target vertex id");
  simulate->add_flag("--trace", sim_trace, "Emit every intermediate profile");

  CdfArgs ca;
  auto* cdf = app.add_subcommand("cdf", "Monte Carlo CDF of kappa against the closed-form CDF");
  cdf->add_option("--case", ca.name, "k2_v1|line3_v1|line3_v2")->required();
  cdf->add_option("--samples", ca.samples, "Number of random profiles");
  cdf->add_option("--seed", ca.seed, "Master seed");
  cdf->add_option("--out", ca.out, "CSV output (x,empirical,oracle,diff)");
  cdf->add_option("--grid", ca.grid, "CSV grid intervals");
  cdf->add_option("--workers", ca.workers, "Sampling threads");
  cdf->add_option("--tolerance", ca.tolerance, "Fail if the sup distance reaches this value");

  ReduceArgs ra;
  auto* reduce = app.add_subcommand("reduce", "Build the comb instance of a 3-CNF formula");
  reduce->add_option("--cnf", ra.cnf, "DIMACS file")->required();
  reduce->add_option("--out", ra.out, "Instance JSON output");
  reduce->add_option("--roles", ra.roles, "Role map output (default OUT.roles.json)");
  reduce->add_option("--witness", ra.witness, "Satisfying assignment as signed literals, or 'auto'");
  reduce->add_flag("--probe", ra.probe, "Run the heuristic probe (unsatisfiable formulas)");
  reduce->add_option("--probe-budget", ra.probe_budget, "Probe budget in seconds");
  reduce->add_option("--probe-depth", ra.probe_depth, "Probe depth");
  reduce->add_option("--probe-beam", ra.probe_beam, "Probe beam width");

  HalfLineArgs ha;
  auto* halfline = app.add_subcommand("halfline", "Pendant-feeding schedule on a truncated half-line");
  halfline->add_option("--family", ha.family, "affine:A,B or table:F1,F2,...");
  halfline->add_option("--m", ha.m, "Number of pendants used");
  halfline->add_option("--eps", ha.eps, "Qualification threshold epsilon");
  halfline->add_option("--line-level", ha.line_level, "Initial level on the line");
  halfline->add_option("--pendant-level", ha.pendant_level, "Initial level on the pendants");
  halfline->add_option("--sweep-cap", ha.sweep_cap, "Sweeps allowed per stage");
  halfline->add_option("--target-level", ha.target_level, "Fail unless the level exceeds this");
  halfline->add_option("--moves-out", ha.moves_out, "Write the water-order move sequence here");
  halfline->add_flag("--exact", ha.exact, "Print exact rationals (can be very long)");

  std::string host = "127.0.0.1";
  int port = 8080;
  wtp::ExplorerConfig ecfg;
  auto* serve = app.add_subcommand("serve", "Run the explorer HTTP service");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");
  serve->add_option("--history-cap", ecfg.history_cap, "Moves kept per session");
  serve->add_option("--hint-budget", ecfg.hint_budget_seconds, "Suggestion budget in seconds");

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  RunRecord rec(command);
  try {
    if (command == "kappa") return rec.finish(run_kappa(ka, rec));
    if (command == "simulate") return rec.finish(run_simulate(sim_graph, sim_moves, sim_target, sim_trace, rec));
    if (command == "cdf") return rec.finish(run_cdf(ca, rec));
    if (command == "reduce") return rec.finish(run_reduce(ra, rec));
    if (command == "halfline") return rec.finish(run_halfline(ha, rec));
    std::cerr << "serving on " << host << ":" << port << "\n";
    wtp::serve(host, port, ecfg);
    return 0;
  } catch (const wtp::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
