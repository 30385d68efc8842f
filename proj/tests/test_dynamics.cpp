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

#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "oracles.hpp"
#include "watertransport/dynamics.hpp"

namespace {

using namespace wtp;

WaterProfile levels(std::initializer_list<Rational> xs) { return WaterProfile{std::vector<Rational>(xs), 1}; }

TEST(Moves, FullAverageOnEdge) {
  Graph g = path_graph(2);
  WaterProfile p = apply_move(g, levels({0, 1}), Move::edge(0, 1));
  EXPECT_EQ(p, levels({Rational(1, 2), Rational(1, 2)}));
}

TEST(Moves, ZeroMuIsIdentity) {
  Graph g = path_graph(3);
  WaterProfile p0 = levels({Rational(1, 3), 1, 0});
  EXPECT_EQ(apply_move(g, p0, Move::edge(0, 1, 0)), p0);
  EXPECT_EQ(apply_move(g, p0, Move::macro({{0, 1}, {1, 2}}, 0)), p0);
}

TEST(Moves, PartialMacro) {
  Graph g = path_graph(3);
  WaterProfile p = apply_move(g, levels({0, 1, Rational(1, 2)}), Move::macro({{0, 1}, {1, 2}}, Rational(1, 4)));
  EXPECT_EQ(p, levels({Rational(1, 4), Rational(3, 4), Rational(1, 2)}));
}

TEST(Moves, PartialEdge) {
  Graph g = path_graph(2);
  WaterProfile p = apply_move(g, levels({0, 1}), Move::edge(0, 1, Rational(1, 4)));
  EXPECT_EQ(p, levels({Rational(1, 4), Rational(3, 4)}));
}

TEST(Moves, Validation) {
  Graph g = path_graph(4);
  EXPECT_THROW(validate_move(g, Move::edge(0, 2)), InputError);
  EXPECT_THROW(validate_move(g, Move::edge(0, 1, Rational(3, 4))), InputError);
  EXPECT_THROW(validate_move(g, Move::edge(0, 1, Rational(-1, 4))), InputError);
  EXPECT_THROW(validate_move(g, Move::macro({{0, 1}, {2, 3}})), InputError);
  EXPECT_THROW(validate_move(g, Move::macro({{0, 1}})), InputError);
  EXPECT_NO_THROW(validate_move(g, Move::macro({{0, 1}, {1, 2}, {2, 3}})));
  try {
    validate_sequence(g, {Move::edge(0, 1), Move::edge(1, 3)});
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("move 2:", 0), 0u);
  }
}

TEST(Moves, AverageHelper) {
  Graph g = complete_graph(4);
  std::vector<Vertex> pair{1, 3};
  EXPECT_FALSE(Move::average(g, pair).is_macro());
  std::vector<Vertex> triple{0, 2, 3};
  Move m = Move::average(g, triple);
  EXPECT_TRUE(m.is_macro());
  EXPECT_EQ(m.vertex_set(), triple);
}

TEST(Sequence, L3TwoMoves) {
  Graph g = path_graph(3);
  std::vector<WaterProfile> trace;
  WaterProfile p = apply_sequence(g, levels({0, 1, 0}), {Move::edge(0, 1), Move::edge(1, 2)}, &trace);
  EXPECT_EQ(p, levels({Rational(1, 2), Rational(1, 4), Rational(1, 4)}));
  EXPECT_EQ(trace.size(), 3u);
  EXPECT_EQ(trace[1], levels({Rational(1, 2), Rational(1, 2), 0}));
}

TEST(Sequence, EmptyIsIdentity) {
  Graph g = path_graph(3);
  WaterProfile p0 = levels({0, 1, 0});
  EXPECT_EQ(apply_sequence(g, p0, {}), p0);
}

TEST(Sequence, K2ReachesEdgeValue) {
  Graph g = path_graph(2);
  WaterProfile p = apply_sequence(g, levels({Rational(1, 5), Rational(4, 5)}), {Move::edge(0, 1)});
  EXPECT_EQ(p[0], Rational(1, 2));
  EXPECT_EQ(p[1], Rational(1, 2));
}

TEST(Sad, K2SingleMove) {
  SadProfile xi = dual_sad(path_graph(2), {Move::edge(0, 1)}, 0);
  EXPECT_EQ(xi.weights, (std::vector<Rational>{Rational(1, 2), Rational(1, 2)}));
}

TEST(Sad, EmptySequenceIsDelta) {
  SadProfile xi = dual_sad(path_graph(4), {}, 2);
  EXPECT_EQ(xi.weights, (std::vector<Rational>{0, 0, 1, 0}));
  EXPECT_EQ(xi.start_vertex, 2u);
}

TEST(Sad, L3TwoMoveProfilePassesChecks) {
  // The dual runs the water moves backwards, so the drink is shared over
  // <1,2> first and <2,3> second.
  Graph g = path_graph(3);
  EXPECT_EQ(dual_sad(g, {Move::edge(0, 1), Move::edge(1, 2)}, 0).weights,
            (std::vector<Rational>{Rational(1, 2), Rational(1, 2), 0}));
  SadProfile xi = dual_sad(g, {Move::edge(1, 2), Move::edge(0, 1)}, 0);
  EXPECT_EQ(xi.weights, (std::vector<Rational>{Rational(1, 2), Rational(1, 4), Rational(1, 4)}));
  SadReport r = check_sad_properties(xi, g);
  EXPECT_TRUE(r.line_checks_applied);
  EXPECT_TRUE(r.all_ok());
}

TEST(Sad, DeltaPassesChecks) {
  Graph g = star_graph(5);
  SadReport r = check_sad_properties(SadProfile::delta(5, 3), g);
  EXPECT_FALSE(r.line_checks_applied);
  EXPECT_TRUE(r.all_ok());
}

TEST(Sad, DetectsViolations) {
  Graph g = path_graph(3);
  SadProfile xi;
  xi.start_vertex = 0;
  xi.weights = {Rational(1, 4), Rational(1, 4), Rational(1, 2)};
  SadReport r = check_sad_properties(xi, g);
  EXPECT_FALSE(r.distance_bound_ok);
  EXPECT_EQ(r.distance_violations, (std::vector<Vertex>{2}));
  xi.weights = {Rational(1, 4), 0, Rational(3, 4)};
  r = check_sad_properties(xi, g);
  EXPECT_FALSE(r.max_other_ok);
  EXPECT_FALSE(r.unimodal);
}

TEST(Sad, DualityOnRandomInstances) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + rng() % 7;
    Graph g = oracle::random_connected_graph(rng, n, 0.3);
    WaterProfile p0{oracle::random_levels(rng, n), 1};
    MoveSequence seq = gen::random_sequence(rng, g, rng() % 13);
    Vertex v = static_cast<Vertex>(rng() % n);
    SadProfile xi = dual_sad(g, seq, v);
    EXPECT_EQ(xi.dot(p0), apply_sequence(g, p0, seq)[v]);
    EXPECT_EQ(xi.total(), 1);
  }
}

TEST(Sad, UnimodalHelper) {
  std::vector<Rational> up_down{0, 1, 2, 2, 1};
  EXPECT_TRUE(is_unimodal(up_down));
  std::vector<Rational> valley{2, 0, 2};
  EXPECT_FALSE(is_unimodal(valley));
  EXPECT_TRUE(is_unimodal(std::vector<Rational>{}));
}

TEST(Energy, HalfMuDrop) {
  EXPECT_EQ(predicted_energy_drop(0, 1, half()), Rational(1, 2));
  EXPECT_EQ(predicted_energy_drop(0, 1, 0), 0);
  EXPECT_EQ(predicted_energy_drop(Rational(1, 3), Rational(1, 3), Rational(1, 4)), 0);
}

TEST(Energy, LedgerTracksMeasuredDrop) {
  std::mt19937_64 rng(17);
  Graph g = oracle::random_connected_graph(rng, 6, 0.4);
  WaterProfile cur{oracle::random_levels(rng, 6), 1};
  EnergyLedger ledger = EnergyLedger::start({0, 1, 2, 3, 4, 5}, cur);
  EXPECT_EQ(ledger.last_drop(), 0);
  for (int i = 0; i < 200; ++i) {
    Move m = gen::random_edge_move(rng, g);
    Rational a = cur[m.edges[0].first];
    Rational b = cur[m.edges[0].second];
    WaterProfile next = apply_move(g, cur, m);
    ledger = energy_step(ledger, cur, m, next);
    EXPECT_EQ(ledger.last_drop(), predicted_energy_drop(a, b, m.mu));
    EXPECT_GE(ledger.last_drop(), 0);
    cur = next;
  }
  EXPECT_EQ(ledger.history.size(), 201u);
  EXPECT_EQ(ledger.history.back().first, 200u);
}

TEST(Energy, MacroMovesInsideSubsetNeverRaiseEnergy) {
  std::mt19937_64 rng(3);
  Graph g = path_graph(6);
  WaterProfile cur{oracle::random_levels(rng, 6), 1};
  EnergyLedger ledger = EnergyLedger::start({0, 1, 2, 3, 4, 5}, cur);
  for (const Move& m : gen::random_sequence(rng, g, 100, 0.5)) {
    WaterProfile next = apply_move(g, cur, m);
    ledger = energy_step(ledger, cur, m, next);
    EXPECT_GE(ledger.last_drop(), 0);
    cur = next;
  }
}

TEST(Sweep, SingleEdgeOneRound) {
  Graph g = path_graph(2);
  std::vector<Edge> e{{0, 1}};
  WaterProfile p = sweep_to_balance(g, levels({0, 1}), e, 1);
  EXPECT_EQ(p, levels({Rational(1, 2), Rational(1, 2)}));
}

TEST(Sweep, L3ApproachesThird) {
  Graph g = path_graph(3);
  std::vector<Edge> e = g.edges();
  WaterProfile p = sweep_to_balance(g, levels({0, 1, 0}), e, 60);
  for (const auto& x : p.levels) EXPECT_NEAR(to_double(x), 1.0 / 3, 1e-12);
  EXPECT_EQ(p.total(), 1);
}

TEST(Sweep, Path4FiftySweeps) {
  Graph g = path_graph(4);
  std::vector<Edge> e = g.edges();
  WaterProfile p = sweep_to_balance(g, levels({0, 0, 0, 1}), e, 50);
  for (const auto& x : p.levels) EXPECT_NEAR(to_double(x), 0.25, 1e-6);
}

TEST(Sweep, RejectsForeignOrDisconnectedEdges) {
  Graph g = path_graph(4);
  std::vector<Edge> foreign{{0, 2}};
  EXPECT_THROW(sweep_to_balance(g, levels({0, 0, 0, 1}), foreign, 1), InputError);
  std::vector<Edge> split{{0, 1}, {2, 3}};
  EXPECT_THROW(sweep_to_balance(g, levels({0, 0, 0, 1}), split, 1), InputError);
}

TEST(Conservation, TotalAndMaxOverRandomMoves) {
  std::mt19937_64 rng(8);
  Graph g = oracle::random_connected_graph(rng, 8, 0.3);
  WaterProfile cur{oracle::random_levels(rng, 8), 1};
  const Rational total = cur.total();
  for (const Move& m : gen::random_sequence(rng, g, 500)) {
    WaterProfile next = apply_move(g, cur, m);
    EXPECT_EQ(next.total(), total);
    EXPECT_LE(next.max_level(), cur.max_level());
    EXPECT_GE(next.min_level(), cur.min_level());
    cur = next;
  }
}

}  // namespace
