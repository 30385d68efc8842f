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

#include "oracles.hpp"
#include "watertransport/dynamics.hpp"
#include "watertransport/exact_solvers.hpp"

namespace {

using namespace wtp;

WaterProfile levels(std::vector<Rational> xs) { return WaterProfile{std::move(xs), 1}; }

// Checks that hold for every closed-form result.
void expect_consistent(const Graph& g, const WaterProfile& p, Vertex v, const KappaResult& r) {
  EXPECT_EQ(r.witness.total(), 1);
  EXPECT_EQ(r.witness.dot(p), r.value);
  if (!r.certificate.empty()) {
    SadProfile xi = dual_sad(g, r.certificate, v);
    EXPECT_EQ(xi.weights, r.witness.weights);
    EXPECT_EQ(apply_sequence(g, p, r.certificate)[v], r.value);
  } else {
    EXPECT_EQ(r.value, p[v]);
  }
  bool edges_only = true;
  for (const Move& m : r.certificate) edges_only = edges_only && !m.is_macro();
  if (r.kind == KappaResult::Kind::kFinite) EXPECT_TRUE(edges_only);
}

TEST(Gla, SingletonWhenTargetIsMax) {
  GlaResult r = gla(path_graph(3), levels({0, 1, 0}), 1);
  EXPECT_EQ(r.set, (std::vector<Vertex>{1}));
  EXPECT_EQ(r.value, 1);
  EXPECT_FALSE(r.witness.has_value());
}

TEST(Gla, L3EndsHigh) {
  GlaResult r = gla(path_graph(3), levels({1, 0, 1}), 1);
  EXPECT_EQ(r.set, (std::vector<Vertex>{0, 1, 2}));
  EXPECT_EQ(r.value, Rational(2, 3));
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(apply_move(path_graph(3), levels({1, 0, 1}), *r.witness)[1], Rational(2, 3));
}

TEST(Gla, Path5) {
  GlaResult r = gla(path_graph(5), levels({0, 1, Rational(2, 5), 0, 1}), 2);
  EXPECT_EQ(r.set, (std::vector<Vertex>{1, 2}));
  EXPECT_EQ(r.value, Rational(7, 10));
}

TEST(Gla, MatchesBruteForceAndGreedyIsLowerBound) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t n = 1 + rng() % 9;
    Graph g = oracle::random_connected_graph(rng, n, 0.25);
    WaterProfile p = levels(oracle::random_levels(rng, n));
    Vertex v = static_cast<Vertex>(rng() % n);
    GlaResult exact = gla(g, p, v);
    EXPECT_EQ(exact.value, oracle::gla_value(g, p.levels, v));
    EXPECT_TRUE(exact.exact);
    EXPECT_TRUE(g.is_connected_subset(exact.set));
    GlaResult greedy = gla(g, p, v, GlaMode::kGreedy);
    EXPECT_FALSE(greedy.exact);
    EXPECT_LE(greedy.value, exact.value);
    EXPECT_GE(greedy.value, p[v]);
  }
}

TEST(Gla, ExactModeRespectsCap) {
  EXPECT_THROW(gla(path_graph(25), levels(std::vector<Rational>(25, 0)), 0, GlaMode::kExact, 20),
               CapExceeded);
}

TEST(KappaComplete, TargetIsMax) {
  KappaResult r = kappa_complete(complete_graph(3), levels({1, Rational(1, 2), 0}), 0);
  EXPECT_EQ(r.value, 1);
  EXPECT_TRUE(r.certificate.empty());
  EXPECT_TRUE(r.attained);
}

TEST(KappaComplete, K3Certificate) {
  Graph g = complete_graph(3);
  WaterProfile p = levels({1, Rational(1, 2), 0});
  KappaResult r = kappa_complete(g, p, 2);
  EXPECT_EQ(r.value, Rational(5, 8));
  ASSERT_EQ(r.certificate.size(), 2u);
  EXPECT_EQ(r.certificate[0].edges[0], Edge(2, 1));
  EXPECT_EQ(r.certificate[1].edges[0], Edge(2, 0));
  std::vector<WaterProfile> trace;
  apply_sequence(g, p, r.certificate, &trace);
  EXPECT_EQ(trace[1][2], Rational(1, 4));
  EXPECT_EQ(trace[2][2], Rational(5, 8));
  expect_consistent(g, p, 2, r);
}

TEST(KappaComplete, K2EdgeValue) {
  KappaResult r = kappa_complete(complete_graph(2), levels({Rational(1, 5), Rational(4, 5)}), 0);
  EXPECT_EQ(r.value, Rational(1, 2));
}

TEST(KappaComplete, MatchesFoldOracleAndBruteForce) {
  std::mt19937_64 rng(1);
  for (std::size_t n = 2; n <= 5; ++n) {
    Graph g = complete_graph(n);
    for (int trial = 0; trial < 25; ++trial) {
      WaterProfile p = levels(oracle::random_levels(rng, n));
      Vertex v = static_cast<Vertex>(rng() % n);
      KappaResult r = kappa_complete(g, p, v);
      EXPECT_EQ(r.value, oracle::complete_value(p.levels, v));
      EXPECT_EQ(r.value, oracle::macro_brute_force(g, p.levels, v, n - 1, true));
      if (n <= 4) EXPECT_EQ(r.value, oracle::macro_brute_force(g, p.levels, v, n));
      expect_consistent(g, p, v, r);
    }
  }
}

TEST(KappaEndpoint, ThreeIncreasingLevels) {
  Graph g = path_graph(3);
  WaterProfile p = levels({0, 1, 1});
  KappaResult r = kappa_line_endpoint(g, p, 0);
  EXPECT_EQ(r.value, Rational(2, 3));
  EXPECT_FALSE(r.attained);
  EXPECT_EQ(r.kind, KappaResult::Kind::kMacro);
  expect_consistent(g, p, 0, r);
}

TEST(KappaEndpoint, TargetMaximal) {
  KappaResult r = kappa_line_endpoint(path_graph(4), levels({1, 0, 0, 0}), 0);
  EXPECT_EQ(r.value, 1);
  EXPECT_TRUE(r.certificate.empty());
}

TEST(KappaEndpoint, PrefixScan) {
  Graph g = path_graph(4);
  WaterProfile p = levels({Rational(1, 10), Rational(9, 10), Rational(1, 2), Rational(9, 10)});
  KappaResult r = kappa_line_endpoint(g, p, 0);
  EXPECT_EQ(r.value, Rational(3, 5));
  EXPECT_EQ(r.certificate.front().vertex_set().size(), 4u);
  expect_consistent(g, p, 0, r);
}

TEST(KappaEndpoint, OrderedL3HasNoFiniteOptimum) {
  // eta(3) >= eta(2) >= eta(1), eta(3) > eta(1): the value is the mean and
  // no finite single-edge sequence reaches it.
  std::mt19937_64 rng(4);
  Graph g = path_graph(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Rational> xs = oracle::random_levels(rng, 3);
    std::sort(xs.begin(), xs.end());
    if (xs[2] == xs[0]) continue;
    KappaResult r = kappa_line_endpoint(g, levels(xs), 0);
    EXPECT_EQ(r.value, (xs[0] + xs[1] + xs[2]) / 3);
    EXPECT_FALSE(r.attained);
    // Single edges of any finite length stay below it.
    EXPECT_LT(oracle::macro_brute_force(g, xs, 0, 6, true), r.value);
  }
}

TEST(KappaEndpoint, RejectsNonEndpoint) {
  EXPECT_THROW(kappa_line_endpoint(path_graph(3), levels({0, 0, 0}), 1), InputError);
  EXPECT_THROW(kappa_line_endpoint(complete_graph(3), levels({0, 0, 0}), 0), InputError);
}

TEST(KappaInterior, FourLineReference) {
  Graph g = path_graph(4);
  WaterProfile p = levels({Rational(1, 5), Rational(1, 5), Rational(1, 5), 1});
  KappaResult r = kappa_line_interior(g, p, 2);
  EXPECT_EQ(r.value, Rational(3, 5));
  ASSERT_TRUE(r.two_level.has_value());
  EXPECT_EQ(r.two_level->l, 1u);
  EXPECT_EQ(r.two_level->q, 4u);
  EXPECT_EQ(r.two_level->r, 4u);
  EXPECT_EQ(r.witness.weights,
            (std::vector<Rational>{Rational(1, 6), Rational(1, 6), Rational(1, 6), Rational(1, 2)}));
  expect_consistent(g, p, 2, r);
}

TEST(KappaInterior, L3Middle) {
  Graph g = path_graph(3);
  WaterProfile p = levels({1, 0, 1});
  KappaResult r = kappa_line_interior(g, p, 1);
  EXPECT_EQ(r.value, Rational(3, 4));
  ASSERT_TRUE(r.two_level.has_value());
  EXPECT_EQ(r.two_level->r - r.two_level->l, 2u);
  EXPECT_GT(r.value, gla(g, p, 1).value);
  EXPECT_FALSE(r.gla_attains);
  expect_consistent(g, p, 1, r);
}

TEST(KappaInterior, AgreesWithEndpointSolver) {
  std::mt19937_64 rng(7);
  for (std::size_t n = 2; n <= 8; ++n) {
    Graph g = path_graph(n);
    for (int trial = 0; trial < 30; ++trial) {
      WaterProfile p = levels(oracle::random_levels(rng, n));
      EXPECT_EQ(kappa_line_interior(g, p, 0).value, kappa_line_endpoint(g, p, 0).value);
      EXPECT_EQ(kappa_line_interior(g, p, n - 1).value, kappa_line_endpoint(g, p, n - 1).value);
    }
  }
}

TEST(KappaInterior, MatchesMacroBruteForce) {
  std::mt19937_64 rng(12);
  for (std::size_t n = 3; n <= 5; ++n) {
    Graph g = path_graph(n);
    for (int trial = 0; trial < 40; ++trial) {
      WaterProfile p = levels(oracle::random_levels(rng, n));
      Vertex v = static_cast<Vertex>(rng() % n);
      KappaResult r = kappa_line_interior(g, p, v);
      EXPECT_EQ(r.value, oracle::macro_brute_force(g, p.levels, v, 3));
      // Longer sequences never beat the closed form.
      if (n <= 4) EXPECT_EQ(r.value, oracle::macro_brute_force(g, p.levels, v, 4));
      expect_consistent(g, p, v, r);
      if (r.attained) {
        EXPECT_EQ(oracle::macro_brute_force(g, p.levels, v, 6, true), r.value);
      }
    }
  }
}

TEST(KappaLine3, SixTerms) {
  Graph g = path_graph(3);
  EXPECT_EQ(kappa_line3_middle(g, levels({0, 1, 0}), 1).value, 1);
  EXPECT_EQ(kappa_line3_middle(g, levels({1, 0, 1}), 1).value, Rational(3, 4));
  KappaResult r = kappa_line3_middle(g, levels({0, 0, 1}), 1);
  EXPECT_EQ(r.value, Rational(1, 2));
  expect_consistent(g, levels({0, 0, 1}), 1, r);
}

TEST(KappaLine3, AgreesWithInterior) {
  std::mt19937_64 rng(21);
  Graph g = path_graph(3);
  for (int trial = 0; trial < 200; ++trial) {
    WaterProfile p = levels(oracle::random_levels(rng, 3));
    KappaResult a = kappa_line3_middle(g, p, 1);
    EXPECT_EQ(a.value, kappa_line_interior(g, p, 1).value);
    expect_consistent(g, p, 1, a);
  }
}

TEST(ClosedForm, Routing) {
  EXPECT_EQ(detect_exact_class(complete_graph(2), 0), ExactClass::kComplete);
  EXPECT_EQ(detect_exact_class(path_graph(6), 2), ExactClass::kLineInterior);
  EXPECT_EQ(detect_exact_class(path_graph(6), 5), ExactClass::kLineEndpoint);
  EXPECT_EQ(detect_exact_class(path_graph(3), 1), ExactClass::kLine3Middle);
  EXPECT_EQ(detect_exact_class(star_graph(5), 0), ExactClass::kStarCenter);
  EXPECT_EQ(detect_exact_class(star_graph(5), 1), ExactClass::kNone);
  std::vector<Edge> petersen{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 5}, {1, 6}, {2, 7},
                             {3, 8}, {4, 9}, {5, 7}, {7, 9}, {9, 6}, {6, 8}, {8, 5}};
  Graph pg(10, petersen);
  EXPECT_EQ(detect_exact_class(pg, 0), ExactClass::kNone);
  EXPECT_FALSE(kappa_closed_form(pg, levels(std::vector<Rational>(10, 0)), 0).has_value());
  EXPECT_EQ(to_string(ExactClass::kLineInterior), "line-interior");
}

TEST(ClosedForm, StarCenterMatchesBruteForce) {
  std::mt19937_64 rng(31);
  Graph g = star_graph(5);
  for (int trial = 0; trial < 30; ++trial) {
    WaterProfile p = levels(oracle::random_levels(rng, 5));
    auto r = kappa_closed_form(g, p, 0);
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(r->solver, "star-center");
    EXPECT_EQ(r->value, oracle::complete_value(p.levels, 0));
    EXPECT_EQ(r->value, oracle::macro_brute_force(g, p.levels, 0, 4, true));
    expect_consistent(g, p, 0, *r);
  }
}

}  // namespace
