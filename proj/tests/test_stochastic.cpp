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

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "watertransport/dynamics.hpp"
#include "watertransport/stochastic.hpp"

namespace {

using namespace wtp;

Rational r(long a, long b) { return Rational(a, b); }

// Closed forms in floating point, written out independently of the library.
double k2_kappa(double a, double b) { return std::max(a, (a + b) / 2); }
double l3_end(double a, double b, double c) { return std::max({a, (a + b) / 2, (a + b + c) / 3}); }
double l3_mid(double a, double b, double c) {
  return std::max({b, (a + b) / 2, (b + c) / 2, ((b + c) / 2 + a) / 2, ((a + b) / 2 + c) / 2,
                   (a + b + c) / 3});
}

TEST(CdfOracle, ReferencePoints) {
  EXPECT_EQ(cdf_oracle("k2_v1")(r(1, 2)), r(3, 8));
  EXPECT_EQ(cdf_oracle("line3_v1")(r(1, 3)), r(8, 81));
  for (const char* name : {"k2_v1", "line3_v1", "line3_v2"}) {
    CdfOracle f = cdf_oracle(name);
    EXPECT_EQ(f(Rational(1)), 1) << name;
    EXPECT_EQ(f(Rational(0)), 0) << name;
    EXPECT_EQ(f(Rational(-1)), 0) << name;
    EXPECT_EQ(f(Rational(2)), 1) << name;
  }
  EXPECT_THROW(cdf_oracle("k5"), InputError);
}

TEST(CdfOracle, ContinuousAndMonotone) {
  for (const char* name : {"k2_v1", "line3_v1", "line3_v2"}) {
    CdfOracle f = cdf_oracle(name);
    const auto& pieces = f.pieces();
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
      EXPECT_EQ(pieces[i].hi, pieces[i + 1].lo) << name;
      EXPECT_EQ(eval_polynomial(pieces[i].coeffs, pieces[i].hi),
                eval_polynomial(pieces[i + 1].coeffs, pieces[i + 1].lo))
          << name << " piece " << i;
    }
    Rational prev = -1;
    for (long k = 0; k <= 240; ++k) {
      Rational x(k, 240);
      Rational y = f(x);
      EXPECT_GE(y, prev) << name << " at " << k;
      prev = y;
    }
  }
}

// Midpoint-rule integration of the indicator {kappa <= x} over the unit cube.
template <typename F>
double grid_cdf(std::size_t dims, std::size_t steps, double x, F kappa) {
  const double h = 1.0 / static_cast<double>(steps);
  std::size_t hits = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < steps; ++i) {
    for (std::size_t j = 0; j < steps; ++j) {
      const std::size_t top = dims == 3 ? steps : 1;
      for (std::size_t k = 0; k < top; ++k) {
        double a = (i + 0.5) * h, b = (j + 0.5) * h, c = (k + 0.5) * h;
        hits += kappa(a, b, c) <= x;
        ++total;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

// Middle vertex of L3, integrated with all six constraints including
// eta(2) <= x.
double l3_mid_cdf(double x) {
  if (x <= 0) return 0;
  if (x <= 0.5) return 17.0 / 9 * x * x * x;
  if (x <= 0.75) return -55.0 / 9 * x * x * x + 12 * x * x - 6 * x + 1;
  if (x <= 1) return x * x * x - 4 * x * x + 6 * x - 2;
  return 1;
}

TEST(CdfOracle, AgreesWithNumericalIntegration) {
  CdfOracle k2 = cdf_oracle("k2_v1");
  CdfOracle e3 = cdf_oracle("line3_v1");
  for (double x : {0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9}) {
    EXPECT_NEAR(k2(x), grid_cdf(2, 1000, x, [](double a, double b, double) { return k2_kappa(a, b); }), 2e-3)
        << x;
    EXPECT_NEAR(e3(x), grid_cdf(3, 120, x, l3_end), 1e-2) << x;
    EXPECT_NEAR(l3_mid_cdf(x), grid_cdf(3, 120, x, l3_mid), 2e-3) << x;
  }
}

TEST(CdfOracle, MiddleVertexTableOverstatesTheCdf) {
  // The tabulated middle-vertex polynomials are kept as tabulated. They sit
  // above the integrated CDF, most visibly at x = 1/2.
  CdfOracle m3 = cdf_oracle("line3_v2");
  EXPECT_EQ(m3(r(1, 2)), r(1, 4));
  EXPECT_NEAR(m3(0.5) - l3_mid_cdf(0.5), 1.0 / 4 - 17.0 / 72, 1e-12);
  EXPECT_EQ(m3(r(3, 4)), r(65, 96));
  EXPECT_NEAR(l3_mid_cdf(0.75), 43.0 / 64, 1e-12);
  for (double x : {0.1, 0.3, 0.5, 0.6, 0.75}) EXPECT_GT(m3(x), l3_mid_cdf(x)) << x;
}

TEST(Empirical, StepFunctionAndDistance) {
  EmpiricalCdf e({0.5, 0.25, 0.75, 1.0});
  EXPECT_DOUBLE_EQ(e(0.25), 0.25);
  EXPECT_DOUBLE_EQ(e(0.3), 0.25);
  EXPECT_DOUBLE_EQ(e(1.0), 1.0);
  EXPECT_DOUBLE_EQ(e(0.0), 0.0);
  // Against the uniform CDF the largest gap is just below a jump.
  EXPECT_NEAR(e.sup_distance([](double x) { return std::clamp(x, 0.0, 1.0); }), 0.25, 1e-12);
}

TEST(Empirical, EmptySampleErrors) {
  EmpiricalCdf empty = sample_kappa(path_graph(2), 0, closed_form_solver(path_graph(2), 0), {0, 1, 1});
  EXPECT_EQ(empty.size(), 0u);
  EXPECT_THROW(empty(0.5), std::logic_error);
}

TEST(Sampling, DeterministicAcrossWorkerCounts) {
  Graph g = path_graph(3);
  auto solver = closed_form_solver(g, 1);
  EmpiricalCdf one = sample_kappa(g, 1, solver, {10000, 42, 1});
  EmpiricalCdf three = sample_kappa(g, 1, solver, {10000, 42, 3});
  EXPECT_EQ(one.sorted(), three.sorted());
  EmpiricalCdf other = sample_kappa(g, 1, solver, {10000, 43, 1});
  EXPECT_NE(one.sorted(), other.sorted());
  EXPECT_EQ(sample_profile(3, 42, 17), sample_profile(3, 42, 17));
}

TEST(Sampling, SmallSampleStaysNearOracle) {
  Graph g = path_graph(2);
  EmpiricalCdf e = sample_kappa(g, 0, closed_form_solver(g, 0), {40000, 9, 2});
  CdfOracle f = cdf_oracle("k2_v1");
  // Kolmogorov 99.9% radius at n = 40000 is about 0.0098.
  EXPECT_LT(e.sup_distance([&](double x) { return f(x); }), 0.0098);
}

TEST(Dominance, IdenticalSamplesHaveNoViolation) {
  EmpiricalCdf e({0.1, 0.4, 0.4, 0.9});
  EXPECT_EQ(dominance_check(e, e).max_violation, 0);
}

TEST(Dominance, KappaSitsBelowMaximum) {
  Graph g = path_graph(2);
  KappaSolver kappa = closed_form_solver(g, 0);
  KappaSolver maximum = [](const WaterProfile& p) { return p.max_level(); };
  KappaSolver own = [](const WaterProfile& p) { return p[0]; };
  auto cdfs = sample_kappas(g, {kappa, maximum, own}, {20000, 5, 1});
  // U1 <= kappa <= max(U1, U2) sample by sample.
  EXPECT_EQ(dominance_check(cdfs[0], cdfs[1]).max_violation, 0);
  EXPECT_EQ(dominance_check(cdfs[2], cdfs[0]).max_violation, 0);
}

TEST(Dominance, MiddleBeatsEndOnL3) {
  Graph g = path_graph(3);
  auto cdfs = sample_kappas(g, {closed_form_solver(g, 0), closed_form_solver(g, 1)}, {20000, 3, 1});
  DominanceReport rep = dominance_check(cdfs[0], cdfs[1]);
  EXPECT_LT(rep.max_violation, 0.02);
  EXPECT_EQ(rep.grid_points, 1001u);
}

TEST(IndexMapTest, AffineAndTable) {
  IndexMap f = IndexMap::affine(3, 0);
  EXPECT_EQ(f(1), 3u);
  EXPECT_EQ(f(10), 30u);
  EXPECT_TRUE(f.divergence_declared());
  IndexMap t = IndexMap::table({2, 5, 9});
  EXPECT_EQ(t(2), 5u);
  EXPECT_EQ(t.limit(), 3u);
  EXPECT_FALSE(t.divergence_declared());
}

WaterProfile half_line_profile(const HalfLine& h, std::size_t m, const Rational& line, const Rational& pendant) {
  WaterProfile p{std::vector<Rational>(h.graph.num_vertices(), line), 1};
  for (std::size_t k = 1; k <= m; ++k) p[h.pendant(k)] = pendant;
  return p;
}

TEST(HalfLineTest, TwoStagesBeatProductFloor) {
  HalfLineSpec spec;
  spec.f = IndexMap::affine(3, 0);
  spec.m = 2;
  spec.epsilon = r(1, 20);
  HalfLine h = build_half_line(spec);
  EXPECT_EQ(h.line_length, 6u);
  WaterProfile p = half_line_profile(h, 2, 0, 1);
  HalfLineResult res = half_line_schedule(spec, h, p);
  EXPECT_EQ(res.product_bound, r(4, 5) * r(7, 8));
  EXPECT_GE(res.level, 1 - r(4, 5) * r(7, 8));
  EXPECT_GE(res.level, r(3, 10));
  EXPECT_LE(res.residual, res.product_bound);
  ASSERT_EQ(res.stages.size(), 2u);
  EXPECT_LT(res.stages[0].level, res.stages[1].level);
  // The returned sequence reproduces the level and its dual.
  EXPECT_EQ(apply_sequence(h.graph, p, res.sequence)[h.line_vertex(1)], res.level);
  EXPECT_EQ(dual_sad(h.graph, res.sequence, h.line_vertex(1)).weights, res.sad.weights);
}

TEST(HalfLineTest, NoStagesLeaveLevelUnchanged) {
  HalfLineSpec spec;
  spec.m = 0;
  HalfLine h = build_half_line(spec);
  WaterProfile p = half_line_profile(h, 0, r(1, 3), 1);
  HalfLineResult res = half_line_schedule(spec, h, p);
  EXPECT_EQ(res.level, r(1, 3));
  EXPECT_TRUE(res.sequence.empty());
}

TEST(HalfLineTest, LevelsIncreaseAndRespectBound) {
  HalfLineSpec spec;
  spec.f = IndexMap::affine(3, 0);
  spec.m = 6;
  HalfLine h = build_half_line(spec);
  HalfLineResult res = half_line_schedule(spec, h, half_line_profile(h, 6, 0, 1), false);
  ASSERT_EQ(res.stages.size(), 6u);
  Rational floor = 1;
  for (std::size_t i = 0; i < res.stages.size(); ++i) {
    const auto& st = res.stages[i];
    floor *= 1 - Rational(1, static_cast<long>(st.f + 2));
    EXPECT_EQ(st.product_bound, floor);
    EXPECT_LE(st.residual, st.product_bound);
    if (i > 0) EXPECT_GT(st.level, res.stages[i - 1].level);
  }
  EXPECT_TRUE(res.sequence.empty());
}

TEST(Divergence, DeterministicEdgeCases) {
  IndexMap f = IndexMap::affine(1, 0);
  auto all = bernoulli_divergence_demo(f, 1.0, 100, 1);
  double harmonic = 0;
  for (int k = 1; k <= 100; ++k) harmonic += 1.0 / k;
  EXPECT_NEAR(all.back().sum, harmonic, 1e-12);
  auto none = bernoulli_divergence_demo(f, 0.0, 100, 1);
  EXPECT_EQ(none.back().sum, 0.0);
  EXPECT_THROW(bernoulli_divergence_demo(f, 1.5, 10, 1), InputError);
}

TEST(Divergence, HalfProbabilityHarmonicExceedsTwo) {
  IndexMap f = IndexMap::affine(1, 0);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto pts = bernoulli_divergence_demo(f, 0.5, 10000, seed);
    EXPECT_GT(pts.back().sum, 2.0) << seed;
    EXPECT_LT(std::abs(pts.back().residual), 3 * std::sqrt(0.5 * M_PI * M_PI / 6)) << seed;
  }
}

TEST(Flatness, ConstantHalfIsFlat) {
  Graph g = path_graph(9);
  WaterProfile p{std::vector<Rational>(9, half()), 1};
  EXPECT_TRUE(flatness_check(g, p, 4, 0).flat);
}

TEST(Flatness, SpikeNextToTarget) {
  Graph g = path_graph(9);
  WaterProfile p{std::vector<Rational>(9, half()), 1};
  p[5] = 1;
  FlatnessReport rep = flatness_check(g, p, 4, r(1, 10));
  EXPECT_FALSE(rep.flat);
  EXPECT_EQ(rep.from, 5u);
  EXPECT_EQ(rep.to, 6u);
  EXPECT_EQ(rep.deviation, r(1, 4));
  EXPECT_THROW(flatness_check(star_graph(4), WaterProfile{std::vector<Rational>(4, 0), 1}, 0, 0), InputError);
}

}  // namespace
