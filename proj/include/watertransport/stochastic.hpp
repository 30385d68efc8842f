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

#ifndef WATERTRANSPORT_STOCHASTIC_HPP_
#define WATERTRANSPORT_STOCHASTIC_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "watertransport/dynamics.hpp"
#include "watertransport/graph.hpp"
#include "watertransport/moves.hpp"

namespace wtp {

// Piecewise polynomial CDF on [0, 1] with exact coefficients.
struct CdfPiece {
  Rational lo;
  Rational hi;
  std::vector<Rational> coeffs;  // ascending powers
};

class CdfOracle {
 public:
  CdfOracle(std::string name, std::vector<CdfPiece> pieces);

  const std::string& name() const { return name_; }
  const std::vector<CdfPiece>& pieces() const { return pieces_; }

  // 0 below 0, 1 above 1.
  Rational operator()(const Rational& x) const;
  double operator()(double x) const;

 private:
  std::string name_;
  std::vector<CdfPiece> pieces_;
};

Rational eval_polynomial(const std::vector<Rational>& coeffs, const Rational& x);

// k2_v1, line3_v1 or line3_v2. Throws InputError otherwise.
CdfOracle cdf_oracle(const std::string& name);

class EmpiricalCdf {
 public:
  EmpiricalCdf() = default;
  explicit EmpiricalCdf(std::vector<double> samples);

  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

  // Fraction of samples <= x. Throws std::logic_error on an empty sample.
  double operator()(double x) const;

  // Kolmogorov distance to a continuous CDF.
  double sup_distance(const std::function<double(double)>& cdf) const;

 private:
  std::vector<double> sorted_;
};

using KappaSolver = std::function<Rational(const WaterProfile&)>;

// Closed-form solver for (g, v); throws InputError if none applies.
KappaSolver closed_form_solver(const Graph& g, Vertex v);

struct SampleConfig {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

// Profiles drawn i.i.d. uniform on [0, 1] as 64-bit dyadic rationals.
// Samples come in fixed blocks, each with its own stream derived from the
// seed, so the result does not depend on the worker count.
EmpiricalCdf sample_kappa(const Graph& g, Vertex v, const KappaSolver& solver,
                          const SampleConfig& cfg);

// Same draws, several solvers at once; one CDF per solver.
std::vector<EmpiricalCdf> sample_kappas(const Graph& g, const std::vector<KappaSolver>& solvers,
                                        const SampleConfig& cfg);

// The i-th uniform profile of the sampling stream.
std::vector<Rational> sample_profile(std::size_t num_vertices, std::uint64_t seed,
                                     std::size_t index);

struct DominanceReport {
  double max_violation = 0;  // max over the grid of F_b - F_a, clamped at 0
  double worst_x = 0;
  std::size_t grid_points = 0;
};

// Checks F_b <= F_a pointwise.
DominanceReport dominance_check(const EmpiricalCdf& a, const EmpiricalCdf& b,
                                std::size_t grid = 1000);

class IndexMap {
 public:
  static IndexMap affine(std::size_t a, std::size_t b);
  static IndexMap table(std::vector<std::size_t> values);

  std::size_t operator()(std::size_t k) const;  // k >= 1
  std::optional<std::size_t> limit() const;     // table length, if any
  bool divergence_declared() const { return !table_; }
  std::string describe() const;

 private:
  std::size_t a_ = 1;
  std::size_t b_ = 0;
  std::optional<std::vector<std::size_t>> table_;
};

struct HalfLineSpec {
  IndexMap f = IndexMap::affine(1, 0);
  std::size_t m = 0;
  Rational epsilon = Rational(1, 10);
  std::size_t sweep_cap = 10000;

  void validate() const;
};

// Vertices: v_1..v_K get ids 0..K-1 with K = f(m) (at least 1), u_k gets
// K + k - 1 and hangs off v_{f(k)}.
struct HalfLine {
  Graph graph;
  std::size_t line_length = 0;

  Vertex line_vertex(std::size_t i) const { return static_cast<Vertex>(i - 1); }
  Vertex pendant(std::size_t k) const { return static_cast<Vertex>(line_length + k - 1); }
};

HalfLine build_half_line(const HalfLineSpec& spec);

struct HalfLineStage {
  std::size_t k = 0;
  std::size_t f = 0;
  std::size_t sweeps = 0;
  Rational captured;      // SAD weight frozen on u_k
  Rational level;         // level at v if the schedule stopped after this stage
  Rational residual;      // 1 - sum of captured weights
  Rational product_bound; // prod (1 - 1/(f + 2)) over the stages so far
};

struct HalfLineResult {
  MoveSequence sequence;  // water order; empty unless requested
  Rational level;
  Rational initial_level;
  Rational residual;
  Rational product_bound;
  std::vector<std::size_t> selected;  // k with eta0(u_k) >= 1 - epsilon
  std::vector<HalfLineStage> stages;
  SadProfile sad;
  std::vector<std::string> warnings;
};

// Throws std::runtime_error if a stage hits the sweep cap.
HalfLineResult half_line_schedule(const HalfLineSpec& spec, const HalfLine& half_line,
                                  const WaterProfile& profile, bool keep_sequence = true);

struct DivergencePoint {
  std::size_t n = 0;
  double sum = 0;       // sum_{k<=n} Y_k / f(k)
  double expected = 0;  // epsilon * sum_{k<=n} 1 / f(k)
  double residual = 0;  // sum - expected
};

std::vector<DivergencePoint> bernoulli_divergence_demo(const IndexMap& f, double epsilon,
                                                       std::size_t horizon, std::uint64_t seed,
                                                       std::size_t checkpoints = 100);

struct FlatnessReport {
  bool flat = true;
  // Window [from, to] of line positions (1-based) with the largest deviation.
  std::size_t from = 0;
  std::size_t to = 0;
  Rational average;
  Rational deviation;  // |average - 1/2|
};

// Windows containing v along the line, v given as a vertex id.
FlatnessReport flatness_check(const Graph& g, const WaterProfile& profile, Vertex v,
                              const Rational& epsilon);

}  // namespace wtp

#endif  // WATERTRANSPORT_STOCHASTIC_HPP_
