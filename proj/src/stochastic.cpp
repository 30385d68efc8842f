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

#include "watertransport/stochastic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "watertransport/exact_solvers.hpp"

namespace wtp {
namespace {

constexpr std::size_t kBlock = 4096;

Rational q(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

Rational eval_polynomial(const std::vector<Rational>& coeffs, const Rational& x) {
  Rational acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

CdfOracle::CdfOracle(std::string name, std::vector<CdfPiece> pieces)
    : name_(std::move(name)), pieces_(std::move(pieces)) {}

Rational CdfOracle::operator()(const Rational& x) const {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  for (const CdfPiece& p : pieces_) {
    if (x <= p.hi) return eval_polynomial(p.coeffs, x);
  }
  return 1;
}

double CdfOracle::operator()(double x) const {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  for (const CdfPiece& p : pieces_) {
    if (x <= to_double(p.hi)) {
      double acc = 0;
      for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) acc = acc * x + to_double(*it);
      return acc;
    }
  }
  return 1;
}

CdfOracle cdf_oracle(const std::string& name) {
  if (name == "k2_v1") {
    return CdfOracle(name, {{0, q(1, 2), {0, 0, q(3, 2)}},
                            {q(1, 2), 1, {q(-1, 2), 2, q(-1, 2)}}});
  }
  if (name == "line3_v1") {
    return CdfOracle(name, {{0, q(1, 3), {0, 0, 0, q(8, 3)}},
                            {q(1, 3), q(1, 2), {q(1, 6), q(-3, 2), q(9, 2), q(-11, 6)}},
                            {q(1, 2), q(2, 3), {q(1, 6), -2, q(13, 2), q(-23, 6)}},
                            {q(2, 3), 1, {q(-7, 6), 4, q(-5, 2), q(2, 3)}}});
  }
  if (name == "line3_v2") {
    return CdfOracle(name, {{0, q(1, 2), {0, 0, 0, 2}},
                            {q(1, 2), q(3, 4), {q(7, 12), -4, 9, q(-14, 3)}},
                            {q(3, 4), 1, {q(-5, 3), 5, -3, q(2, 3)}}});
  }
  throw InputError("unknown CDF case '" + name + "' (expected k2_v1, line3_v1 or line3_v2)");
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  if (sorted_.empty()) throw std::logic_error("empirical CDF of an empty sample");
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::sup_distance(const std::function<double(double)>& cdf) const {
  if (sorted_.empty()) throw std::logic_error("empirical CDF of an empty sample");
  const double n = static_cast<double>(sorted_.size());
  double d = 0;
  for (std::size_t i = 0; i < sorted_.size(); ++i) {
    double f = cdf(sorted_[i]);
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f),
                  std::abs(f - static_cast<double>(i) / n)});
  }
  return d;
}

KappaSolver closed_form_solver(const Graph& g, Vertex v) {
  if (!g.contains(v)) throw InputError("solver target out of range");
  ExactClass cls = detect_exact_class(g, v);
  if (cls == ExactClass::kNone) {
    throw InputError("no closed-form solver applies to this graph and target");
  }
  return [g, v](const WaterProfile& p) { return kappa_closed_form(g, p, v)->value; };
}

std::vector<Rational> sample_profile(std::size_t num_vertices, std::uint64_t seed,
                                     std::size_t index) {
  auto engine = block_engine(seed, index / kBlock);
  engine.discard((index % kBlock) * num_vertices);
  std::vector<Rational> levels(num_vertices);
  for (auto& l : levels) l = dyadic_from_bits(engine());
  return levels;
}

std::vector<EmpiricalCdf> sample_kappas(const Graph& g, const std::vector<KappaSolver>& solvers,
                                        const SampleConfig& cfg) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<double>> values(solvers.size(), std::vector<double>(cfg.samples));
  const std::size_t blocks = (cfg.samples + kBlock - 1) / kBlock;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    WaterProfile p;
    p.levels.resize(n);
    for (std::size_t b = next++; b < blocks; b = next++) {
      auto engine = block_engine(cfg.seed, b);
      const std::size_t end = std::min(cfg.samples, (b + 1) * kBlock);
      for (std::size_t i = b * kBlock; i < end; ++i) {
        for (auto& l : p.levels) l = dyadic_from_bits(engine());
        for (std::size_t s = 0; s < solvers.size(); ++s) values[s][i] = to_double(solvers[s](p));
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, blocks));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  std::vector<EmpiricalCdf> out;
  for (auto& v : values) out.emplace_back(std::move(v));
  return out;
}

EmpiricalCdf sample_kappa(const Graph& g, Vertex v, const KappaSolver& solver,
                          const SampleConfig& cfg) {
  if (!g.contains(v)) throw InputError("sampling target out of range");
  return std::move(sample_kappas(g, {solver}, cfg).front());
}

DominanceReport dominance_check(const EmpiricalCdf& a, const EmpiricalCdf& b, std::size_t grid) {
  if (a.size() != b.size()) throw InputError("dominance check needs equal sample sizes");
  DominanceReport r;
  r.grid_points = grid + 1;
  for (std::size_t i = 0; i <= grid; ++i) {
    double x = static_cast<double>(i) / static_cast<double>(grid);
    double gap = b(x) - a(x);
    if (gap > r.max_violation) {
      r.max_violation = gap;
      r.worst_x = x;
    }
  }
  return r;
}

IndexMap IndexMap::affine(std::size_t a, std::size_t b) {
  if (a == 0) throw InputError("affine index map needs a positive slope");
  IndexMap m;
  m.a_ = a;
  m.b_ = b;
  return m;
}

IndexMap IndexMap::table(std::vector<std::size_t> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0) throw InputError("index map values start at 1");
    if (i > 0 && values[i] <= values[i - 1]) throw InputError("index map must be strictly increasing");
  }
  IndexMap m;
  m.table_ = std::move(values);
  return m;
}

std::size_t IndexMap::operator()(std::size_t k) const {
  if (k == 0) throw InputError("index map is defined from k = 1");
  if (table_) {
    if (k > table_->size()) throw InputError("index map table too short");
    return (*table_)[k - 1];
  }
  return a_ * k + b_;
}

std::optional<std::size_t> IndexMap::limit() const {
  if (table_) return table_->size();
  return std::nullopt;
}

std::string IndexMap::describe() const {
  std::ostringstream out;
  if (table_) {
    out << "table[";
    for (std::size_t i = 0; i < table_->size(); ++i) out << (i ? "," : "") << (*table_)[i];
    out << "] (divergence of sum 1/f unchecked)";
  } else {
    out << "f(k)=" << a_ << "k+" << b_;
  }
  return out.str();
}

void HalfLineSpec::validate() const {
  if (epsilon <= 0 || epsilon >= 1) throw InputError("epsilon must lie in (0, 1)");
  if (auto lim = f.limit(); lim && m > *lim) throw InputError("index map table shorter than m");
  if (sweep_cap == 0) throw InputError("sweep cap must be positive");
}

HalfLine build_half_line(const HalfLineSpec& spec) {
  spec.validate();
  HalfLine h;
  h.line_length = spec.m == 0 ? 1 : spec.f(spec.m);
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < h.line_length; ++i) edges.emplace_back(h.line_vertex(i), h.line_vertex(i + 1));
  for (std::size_t k = 1; k <= spec.m; ++k) edges.emplace_back(h.line_vertex(spec.f(k)), h.pendant(k));
  h.graph = Graph(h.line_length + spec.m, edges);
  return h;
}

HalfLineResult half_line_schedule(const HalfLineSpec& spec, const HalfLine& half_line,
                                  const WaterProfile& profile, bool keep_sequence) {
  spec.validate();
  const Graph& g = half_line.graph;
  profile.validate(g.num_vertices());
  if (g.num_vertices() != half_line.line_length + spec.m) {
    throw InputError("profile graph does not match the half-line truncation");
  }
  const Vertex v = half_line.line_vertex(1);

  HalfLineResult r;
  r.initial_level = profile.levels[v];
  r.level = r.initial_level;
  r.residual = 1;
  r.product_bound = 1;
  r.sad = SadProfile::delta(g.num_vertices(), v);
  for (std::size_t k = 1; k <= spec.m; ++k) {
    if (profile.levels[half_line.pendant(k)] >= 1 - spec.epsilon) r.selected.push_back(k);
  }
  if (r.selected.empty()) {
    r.warnings.push_back("no pendant reaches level 1 - epsilon; schedule is empty");
    return r;
  }

  std::vector<Rational>& xi = r.sad.weights;
  std::vector<Edge> sad_moves;
  for (std::size_t k : r.selected) {
    const std::size_t f = spec.f(k);
    const Vertex u = half_line.pendant(k);
    std::vector<Edge> edges;
    for (std::size_t i = 1; i < f; ++i) edges.emplace_back(half_line.line_vertex(i), half_line.line_vertex(i + 1));
    edges.emplace_back(half_line.line_vertex(f), u);
    std::sort(edges.begin(), edges.end());

    const Rational threshold = r.residual / static_cast<long>(f + 2);
    HalfLineStage stage;
    stage.k = k;
    stage.f = f;
    while (xi[u] < threshold) {
      if (stage.sweeps == spec.sweep_cap) {
        throw std::runtime_error("half-line stage k=" + std::to_string(k) + " hit the sweep cap of " +
                                 std::to_string(spec.sweep_cap));
      }
      for (const Edge& e : edges) {
        Rational& a = xi[e.first];
        Rational& b = xi[e.second];
        if (a == b) continue;
        Rational mean = a + b;
        mpq_div_2exp(mean.get_mpq_t(), mean.get_mpq_t(), 1);
        a = mean;
        b = mean;
        if (keep_sequence) sad_moves.push_back(e);
      }
      ++stage.sweeps;
    }
    stage.captured = xi[u];
    r.residual -= stage.captured;
    r.product_bound *= 1 - Rational(1, static_cast<long>(f + 2));
    stage.residual = r.residual;
    stage.product_bound = r.product_bound;
    stage.level = r.sad.dot(profile);
    r.stages.push_back(std::move(stage));
  }
  r.level = r.stages.back().level;
  if (keep_sequence) {
    r.sequence.reserve(sad_moves.size());
    for (auto it = sad_moves.rbegin(); it != sad_moves.rend(); ++it) {
      r.sequence.push_back(Move::edge(it->first, it->second));
    }
  }
  return r;
}

std::vector<DivergencePoint> bernoulli_divergence_demo(const IndexMap& f, double epsilon,
                                                       std::size_t horizon, std::uint64_t seed,
                                                       std::size_t checkpoints) {
  if (epsilon < 0 || epsilon > 1) throw InputError("epsilon must lie in [0, 1]");
  if (auto lim = f.limit(); lim && horizon > *lim) throw InputError("index map table shorter than horizon");
  std::mt19937_64 engine(seed);
  const std::size_t stride = std::max<std::size_t>(1, horizon / std::max<std::size_t>(1, checkpoints));
  std::vector<DivergencePoint> out;
  DivergencePoint p;
  for (std::size_t k = 1; k <= horizon; ++k) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    const double w = 1.0 / static_cast<double>(f(k));
    if (u < epsilon) p.sum += w;
    p.expected += epsilon * w;
    p.n = k;
    if (k % stride == 0 || k == horizon) {
      p.residual = p.sum - p.expected;
      out.push_back(p);
    }
  }
  return out;
}

FlatnessReport flatness_check(const Graph& g, const WaterProfile& profile, Vertex v,
                              const Rational& epsilon) {
  if (!is_line_graph(g)) throw InputError("flatness check needs a line graph");
  profile.validate(g.num_vertices());
  Vertex start = 0;
  while (g.degree(start) > 1) ++start;
  std::vector<Vertex> order = line_order(g, start);
  const std::size_t n = order.size();
  const std::size_t p = static_cast<std::size_t>(std::find(order.begin(), order.end(), v) - order.begin()) + 1;
  std::vector<Rational> prefix(n + 1, Rational(0));
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + profile.levels[order[i]];

  FlatnessReport r;
  r.deviation = -1;
  for (std::size_t a = 1; a <= p; ++a) {
    for (std::size_t b = p; b <= n; ++b) {
      Rational avg = (prefix[b] - prefix[a - 1]) / static_cast<long>(b - a + 1);
      Rational dev = abs(avg - half());
      if (dev > r.deviation) {
        r.deviation = dev;
        r.average = avg;
        r.from = a;
        r.to = b;
      }
    }
  }
  r.flat = r.deviation <= epsilon;
  return r;
}

}  // namespace wtp
