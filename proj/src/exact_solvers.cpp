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

#include "watertransport/exact_solvers.hpp"

#include <algorithm>
#include <numeric>

namespace wtp {
namespace {

Rational mean_of(const WaterProfile& p, std::span<const Vertex> set) {
  Rational sum = 0;
  for (Vertex u : set) sum += p.levels[u];
  return sum / static_cast<long>(set.size());
}

// Positions are 1-based along the line; prefix[i] = sum of the first i levels.
struct LineView {
  std::vector<Vertex> order;
  std::vector<Rational> prefix;
  std::size_t n = 0;

  LineView(const Graph& g, const WaterProfile& profile, Vertex start) : order(line_order(g, start)) {
    n = order.size();
    prefix.assign(n + 1, Rational(0));
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + profile.levels[order[i]];
  }

  Rational sum(std::size_t from, std::size_t to) const { return prefix[to] - prefix[from - 1]; }

  std::vector<Vertex> slice(std::size_t from, std::size_t to) const {
    return {order.begin() + static_cast<std::ptrdiff_t>(from - 1),
            order.begin() + static_cast<std::ptrdiff_t>(to)};
  }

  std::size_t position_of(Vertex v) const {
    return static_cast<std::size_t>(std::find(order.begin(), order.end(), v) - order.begin()) + 1;
  }
};

Vertex lower_endpoint(const Graph& g) {
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    if (g.degree(u) == 1) return u;
  }
  return 0;
}

void require_line(const Graph& g, const char* who) {
  if (!is_line_graph(g)) throw InputError(std::string(who) + ": graph is not a line");
}

bool edge_only(const MoveSequence& seq) {
  return std::none_of(seq.begin(), seq.end(), [](const Move& m) { return m.is_macro(); });
}

void finish(KappaResult& result) {
  result.attained = edge_only(result.certificate);
  result.kind = result.attained ? KappaResult::Kind::kFinite : KappaResult::Kind::kMacro;
}

}  // namespace

GlaResult gla(const Graph& g, const WaterProfile& profile, Vertex v, GlaMode mode, std::size_t cap) {
  if (!g.contains(v)) throw InputError("gla: target out of range");
  GlaResult best;
  best.set = {v};
  best.value = profile.levels[v];
  best.exact = mode == GlaMode::kExact;

  if (mode == GlaMode::kExact) {
    if (g.num_vertices() > cap) {
      throw CapExceeded("exact GLA limited to " + std::to_string(cap) + " vertices");
    }
    for_each_connected_subset(g, v, g.num_vertices(), [&](std::span<const Vertex> set) {
      Rational value = mean_of(profile, set);
      bool better = value > best.value ||
                    (value == best.value &&
                     (set.size() < best.set.size() ||
                      (set.size() == best.set.size() &&
                       std::lexicographical_compare(set.begin(), set.end(), best.set.begin(),
                                                    best.set.end()))));
      if (better) {
        best.value = value;
        best.set.assign(set.begin(), set.end());
      }
    });
  } else {
    std::vector<char> in(g.num_vertices(), 0);
    in[v] = 1;
    Rational sum = profile.levels[v];
    while (true) {
      std::optional<Vertex> pick;
      Rational pick_value = best.value;
      for (Vertex u : best.set) {
        for (Vertex w : g.neighbors(u)) {
          if (in[w]) continue;
          Rational value = (sum + profile.levels[w]) / static_cast<long>(best.set.size() + 1);
          if (value > pick_value || (pick && value == pick_value && w < *pick)) {
            pick = w;
            pick_value = value;
          }
        }
      }
      if (!pick) break;
      in[*pick] = 1;
      sum += profile.levels[*pick];
      best.set.push_back(*pick);
      best.value = pick_value;
    }
    std::sort(best.set.begin(), best.set.end());
  }
  if (best.set.size() >= 2) best.witness = Move::average(g, best.set);
  return best;
}

KappaResult kappa_complete(const Graph& g, const WaterProfile& profile, Vertex v) {
  if (!g.contains(v)) throw InputError("kappa_complete: target out of range");
  if (g.degree(v) + 1 != g.num_vertices()) {
    throw InputError("kappa_complete: target is not adjacent to every other vertex");
  }
  std::vector<Vertex> order(g.num_vertices());
  std::iota(order.begin(), order.end(), Vertex{0});
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    if (profile.levels[a] != profile.levels[b]) return profile.levels[a] > profile.levels[b];
    return a < b;
  });
  const std::size_t l = static_cast<std::size_t>(std::find(order.begin(), order.end(), v) -
                                                 order.begin()) + 1;

  KappaResult result;
  result.solver = "complete";
  result.witness = SadProfile::delta(g.num_vertices(), v);
  Rational share = 1;
  result.value = 0;
  for (std::size_t i = 1; i < l; ++i) {
    share /= 2;
    result.value += share * profile.levels[order[i - 1]];
    result.witness.weights[order[i - 1]] = share;
  }
  result.value += share * profile.levels[v];
  result.witness.weights[v] = share;

  for (std::size_t k = 1; k < l; ++k) result.certificate.push_back(Move::edge(v, order[l - k - 1]));
  finish(result);
  return result;
}

KappaResult kappa_line_endpoint(const Graph& g, const WaterProfile& profile, Vertex v) {
  require_line(g, "kappa_line_endpoint");
  if (g.degree(v) != 1) throw InputError("kappa_line_endpoint: target is not an end of the line");
  LineView line(g, profile, v);

  std::size_t best_len = 1;
  Rational best = line.sum(1, 1);
  for (std::size_t len = 2; len <= line.n; ++len) {
    Rational avg = line.sum(1, len) / static_cast<long>(len);
    if (avg > best) {
      best = avg;
      best_len = len;
    }
  }

  KappaResult result;
  result.solver = "line-endpoint";
  result.value = best;
  result.witness = SadProfile::delta(g.num_vertices(), v);
  result.witness.weights[v] = 0;
  for (Vertex u : line.slice(1, best_len)) result.witness.weights[u] = Rational(1, best_len);
  if (best_len >= 2) result.certificate.push_back(Move::average(g, line.slice(1, best_len)));
  finish(result);
  return result;
}

KappaResult kappa_line_interior(const Graph& g, const WaterProfile& profile, Vertex v) {
  require_line(g, "kappa_line_interior");
  if (!g.contains(v)) throw InputError("kappa_line_interior: target out of range");
  LineView line(g, profile, lower_endpoint(g));
  const std::size_t n = line.n;
  const std::size_t p = line.position_of(v);

  // The first maximizer in (l, q, r) order is kept; ties only record
  // whether some maximizer needs no macro move.
  struct Candidate {
    Rational value;
    TwoLevelProfile shape;
  };
  std::optional<Candidate> best;
  bool edge_only_maximizer = false;
  auto offer = [&](Rational value, TwoLevelProfile shape, std::size_t first_block,
                   std::size_t final_block) {
    const bool edge_only = first_block <= 2 && final_block <= 2;
    if (!best || value > best->value) {
      best = Candidate{std::move(value), std::move(shape)};
      edge_only_maximizer = edge_only;
    } else if (value == best->value) {
      edge_only_maximizer = edge_only_maximizer || edge_only;
    }
  };

  for (std::size_t l = 1; l <= p; ++l) {
    for (std::size_t q = p; q <= n; ++q) {
      for (std::size_t r = q; r <= n; ++r) {
        const long span = static_cast<long>(r - p + 1);
        if (q == p) {
          // Flat block [p, r]; l plays no role.
          if (l == p) {
            offer(line.sum(p, r) / span, TwoLevelProfile{p, p, r, false, Rational(0), Rational(1, span)},
                  1, r - p + 1);
          }
          continue;
        }
        Rational partial(static_cast<long>(q - p), static_cast<long>(q - l) * span);
        partial.canonicalize();
        Rational value = partial * line.sum(l, q - 1) + line.sum(q, r) / span;
        offer(std::move(value), TwoLevelProfile{l, q, r, false, partial, Rational(1, span)}, q - l,
              r - p + 1);
      }
    }
  }
  for (std::size_t l = 1; l <= p; ++l) {
    const long span = static_cast<long>(p - l + 1);
    for (std::size_t qh = l; qh <= p; ++qh) {
      if (qh == p) {
        offer(line.sum(l, p) / span, TwoLevelProfile{l, p, p, true, Rational(0), Rational(1, span)}, 1,
              p - l + 1);
        continue;
      }
      for (std::size_t r = p; r <= n; ++r) {
        Rational partial(static_cast<long>(p - qh), static_cast<long>(r - qh) * span);
        partial.canonicalize();
        Rational value = line.sum(l, qh) / span + partial * line.sum(qh + 1, r);
        offer(std::move(value), TwoLevelProfile{l, qh, r, true, partial, Rational(1, span)}, r - qh,
              p - l + 1);
      }
    }
  }

  KappaResult result;
  result.solver = "line-interior";
  result.value = best->value;
  result.two_level = best->shape;
  result.witness = SadProfile::delta(g.num_vertices(), v);
  result.witness.weights[v] = 0;
  const TwoLevelProfile& s = best->shape;
  auto average = [&](std::size_t from, std::size_t to) {
    if (to > from) result.certificate.push_back(Move::average(g, line.slice(from, to)));
  };
  if (!s.mirrored) {
    if (s.q > p) {
      for (Vertex u : line.slice(s.l, s.q - 1)) result.witness.weights[u] = s.partial_weight;
      average(s.l, s.q - 1);
    }
    for (Vertex u : line.slice(s.q, s.r)) result.witness.weights[u] = s.full_weight;
    average(p, s.r);
  } else {
    for (Vertex u : line.slice(s.l, s.q)) result.witness.weights[u] = s.full_weight;
    if (s.q < p) {
      for (Vertex u : line.slice(s.q + 1, s.r)) result.witness.weights[u] = s.partial_weight;
      average(s.q + 1, s.r);
    }
    average(s.l, p);
  }
  finish(result);
  result.attained = edge_only_maximizer;

  Rational interval_best = profile.levels[v];
  for (std::size_t a = 1; a <= p; ++a) {
    for (std::size_t b = p; b <= n; ++b) {
      Rational avg = line.sum(a, b) / static_cast<long>(b - a + 1);
      if (avg > interval_best) interval_best = avg;
    }
  }
  result.gla_attains = interval_best == result.value;
  return result;
}

KappaResult kappa_line3_middle(const Graph& g, const WaterProfile& profile, Vertex v) {
  if (g.num_vertices() != 3 || !is_line_graph(g) || g.degree(v) != 2) {
    throw InputError("kappa_line3_middle: needs the 3-vertex line with the middle as target");
  }
  LineView line(g, profile, lower_endpoint(g));
  const Vertex a = line.order[0];
  const Vertex c = line.order[2];
  const auto& eta = profile.levels;

  struct Option {
    Rational value;
    MoveSequence moves;
    std::vector<std::pair<Vertex, Rational>> weights;
  };
  const Rational q1(1, 4);
  const Rational q2(1, 2);
  const Rational t(1, 3);
  std::vector<Vertex> sorted3{a, v, c};
  std::sort(sorted3.begin(), sorted3.end());
  std::vector<Option> options;
  options.push_back({eta[v], {}, {{v, 1}}});
  options.push_back({(eta[a] + eta[v]) / 2, {Move::edge(a, v)}, {{a, q2}, {v, q2}}});
  options.push_back({(eta[v] + eta[c]) / 2, {Move::edge(v, c)}, {{v, q2}, {c, q2}}});
  options.push_back({(eta[a] + (eta[v] + eta[c]) / 2) / 2,
                     {Move::edge(v, c), Move::edge(a, v)},
                     {{a, q2}, {v, q1}, {c, q1}}});
  options.push_back({(eta[c] + (eta[a] + eta[v]) / 2) / 2,
                     {Move::edge(a, v), Move::edge(v, c)},
                     {{a, q1}, {v, q1}, {c, q2}}});
  options.push_back({(eta[a] + eta[v] + eta[c]) / 3,
                     {Move::average(g, sorted3)},
                     {{a, t}, {v, t}, {c, t}}});

  std::size_t pick = 0;
  for (std::size_t i = 1; i < options.size(); ++i) {
    if (options[i].value > options[pick].value) pick = i;
  }
  KappaResult result;
  result.solver = "line3-middle";
  result.value = options[pick].value;
  result.certificate = options[pick].moves;
  result.witness = SadProfile::delta(g.num_vertices(), v);
  result.witness.weights[v] = 0;
  for (const auto& [u, w] : options[pick].weights) result.witness.weights[u] = w;
  finish(result);
  return result;
}

ExactClass detect_exact_class(const Graph& g, Vertex v) {
  const std::size_t n = g.num_vertices();
  if (is_complete_graph(g)) return ExactClass::kComplete;
  if (is_line_graph(g)) {
    if (n == 3 && g.degree(v) == 2) return ExactClass::kLine3Middle;
    if (g.degree(v) == 1) return ExactClass::kLineEndpoint;
    return ExactClass::kLineInterior;
  }
  if (g.degree(v) + 1 == n) return ExactClass::kStarCenter;
  return ExactClass::kNone;
}

std::string to_string(ExactClass c) {
  switch (c) {
    case ExactClass::kComplete: return "complete";
    case ExactClass::kStarCenter: return "star-center";
    case ExactClass::kLineEndpoint: return "line-endpoint";
    case ExactClass::kLine3Middle: return "line3-middle";
    case ExactClass::kLineInterior: return "line-interior";
    case ExactClass::kNone: break;
  }
  return "none";
}

std::optional<KappaResult> kappa_closed_form(const Graph& g, const WaterProfile& profile, Vertex v) {
  switch (detect_exact_class(g, v)) {
    case ExactClass::kComplete:
    case ExactClass::kStarCenter: {
      KappaResult r = kappa_complete(g, profile, v);
      if (!is_complete_graph(g)) r.solver = "star-center";
      return r;
    }
    case ExactClass::kLineEndpoint: return kappa_line_endpoint(g, profile, v);
    case ExactClass::kLine3Middle: return kappa_line3_middle(g, profile, v);
    case ExactClass::kLineInterior: return kappa_line_interior(g, profile, v);
    case ExactClass::kNone: break;
  }
  return std::nullopt;
}

}  // namespace wtp
