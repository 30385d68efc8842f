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

// Independent reference implementations for the tests. They work on raw
// bitmasks and adjacency matrices and share no code with the library
// beyond the Rational type.

#ifndef WATERTRANSPORT_TESTS_ORACLES_HPP_
#define WATERTRANSPORT_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "watertransport/graph.hpp"
#include "watertransport/rational.hpp"

namespace oracle {

using wtp::Rational;
using Mask = std::uint32_t;

struct Adj {
  std::size_t n = 0;
  std::vector<Mask> nbr;  // bitmask of neighbours

  explicit Adj(const wtp::Graph& g) : n(g.num_vertices()), nbr(n, 0) {
    for (const auto& e : g.edges()) {
      nbr[e.first] |= Mask{1} << e.second;
      nbr[e.second] |= Mask{1} << e.first;
    }
  }

  bool connected(Mask set) const {
    if (set == 0) return false;
    Mask seen = set & (~set + 1);
    Mask frontier = seen;
    while (frontier) {
      Mask next = 0;
      for (std::size_t u = 0; u < n; ++u) {
        if (frontier >> u & 1) next |= nbr[u];
      }
      next &= set & ~seen;
      seen |= next;
      frontier = next;
    }
    return seen == set;
  }

  std::vector<Mask> connected_sets(std::size_t min_size = 1) const {
    std::vector<Mask> out;
    for (Mask s = 1; s < (Mask{1} << n); ++s) {
      if (static_cast<std::size_t>(__builtin_popcount(s)) >= min_size && connected(s)) out.push_back(s);
    }
    return out;
  }
};

inline Rational mean(const std::vector<Rational>& levels, Mask set) {
  Rational sum = 0;
  long count = 0;
  for (std::size_t u = 0; u < levels.size(); ++u) {
    if (set >> u & 1) {
      sum += levels[u];
      ++count;
    }
  }
  return sum / count;
}

// Max average over connected sets containing v.
inline Rational gla_value(const wtp::Graph& g, const std::vector<Rational>& levels, wtp::Vertex v) {
  Adj adj(g);
  Rational best = levels[v];
  for (Mask s : adj.connected_sets()) {
    if ((s >> v & 1) == 0) continue;
    Rational m = mean(levels, s);
    if (m > best) best = m;
  }
  return best;
}

// Max level at v over every sequence of at most `moves` full averages on
// connected sets of size >= 2 (edges only if `edges_only`).
inline Rational macro_brute_force(const wtp::Graph& g, const std::vector<Rational>& levels,
                                  wtp::Vertex v, std::size_t moves, bool edges_only = false) {
  Adj adj(g);
  std::vector<Mask> sets;
  for (Mask s : adj.connected_sets(2)) {
    if (!edges_only || __builtin_popcount(s) == 2) sets.push_back(s);
  }
  Rational best = levels[v];
  std::vector<Rational> state = levels;
  auto rec = [&](auto&& self, std::size_t left) -> void {
    if (state[v] > best) best = state[v];
    if (left == 0) return;
    for (Mask s : sets) {
      std::vector<Rational> saved = state;
      Rational m = mean(state, s);
      for (std::size_t u = 0; u < adj.n; ++u) {
        if (s >> u & 1) state[u] = m;
      }
      self(self, left - 1);
      state = std::move(saved);
    }
  };
  rec(rec, moves);
  return best;
}

// Complete graph: fold the levels above eta(v) in increasing order, each
// time halving towards the next one.
inline Rational complete_value(const std::vector<Rational>& levels, wtp::Vertex v) {
  std::vector<Rational> above;
  for (std::size_t u = 0; u < levels.size(); ++u) {
    if (u != v && levels[u] > levels[v]) above.push_back(levels[u]);
  }
  std::sort(above.begin(), above.end());
  Rational value = levels[v];
  for (const Rational& a : above) value = (value + a) / 2;
  return value;
}

inline Rational random_level(std::mt19937_64& rng, long den = 16) {
  Rational q(static_cast<long>(rng() % static_cast<std::uint64_t>(den + 1)), den);
  q.canonicalize();
  return q;
}

inline std::vector<Rational> random_levels(std::mt19937_64& rng, std::size_t n, long den = 16) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_level(rng, den));
  return out;
}

// Random connected graph: random spanning tree plus extra edges.
inline wtp::Graph random_connected_graph(std::mt19937_64& rng, std::size_t n, double extra) {
  std::vector<wtp::Edge> edges;
  for (std::size_t u = 1; u < n; ++u) {
    edges.emplace_back(static_cast<wtp::Vertex>(rng() % u), static_cast<wtp::Vertex>(u));
  }
  std::uniform_real_distribution<double> coin(0, 1);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      wtp::Edge e(static_cast<wtp::Vertex>(a), static_cast<wtp::Vertex>(b));
      if (std::find(edges.begin(), edges.end(), e) == edges.end() && coin(rng) < extra) edges.push_back(e);
    }
  }
  return wtp::Graph(n, edges);
}

}  // namespace oracle

#endif  // WATERTRANSPORT_TESTS_ORACLES_HPP_
