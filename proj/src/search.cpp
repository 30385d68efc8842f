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

#include "watertransport/search.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <set>
#include <unordered_set>

#include "watertransport/dynamics.hpp"

namespace wtp {
namespace {

using State = std::vector<Rational>;

struct StateHash {
  std::size_t operator()(const State& s) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const Rational& q : s) h = (h ^ hash_value(q)) * 0x100000001b3ULL;
    return h;
  }
};

struct Candidate {
  std::vector<Vertex> members;
  Move move;
};

bool move_less(const Move& a, const Move& b) {
  auto sa = a.vertex_set();
  auto sb = b.vertex_set();
  return sa < sb;
}

bool sequence_less(const MoveSequence& a, const MoveSequence& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), move_less);
}

struct Timeout {};

struct AnimalAbort {};

class Evaluator {
 public:
  Evaluator(const Graph& g, Vertex v, bool final_average, std::size_t exact_limit)
      : g_(g), v_(v), final_average_(final_average) {
    if (!final_average_) return;
    try {
      for_each_connected_subset(g, v, g.num_vertices(), [&](std::span<const Vertex> s) {
        if (sets_.size() >= exact_limit) throw AnimalAbort{};
        sets_.emplace_back(s.begin(), s.end());
      });
      exact_ = true;
    } catch (const AnimalAbort&) {
      sets_.clear();
    }
  }

  // Level at v after the closing average, and that average (if any).
  std::pair<Rational, std::optional<Move>> operator()(const State& levels) const {
    if (!final_average_) return {levels[v_], std::nullopt};
    if (!exact_) {
      WaterProfile p{levels, 1};
      GlaResult r = gla(g_, p, v_, GlaMode::kGreedy);
      return {r.value, r.witness};
    }
    const std::vector<Vertex>* best = nullptr;
    Rational best_value;
    Rational sum;
    for (const auto& set : sets_) {
      sum = 0;
      for (Vertex u : set) sum += levels[u];
      sum /= static_cast<long>(set.size());
      if (!best || sum > best_value ||
          (sum == best_value &&
           (set.size() < best->size() || (set.size() == best->size() && set < *best)))) {
        best = &set;
        best_value = sum;
      }
    }
    std::optional<Move> move;
    if (best->size() >= 2) move = Move::average(g_, *best);
    return {best_value, std::move(move)};
  }

 private:
  const Graph& g_;
  Vertex v_;
  bool final_average_;
  bool exact_ = false;
  std::vector<std::vector<Vertex>> sets_;
};

class Incumbent {
 public:
  Incumbent(Rational value, MoveSequence seq) : value_(std::move(value)), seq_(std::move(seq)) {}

  void offer(const Rational& value, const MoveSequence& prefix, const std::optional<Move>& last) {
    std::lock_guard lock(mu_);
    std::size_t len = prefix.size() + (last ? 1 : 0);
    if (value < value_) return;
    if (value == value_) {
      if (len > seq_.size()) return;
      if (len == seq_.size()) {
        MoveSequence full = prefix;
        if (last) full.push_back(*last);
        if (!sequence_less(full, seq_)) return;
      }
    }
    value_ = value;
    seq_ = prefix;
    if (last) seq_.push_back(*last);
  }

  Rational value() {
    std::lock_guard lock(mu_);
    return value_;
  }

  SearchResult take(SearchResult r) {
    std::lock_guard lock(mu_);
    r.best_value = value_;
    r.best_sequence = seq_;
    return r;
  }

 private:
  std::mutex mu_;
  Rational value_;
  MoveSequence seq_;
};

std::vector<Candidate> build_candidates(const Graph& g, const SearchConfig& cfg) {
  std::vector<Candidate> out;
  if (cfg.candidates == CandidateSets::kEdgesOnly) {
    for (const Edge& e : g.edges()) out.push_back({{e.first, e.second}, Move::edge(e.first, e.second)});
    return out;
  }
  std::size_t cap = cfg.max_set_size;
  if (cap == 0) cap = cfg.beam_width ? 3 : g.num_vertices();
  for (Vertex s = 0; s < g.num_vertices(); ++s) {
    for_each_connected_subset(g, s, cap, [&](std::span<const Vertex> set) {
      if (set.size() < 2 || set.front() != s) return;
      std::vector<Vertex> members(set.begin(), set.end());
      Move m = Move::average(g, members);
      out.push_back({std::move(members), std::move(m)});
    });
  }
  std::sort(out.begin(), out.end(),
            [](const Candidate& a, const Candidate& b) { return a.members < b.members; });
  return out;
}

// Returns false when the average changes nothing.
bool average_into(State& levels, std::span<const Vertex> members) {
  const Rational& first = levels[members.front()];
  bool flat = std::all_of(members.begin(), members.end(),
                          [&](Vertex u) { return levels[u] == first; });
  if (flat) return false;
  Rational sum = 0;
  for (Vertex u : members) sum += levels[u];
  sum /= static_cast<long>(members.size());
  for (Vertex u : members) levels[u] = sum;
  return true;
}

class Searcher {
 public:
  Searcher(const Graph& g, Vertex v, const SearchConfig& cfg, const Evaluator& eval,
           const std::vector<Candidate>& cands, Incumbent& best,
           std::optional<std::chrono::steady_clock::time_point> deadline,
           std::atomic<std::size_t>& nodes, std::atomic<bool>& stop)
      : g_(g), v_(v), cfg_(cfg), eval_(eval), cands_(cands), best_(best), deadline_(deadline),
        nodes_(nodes), stop_(stop) {}

  Rational bound(const State& levels) const {
    Rational b = *std::max_element(levels.begin(), levels.end());
    if (cfg_.relaxation_bound) {
      Rational r = complete_relaxation(levels, v_);
      if (r < b) b = r;
    }
    return b;
  }

  void tick() {
    std::size_t n = ++nodes_;
    if (stop_.load(std::memory_order_relaxed)) throw Timeout{};
    if (deadline_ && n % 256 == 0 && std::chrono::steady_clock::now() > *deadline_) {
      stop_ = true;
      throw Timeout{};
    }
  }

  void dfs(State& levels, std::size_t depth_left, MoveSequence& path) {
    auto [it, inserted] = seen_.try_emplace(levels, depth_left);
    if (!inserted) {
      if (it->second >= depth_left) return;
      it->second = depth_left;
    }
    tick();
    if (bound(levels) <= best_.value()) return;
    auto [value, last] = eval_(levels);
    best_.offer(value, path, last);
    if (depth_left == 0) return;
    for (const Candidate& c : cands_) {
      State next = levels;
      if (!average_into(next, c.members)) continue;
      path.push_back(c.move);
      dfs(next, depth_left - 1, path);
      path.pop_back();
    }
  }

  void reset() { seen_.clear(); }

 private:
  const Graph& g_;
  Vertex v_;
  const SearchConfig& cfg_;
  const Evaluator& eval_;
  const std::vector<Candidate>& cands_;
  Incumbent& best_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::atomic<std::size_t>& nodes_;
  std::atomic<bool>& stop_;
  std::unordered_map<State, std::size_t, StateHash> seen_;
};

}  // namespace

void SearchConfig::validate() const {
  if (beam_width && *beam_width == 0) throw InputError("beam width must be at least 1");
  if (time_budget_seconds < 0) throw InputError("time budget must be non-negative");
  if (workers == 0) throw InputError("worker count must be at least 1");
}

Rational upper_bound(const Graph& g, const WaterProfile& profile, Vertex v) {
  if (!g.contains(v)) throw InputError("upper_bound: target out of range");
  return profile.max_level();
}

Rational complete_relaxation(const std::vector<Rational>& levels, Vertex v) {
  std::vector<const Rational*> above;
  for (const Rational& q : levels) {
    if (q > levels[v]) above.push_back(&q);
  }
  std::sort(above.begin(), above.end(), [](const Rational* a, const Rational* b) { return *a > *b; });
  Rational value = 0;
  Rational share = 1;
  for (const Rational* q : above) {
    share /= 2;
    value += share * *q;
  }
  value += share * levels[v];
  return value;
}

SearchResult search_kappa(const Graph& g, const WaterProfile& profile, Vertex v,
                          const SearchConfig& cfg) {
  cfg.validate();
  if (!g.contains(v)) throw InputError("search: target out of range");
  profile.validate(g.num_vertices());
  const std::size_t cap = cfg.beam_width ? cfg.beam_cap : cfg.exhaustive_cap;
  if (g.num_vertices() > cap) {
    throw CapExceeded("search limited to " + std::to_string(cap) + " vertices in " +
                      (cfg.beam_width ? "beam" : "exhaustive") + " mode");
  }

  std::optional<std::chrono::steady_clock::time_point> deadline;
  if (cfg.time_budget_seconds > 0) {
    deadline = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                   std::chrono::duration<double>(cfg.time_budget_seconds));
  }

  const Evaluator eval(g, v, cfg.final_average, std::size_t{1} << 15);
  const std::vector<Candidate> cands = build_candidates(g, cfg);
  const State root = profile.levels;
  auto [root_value, root_last] = eval(root);
  Incumbent best(root_value, root_last ? MoveSequence{*root_last} : MoveSequence{});
  std::atomic<std::size_t> nodes{0};
  std::atomic<bool> stop{false};

  SearchResult result;
  result.mode = cfg.beam_width ? "beam" : "exhaustive";
  bool timed_out = false;

  if (!cfg.beam_width) {
    for (std::size_t depth = 0; depth <= cfg.max_depth && !timed_out; ++depth) {
      if (cfg.workers <= 1 || depth == 0) {
        Searcher s(g, v, cfg, eval, cands, best, deadline, nodes, stop);
        State levels = root;
        MoveSequence path;
        try {
          s.dfs(levels, depth, path);
        } catch (const Timeout&) {
          timed_out = true;
        }
        continue;
      }
      std::atomic<std::size_t> next_branch{0};
      std::atomic<bool> any_timeout{false};
      auto work = [&] {
        Searcher s(g, v, cfg, eval, cands, best, deadline, nodes, stop);
        while (true) {
          std::size_t i = next_branch++;
          if (i >= cands.size()) return;
          State levels = root;
          if (!average_into(levels, cands[i].members)) continue;
          MoveSequence path{cands[i].move};
          try {
            s.dfs(levels, depth - 1, path);
          } catch (const Timeout&) {
            any_timeout = true;
            return;
          }
        }
      };
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < cfg.workers; ++w) pool.emplace_back(work);
      for (auto& t : pool) t.join();
      timed_out = any_timeout;
    }
    result.exhausted = !timed_out;
  } else {
    struct Node {
      State levels;
      MoveSequence path;
      Rational score;
    };
    Searcher helper(g, v, cfg, eval, cands, best, deadline, nodes, stop);
    std::vector<Node> layer{{root, {}, root_value}};
    std::unordered_set<State, StateHash> seen{root};
    bool truncated = false;
    try {
      for (std::size_t depth = 1; depth <= cfg.max_depth && !layer.empty(); ++depth) {
        std::vector<Node> next;
        for (const Node& node : layer) {
          for (const Candidate& c : cands) {
            State levels = node.levels;
            if (!average_into(levels, c.members)) continue;
            if (!seen.insert(levels).second) continue;
            helper.tick();
            if (helper.bound(levels) <= best.value()) continue;
            MoveSequence path = node.path;
            path.push_back(c.move);
            auto [value, last] = eval(levels);
            best.offer(value, path, last);
            next.push_back({std::move(levels), std::move(path), std::move(value)});
          }
        }
        std::stable_sort(next.begin(), next.end(), [](const Node& a, const Node& b) {
          return a.score > b.score;
        });
        if (next.size() > *cfg.beam_width) {
          truncated = true;
          next.resize(*cfg.beam_width);
        }
        layer = std::move(next);
      }
    } catch (const Timeout&) {
      timed_out = true;
    }
    result.exhausted = !timed_out && !truncated;
  }

  result.nodes_expanded = nodes.load();
  return best.take(std::move(result));
}

ImprovementPlan improvement_plan(const Graph& g, const WaterProfile& profile, Vertex v,
                                 std::size_t set_cap) {
  ImprovementPlan plan;
  plan.current = gla(g, profile, v, GlaMode::kExact);
  const auto& animal = plan.current.set;
  const Rational& target = plan.current.value;
  std::vector<char> in_animal(g.num_vertices(), 0);
  Rational animal_sum = 0;
  for (Vertex u : animal) {
    in_animal[u] = 1;
    animal_sum += profile.levels[u];
  }
  auto mean = [&](std::span<const Vertex> s) {
    Rational sum = 0;
    for (Vertex u : s) sum += profile.levels[u];
    return Rational(sum / static_cast<long>(s.size()));
  };

  for (Vertex u : animal) {
    if (u == v || profile.levels[u] >= target) continue;
    Bottleneck b;
    b.vertex = u;
    b.level = profile.levels[u];
    std::vector<Vertex> rest;
    for (Vertex w : animal) {
      if (w != u) rest.push_back(w);
    }
    b.cut_vertex = !g.is_connected_subset(rest);
    std::vector<std::pair<Rational, std::vector<Vertex>>> found;
    for_each_connected_subset(g, u, set_cap, [&](std::span<const Vertex> s) {
      if (s.size() < 2) return;
      for (Vertex w : s) {
        if (w != u && in_animal[w]) return;
      }
      Rational avg = mean(s);
      if (avg > b.level) found.emplace_back(std::move(avg), std::vector<Vertex>(s.begin(), s.end()));
    });
    std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b2) {
      if (a.first != b2.first) return a.first > b2.first;
      if (a.second.size() != b2.second.size()) return a.second.size() < b2.second.size();
      return a.second < b2.second;
    });
    for (std::size_t i = 0; i < found.size() && i < 3; ++i) b.improving_sets.push_back(found[i].second);
    plan.bottlenecks.push_back(std::move(b));
  }

  std::vector<Vertex> boundary;
  for (Vertex u : animal) {
    for (Vertex w : g.neighbors(u)) {
      if (!in_animal[w]) boundary.push_back(w);
    }
  }
  std::sort(boundary.begin(), boundary.end());
  boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());

  std::set<std::vector<Vertex>> tried;
  for (Vertex w : boundary) {
    for_each_connected_subset(g, w, set_cap, [&](std::span<const Vertex> s) {
      for (Vertex x : s) {
        if (in_animal[x]) return;
      }
      std::vector<Vertex> added(s.begin(), s.end());
      if (!tried.insert(added).second) return;
      Vertex low = added.front();
      Rational sum = 0;
      for (Vertex x : added) {
        sum += profile.levels[x];
        if (profile.levels[x] < profile.levels[low]) low = x;
      }
      std::optional<Vertex> donor;
      for (Vertex x : g.neighbors(low)) {
        if (in_animal[x] || std::binary_search(added.begin(), added.end(), x)) continue;
        if (profile.levels[x] <= profile.levels[low]) continue;
        if (!donor || profile.levels[x] > profile.levels[*donor]) donor = x;
      }
      if (!donor) return;
      Rational raised = (profile.levels[low] + profile.levels[*donor]) / 2;
      Rational after = (animal_sum + sum - profile.levels[low] + raised) /
                       static_cast<long>(animal.size() + added.size());
      if (after <= target) return;
      plan.enlargements.push_back({w, std::move(added), low, *donor, std::move(after)});
    });
  }
  std::stable_sort(plan.enlargements.begin(), plan.enlargements.end(),
                   [](const Enlargement& a, const Enlargement& b) {
                     return a.average_after > b.average_after;
                   });
  return plan;
}

}  // namespace wtp
