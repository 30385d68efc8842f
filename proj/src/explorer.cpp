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

#include "watertransport/explorer.hpp"

#include <httplib.h>

#include <algorithm>

namespace wtp {
namespace {

ApiResponse error(int status, const std::string& message) {
  return {status, Json{{"error", message}}};
}

constexpr std::size_t kExactGlaLimit = 16;
constexpr std::size_t kSuggestSearchLimit = 12;

}  // namespace

std::shared_ptr<Session> ExplorerApi::find(const std::string& id) const {
  std::lock_guard guard(sessions_lock_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::size_t ExplorerApi::session_count() const {
  std::lock_guard guard(sessions_lock_);
  return sessions_.size();
}

Json ExplorerApi::hints_json(const Session& s) const {
  std::lock_guard guard(s.hint_lock);
  if (s.hints) return *s.hints;
  const Graph& g = s.instance.graph;
  const Vertex v = s.target;
  Json h = Json::object();
  const bool exact = g.num_vertices() <= kExactGlaLimit;
  GlaResult animal = gla(g, s.current, v, exact ? GlaMode::kExact : GlaMode::kGreedy);
  h["gla"] = gla_json(animal, s.instance);
  h["gla"]["provenance"] = exact ? "exact" : "heuristic";
  h["upper_bound"] = rational_json(upper_bound(g, s.current, v));
  if (auto k = kappa_closed_form(g, s.current, v)) {
    h["kappa"] = Json{{"value", rational_json(k->value)}, {"solver", k->solver}, {"provenance", "exact"}};
  } else {
    h["kappa"] = nullptr;
  }
  s.hints = h;
  return h;
}

Json ExplorerApi::state_json(const Session& s) const {
  const Rational& level = s.current.levels[s.target];
  Json out{{"id", s.id},
           {"target", s.instance.names[s.target]},
           {"moves", s.history.size()},
           {"level", rational_json(level)},
           {"profile", levels_json(s.current.levels, s.instance)},
           {"history", move_sequence_json(s.history, s.instance)}};
  out["hints"] = hints_json(s);
  Json progress{{"level", rational_json(level)}};
  Rational reference = s.initial_kappa ? s.initial_kappa->value : s.instance.profile.max_level();
  progress["reference"] = s.initial_kappa ? "kappa" : "upper_bound";
  progress["reference_value"] = rational_json(reference);
  progress["ratio"] = reference > 0 ? rational_json(level / reference) : Json(nullptr);
  out["progress"] = std::move(progress);
  return out;
}

ApiResponse ExplorerApi::create_session(const std::string& body) {
  auto s = std::make_shared<Session>();
  try {
    s->instance = load_instance(body);
  } catch (const InputError& e) {
    return error(422, e.what());
  }
  if (!s->instance.target) return error(422, "instance needs a \"target\" vertex");
  s->target = *s->instance.target;
  s->current = s->instance.profile;
  s->initial_kappa = kappa_closed_form(s->instance.graph, s->instance.profile, s->target);
  {
    std::lock_guard guard(sessions_lock_);
    s->id = "s" + std::to_string(next_id_++);
    sessions_[s->id] = s;
  }
  std::shared_lock lock(s->lock);
  return {201, state_json(*s)};
}

ApiResponse ExplorerApi::get_session(const std::string& id) const {
  auto s = find(id);
  if (!s) return error(404, "unknown session '" + id + "'");
  std::shared_lock lock(s->lock);
  return {200, state_json(*s)};
}

ApiResponse ExplorerApi::post_move(const std::string& id, const std::string& body) {
  auto s = find(id);
  if (!s) return error(404, "unknown session '" + id + "'");
  std::unique_lock lock(s->lock, std::try_to_lock);
  if (!lock.owns_lock()) return error(409, "session is busy with another change");
  if (s->history.size() >= cfg_.history_cap) {
    return error(409, "history cap of " + std::to_string(cfg_.history_cap) + " moves reached");
  }
  Move move;
  try {
    Json doc = Json::parse(body);
    move = move_sequence_from_json(Json::array({doc}), s->instance).front();
    s->current = apply_move(s->instance.graph, s->current, move);
  } catch (const Json::parse_error& e) {
    return error(422, std::string("move parse error: ") + e.what());
  } catch (const InputError& e) {
    std::string msg = e.what();
    if (msg.rfind("move 1: ", 0) == 0) msg = msg.substr(8);
    return error(422, msg);
  }
  s->history.push_back(std::move(move));
  {
    std::lock_guard guard(s->hint_lock);
    s->hints.reset();
  }
  return {200, state_json(*s)};
}

ApiResponse ExplorerApi::undo(const std::string& id) {
  auto s = find(id);
  if (!s) return error(404, "unknown session '" + id + "'");
  std::unique_lock lock(s->lock, std::try_to_lock);
  if (!lock.owns_lock()) return error(409, "session is busy with another change");
  if (s->history.empty()) return error(409, "nothing to undo");
  s->history.pop_back();
  s->current = apply_sequence(s->instance.graph, s->instance.profile, s->history);
  {
    std::lock_guard guard(s->hint_lock);
    s->hints.reset();
  }
  return {200, state_json(*s)};
}

ApiResponse ExplorerApi::suggest(const std::string& id) const {
  auto s = find(id);
  if (!s) return error(404, "unknown session '" + id + "'");
  std::shared_lock lock(s->lock);
  const Graph& g = s->instance.graph;
  const Vertex v = s->target;
  const Rational& level = s->current.levels[v];
  auto stop = [&](const std::string& reason) {
    return ApiResponse{200, Json{{"action", "stop"}, {"reason", reason}, {"provenance", "exact"}}};
  };
  if (level >= upper_bound(g, s->current, v)) return stop("target is at the upper bound");
  std::optional<KappaResult> kappa = kappa_closed_form(g, s->current, v);
  if (kappa && kappa->value == level) return stop("target already holds the optimal level");

  Json out{{"action", "move"}};
  if (g.num_vertices() <= kSuggestSearchLimit) {
    SearchConfig cfg;
    cfg.max_depth = g.num_vertices() - 1;
    cfg.time_budget_seconds = cfg_.hint_budget_seconds;
    SearchResult r = search_kappa(g, s->current, v, cfg);
    if (r.best_value > level && !r.best_sequence.empty()) {
      const bool optimal = kappa && r.best_value == kappa->value;
      out["move"] = move_json(r.best_sequence.front(), s->instance);
      out["provenance"] = optimal ? "exact" : "heuristic";
      out["source"] = "search";
      out["expected_value"] = rational_json(r.best_value);
      out["plan"] = move_sequence_json(r.best_sequence, s->instance);
      out["search_complete"] = r.exhausted;
      return {200, out};
    }
  }
  const bool exact = g.num_vertices() <= kExactGlaLimit;
  GlaResult animal = gla(g, s->current, v, exact ? GlaMode::kExact : GlaMode::kGreedy);
  if (!animal.witness || animal.value <= level) return stop("no improving move found within budget");
  out["move"] = move_json(*animal.witness, s->instance);
  out["provenance"] = "heuristic";
  out["source"] = "gla";
  out["expected_value"] = rational_json(animal.value);
  out["plan"] = move_sequence_json({*animal.witness}, s->instance);
  out["search_complete"] = false;
  return {200, out};
}

ApiResponse ExplorerApi::export_session(const std::string& id) const {
  auto s = find(id);
  if (!s) return error(404, "unknown session '" + id + "'");
  std::shared_lock lock(s->lock);
  Instance inst = s->instance;
  inst.target = s->target;
  return {200, Json{{"instance", Json::parse(serialize_instance(inst))},
                    {"moves", move_sequence_json(s->history, s->instance)}}};
}

void register_routes(httplib::Server& server, ExplorerApi& api) {
  auto reply = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(r.body.dump(), "application/json");
  };
  auto guarded = [reply](auto&& handler) {
    return [reply, handler](const httplib::Request& req, httplib::Response& res) {
      try {
        reply(res, handler(req));
      } catch (const InputError& e) {
        reply(res, error(422, e.what()));
      } catch (const std::exception& e) {
        reply(res, error(500, e.what()));
      }
    };
  };
  server.Post("/sessions", guarded([&api](const httplib::Request& req) { return api.create_session(req.body); }));
  server.Get(R"(/sessions/([^/]+))",
             guarded([&api](const httplib::Request& req) { return api.get_session(req.matches[1]); }));
  server.Post(R"(/sessions/([^/]+)/moves)", guarded([&api](const httplib::Request& req) {
                return api.post_move(req.matches[1], req.body);
              }));
  server.Post(R"(/sessions/([^/]+)/undo)",
              guarded([&api](const httplib::Request& req) { return api.undo(req.matches[1]); }));
  server.Get(R"(/sessions/([^/]+)/suggest)",
             guarded([&api](const httplib::Request& req) { return api.suggest(req.matches[1]); }));
  server.Get(R"(/sessions/([^/]+)/export)",
             guarded([&api](const httplib::Request& req) { return api.export_session(req.matches[1]); }));
}

void serve(const std::string& host, int port, const ExplorerConfig& cfg) {
  httplib::Server server;
  ExplorerApi api(cfg);
  register_routes(server, api);
  if (!server.listen(host, port)) {
    throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
  }
}

}  // namespace wtp
