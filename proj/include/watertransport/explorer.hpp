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

#ifndef WATERTRANSPORT_EXPLORER_HPP_
#define WATERTRANSPORT_EXPLORER_HPP_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include "watertransport/json_io.hpp"

namespace httplib {
class Server;
}

namespace wtp {

struct ExplorerConfig {
  std::size_t history_cap = 10000;
  double hint_budget_seconds = 0.2;
};

struct Session {
  std::string id;
  Instance instance;  // initial profile
  Vertex target = 0;
  MoveSequence history;
  WaterProfile current;
  std::optional<KappaResult> initial_kappa;

  // Mutators take the lock exclusively with try_lock; readers share it.
  mutable std::shared_mutex lock;
  mutable std::mutex hint_lock;
  mutable std::optional<Json> hints;  // guarded by hint_lock
};

struct ApiResponse {
  int status = 200;
  Json body;
};

// Transport-independent handlers; the HTTP layer only forwards to them.
class ExplorerApi {
 public:
  explicit ExplorerApi(ExplorerConfig cfg = {}) : cfg_(cfg) {}

  ApiResponse create_session(const std::string& body);
  ApiResponse get_session(const std::string& id) const;
  ApiResponse post_move(const std::string& id, const std::string& body);
  ApiResponse undo(const std::string& id);
  ApiResponse suggest(const std::string& id) const;
  ApiResponse export_session(const std::string& id) const;

  std::size_t session_count() const;

 private:
  std::shared_ptr<Session> find(const std::string& id) const;
  Json state_json(const Session& s) const;
  Json hints_json(const Session& s) const;

  ExplorerConfig cfg_;
  mutable std::mutex sessions_lock_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::size_t next_id_ = 1;
};

void register_routes(httplib::Server& server, ExplorerApi& api);

// Blocks until the server stops.
void serve(const std::string& host, int port, const ExplorerConfig& cfg = {});

}  // namespace wtp

#endif  // WATERTRANSPORT_EXPLORER_HPP_
