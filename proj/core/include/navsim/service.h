// Copyright 2026 The Navsim Authors.
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

#ifndef NAVSIM_SERVICE_H_
#define NAVSIM_SERVICE_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "navsim/dataset.h"
#include "navsim/engine.h"

namespace navsim {

struct ServiceOptions {
  EpisodeConfig episode;
  std::chrono::seconds ttl{3600};
  // Finished trajectories are written here as <session id>.jsonl when set.
  std::optional<std::filesystem::path> log_dir;
  std::function<std::chrono::steady_clock::time_point()> clock =
      [] { return std::chrono::steady_clock::now(); };
};

struct ServiceResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";

  nlohmann::json Json() const { return nlohmann::json::parse(body); }
};

enum class SessionMode { kHuman, kOracle, kRandom, kPlugin };

// Session-oriented front end over the engine. Every handler is thread-safe;
// requests to one session are serialized by a per-session mutex while the
// datasets are shared read-only.
class NavService {
 public:
  NavService(std::vector<std::unique_ptr<Dataset>> datasets, ServiceOptions options = {});
  ~NavService();

  NavService(const NavService&) = delete;
  NavService& operator=(const NavService&) = delete;

  // Body: {"dataset", "route", "mode": human|oracle|random|plugin,
  //        "seed"?, "policy"?, "matcher"?}. "policy"/"matcher" select
  // registry entries in plugin mode.
  ServiceResponse CreateSession(const std::string& body);
  ServiceResponse Observe(const std::string& session_id);
  // Human sessions send {"bin": 0..7}. Programmatic sessions send {} and the
  // server-side agent takes one step.
  ServiceResponse Act(const std::string& session_id, const std::string& body);
  ServiceResponse Log(const std::string& session_id);
  ServiceResponse ListDatasets() const;
  ServiceResponse ListRoutes(const std::string& dataset_id) const;

  // Drops sessions idle for longer than the TTL. Returns how many went.
  int EvictExpired();
  size_t num_sessions() const;

 private:
  struct Session;

  const Dataset* FindDataset(const std::string& id) const;
  std::shared_ptr<Session> FindSession(const std::string& id);
  nlohmann::json Observation(const Session& session) const;
  void FlushLog(Session& session);
  std::string NewSessionId();

  std::vector<std::unique_ptr<Dataset>> datasets_;
  ServiceOptions options_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

std::string_view ModeName(SessionMode mode);
std::optional<SessionMode> ParseMode(std::string_view name);

// HTTP/1.1 binding of a NavService.
class HttpServer {
 public:
  explicit HttpServer(NavService& service);
  ~HttpServer();

  // Binds to `port` (0 picks a free one) and returns the bound port, or -1.
  int Bind(const std::string& host, int port);
  // Serves until Stop(). Call after Bind.
  void Run();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Port from NAVSIM_PORT, falling back to 8080.
int DefaultPort();

}  // namespace navsim

#endif  // NAVSIM_SERVICE_H_
