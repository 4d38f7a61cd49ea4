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

#include "navsim/service.h"

#include <cstdlib>
#include <random>

#include <httplib.h>

#include "absl/strings/escaping.h"
#include "navsim/error.h"

namespace navsim {
namespace {

using nlohmann::json;

ServiceResponse JsonResponse(int status, const json& body) {
  return {status, body.dump(), "application/json"};
}

ServiceResponse Error(int status, const std::string& message) {
  return JsonResponse(status, {{"error", message}});
}

int StatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kFailedPrecondition:
      return 409;
    default:
      return 400;
  }
}

std::string JoinTokens(const std::vector<Token>& tokens) {
  std::string out;
  for (const Token& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.text;
  }
  return out;
}

}  // namespace

struct NavService::Session {
  std::string id;
  SessionMode mode;
  const Dataset* dataset;
  std::string route_id;
  AgentBundle bundle;
  std::unique_ptr<Episode> episode;
  std::chrono::steady_clock::time_point created;
  std::chrono::steady_clock::time_point last_used;
  bool flushed = false;
  std::mutex mu;
};

std::string_view ModeName(SessionMode mode) {
  switch (mode) {
    case SessionMode::kHuman:
      return "human";
    case SessionMode::kOracle:
      return "oracle";
    case SessionMode::kRandom:
      return "random";
    case SessionMode::kPlugin:
      return "plugin";
  }
  return "unknown";
}

std::optional<SessionMode> ParseMode(std::string_view name) {
  for (SessionMode m : {SessionMode::kHuman, SessionMode::kOracle, SessionMode::kRandom,
                        SessionMode::kPlugin}) {
    if (ModeName(m) == name) return m;
  }
  return std::nullopt;
}

NavService::NavService(std::vector<std::unique_ptr<Dataset>> datasets, ServiceOptions options)
    : datasets_(std::move(datasets)), options_(std::move(options)) {
  options_.episode.Check();
}

NavService::~NavService() = default;

const Dataset* NavService::FindDataset(const std::string& id) const {
  for (const auto& d : datasets_) {
    if (d->id == id) return d.get();
  }
  return nullptr;
}

std::string NavService::NewSessionId() {
  // 128 bits from the OS entropy source.
  static thread_local std::random_device rd;
  std::string out;
  char buf[9];
  for (int i = 0; i < 4; ++i) {
    std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(rd()));
    out += buf;
  }
  return out;
}

std::shared_ptr<NavService::Session> NavService::FindSession(const std::string& id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  return it->second;
}

size_t NavService::num_sessions() const {
  std::lock_guard<std::mutex> lock(mu_);
  return sessions_.size();
}

int NavService::EvictExpired() {
  const auto now = options_.clock();
  std::vector<std::shared_ptr<Session>> expired;
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      if (now - it->second->last_used > options_.ttl) {
        expired.push_back(it->second);
        it = sessions_.erase(it);
      } else {
        ++it;
      }
    }
  }
  for (auto& s : expired) {
    std::lock_guard<std::mutex> lock(s->mu);
    if (s->episode->done()) FlushLog(*s);
  }
  return static_cast<int>(expired.size());
}

void NavService::FlushLog(Session& session) {
  if (session.flushed || !options_.log_dir) return;
  WriteFile(*options_.log_dir / (session.id + ".jsonl"), SerializeLog(session.episode->log()));
  session.flushed = true;
}

json NavService::Observation(const Session& session) const {
  const Episode& ep = *session.episode;
  const EpisodeState& st = ep.state();
  const CityGraph& graph = session.dataset->graph;
  const GeoPoint here = graph.geo(st.node);

  json edges = json::array();
  std::array<bool, kNumDirectionBins> available{};
  for (const DirectedEdge& e : graph.OutEdges(st.node)) {
    const double relative = WrapDegrees(e.bearing - st.heading);
    const int bin = BinOfAngle(relative);
    available[bin] = true;
    edges.push_back({{"to", e.to},
                     {"bearing", e.bearing},
                     {"relative", relative},
                     {"bin", bin},
                     {"length_m", e.length}});
  }

  const SegmentedInstruction& instr = ep.spec().instruction;
  json pairs = json::array();
  for (const SegmentPair& p : instr.pairs) {
    pairs.push_back(
        {{"landmark", JoinTokens(p.landmark_tokens)}, {"direction", JoinTokens(p.direction_tokens)}});
  }
  const double eta = st.attention.eta;
  const int num_pairs = instr.num_pairs();

  const std::string png = EncodePng(st.memory);
  json obs = {
      {"session_id", session.id},
      {"dataset", session.dataset->id},
      {"route_id", session.route_id},
      {"mode", ModeName(session.mode)},
      {"node", st.node},
      {"lat", here.lat},
      {"lon", here.lon},
      {"heading", st.heading},
      {"edges", std::move(edges)},
      {"available_bins", available},
      {"instruction",
       {{"text", instr.raw_text},
        {"pairs", std::move(pairs)},
        {"eta", eta},
        {"num_pairs", num_pairs},
        {"attention", AttentionWeights(std::min(eta, static_cast<double>(num_pairs)),
                                       num_pairs)}}},
      {"memory",
       {{"png_base64", absl::Base64Escape(png)},
        {"scale_m_per_px", st.memory.scale()},
        {"rescale_level", st.memory.rescale_level()},
        {"trace_length", st.memory.trace().size()}}},
      {"steps", st.steps},
      {"max_steps", ep.config().max_steps},
      {"traveled_m", st.traveled},
      {"budget_m", ep.BudgetMeters()},
      {"status", ep.done() ? "finished" : "running"},
      {"outcome", OutcomeName(st.outcome)},
      {"reason", ReasonName(st.reason)},
      {"final_distance_m", ep.log().final_distance},
  };
  return obs;
}

ServiceResponse NavService::CreateSession(const std::string& body) {
  EvictExpired();
  json req;
  try {
    req = json::parse(body.empty() ? "{}" : body);
  } catch (const json::exception&) {
    return Error(400, "request body is not valid JSON");
  }
  if (!req.is_object()) return Error(400, "request body must be a JSON object");
  try {
    const std::string dataset_id = req.value("dataset", "");
    const std::string route_id = req.value("route", "");
    const std::string mode_name = req.value("mode", "");
    const auto mode = ParseMode(mode_name);
    if (!mode) return Error(400, "invalid mode '" + mode_name + "'");
    const Dataset* dataset = FindDataset(dataset_id);
    if (dataset == nullptr) return Error(404, "unknown dataset '" + dataset_id + "'");
    if (!dataset->episodes.contains(route_id)) {
      return Error(404, "unknown route '" + route_id + "'");
    }

    auto session = std::make_shared<Session>();
    session->mode = *mode;
    session->dataset = dataset;
    session->route_id = route_id;
    switch (*mode) {
      case SessionMode::kHuman:
      case SessionMode::kOracle:
        session->bundle = MakeBundle("oracle", "oracle");
        break;
      case SessionMode::kRandom:
        session->bundle = MakeBundle("random", "oracle");
        break;
      case SessionMode::kPlugin:
        session->bundle = MakeBundle(req.value("policy", "oracle"), req.value("matcher", "oracle"));
        break;
    }
    session->bundle.policy->Reset(req.value("seed", std::uint64_t{0}));
    session->episode = std::make_unique<Episode>(dataset->environment(),
                                                 dataset->Spec(route_id), options_.episode);
    session->created = session->last_used = options_.clock();

    std::lock_guard<std::mutex> lock(mu_);
    do {
      session->id = NewSessionId();
    } while (sessions_.contains(session->id));
    sessions_.emplace(session->id, session);
    json out = Observation(*session);
    return JsonResponse(201, out);
  } catch (const NavError& e) {
    return Error(StatusFor(e.code()), e.what());
  } catch (const json::exception& e) {
    return Error(400, e.what());
  }
}

ServiceResponse NavService::Observe(const std::string& session_id) {
  auto session = FindSession(session_id);
  if (!session) return Error(404, "unknown session");
  std::lock_guard<std::mutex> lock(session->mu);
  session->last_used = options_.clock();
  if (session->episode->done()) {
    return JsonResponse(409, {{"error", "episode finished"},
                              {"outcome", OutcomeName(session->episode->state().outcome)},
                              {"reason", ReasonName(session->episode->state().reason)}});
  }
  return JsonResponse(200, Observation(*session));
}

ServiceResponse NavService::Act(const std::string& session_id, const std::string& body) {
  auto session = FindSession(session_id);
  if (!session) return Error(404, "unknown session");
  json req;
  try {
    req = json::parse(body.empty() ? "{}" : body);
  } catch (const json::exception&) {
    return Error(400, "request body is not valid JSON");
  }
  if (!req.is_object()) return Error(400, "request body must be a JSON object");

  std::lock_guard<std::mutex> lock(session->mu);
  session->last_used = options_.clock();
  Episode& ep = *session->episode;
  if (ep.done()) {
    return JsonResponse(409, {{"error", "episode finished"},
                              {"outcome", OutcomeName(ep.state().outcome)},
                              {"reason", ReasonName(ep.state().reason)}});
  }
  const bool has_bin = req.contains("bin") && !req["bin"].is_null();
  StepRecord record;
  try {
    if (session->mode == SessionMode::kHuman) {
      if (!has_bin || !req["bin"].is_number_integer()) {
        return Error(400, "human sessions require an integer \"bin\"");
      }
      const int bin = req["bin"].get<int>();
      if (bin < 0 || bin >= kNumDirectionBins) return Error(400, "bin must be in 0..7");
      record = ep.StepWithBin(session->bundle, bin);
    } else {
      if (has_bin) return Error(400, "programmatic sessions do not accept external actions");
      record = ep.Step(session->bundle);
    }
  } catch (const NavError& e) {
    return Error(StatusFor(e.code()), e.what());
  }
  if (ep.done()) FlushLog(*session);
  json out = {{"moved", record.edge.has_value()},
              {"phi", record.phi},
              {"s1", record.s1},
              {"s2", record.s2},
              {"observation", Observation(*session)}};
  out["bin"] = record.bin ? json(*record.bin) : json(nullptr);
  return JsonResponse(200, out);
}

ServiceResponse NavService::Log(const std::string& session_id) {
  auto session = FindSession(session_id);
  if (!session) return Error(404, "unknown session");
  std::lock_guard<std::mutex> lock(session->mu);
  session->last_used = options_.clock();
  return {200, SerializeLog(session->episode->log()), "application/x-ndjson"};
}

ServiceResponse NavService::ListDatasets() const {
  json out = json::array();
  for (const auto& d : datasets_) {
    out.push_back({{"id", d->id},
                   {"num_routes", d->episodes.size()},
                   {"num_nodes", d->graph.num_nodes()}});
  }
  return JsonResponse(200, {{"datasets", std::move(out)}});
}

ServiceResponse NavService::ListRoutes(const std::string& dataset_id) const {
  const Dataset* d = FindDataset(dataset_id);
  if (d == nullptr) return Error(404, "unknown dataset '" + dataset_id + "'");
  json out = json::array();
  for (const auto& [id, ep] : d->episodes) {
    out.push_back({{"id", id},
                   {"num_pairs", ep.instruction.pairs.size()},
                   {"length_m", ep.route.total_length},
                   {"text", ep.instruction.text}});
  }
  return JsonResponse(200, {{"dataset", dataset_id}, {"routes", std::move(out)}});
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(NavService& service) : impl_(std::make_unique<Impl>()) {
  auto& srv = impl_->server;
  auto send = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  srv.Post("/sessions", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.CreateSession(req.body));
  });
  srv.Get(R"(/sessions/([0-9a-f]+)/observation)",
          [&service, send](const httplib::Request& req, httplib::Response& res) {
            send(res, service.Observe(req.matches[1]));
          });
  srv.Post(R"(/sessions/([0-9a-f]+)/action)",
           [&service, send](const httplib::Request& req, httplib::Response& res) {
             send(res, service.Act(req.matches[1], req.body));
           });
  srv.Get(R"(/sessions/([0-9a-f]+)/log)",
          [&service, send](const httplib::Request& req, httplib::Response& res) {
            send(res, service.Log(req.matches[1]));
          });
  srv.Get("/datasets", [&service, send](const httplib::Request&, httplib::Response& res) {
    send(res, service.ListDatasets());
  });
  srv.Get(R"(/datasets/([^/]+)/routes)",
          [&service, send](const httplib::Request& req, httplib::Response& res) {
            send(res, service.ListRoutes(req.matches[1]));
          });
  srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      res.set_content(json{{"error", httplib::status_message(res.status)}}.dump(),
                      "application/json");
    }
  });
  srv.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          message = e.what();
        } catch (...) {
        }
        res.status = 500;
        res.set_content(json{{"error", message}}.dump(), "application/json");
      });
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpServer::Run() { impl_->server.listen_after_bind(); }

void HttpServer::Stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

int DefaultPort() {
  if (const char* env = std::getenv("NAVSIM_PORT"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end == '\0' && v > 0 && v < 65536) return static_cast<int>(v);
  }
  return 8080;
}

}  // namespace navsim
