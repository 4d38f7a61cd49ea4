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

#include "navsim/engine.h"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "navsim/error.h"

namespace navsim {
namespace {

Outcome ParseOutcome(const std::string& s) {
  if (s == "success") return Outcome::kSuccess;
  if (s == "failure") return Outcome::kFailure;
  if (s == "running") return Outcome::kRunning;
  throw NavError(ErrorCode::kParse, "unknown outcome '" + s + "'");
}

FailureReason ParseReason(const std::string& s) {
  if (s == "none") return FailureReason::kNone;
  if (s == "wrong_stop") return FailureReason::kWrongStop;
  if (s == "budget") return FailureReason::kBudget;
  throw NavError(ErrorCode::kParse, "unknown failure reason '" + s + "'");
}

nlohmann::json RecordToJson(const StepRecord& r) {
  nlohmann::json j = {{"type", "step"},
                      {"step", r.step},
                      {"node", r.node},
                      {"eta", r.eta},
                      {"s1", r.s1},
                      {"s2", r.s2},
                      {"phi", r.phi}};
  j["probs"] = r.probs ? nlohmann::json(*r.probs) : nlohmann::json(nullptr);
  j["bin"] = r.bin ? nlohmann::json(*r.bin) : nlohmann::json(nullptr);
  if (r.edge) {
    j["edge"] = {{"from", r.edge->from},
                 {"to", r.edge->to},
                 {"bearing", r.edge->bearing},
                 {"length", r.edge->length}};
  } else {
    j["edge"] = nullptr;
  }
  j["node_after"] = r.node_after;
  j["traveled_m"] = r.traveled;
  j["outcome"] = OutcomeName(r.outcome);
  j["reason"] = ReasonName(r.reason);
  return j;
}

StepRecord RecordFromJson(const nlohmann::json& j) {
  StepRecord r;
  r.step = j.at("step").get<int>();
  r.node = j.at("node").get<NodeId>();
  r.eta = j.at("eta").get<double>();
  r.s1 = j.at("s1").get<double>();
  r.s2 = j.at("s2").get<double>();
  r.phi = j.at("phi").get<int>();
  if (!j.at("probs").is_null()) r.probs = j.at("probs").get<ActionDistribution>();
  if (!j.at("bin").is_null()) r.bin = j.at("bin").get<int>();
  if (!j.at("edge").is_null()) {
    const auto& e = j.at("edge");
    r.edge = DirectedEdge{e.at("from").get<NodeId>(), e.at("to").get<NodeId>(),
                          e.at("bearing").get<double>(), e.at("length").get<double>()};
  }
  r.node_after = j.at("node_after").get<NodeId>();
  r.traveled = j.at("traveled_m").get<double>();
  r.outcome = ParseOutcome(j.at("outcome").get<std::string>());
  r.reason = ParseReason(j.at("reason").get<std::string>());
  return r;
}

}  // namespace

void EpisodeConfig::Check() const {
  if (!(dest_threshold > 0.0)) {
    throw NavError(ErrorCode::kInvalidArgument, "destination threshold must be > 0");
  }
  if (!(budget_fraction >= 0.0)) {
    throw NavError(ErrorCode::kInvalidArgument, "budget fraction must be >= 0");
  }
  if (max_steps < 0) throw NavError(ErrorCode::kInvalidArgument, "max_steps must be >= 0");
}

std::string_view OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kRunning:
      return "running";
    case Outcome::kSuccess:
      return "success";
    case Outcome::kFailure:
      return "failure";
  }
  return "unknown";
}

std::string_view ReasonName(FailureReason reason) {
  switch (reason) {
    case FailureReason::kNone:
      return "none";
    case FailureReason::kWrongStop:
      return "wrong_stop";
    case FailureReason::kBudget:
      return "budget";
  }
  return "unknown";
}

EpisodeSpec MakeEpisodeSpec(std::string route_id, const RouteEpisode& episode) {
  return {std::move(route_id), episode.route, episode.instruction.Segmented(),
          episode.instruction.landmark_node_ids};
}

AgentBundle MakeBundle(const std::string& policy, const std::string& matcher,
                       double threshold, int min_gap) {
  AgentBundle bundle;
  bundle.policy = MakePolicy(policy);
  if (matcher == "cosine") {
    bundle.visual_matcher = std::make_shared<CosineMatcher>();
    bundle.memory_matcher = std::make_shared<ConstantMatcher>(1.0);
  } else {
    auto m = MakeMatcher(matcher);
    bundle.visual_matcher = m;
    bundle.memory_matcher = m;
  }
  bundle.controller = std::make_shared<ThresholdController>(threshold, min_gap);
  bundle.featurizer = std::make_shared<BlockOccupancyFeaturizer>();
  return bundle;
}

Episode::Episode(const Environment& env, EpisodeSpec spec, const EpisodeConfig& config)
    : env_(env), spec_(std::move(spec)), config_(config) {
  config_.Check();
  if (env.graph == nullptr) {
    throw NavError(ErrorCode::kInvalidArgument, "environment has no graph");
  }
  const CityGraph& graph = *env.graph;
  if (const auto problems = ValidateRoute(graph, spec_.route); !problems.empty()) {
    throw NavError(ErrorCode::kInvalidArgument, "malformed route: " + problems.front());
  }
  const int pairs = spec_.instruction.num_pairs();
  if (pairs < 1) {
    throw NavError(ErrorCode::kInvalidArgument, "instruction has no segment pairs");
  }
  if (!spec_.landmark_node_ids.empty() &&
      static_cast<int>(spec_.landmark_node_ids.size()) != pairs) {
    throw NavError(ErrorCode::kInvalidArgument,
                   "landmark correspondence does not match the segment pairs");
  }
  embedded_ = EmbedInstruction(spec_.instruction, env.embedder);

  const Route& route = spec_.route;
  state_.node = route.source();
  state_.heading = route.node_ids.size() > 1
                       ? graph.FindEdge(route.node_ids[0], route.node_ids[1])->bearing
                       : 0.0;
  state_.attention = AttentionState{1.0, pairs};
  state_.memory = MemoryImage::Init(graph.geo(state_.node));
  state_.controller = ControllerState{};

  log_.route_id = spec_.route_id;
  log_.nodes = {state_.node};
  log_.shortest_length = route.total_length;
  log_.dest_threshold = config_.dest_threshold;
  log_.final_distance = GeodesicDistance(graph.geo(state_.node), graph.geo(route.destination()));
}

std::optional<NodeId> Episode::AimedLandmark() const {
  if (spec_.landmark_node_ids.empty() || state_.attention.exhausted()) return std::nullopt;
  const int index = static_cast<int>(std::floor(state_.attention.eta)) - 1;
  return spec_.landmark_node_ids.at(static_cast<size_t>(index));
}

double Episode::BudgetMeters() const {
  return (1.0 + config_.budget_fraction) * spec_.route.total_length;
}

void Episode::Finish(Outcome outcome, FailureReason reason, StepRecord& record) {
  state_.outcome = outcome;
  state_.reason = reason;
  record.outcome = outcome;
  record.reason = reason;
  log_.outcome = outcome;
  log_.reason = reason;
}

StepRecord Episode::Step(AgentBundle& bundle) { return DoStep(bundle, std::nullopt); }

StepRecord Episode::StepWithBin(AgentBundle& bundle, int bin) {
  if (bin < 0 || bin >= kNumDirectionBins) {
    throw NavError(ErrorCode::kInvalidArgument, "direction bin must be in 0..7");
  }
  return DoStep(bundle, bin);
}

StepRecord Episode::DoStep(AgentBundle& bundle, std::optional<int> external_bin) {
  if (done()) {
    throw NavError(ErrorCode::kFailedPrecondition, "episode already finished");
  }
  const CityGraph& graph = *env_.graph;
  StepRecord record;
  record.node = state_.node;
  record.eta = state_.attention.eta;

  if (state_.steps >= config_.max_steps) {
    record.step = state_.steps;
    record.node_after = state_.node;
    record.traveled = state_.traveled;
    Finish(Outcome::kFailure, FailureReason::kBudget, record);
  } else {
    ++state_.steps;
    record.step = state_.steps;

    const AttendedSegments attended = Attend(embedded_, state_.attention.eta);
    static const ObservationFeature kNoFeature;
    const ObservationFeature* observation = &kNoFeature;
    if (env_.features != nullptr) {
      if (auto it = env_.features->find(state_.node); it != env_.features->end()) {
        observation = &it->second;
      }
    }
    const std::vector<double> memory_feature = bundle.featurizer->Featurize(state_.memory);
    const MatchContext match{state_.node, AimedLandmark()};
    const ScoreFeature s{
        ScorePair(*bundle.visual_matcher, *observation, attended.landmark, match),
        ScorePair(*bundle.memory_matcher, memory_feature, attended.direction, match)};
    record.s1 = s.s1;
    record.s2 = s.s2;

    auto [phi, hidden] = ControllerStep(*bundle.controller, s, state_.controller);
    state_.controller = hidden;
    record.phi = phi;
    record.node_after = state_.node;

    if (phi == 1) {
      state_.attention = Advance(state_.attention, 1);
      if (state_.attention.exhausted()) {
        const double remaining =
            GeodesicDistance(graph.geo(state_.node), graph.geo(spec_.route.destination()));
        if (remaining <= config_.dest_threshold) {
          Finish(Outcome::kSuccess, FailureReason::kNone, record);
        } else {
          Finish(Outcome::kFailure, FailureReason::kWrongStop, record);
        }
      } else {
        state_.memory.ResetAtLandmark(graph.geo(state_.node));
      }
    } else {
      const PolicyContext context{&graph, state_.node, state_.heading, &spec_.route,
                                  match.aimed_landmark};
      int bin;
      if (external_bin) {
        bin = *external_bin;
      } else {
        const ActionDistribution ae =
            bundle.policy->ActVisual(*observation, attended.landmark, context);
        const ActionDistribution am =
            bundle.policy->ActMemory(memory_feature, attended.direction, context);
        const ActionDistribution fused = Fuse(ae, am, bundle.weighting(s));
        record.probs = fused;
        bin = ArgmaxBin(fused);
      }
      record.bin = bin;
      const DirectedEdge edge = SelectEdge(graph, state_.node, BinCenter(bin), state_.heading);
      record.edge = edge;
      state_.node = edge.to;
      state_.heading = edge.bearing;
      state_.traveled += edge.length;
      state_.memory.Append(graph.geo(state_.node));
      log_.nodes.push_back(state_.node);
      record.node_after = state_.node;
      if (state_.traveled > BudgetMeters()) {
        Finish(Outcome::kFailure, FailureReason::kBudget, record);
      }
    }
    if (!done() && state_.steps >= config_.max_steps) {
      Finish(Outcome::kFailure, FailureReason::kBudget, record);
    }
    record.traveled = state_.traveled;
  }

  log_.records.push_back(record);
  log_.steps = state_.steps;
  log_.traveled = state_.traveled;
  log_.final_distance =
      GeodesicDistance(graph.geo(state_.node), graph.geo(spec_.route.destination()));
  if (bundle.policy) log_.policy = external_bin ? "external" : bundle.policy->name();
  if (bundle.visual_matcher) log_.matcher = bundle.visual_matcher->name();
  if (const auto* t = dynamic_cast<const ThresholdController*>(bundle.controller.get())) {
    log_.threshold = t->threshold();
    log_.min_gap = t->min_gap();
  }
  return record;
}

TrajectoryLog RunEpisode(const Environment& env, const EpisodeSpec& spec, AgentBundle& bundle,
                         const EpisodeConfig& config, std::uint64_t seed) {
  bundle.policy->Reset(seed);
  Episode episode(env, spec, config);
  while (!episode.done()) episode.Step(bundle);
  return episode.log();
}

std::string SerializeLog(const TrajectoryLog& log) {
  std::string out;
  for (const StepRecord& r : log.records) out += RecordToJson(r).dump() + "\n";
  const nlohmann::json summary = {{"type", "summary"},
                                  {"route_id", log.route_id},
                                  {"policy", log.policy},
                                  {"matcher", log.matcher},
                                  {"threshold", log.threshold},
                                  {"min_gap", log.min_gap},
                                  {"outcome", OutcomeName(log.outcome)},
                                  {"reason", ReasonName(log.reason)},
                                  {"nodes", log.nodes},
                                  {"steps", log.steps},
                                  {"traveled_m", log.traveled},
                                  {"shortest_m", log.shortest_length},
                                  {"final_distance_m", log.final_distance},
                                  {"dest_threshold_m", log.dest_threshold}};
  out += summary.dump() + "\n";
  return out;
}

TrajectoryLog ParseLog(std::string_view jsonl) {
  TrajectoryLog log;
  bool has_summary = false;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "step") {
        log.records.push_back(RecordFromJson(j));
      } else if (type == "summary") {
        has_summary = true;
        log.route_id = j.at("route_id").get<std::string>();
        log.policy = j.value("policy", std::string());
        log.matcher = j.value("matcher", std::string());
        log.threshold = j.value("threshold", 0.5);
        log.min_gap = j.value("min_gap", 1);
        log.outcome = ParseOutcome(j.at("outcome").get<std::string>());
        log.reason = ParseReason(j.at("reason").get<std::string>());
        log.nodes = j.at("nodes").get<std::vector<NodeId>>();
        log.steps = j.at("steps").get<int>();
        log.traveled = j.at("traveled_m").get<double>();
        log.shortest_length = j.at("shortest_m").get<double>();
        log.final_distance = j.at("final_distance_m").get<double>();
        log.dest_threshold = j.value("dest_threshold_m", 100.0);
      } else {
        throw NavError(ErrorCode::kParse, "unknown log record type '" + type + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw NavError(ErrorCode::kParse, std::string("trajectory log parse error: ") + e.what());
  }
  if (!has_summary) throw NavError(ErrorCode::kParse, "trajectory log has no summary record");
  return log;
}

std::vector<std::string> ValidateLog(const CityGraph& graph, const TrajectoryLog& log) {
  std::vector<std::string> problems;
  if (log.nodes.empty()) {
    problems.push_back("log has no nodes");
    return problems;
  }
  double traveled = 0.0;
  for (size_t i = 0; i + 1 < log.nodes.size(); ++i) {
    const DirectedEdge* e = graph.FindEdge(log.nodes[i], log.nodes[i + 1]);
    if (e == nullptr) {
      problems.push_back("no edge " + std::to_string(log.nodes[i]) + "->" +
                         std::to_string(log.nodes[i + 1]));
    } else {
      traveled += e->length;
    }
  }
  if (std::fabs(traveled - log.traveled) > 1e-6 * std::max(1.0, traveled)) {
    problems.push_back("traveled distance does not match the node sequence");
  }
  if (log.outcome == Outcome::kSuccess && log.final_distance > log.dest_threshold) {
    problems.push_back("success recorded outside the destination threshold");
  }
  if (log.outcome == Outcome::kRunning) problems.push_back("episode did not finish");
  return problems;
}

std::vector<std::string> ReplayLog(const Environment& env, const EpisodeSpec& spec,
                                   const EpisodeConfig& config, const TrajectoryLog& log) {
  std::vector<int> bins;
  for (const StepRecord& r : log.records) {
    if (r.bin) bins.push_back(*r.bin);
  }
  AgentBundle bundle = MakeBundle("oracle", log.matcher.empty() ? "oracle" : log.matcher,
                                  log.threshold, log.min_gap);
  bundle.policy = std::make_shared<ScriptedPolicy>(bins);
  bundle.policy->Reset(0);

  std::vector<std::string> problems;
  TrajectoryLog replayed;
  try {
    Episode episode(env, spec, config);
    while (!episode.done()) episode.Step(bundle);
    replayed = episode.log();
  } catch (const NavError& e) {
    problems.push_back(std::string("replay failed: ") + e.what());
    return problems;
  }
  if (replayed.nodes != log.nodes) problems.push_back("node sequence diverged");
  if (replayed.outcome != log.outcome || replayed.reason != log.reason) {
    problems.push_back("outcome diverged");
  }
  if (replayed.steps != log.steps) problems.push_back("step count diverged");
  if (replayed.traveled != log.traveled) problems.push_back("traveled distance diverged");
  if (replayed.records.size() != log.records.size()) {
    problems.push_back("record count diverged");
  } else {
    for (size_t i = 0; i < log.records.size(); ++i) {
      if (replayed.records[i].phi != log.records[i].phi ||
          replayed.records[i].eta != log.records[i].eta) {
        problems.push_back("indicator decisions diverged at step " + std::to_string(i + 1));
        break;
      }
    }
  }
  return problems;
}

}  // namespace navsim
