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

#ifndef NAVSIM_ENGINE_H_
#define NAVSIM_ENGINE_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "navsim/action.h"
#include "navsim/citygraph.h"
#include "navsim/instruction.h"
#include "navsim/matching.h"
#include "navsim/memory.h"
#include "navsim/routegen.h"

namespace navsim {

struct EpisodeConfig {
  double dest_threshold = 100.0;  // meters
  double budget_fraction = 0.30;  // extra travel allowed over the route length
  int max_steps = 60;

  void Check() const;
};

enum class Outcome { kRunning, kSuccess, kFailure };
enum class FailureReason { kNone, kWrongStop, kBudget };

std::string_view OutcomeName(Outcome outcome);
std::string_view ReasonName(FailureReason reason);

// Shared, read-only world the episodes run in.
struct Environment {
  const CityGraph* graph = nullptr;
  const FeatureTable* features = nullptr;  // may be null
  SegmentEmbedder embedder;
};

struct EpisodeSpec {
  std::string route_id;
  Route route;
  SegmentedInstruction instruction;
  std::vector<NodeId> landmark_node_ids;  // one per pair; empty if unknown
};

// A route with its instruction record; the instruction's pairs line up with
// route.landmark_ids[1..].
struct RouteEpisode {
  Route route;
  Instruction instruction;
};

EpisodeSpec MakeEpisodeSpec(std::string route_id, const RouteEpisode& episode);

// The pluggable parts of an agent. The policy is stateful and must not be
// shared between concurrently running episodes.
struct AgentBundle {
  std::shared_ptr<Policy> policy;
  std::shared_ptr<const Matcher> visual_matcher;
  std::shared_ptr<const Matcher> memory_matcher;
  std::shared_ptr<const IndicatorController> controller;
  WeightingFunction weighting = DefaultWeighting;
  std::shared_ptr<const MemoryFeaturizer> featurizer;
};

// `policy` is a policy registry key; `matcher` is "oracle" (ground-truth
// landmark lookup on both channels) or "cosine" (cosine on the visual
// channel, memory channel held at 1). Other matcher keys come from the
// registry and are used on both channels.
AgentBundle MakeBundle(const std::string& policy, const std::string& matcher = "oracle",
                       double threshold = 0.5, int min_gap = 1);

struct EpisodeState {
  NodeId node = 0;
  double heading = 0.0;
  AttentionState attention;
  MemoryImage memory = MemoryImage::Init({0.0, 0.0});
  ControllerState controller;
  int steps = 0;
  double traveled = 0.0;
  Outcome outcome = Outcome::kRunning;
  FailureReason reason = FailureReason::kNone;
};

struct StepRecord {
  int step = 0;
  NodeId node = 0;  // position when the step began
  double eta = 1.0;
  double s1 = 0.0;
  double s2 = 0.0;
  int phi = 0;
  std::optional<ActionDistribution> probs;
  std::optional<int> bin;
  std::optional<DirectedEdge> edge;
  NodeId node_after = 0;
  double traveled = 0.0;
  Outcome outcome = Outcome::kRunning;
  FailureReason reason = FailureReason::kNone;
};

struct TrajectoryLog {
  std::string route_id;
  std::string policy;
  std::string matcher;
  double threshold = 0.5;  // threshold controller settings, for replay
  int min_gap = 1;
  std::vector<NodeId> nodes;
  std::vector<StepRecord> records;
  Outcome outcome = Outcome::kRunning;
  FailureReason reason = FailureReason::kNone;
  int steps = 0;
  double traveled = 0.0;
  double shortest_length = 0.0;
  double final_distance = 0.0;
  double dest_threshold = 100.0;
};

// One navigation episode. Construction performs the reset: the agent stands
// at the route source facing along the first route edge, eta = 1 and the
// memory is fresh. The environment is copied; the graph and feature table it
// points to must outlive the episode.
class Episode {
 public:
  Episode(const Environment& env, EpisodeSpec spec, const EpisodeConfig& config);

  const EpisodeState& state() const { return state_; }
  const EpisodeSpec& spec() const { return spec_; }
  const EpisodeConfig& config() const { return config_; }
  const TrajectoryLog& log() const { return log_; }
  bool done() const { return state_.outcome != Outcome::kRunning; }

  // One step: attend, score, indicator; on a firing advance eta and reset
  // memory (or terminate when no pairs remain); otherwise fuse the policy
  // outputs, take the closest road and move. Throws kFailedPrecondition once
  // the episode has ended.
  StepRecord Step(AgentBundle& bundle);

  // As Step, but an externally chosen direction bin replaces the policy.
  StepRecord StepWithBin(AgentBundle& bundle, int bin);

  std::optional<NodeId> AimedLandmark() const;
  double BudgetMeters() const;

 private:
  StepRecord DoStep(AgentBundle& bundle, std::optional<int> external_bin);
  void Finish(Outcome outcome, FailureReason reason, StepRecord& record);

  Environment env_;  // graph and features are borrowed
  EpisodeSpec spec_;
  EpisodeConfig config_;
  EmbeddedInstruction embedded_;
  EpisodeState state_;
  TrajectoryLog log_;
};

// Resets the policy with `seed` and steps until the episode ends.
TrajectoryLog RunEpisode(const Environment& env, const EpisodeSpec& spec,
                         AgentBundle& bundle, const EpisodeConfig& config,
                         std::uint64_t seed);

// JSON-lines: one {"type":"step",...} record per step followed by one
// {"type":"summary",...} record.
std::string SerializeLog(const TrajectoryLog& log);
TrajectoryLog ParseLog(std::string_view jsonl);

// Structural checks against the graph: adjacency of consecutive nodes,
// traveled distance, and success within the destination threshold.
std::vector<std::string> ValidateLog(const CityGraph& graph, const TrajectoryLog& log);

// Re-executes the logged direction bins through a fresh episode with the
// logged matcher and reports any divergence (empty when it replays).
std::vector<std::string> ReplayLog(const Environment& env, const EpisodeSpec& spec,
                                   const EpisodeConfig& config, const TrajectoryLog& log);

}  // namespace navsim

#endif  // NAVSIM_ENGINE_H_
