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

#include "navsim/action.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "navsim/error.h"

namespace navsim {
namespace {

struct PolicyRegistry {
  std::mutex mu;
  std::map<std::string, PolicyFactory> factories = {
      {"oracle", [] { return std::make_unique<OraclePolicy>(); }},
      {"random", [] { return std::make_unique<RandomPolicy>(); }},
  };
};

PolicyRegistry& GetPolicyRegistry() {
  static PolicyRegistry registry;
  return registry;
}

}  // namespace

bool IsValidDistribution(const ActionDistribution& a, double tolerance) {
  double total = 0.0;
  for (double p : a) {
    if (!(p >= 0.0) || !std::isfinite(p)) return false;
    total += p;
  }
  return std::fabs(total - 1.0) <= tolerance;
}

ActionDistribution DeltaDistribution(int bin) {
  if (bin < 0 || bin >= kNumDirectionBins) {
    throw NavError(ErrorCode::kInvalidArgument, "direction bin must be in 0..7");
  }
  ActionDistribution a{};
  a[bin] = 1.0;
  return a;
}

ActionDistribution UniformDistribution() {
  ActionDistribution a;
  a.fill(1.0 / kNumDirectionBins);
  return a;
}

ActionDistribution Fuse(const ActionDistribution& ae, const ActionDistribution& am,
                        const FusionWeights& w) {
  if (!(w.w0 >= 0.0) || !(w.w1 >= 0.0)) {
    throw NavError(ErrorCode::kInvalidArgument, "fusion weights must be non-negative");
  }
  const double total_weight = w.w0 + w.w1;
  if (!(total_weight > 0.0)) {
    throw NavError(ErrorCode::kInvalidArgument, "fusion weights are both zero");
  }
  ActionDistribution out;
  double total = 0.0;
  for (int i = 0; i < kNumDirectionBins; ++i) {
    out[i] = (w.w0 * ae[i] + w.w1 * am[i]) / total_weight;
    total += out[i];
  }
  if (!(total > 0.0)) {
    throw NavError(ErrorCode::kInvalidArgument, "fused distribution has no mass");
  }
  for (double& p : out) p /= total;
  return out;
}

int BinOfAngle(double angle_deg) {
  const double shifted = WrapDegrees(angle_deg + kBinWidthDeg / 2.0);
  const int bin = static_cast<int>(std::floor(shifted / kBinWidthDeg));
  return std::clamp(bin, 0, kNumDirectionBins - 1);
}

double BinCenter(int bin) {
  if (bin < 0 || bin >= kNumDirectionBins) {
    throw NavError(ErrorCode::kInvalidArgument, "direction bin must be in 0..7");
  }
  return bin * kBinWidthDeg;
}

int ArgmaxBin(const ActionDistribution& a) {
  int best = 0;
  for (int i = 1; i < kNumDirectionBins; ++i) {
    if (a[i] > a[best]) best = i;
  }
  return best;
}

DirectedEdge SelectEdge(const CityGraph& graph, NodeId node, double predicted_angle_deg,
                        double heading_deg) {
  const auto& edges = graph.OutEdges(node);
  if (edges.empty()) {
    throw NavError(ErrorCode::kFailedPrecondition,
                   "node " + std::to_string(node) + " has no outgoing edges");
  }
  const double target = WrapDegrees(heading_deg + predicted_angle_deg);
  constexpr double kTieTolerance = 1e-9;
  const DirectedEdge* best = nullptr;
  double best_distance = 0.0;
  for (const DirectedEdge& e : edges) {
    const double d = AngularDistance(e.bearing, target);
    if (best == nullptr || d < best_distance - kTieTolerance ||
        (d <= best_distance + kTieTolerance && e.bearing < best->bearing)) {
      best = &e;
      best_distance = d;
    }
  }
  return *best;
}

FusionWeights DefaultWeighting(const ScoreFeature& s) {
  if (s.s1 + s.s2 > 0.0) return {s.s1, s.s2};
  return {1.0, 1.0};
}

ActionDistribution OraclePolicy::Act(const PolicyContext& context) {
  if (context.graph == nullptr || context.route == nullptr) {
    throw NavError(ErrorCode::kFailedPrecondition, "oracle policy needs the ground-truth route");
  }
  const CityGraph& graph = *context.graph;
  const auto& nodes = context.route->node_ids;
  auto it = std::find(nodes.begin(), nodes.end(), context.node);
  double bearing;
  if (it != nodes.end() && std::next(it) != nodes.end()) {
    const DirectedEdge* e = graph.FindEdge(*it, *std::next(it));
    bearing = e->bearing;
  } else {
    const NodeId goal = context.aimed_landmark.value_or(nodes.back());
    if (goal == context.node) return DeltaDistribution(0);
    bearing = InitialBearing(graph.geo(context.node), graph.geo(goal));
  }
  return DeltaDistribution(BinOfAngle(bearing - context.heading));
}

ActionDistribution OraclePolicy::ActVisual(std::span<const double>, std::span<const double>,
                                           const PolicyContext& context) {
  return Act(context);
}

ActionDistribution OraclePolicy::ActMemory(std::span<const double>, std::span<const double>,
                                           const PolicyContext& context) {
  return Act(context);
}

ActionDistribution RandomPolicy::ActVisual(std::span<const double>, std::span<const double>,
                                           const PolicyContext&) {
  bin_ = std::uniform_int_distribution<int>(0, kNumDirectionBins - 1)(rng_);
  return DeltaDistribution(bin_);
}

ActionDistribution RandomPolicy::ActMemory(std::span<const double>, std::span<const double>,
                                           const PolicyContext&) {
  return DeltaDistribution(bin_);
}

ActionDistribution ScriptedPolicy::ActVisual(std::span<const double>, std::span<const double>,
                                             const PolicyContext&) {
  if (cursor_ >= bins_.size()) {
    throw NavError(ErrorCode::kFailedPrecondition, "scripted policy ran out of actions");
  }
  return DeltaDistribution(bins_[cursor_++]);
}

ActionDistribution ScriptedPolicy::ActMemory(std::span<const double>, std::span<const double>,
                                             const PolicyContext&) {
  return DeltaDistribution(bins_.at(cursor_ - 1));
}

void RegisterPolicy(const std::string& name, PolicyFactory factory) {
  PolicyRegistry& r = GetPolicyRegistry();
  std::lock_guard lock(r.mu);
  r.factories[name] = std::move(factory);
}

std::unique_ptr<Policy> MakePolicy(const std::string& name) {
  PolicyRegistry& r = GetPolicyRegistry();
  std::lock_guard lock(r.mu);
  auto it = r.factories.find(name);
  if (it == r.factories.end()) {
    throw NavError(ErrorCode::kNotFound, "unknown policy '" + name + "'");
  }
  return it->second();
}

}  // namespace navsim
