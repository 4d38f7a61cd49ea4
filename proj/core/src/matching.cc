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

#include "navsim/matching.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "navsim/error.h"

namespace navsim {
namespace {

struct Registry {
  std::mutex mu;
  std::map<std::string, MatcherFactory> factories = {
      {"oracle", [] { return std::make_shared<OracleMatcher>(); }},
      {"cosine", [] { return std::make_shared<CosineMatcher>(); }},
  };
};

Registry& GetRegistry() {
  static Registry registry;
  return registry;
}

}  // namespace

double CosineMatcher::Score(std::span<const double> feature, std::span<const double> segment,
                            const MatchContext&) const {
  if (feature.size() != segment.size()) {
    throw NavError(ErrorCode::kInvalidArgument,
                   "cosine matcher dimension mismatch: " + std::to_string(feature.size()) +
                       " vs " + std::to_string(segment.size()));
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (size_t i = 0; i < feature.size(); ++i) {
    dot += feature[i] * segment[i];
    na += feature[i] * feature[i];
    nb += segment[i] * segment[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.5;
  const double cosine = std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
  return (cosine + 1.0) / 2.0;
}

double OracleMatcher::Score(std::span<const double>, std::span<const double>,
                            const MatchContext& context) const {
  if (!context.aimed_landmark) {
    throw NavError(ErrorCode::kFailedPrecondition,
                   "oracle matcher needs ground-truth landmark correspondence");
  }
  return context.node == *context.aimed_landmark ? 1.0 : 0.0;
}

ConstantMatcher::ConstantMatcher(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw NavError(ErrorCode::kInvalidArgument, "constant score must lie in [0, 1]");
  }
}

double ScorePair(const Matcher& matcher, std::span<const double> feature,
                 std::span<const double> segment, const MatchContext& context) {
  const double s = matcher.Score(feature, segment, context);
  if (!(s >= 0.0 && s <= 1.0)) {
    throw NavError(ErrorCode::kInvariantViolation,
                   "matcher '" + matcher.name() + "' produced a score outside [0, 1]");
  }
  return s;
}

void RegisterMatcher(const std::string& name, MatcherFactory factory) {
  Registry& r = GetRegistry();
  std::lock_guard lock(r.mu);
  r.factories[name] = std::move(factory);
}

std::shared_ptr<Matcher> MakeMatcher(const std::string& name) {
  Registry& r = GetRegistry();
  std::lock_guard lock(r.mu);
  auto it = r.factories.find(name);
  if (it == r.factories.end()) {
    throw NavError(ErrorCode::kNotFound, "unknown matcher '" + name + "'");
  }
  return it->second();
}

std::pair<int, ControllerState> ThresholdController::Step(
    const ScoreFeature& s, const ControllerState& hidden) const {
  ControllerState next = hidden;
  next.steps_since_fire = std::min(hidden.steps_since_fire, 1 << 20) + 1;
  const bool fire =
      std::min(s.s1, s.s2) >= threshold_ && next.steps_since_fire >= min_gap_;
  if (fire) next.steps_since_fire = 0;
  return {fire ? 1 : 0, next};
}

std::pair<int, ControllerState> ControllerStep(const IndicatorController& controller,
                                               const ScoreFeature& s,
                                               const ControllerState& hidden) {
  auto out = controller.Step(s, hidden);
  if (out.first != 0 && out.first != 1) {
    throw NavError(ErrorCode::kInvariantViolation, "indicator output must be 0 or 1");
  }
  return out;
}

}  // namespace navsim
