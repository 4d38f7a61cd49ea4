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

#ifndef NAVSIM_MATCHING_H_
#define NAVSIM_MATCHING_H_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "navsim/citygraph.h"

namespace navsim {

using ObservationFeature = std::vector<double>;
using FeatureTable = std::map<NodeId, ObservationFeature>;

// (s1, s2): observation vs. attended landmark text, memory vs. attended
// directional text. Both in [0, 1].
struct ScoreFeature {
  double s1 = 0.0;
  double s2 = 0.0;
};

// Ground truth a matcher may consult. Learned or heuristic matchers ignore it.
struct MatchContext {
  NodeId node = 0;
  std::optional<NodeId> aimed_landmark;
};

class Matcher {
 public:
  virtual ~Matcher() = default;
  virtual std::string name() const = 0;
  virtual double Score(std::span<const double> feature, std::span<const double> segment,
                       const MatchContext& context) const = 0;
};

// (cos + 1) / 2. A zero vector on either side scores 0.5.
class CosineMatcher : public Matcher {
 public:
  std::string name() const override { return "cosine"; }
  double Score(std::span<const double> feature, std::span<const double> segment,
               const MatchContext& context) const override;
};

// 1 exactly at the aimed ground-truth landmark, 0 elsewhere.
class OracleMatcher : public Matcher {
 public:
  std::string name() const override { return "oracle"; }
  double Score(std::span<const double> feature, std::span<const double> segment,
               const MatchContext& context) const override;
};

class ConstantMatcher : public Matcher {
 public:
  explicit ConstantMatcher(double value);
  std::string name() const override { return "constant"; }
  double Score(std::span<const double>, std::span<const double>,
               const MatchContext&) const override {
    return value_;
  }

 private:
  double value_;
};

// Runs the matcher and checks the result lies in [0, 1].
double ScorePair(const Matcher& matcher, std::span<const double> feature,
                 std::span<const double> segment, const MatchContext& context);

using MatcherFactory = std::function<std::shared_ptr<Matcher>()>;

// Registry keyed by config name; "oracle" and "cosine" are built in.
void RegisterMatcher(const std::string& name, MatcherFactory factory);
std::shared_ptr<Matcher> MakeMatcher(const std::string& name);

// Hidden state of an indicator controller.
struct ControllerState {
  int steps_since_fire = 1 << 20;
};

class IndicatorController {
 public:
  virtual ~IndicatorController() = default;
  virtual ControllerState Initial() const { return {}; }
  // Returns (phi, next state), phi in {0, 1}.
  virtual std::pair<int, ControllerState> Step(const ScoreFeature& s,
                                               const ControllerState& hidden) const = 0;
};

// Fires when min(s1, s2) >= threshold and at least `min_gap` steps have
// passed since the previous firing.
class ThresholdController : public IndicatorController {
 public:
  explicit ThresholdController(double threshold = 0.5, int min_gap = 1)
      : threshold_(threshold), min_gap_(min_gap) {}

  std::pair<int, ControllerState> Step(const ScoreFeature& s,
                                       const ControllerState& hidden) const override;

  double threshold() const { return threshold_; }
  int min_gap() const { return min_gap_; }

 private:
  double threshold_;
  int min_gap_;
};

std::pair<int, ControllerState> ControllerStep(const IndicatorController& controller,
                                               const ScoreFeature& s,
                                               const ControllerState& hidden);

}  // namespace navsim

#endif  // NAVSIM_MATCHING_H_
