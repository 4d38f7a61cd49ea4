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

#ifndef NAVSIM_ACTION_H_
#define NAVSIM_ACTION_H_

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "navsim/citygraph.h"
#include "navsim/matching.h"
#include "navsim/routegen.h"

namespace navsim {

inline constexpr int kNumDirectionBins = 8;
inline constexpr double kBinWidthDeg = 45.0;

// Probabilities over eight agent-frame directions; bin i is centred at
// i * 45 degrees relative to the current heading.
using ActionDistribution = std::array<double, kNumDirectionBins>;

bool IsValidDistribution(const ActionDistribution& a, double tolerance = 1e-9);
ActionDistribution DeltaDistribution(int bin);
ActionDistribution UniformDistribution();

struct FusionWeights {
  double w0 = 1.0;  // observation/landmark branch
  double w1 = 1.0;  // memory/direction branch
};

// (w0 * ae + w1 * am) / (w0 + w1), renormalized. Throws kInvalidArgument on
// negative weights or when both are zero.
ActionDistribution Fuse(const ActionDistribution& ae, const ActionDistribution& am,
                        const FusionWeights& w);

// Bin whose half-open interval [i*45 - 22.5, i*45 + 22.5) contains the angle.
int BinOfAngle(double angle_deg);
double BinCenter(int bin);

// Most probable bin, ties to the lowest index.
int ArgmaxBin(const ActionDistribution& a);

// Outgoing edge whose bearing is circularly closest to heading + angle; ties
// go to the smaller bearing. Throws kFailedPrecondition at isolated nodes.
DirectedEdge SelectEdge(const CityGraph& graph, NodeId node, double predicted_angle_deg,
                        double heading_deg);

using WeightingFunction = std::function<FusionWeights(const ScoreFeature&)>;

// w = (s1, s2); equal weights when both scores are zero.
FusionWeights DefaultWeighting(const ScoreFeature& s);

struct PolicyContext {
  const CityGraph* graph = nullptr;
  NodeId node = 0;
  double heading = 0.0;
  const Route* route = nullptr;  // ground truth, may be null
  std::optional<NodeId> aimed_landmark;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual void Reset(std::uint64_t /*seed*/) {}
  virtual ActionDistribution ActVisual(std::span<const double> observation,
                                       std::span<const double> landmark_text,
                                       const PolicyContext& context) = 0;
  virtual ActionDistribution ActMemory(std::span<const double> memory,
                                       std::span<const double> direction_text,
                                       const PolicyContext& context) = 0;
};

// Puts all mass on the bin of the next ground-truth route edge; off the
// route it heads for the aimed landmark.
class OraclePolicy : public Policy {
 public:
  std::string name() const override { return "oracle"; }
  ActionDistribution ActVisual(std::span<const double>, std::span<const double>,
                               const PolicyContext& context) override;
  ActionDistribution ActMemory(std::span<const double>, std::span<const double>,
                               const PolicyContext& context) override;

 private:
  static ActionDistribution Act(const PolicyContext& context);
};

// Uniformly random bin per step; both branches agree within a step.
class RandomPolicy : public Policy {
 public:
  std::string name() const override { return "random"; }
  void Reset(std::uint64_t seed) override { rng_.seed(seed); }
  ActionDistribution ActVisual(std::span<const double>, std::span<const double>,
                               const PolicyContext&) override;
  ActionDistribution ActMemory(std::span<const double>, std::span<const double>,
                               const PolicyContext&) override;

 private:
  std::mt19937_64 rng_{0};
  int bin_ = 0;
};

// Replays a fixed bin sequence, one bin per movement step.
class ScriptedPolicy : public Policy {
 public:
  explicit ScriptedPolicy(std::vector<int> bins) : bins_(std::move(bins)) {}
  std::string name() const override { return "scripted"; }
  void Reset(std::uint64_t) override { cursor_ = 0; }
  ActionDistribution ActVisual(std::span<const double>, std::span<const double>,
                               const PolicyContext&) override;
  ActionDistribution ActMemory(std::span<const double>, std::span<const double>,
                               const PolicyContext&) override;

 private:
  std::vector<int> bins_;
  size_t cursor_ = 0;
};

using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

// Registry keyed by config name; "oracle" and "random" are built in.
void RegisterPolicy(const std::string& name, PolicyFactory factory);
std::unique_ptr<Policy> MakePolicy(const std::string& name);

}  // namespace navsim

#endif  // NAVSIM_ACTION_H_
