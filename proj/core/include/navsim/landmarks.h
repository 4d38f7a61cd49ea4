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

#ifndef NAVSIM_LANDMARKS_H_
#define NAVSIM_LANDMARKS_H_

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "navsim/citygraph.h"
#include "navsim/routegen.h"

namespace navsim {

// Weights of the three mining terms: spacing (w1), intersection proximity
// (w2) and rank score (w3). Defaults are the values used for the dataset.
struct ObjectiveWeights {
  double w1 = 1.0;
  double w2 = 1.0;
  double w3 = 3.0;
  double sigma = 15.0;  // meters
  int l = 3;            // intermediate landmarks to pick

  void Check() const;
};

// Describability/memorability score of a node in [0, 1].
class RankScorer {
 public:
  virtual ~RankScorer() = default;
  virtual double Score(NodeId node) const = 0;
};

// Deterministic pseudo-score from a hash of the node id.
class HashRankScorer : public RankScorer {
 public:
  explicit HashRankScorer(std::uint64_t salt = 0) : salt_(salt) {}
  double Score(NodeId node) const override;

 private:
  std::uint64_t salt_;
};

// Planted scores; unlisted nodes get `fallback`.
class PlantedRankScorer : public RankScorer {
 public:
  PlantedRankScorer(std::map<NodeId, double> scores, double fallback = 0.0);
  double Score(NodeId node) const override;

 private:
  std::map<NodeId, double> scores_;
  double fallback_;
};

struct Selection {
  std::vector<NodeId> node_ids;  // in route order
  double objective_value = 0.0;
};

// Nodes with out-degree >= 3.
std::set<NodeId> Intersections(const CityGraph& graph);

// Precomputed per-route quantities shared by the objective and both solvers.
class MiningProblem {
 public:
  MiningProblem(const CityGraph& graph, const Route& route,
                const ObjectiveWeights& weights, const RankScorer& scorer,
                const std::set<NodeId>& intersections);

  // Interior nodes of the route (endpoints excluded), in route order.
  const std::vector<NodeId>& candidates() const { return candidates_; }
  const ObjectiveWeights& weights() const { return weights_; }

  // w1*f1 + w2*f2 + w3*f3 over the candidate indices `chosen`.
  // f1 is the smallest along-route gap in {source} + chosen + {destination},
  // f2 the mean of 1/(d + sigma) with d the along-route distance to the next
  // intersection ahead (or to the destination past the last one), f3 the mean
  // rank score. f2 and f3 are 0 for an empty choice.
  double Evaluate(const std::vector<size_t>& chosen) const;

  double position(size_t candidate) const { return position_[candidate]; }
  double proximity(size_t candidate) const { return proximity_[candidate]; }
  double rank(size_t candidate) const { return rank_[candidate]; }
  double route_length() const { return route_length_; }

 private:
  ObjectiveWeights weights_;
  std::vector<NodeId> candidates_;
  std::vector<double> position_;   // along-route distance from the source
  std::vector<double> proximity_;  // 1 / (d + sigma)
  std::vector<double> rank_;
  double route_length_ = 0.0;
};

// Objective of an explicit selection. Throws kInvalidArgument when a node is
// not in the route interior or appears twice.
double Objective(const CityGraph& graph, const Route& route,
                 const std::vector<NodeId>& selection, const ObjectiveWeights& weights,
                 const RankScorer& scorer, const std::set<NodeId>& intersections);

// Forward greedy: adds the candidate with the largest objective gain, ties to
// the smallest node id. Throws kFailedPrecondition with fewer than l
// candidates.
Selection SelectGreedy(const CityGraph& graph, const Route& route,
                       const ObjectiveWeights& weights, const RankScorer& scorer,
                       const std::set<NodeId>& intersections);

// Exhaustive maximization over all l-subsets; ties go to the lexicographically
// smallest sorted id list. Throws kTooLarge when C(n, l) > 1e6.
Selection SelectExact(const CityGraph& graph, const Route& route,
                      const ObjectiveWeights& weights, const RankScorer& scorer,
                      const std::set<NodeId>& intersections);

// Route with landmark_ids = {source} + selection + {destination}.
Route WithLandmarks(const Route& route, const Selection& selection);

}  // namespace navsim

#endif  // NAVSIM_LANDMARKS_H_
