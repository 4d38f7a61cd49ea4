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

#include "navsim/landmarks.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "navsim/error.h"

namespace navsim {
namespace {

constexpr double kMaxExactSubsets = 1e6;

// True when `a` beats `b` by more than floating-point noise.
bool Better(double a, double b) {
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return a > b + 1e-12 * scale;
}

bool Tied(double a, double b) { return !Better(a, b) && !Better(b, a); }

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<NodeId> SortedIds(const MiningProblem& problem,
                              const std::vector<size_t>& chosen) {
  std::vector<NodeId> ids;
  ids.reserve(chosen.size());
  for (size_t c : chosen) ids.push_back(problem.candidates()[c]);
  std::sort(ids.begin(), ids.end());
  return ids;
}

Selection ToSelection(const MiningProblem& problem, std::vector<size_t> chosen) {
  std::sort(chosen.begin(), chosen.end());  // candidate order == route order
  Selection selection;
  for (size_t c : chosen) selection.node_ids.push_back(problem.candidates()[c]);
  selection.objective_value = problem.Evaluate(chosen);
  return selection;
}

}  // namespace

void ObjectiveWeights::Check() const {
  if (w1 < 0.0 || w2 < 0.0 || w3 < 0.0) {
    throw NavError(ErrorCode::kInvalidArgument, "objective weights must be >= 0");
  }
  if (!(sigma > 0.0)) {
    throw NavError(ErrorCode::kInvalidArgument, "sigma must be > 0");
  }
  if (l < 1) throw NavError(ErrorCode::kInvalidArgument, "l must be >= 1");
}

double HashRankScorer::Score(NodeId node) const {
  const std::uint64_t h = SplitMix64(static_cast<std::uint64_t>(node) ^ salt_);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

PlantedRankScorer::PlantedRankScorer(std::map<NodeId, double> scores, double fallback)
    : scores_(std::move(scores)), fallback_(fallback) {}

double PlantedRankScorer::Score(NodeId node) const {
  auto it = scores_.find(node);
  return it == scores_.end() ? fallback_ : it->second;
}

std::set<NodeId> Intersections(const CityGraph& graph) {
  std::set<NodeId> out;
  for (const auto& [id, n] : graph.nodes()) {
    if (graph.OutEdges(id).size() >= 3) out.insert(id);
  }
  return out;
}

MiningProblem::MiningProblem(const CityGraph& graph, const Route& route,
                             const ObjectiveWeights& weights, const RankScorer& scorer,
                             const std::set<NodeId>& intersections)
    : weights_(weights) {
  weights_.Check();
  const std::vector<double> cumulative = CumulativeDistances(graph, route);
  const size_t n = route.node_ids.size();
  route_length_ = cumulative.back();

  // Distance from each route index forward to the next intersection,
  // falling back to the destination.
  std::vector<double> ahead(n, 0.0);
  double next_stop = route_length_;
  for (size_t i = n; i-- > 0;) {
    if (intersections.contains(route.node_ids[i])) next_stop = cumulative[i];
    ahead[i] = next_stop - cumulative[i];
  }

  for (size_t i = 1; i + 1 < n; ++i) {
    candidates_.push_back(route.node_ids[i]);
    position_.push_back(cumulative[i]);
    proximity_.push_back(1.0 / (ahead[i] + weights_.sigma));
    rank_.push_back(scorer.Score(route.node_ids[i]));
  }
}

double MiningProblem::Evaluate(const std::vector<size_t>& chosen) const {
  std::vector<double> stops;
  stops.reserve(chosen.size() + 2);
  stops.push_back(0.0);
  double proximity_sum = 0.0;
  double rank_sum = 0.0;
  for (size_t c : chosen) {
    stops.push_back(position_[c]);
    proximity_sum += proximity_[c];
    rank_sum += rank_[c];
  }
  stops.push_back(route_length_);
  std::sort(stops.begin() + 1, stops.end() - 1);

  double min_gap = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < stops.size(); ++i) {
    min_gap = std::min(min_gap, stops[i] - stops[i - 1]);
  }
  const double count = static_cast<double>(chosen.size());
  const double f2 = chosen.empty() ? 0.0 : proximity_sum / count;
  const double f3 = chosen.empty() ? 0.0 : rank_sum / count;
  return weights_.w1 * min_gap + weights_.w2 * f2 + weights_.w3 * f3;
}

double Objective(const CityGraph& graph, const Route& route,
                 const std::vector<NodeId>& selection, const ObjectiveWeights& weights,
                 const RankScorer& scorer, const std::set<NodeId>& intersections) {
  const MiningProblem problem(graph, route, weights, scorer, intersections);
  std::unordered_map<NodeId, size_t> index;
  for (size_t i = 0; i < problem.candidates().size(); ++i) {
    index.emplace(problem.candidates()[i], i);
  }
  std::vector<size_t> chosen;
  for (NodeId id : selection) {
    auto it = index.find(id);
    if (it == index.end()) {
      throw NavError(ErrorCode::kInvalidArgument,
                     "node " + std::to_string(id) + " is not in the route interior");
    }
    if (std::find(chosen.begin(), chosen.end(), it->second) != chosen.end()) {
      throw NavError(ErrorCode::kInvalidArgument,
                     "node " + std::to_string(id) + " selected twice");
    }
    chosen.push_back(it->second);
  }
  return problem.Evaluate(chosen);
}

Selection SelectGreedy(const CityGraph& graph, const Route& route,
                       const ObjectiveWeights& weights, const RankScorer& scorer,
                       const std::set<NodeId>& intersections) {
  const MiningProblem problem(graph, route, weights, scorer, intersections);
  const size_t n = problem.candidates().size();
  const size_t l = static_cast<size_t>(weights.l);
  if (n < l) {
    throw NavError(ErrorCode::kFailedPrecondition,
                   "route interior has " + std::to_string(n) + " candidates, need " +
                       std::to_string(l));
  }

  std::vector<size_t> chosen;
  std::vector<bool> used(n, false);
  while (chosen.size() < l) {
    size_t best = n;
    double best_value = -std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < n; ++c) {
      if (used[c]) continue;
      chosen.push_back(c);
      const double value = problem.Evaluate(chosen);
      chosen.pop_back();
      if (best == n || Better(value, best_value) ||
          (Tied(value, best_value) &&
           problem.candidates()[c] < problem.candidates()[best])) {
        best = c;
        best_value = value;
      }
    }
    used[best] = true;
    chosen.push_back(best);
  }
  return ToSelection(problem, std::move(chosen));
}

Selection SelectExact(const CityGraph& graph, const Route& route,
                      const ObjectiveWeights& weights, const RankScorer& scorer,
                      const std::set<NodeId>& intersections) {
  const MiningProblem problem(graph, route, weights, scorer, intersections);
  const size_t n = problem.candidates().size();
  const size_t l = static_cast<size_t>(weights.l);
  if (n < l) {
    throw NavError(ErrorCode::kFailedPrecondition,
                   "route interior has " + std::to_string(n) + " candidates, need " +
                       std::to_string(l));
  }
  double subsets = 1.0;
  for (size_t i = 0; i < l; ++i) {
    subsets = subsets * static_cast<double>(n - i) / static_cast<double>(i + 1);
  }
  if (std::round(subsets) > kMaxExactSubsets) {
    throw NavError(ErrorCode::kTooLarge,
                   "exact selection would enumerate " +
                       std::to_string(static_cast<long long>(std::round(subsets))) +
                       " subsets");
  }

  std::vector<size_t> combo(l);
  std::iota(combo.begin(), combo.end(), size_t{0});
  std::vector<size_t> best = combo;
  double best_value = problem.Evaluate(combo);
  std::vector<NodeId> best_ids = SortedIds(problem, best);
  while (true) {
    // Advance to the next combination in lexicographic index order.
    size_t i = l;
    while (i > 0 && combo[i - 1] == n - l + (i - 1)) --i;
    if (i == 0) break;
    ++combo[i - 1];
    for (size_t j = i; j < l; ++j) combo[j] = combo[j - 1] + 1;

    const double value = problem.Evaluate(combo);
    if (Better(value, best_value)) {
      best = combo;
      best_value = value;
      best_ids = SortedIds(problem, best);
    } else if (Tied(value, best_value)) {
      std::vector<NodeId> ids = SortedIds(problem, combo);
      if (ids < best_ids) {
        best = combo;
        best_value = value;
        best_ids = std::move(ids);
      }
    }
  }
  return ToSelection(problem, std::move(best));
}

Route WithLandmarks(const Route& route, const Selection& selection) {
  Route out = route;
  std::vector<NodeId> landmarks{route.source()};
  landmarks.insert(landmarks.end(), selection.node_ids.begin(), selection.node_ids.end());
  landmarks.push_back(route.destination());
  out.SetLandmarks(std::move(landmarks));
  return out;
}

}  // namespace navsim
