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
#include <numeric>
#include <random>

#include "gtest/gtest.h"
#include "navsim/error.h"
#include "oracles/oracles.h"

namespace navsim {
namespace {

oracle::LandmarkInputs InputsFor(const ObjectiveWeights& w, const RankScorer& scorer) {
  return {w.w1, w.w2, w.w3, w.sigma, w.l, [&scorer](NodeId id) { return scorer.Score(id); }};
}

// Straight east-west line of `n` nodes, `spacing` meters apart, ids 0..n-1.
CityGraph Line(int n, double spacing) {
  return oracle::GridGraph(1, n, spacing, {40.7, -74.0});
}

TEST(ObjectiveTest, SingleMidpointGap) {
  const CityGraph g = Line(3, 200);
  const Route r = MakeRoute(g, {0, 1, 2});
  ObjectiveWeights w{1, 0, 0, 15, 1};
  const HashRankScorer scorer;
  EXPECT_NEAR(Objective(g, r, {1}, w, scorer, Intersections(g)), 200.0, 1e-6);
}

TEST(ObjectiveTest, NodeAtIntersectionContributesInverseSigma) {
  const CityGraph g = Line(3, 200);
  const Route r = MakeRoute(g, {0, 1, 2});
  ObjectiveWeights w{0, 1, 0, 15, 1};
  const HashRankScorer scorer;
  EXPECT_NEAR(Objective(g, r, {1}, w, scorer, {1}), 1.0 / 15.0, 1e-15);
  // Past the last intersection the destination stands in.
  EXPECT_NEAR(Objective(g, r, {1}, w, scorer, {}), 1.0 / (200.0 + 15.0), 1e-9);
}

TEST(ObjectiveTest, RejectsInvalidSelections) {
  const CityGraph g = Line(4, 100);
  const Route r = MakeRoute(g, {0, 1, 2, 3});
  const ObjectiveWeights w;
  const HashRankScorer scorer;
  EXPECT_THROW(Objective(g, r, {0}, w, scorer, {}), NavError);
  EXPECT_THROW(Objective(g, r, {1, 1}, w, scorer, {}), NavError);
  EXPECT_THROW(Objective(g, r, {9}, w, scorer, {}), NavError);
}

TEST(ObjectiveTest, MatchesScriptedRecomputation) {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = oracle::RandomLineInstance(seed, 10);
    const HashRankScorer scorer(seed);
    ObjectiveWeights w{1.0, 50.0, 3.0, 15.0, 3};
    std::vector<NodeId> interior(inst.route.node_ids.begin() + 1, inst.route.node_ids.end() - 1);
    std::shuffle(interior.begin(), interior.end(), rng);
    const std::vector<NodeId> pick(interior.begin(), interior.begin() + 3);
    EXPECT_NEAR(Objective(inst.graph, inst.route, pick, w, scorer, Intersections(inst.graph)),
                oracle::LandmarkObjective(inst.graph, inst.route, pick, InputsFor(w, scorer)),
                1e-9);
  }
}

TEST(GreedyTest, ExactlyLCandidatesSelectsAll) {
  const CityGraph g = Line(5, 100);
  const Route r = MakeRoute(g, {0, 1, 2, 3, 4});
  const Selection s = SelectGreedy(g, r, {1, 1, 3, 15, 3}, HashRankScorer(), Intersections(g));
  EXPECT_EQ(s.node_ids, std::vector<NodeId>({1, 2, 3}));
}

TEST(GreedyTest, TooFewCandidatesThrows) {
  const CityGraph g = Line(4, 100);
  const Route r = MakeRoute(g, {0, 1, 2, 3});
  EXPECT_THROW(SelectGreedy(g, r, {1, 1, 3, 15, 3}, HashRankScorer(), {}), NavError);
}

TEST(GreedyTest, UniformLineSpacingWithinOneNode) {
  // 17 nodes, 16 gaps; with l = 3 and only f1 the ideal stops are 4, 8, 12.
  const CityGraph g = Line(17, 50);
  std::vector<NodeId> nodes(17);
  std::iota(nodes.begin(), nodes.end(), 0);
  const Route r = MakeRoute(g, nodes);
  const ObjectiveWeights w{1, 0, 0, 15, 3};
  const HashRankScorer scorer;
  const Selection greedy = SelectGreedy(g, r, w, scorer, {});
  const Selection exact = SelectExact(g, r, w, scorer, {});
  EXPECT_EQ(exact.node_ids, std::vector<NodeId>({4, 8, 12}));
  ASSERT_EQ(greedy.node_ids.size(), 3u);
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_LE(std::abs(greedy.node_ids[i] - exact.node_ids[i]), 1) << i;
  }
}

TEST(GreedyTest, PlantedRankScoresWinWhenOnlyRankCounts) {
  const CityGraph g = Line(12, 80);
  std::vector<NodeId> nodes(12);
  std::iota(nodes.begin(), nodes.end(), 0);
  const Route r = MakeRoute(g, nodes);
  const PlantedRankScorer scorer({{3, 0.9}, {6, 0.95}, {9, 0.8}}, 0.1);
  const Selection s = SelectGreedy(g, r, {0, 0, 1, 15, 3}, scorer, {});
  EXPECT_EQ(s.node_ids, std::vector<NodeId>({3, 6, 9}));
}

TEST(ExactTest, AllCandidatesIsUnique) {
  const CityGraph g = Line(5, 100);
  const Route r = MakeRoute(g, {0, 1, 2, 3, 4});
  EXPECT_EQ(SelectExact(g, r, {1, 1, 3, 15, 3}, HashRankScorer(), {}).node_ids,
            std::vector<NodeId>({1, 2, 3}));
}

TEST(ExactTest, TooLargeThrows) {
  const CityGraph g = Line(60, 10);
  std::vector<NodeId> nodes(60);
  std::iota(nodes.begin(), nodes.end(), 0);
  const Route r = MakeRoute(g, nodes);
  ObjectiveWeights w;
  w.l = 6;  // C(58, 6) ~ 4e7
  try {
    SelectExact(g, r, w, HashRankScorer(), {});
    FAIL();
  } catch (const NavError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

TEST(ExactTest, MatchesBruteForceAndDominatesGreedy) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = oracle::RandomLineInstance(seed, 12);
    const HashRankScorer scorer(seed * 31);
    const ObjectiveWeights w{1.0, 1.0, 3.0, 15.0, 3};
    const auto inter = Intersections(inst.graph);
    const Selection exact = SelectExact(inst.graph, inst.route, w, scorer, inter);
    const Selection greedy = SelectGreedy(inst.graph, inst.route, w, scorer, inter);
    const auto brute = oracle::BruteForceLandmarks(inst.graph, inst.route, InputsFor(w, scorer));
    std::vector<NodeId> sorted = exact.node_ids;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, brute.sorted_ids) << "seed " << seed;
    EXPECT_NEAR(exact.objective_value, brute.value, 1e-9);
    EXPECT_LE(greedy.objective_value, exact.objective_value + 1e-9);
  }
}

TEST(ExactTest, DominatesRandomSubsets) {
  const auto inst = oracle::RandomLineInstance(123, 14);
  const HashRankScorer scorer(5);
  const ObjectiveWeights w;
  const auto inter = Intersections(inst.graph);
  const Selection exact = SelectExact(inst.graph, inst.route, w, scorer, inter);
  std::vector<NodeId> interior(inst.route.node_ids.begin() + 1, inst.route.node_ids.end() - 1);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    std::shuffle(interior.begin(), interior.end(), rng);
    const std::vector<NodeId> pick(interior.begin(), interior.begin() + 3);
    EXPECT_LE(Objective(inst.graph, inst.route, pick, w, scorer, inter),
              exact.objective_value + 1e-9);
  }
}

TEST(SolverTest, WeightScalingLeavesSelectionsUnchanged) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = oracle::RandomLineInstance(seed + 500, 11);
    const HashRankScorer scorer(seed);
    const auto inter = Intersections(inst.graph);
    const ObjectiveWeights w{1.0, 1.0, 3.0, 15.0, 3};
    for (double c : {0.01, 2.5, 1000.0}) {
      const ObjectiveWeights scaled{c * w.w1, c * w.w2, c * w.w3, w.sigma, w.l};
      EXPECT_EQ(SelectExact(inst.graph, inst.route, w, scorer, inter).node_ids,
                SelectExact(inst.graph, inst.route, scaled, scorer, inter).node_ids);
      EXPECT_EQ(SelectGreedy(inst.graph, inst.route, w, scorer, inter).node_ids,
                SelectGreedy(inst.graph, inst.route, scaled, scorer, inter).node_ids);
    }
  }
}

TEST(SolverTest, GreedyIsDeterministic) {
  const auto inst = oracle::RandomLineInstance(8, 20);
  const HashRankScorer scorer(8);
  const auto inter = Intersections(inst.graph);
  const Selection a = SelectGreedy(inst.graph, inst.route, {}, scorer, inter);
  const Selection b = SelectGreedy(inst.graph, inst.route, {}, scorer, inter);
  EXPECT_EQ(a.node_ids, b.node_ids);
  EXPECT_EQ(a.objective_value, b.objective_value);
}

TEST(SolverTest, WithLandmarksBuildsSubRoutes) {
  const CityGraph g = Line(8, 100);
  const Route r = MakeRoute(g, {0, 1, 2, 3, 4, 5, 6, 7});
  const Selection s = SelectGreedy(g, r, {}, HashRankScorer(), {});
  const Route with = WithLandmarks(r, s);
  ASSERT_EQ(with.landmark_ids.size(), 5u);
  EXPECT_EQ(with.landmark_ids.front(), 0);
  EXPECT_EQ(with.landmark_ids.back(), 7);
  EXPECT_EQ(with.sub_routes.size(), 4u);
}

TEST(WeightsTest, Check) {
  EXPECT_THROW((ObjectiveWeights{-1, 1, 1, 15, 3}.Check()), NavError);
  EXPECT_THROW((ObjectiveWeights{1, 1, 1, 0, 3}.Check()), NavError);
  EXPECT_THROW((ObjectiveWeights{1, 1, 1, 15, 0}.Check()), NavError);
  EXPECT_NO_THROW(ObjectiveWeights{}.Check());
}

}  // namespace
}  // namespace navsim
