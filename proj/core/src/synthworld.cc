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

#include "navsim/synthworld.h"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "navsim/error.h"
#include "navsim/eval.h"
#include "navsim/landmarks.h"

namespace navsim {
namespace {

constexpr std::array<const char*, 32> kTagNames = {
    "bakery",   "church",  "pharmacy", "bank",       "cafe",     "school",  "hotel",
    "museum",   "library", "theater",  "market",     "garage",   "clinic",  "bar",
    "gym",      "station", "tower",    "park",       "bookstore", "florist", "deli",
    "laundromat", "salon", "temple",   "arcade",     "gallery",  "diner",   "pizzeria",
    "hardware", "kiosk",   "embassy",  "stadium"};

std::string TagWord(int index) {
  const int base = static_cast<int>(kTagNames.size());
  std::string word = kTagNames[index % base];
  if (index >= base) word += std::to_string(index / base + 1);
  return word;
}

std::vector<double> RandomUnit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(static_cast<size_t>(dim));
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& x : v) {
      x = normal(rng);
      norm += x * x;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

// Relative turn word for a heading change in degrees.
std::string TurnWord(double delta_deg) {
  const double d = WrapDegrees(delta_deg);
  if (d < 45.0 || d > 315.0) return "straight";
  if (d <= 135.0) return "right";
  if (d < 225.0) return "back";
  return "left";
}

void AddTokens(std::vector<Token>& out, std::initializer_list<std::string> words,
               TokenClass cls) {
  for (const std::string& w : words) out.push_back({w, cls});
}

}  // namespace

void WorldSpec::Check() const {
  if (rows < 2 || cols < 2) {
    throw NavError(ErrorCode::kInvalidArgument, "world grid needs at least 2x2 nodes");
  }
  if (!(spacing_m > 0.0)) throw NavError(ErrorCode::kInvalidArgument, "spacing must be > 0");
  if (vocab_size < 1) throw NavError(ErrorCode::kInvalidArgument, "vocabulary must be non-empty");
  if (feature_dim < 1) throw NavError(ErrorCode::kInvalidArgument, "feature dimension must be >= 1");
  if (!IsValid(origin)) throw NavError(ErrorCode::kInvalidArgument, "invalid world origin");
  if (clusters < 2 || clusters > rows * cols) {
    throw NavError(ErrorCode::kInvalidArgument, "cluster count must be in [2, node count]");
  }
  if (!(feature_noise >= 0.0)) throw NavError(ErrorCode::kInvalidArgument, "noise must be >= 0");
}

World GenerateWorld(const WorldSpec& spec) {
  spec.Check();
  World world;
  world.spec = spec;

  const double meters_per_degree = kEarthRadiusMeters * std::numbers::pi / 180.0;
  const double dlat = spec.spacing_m / meters_per_degree;
  const double dlon =
      spec.spacing_m / (meters_per_degree * std::cos(spec.origin.lat * std::numbers::pi / 180.0));
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      const NodeId id = static_cast<NodeId>(r) * spec.cols + c;
      world.graph.AddNode({id, {spec.origin.lat + r * dlat, spec.origin.lon + c * dlon}, std::nullopt});
    }
  }
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      const NodeId id = static_cast<NodeId>(r) * spec.cols + c;
      if (c + 1 < spec.cols) world.graph.AddRoad(id, id + 1);
      if (r + 1 < spec.rows) world.graph.AddRoad(id, id + spec.cols);
    }
  }

  std::mt19937_64 rng(spec.seed);
  std::vector<std::vector<double>> tag_vectors;
  std::map<std::string, std::vector<double>> lexicon;
  for (int t = 0; t < spec.vocab_size; ++t) {
    tag_vectors.push_back(RandomUnit(rng, spec.feature_dim));
    lexicon[TagWord(t)] = tag_vectors.back();
  }
  std::uniform_int_distribution<int> pick_tag(0, spec.vocab_size - 1);
  for (const auto& [id, node] : world.graph.nodes()) {
    const int tag = pick_tag(rng);
    const std::vector<double> noise = RandomUnit(rng, spec.feature_dim);
    std::vector<double> feature(tag_vectors[tag]);
    double norm = 0.0;
    for (size_t i = 0; i < feature.size(); ++i) {
      feature[i] += spec.feature_noise * noise[i];
      norm += feature[i] * feature[i];
    }
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (double& x : feature) x /= norm;
    }
    world.features[id] = std::move(feature);
    world.tags[id] = TagWord(tag);
  }
  world.embedder = SegmentEmbedder(spec.feature_dim, std::move(lexicon));
  world.clusters = ClusterNodes(world.graph, spec.clusters, spec.seed);
  world.intersections = Intersections(world.graph);
  return world;
}

Instruction DescribeRoute(const World& world, const Route& route) {
  const CityGraph& graph = world.graph;
  const auto& nodes = route.node_ids;
  if (nodes.size() < 2) {
    throw NavError(ErrorCode::kInvalidArgument, "cannot describe a single-node route");
  }
  const std::vector<size_t> idx = route.LandmarkIndices();
  double heading = graph.FindEdge(nodes[0], nodes[1])->bearing;

  std::vector<Token> tokens;
  for (size_t j = 0; j + 1 < idx.size(); ++j) {
    const NodeId landmark = route.landmark_ids[j + 1];
    AddTokens(tokens, {"pass", "the", world.tags.at(landmark), "building"},
              TokenClass::kLandmark);

    // Merge consecutive edges with a similar bearing into one leg.
    bool first_leg = true;
    size_t i = idx[j];
    while (i < idx[j + 1]) {
      const double leg_bearing = graph.FindEdge(nodes[i], nodes[i + 1])->bearing;
      int blocks = 0;
      while (i < idx[j + 1] &&
             AngularDistance(graph.FindEdge(nodes[i], nodes[i + 1])->bearing, leg_bearing) < 22.5) {
        ++blocks;
        ++i;
      }
      AddTokens(tokens,
                {first_leg ? "after" : "then", "going", TurnWord(leg_bearing - heading), "for",
                 std::to_string(blocks), blocks == 1 ? "block" : "blocks"},
                TokenClass::kDirection);
      heading = graph.FindEdge(nodes[i - 1], nodes[i])->bearing;
      first_leg = false;
    }
  }
  std::vector<NodeId> correspondence(route.landmark_ids.begin() + 1, route.landmark_ids.end());
  return MakeInstruction(std::move(tokens), std::move(correspondence));
}

SynthEpisode GenerateEpisode(const World& world, int difficulty, std::uint64_t seed) {
  if (difficulty < 1 || difficulty > 4) {
    throw NavError(ErrorCode::kInvalidArgument, "difficulty must be in 1..4");
  }
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + world.spec.seed);
  const HashRankScorer scorer(world.spec.seed);
  const ObjectiveWeights weights;
  constexpr int kAttempts = 200;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const auto [source, destination] = SampleEndpoints(world.clusters, rng());
    Route route;
    try {
      route = ShortestRoute(world.graph, source, destination);
    } catch (const NavError& e) {
      if (e.code() == ErrorCode::kUnreachable) continue;
      throw;
    }
    const int edges = static_cast<int>(route.node_ids.size()) - 1;
    if (edges < weights.l + 1 || edges > world.spec.max_route_edges) continue;

    const Selection selection =
        SelectGreedy(world.graph, route, weights, scorer, world.intersections);
    route = WithLandmarks(route, selection);
    RouteEpisode full{route, DescribeRoute(world, route)};

    SynthEpisode out;
    out.id = "d" + std::to_string(difficulty) + "_s" + std::to_string(seed);
    if (difficulty == 4) {
      out.episode = std::move(full);
    } else {
      auto windows = SubsampleDifficulty(world.graph, full, difficulty);
      out.episode = std::move(windows[rng() % windows.size()]);
    }
    return out;
  }
  throw NavError(ErrorCode::kFailedPrecondition,
                 "world too small for a route with " + std::to_string(weights.l + 1) +
                     " landmarks");
}

}  // namespace navsim
