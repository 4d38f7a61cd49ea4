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

#ifndef NAVSIM_SYNTHWORLD_H_
#define NAVSIM_SYNTHWORLD_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "navsim/citygraph.h"
#include "navsim/engine.h"
#include "navsim/instruction.h"
#include "navsim/matching.h"
#include "navsim/routegen.h"

namespace navsim {

struct WorldSpec {
  std::uint64_t seed = 1;
  int rows = 10;
  int cols = 10;
  double spacing_m = 100.0;
  int vocab_size = 32;
  int feature_dim = 64;
  GeoPoint origin{40.7128, -74.0060};
  double feature_noise = 0.5;  // weight of the per-node noise direction
  int clusters = 5;
  int max_route_edges = 40;    // keeps oracle runs inside the step cap

  void Check() const;
};

// A 4-connected grid city. Every node carries a landmark tag; its
// observation feature is the tag's unit vector plus per-node noise, and the
// embedder's lexicon maps the tag word to the same tag vector.
struct World {
  WorldSpec spec;
  CityGraph graph;
  FeatureTable features;
  std::map<NodeId, std::string> tags;
  SegmentEmbedder embedder;
  ClusterAssignment clusters;
  std::set<NodeId> intersections;

  Environment environment() const { return {&graph, &features, embedder}; }
};

World GenerateWorld(const WorldSpec& spec);

struct SynthEpisode {
  std::string id;
  RouteEpisode episode;

  EpisodeSpec ToSpec() const { return MakeEpisodeSpec(id, episode); }
};

// Four-landmark episode: cluster-sampled endpoints, A* route, three greedy
// intermediate landmarks plus the destination, and one templated pair per
// landmark. Lower difficulties take a random window of `difficulty`
// consecutive pairs from that episode. Throws kFailedPrecondition when the
// world cannot host a long enough route.
SynthEpisode GenerateEpisode(const World& world, int difficulty, std::uint64_t seed);

// Templated instruction for a route whose landmarks are already set.
Instruction DescribeRoute(const World& world, const Route& route);

}  // namespace navsim

#endif  // NAVSIM_SYNTHWORLD_H_
