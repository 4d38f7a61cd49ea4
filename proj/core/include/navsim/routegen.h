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

#ifndef NAVSIM_ROUTEGEN_H_
#define NAVSIM_ROUTEGEN_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "navsim/citygraph.h"

namespace navsim {

// An ordered node path. Landmarks are a subsequence of the path that always
// starts at the source and ends at the destination; sub-routes are the
// inclusive slices between consecutive landmarks, so neighbouring sub-routes
// share their junction landmark.
struct Route {
  std::vector<NodeId> node_ids;
  double total_length = 0.0;
  std::vector<NodeId> landmark_ids;
  std::vector<std::vector<NodeId>> sub_routes;

  NodeId source() const { return node_ids.front(); }
  NodeId destination() const { return node_ids.back(); }

  // Position of each landmark within node_ids.
  std::vector<size_t> LandmarkIndices() const;

  // Replaces the landmarks (must be in route order, source and destination
  // included) and recomputes sub_routes.
  void SetLandmarks(std::vector<NodeId> landmarks);
};

// Builds a route over `nodes`, summing edge lengths from the graph.
// Throws kInvariantViolation if a consecutive pair is not an edge.
Route MakeRoute(const CityGraph& graph, std::vector<NodeId> nodes);

// Returns violated route invariants (empty when the route is valid).
std::vector<std::string> ValidateRoute(const CityGraph& graph, const Route& route);

// Cumulative along-route distance at each node index (first entry 0).
std::vector<double> CumulativeDistances(const CityGraph& graph, const Route& route);

struct ClusterAssignment {
  int k = 0;
  std::map<NodeId, int> labels;
  std::vector<GeoPoint> centroids;
};

// Lloyd's k-means on raw (lat, lon), seeded initialization from k distinct
// nodes. Stops when every centroid moves less than 1e-9 degrees or after 100
// iterations.
ClusterAssignment ClusterNodes(const CityGraph& graph, int k, std::uint64_t seed);

// Picks two distinct non-empty clusters uniformly, then one node uniformly
// from each. Throws kFailedPrecondition with fewer than two non-empty clusters.
std::pair<NodeId, NodeId> SampleEndpoints(const ClusterAssignment& assignment,
                                          std::uint64_t seed);

// A* over edge lengths with a great-circle heuristic. The heuristic is scaled
// by the graph's smallest length/great-circle ratio (capped at 1) so that it
// stays consistent when stored lengths undercut geometry.
// Throws kUnreachable when no path exists.
Route ShortestRoute(const CityGraph& graph, NodeId source, NodeId destination);

// Route file: {"nodes":[int], "landmarks":[int], "length_m":float}.
std::string SerializeRoute(const Route& route);
// Parsing does not consult a graph; pair with ValidateRoute.
Route ParseRoute(std::string_view json_text);
Route LoadRoute(const std::filesystem::path& path);
void SaveRoute(const Route& route, const std::filesystem::path& path);

}  // namespace navsim

#endif  // NAVSIM_ROUTEGEN_H_
