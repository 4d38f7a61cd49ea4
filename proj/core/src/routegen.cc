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

#include "navsim/routegen.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "navsim/error.h"

namespace navsim {

std::vector<size_t> Route::LandmarkIndices() const {
  std::vector<size_t> indices;
  indices.reserve(landmark_ids.size());
  size_t cursor = 0;
  for (size_t i = 0; i < landmark_ids.size(); ++i) {
    // The final landmark is always the last node, even on a one-node route.
    if (i + 1 == landmark_ids.size() && landmark_ids[i] == node_ids.back()) {
      indices.push_back(node_ids.size() - 1);
      break;
    }
    while (cursor < node_ids.size() && node_ids[cursor] != landmark_ids[i]) {
      ++cursor;
    }
    if (cursor == node_ids.size()) {
      throw NavError(ErrorCode::kInvariantViolation,
                     "landmark " + std::to_string(landmark_ids[i]) +
                         " is not on the route in order");
    }
    indices.push_back(cursor);
  }
  return indices;
}

void Route::SetLandmarks(std::vector<NodeId> landmarks) {
  if (node_ids.empty()) {
    throw NavError(ErrorCode::kFailedPrecondition, "route has no nodes");
  }
  if (landmarks.size() < 2 || landmarks.front() != source() ||
      landmarks.back() != destination()) {
    throw NavError(ErrorCode::kInvariantViolation,
                   "landmarks must start at the source and end at the destination");
  }
  landmark_ids = std::move(landmarks);
  const std::vector<size_t> idx = LandmarkIndices();
  sub_routes.clear();
  for (size_t i = 0; i + 1 < idx.size(); ++i) {
    if (idx[i + 1] < idx[i]) {
      throw NavError(ErrorCode::kInvariantViolation, "landmarks out of order");
    }
    sub_routes.emplace_back(node_ids.begin() + static_cast<std::ptrdiff_t>(idx[i]),
                            node_ids.begin() + static_cast<std::ptrdiff_t>(idx[i + 1]) + 1);
  }
}

Route MakeRoute(const CityGraph& graph, std::vector<NodeId> nodes) {
  if (nodes.empty()) {
    throw NavError(ErrorCode::kInvalidArgument, "route needs at least one node");
  }
  Route route;
  route.node_ids = std::move(nodes);
  for (size_t i = 0; i + 1 < route.node_ids.size(); ++i) {
    const DirectedEdge* e = graph.FindEdge(route.node_ids[i], route.node_ids[i + 1]);
    if (e == nullptr) {
      throw NavError(ErrorCode::kInvariantViolation,
                     "no edge " + std::to_string(route.node_ids[i]) + "->" +
                         std::to_string(route.node_ids[i + 1]));
    }
    route.total_length += e->length;
  }
  route.SetLandmarks({route.source(), route.destination()});
  return route;
}

std::vector<std::string> ValidateRoute(const CityGraph& graph, const Route& route) {
  std::vector<std::string> problems;
  if (route.node_ids.empty()) {
    problems.push_back("route is empty");
    return problems;
  }
  double length = 0.0;
  for (size_t i = 0; i < route.node_ids.size(); ++i) {
    if (!graph.HasNode(route.node_ids[i])) {
      problems.push_back("node " + std::to_string(route.node_ids[i]) + " not in graph");
      continue;
    }
    if (i + 1 < route.node_ids.size()) {
      const DirectedEdge* e = graph.FindEdge(route.node_ids[i], route.node_ids[i + 1]);
      if (e == nullptr) {
        problems.push_back("no edge " + std::to_string(route.node_ids[i]) + "->" +
                           std::to_string(route.node_ids[i + 1]));
      } else {
        length += e->length;
      }
    }
  }
  if (std::fabs(length - route.total_length) > 1e-6 * std::max(1.0, length)) {
    problems.push_back("total_length does not match the sum of edge lengths");
  }
  if (route.landmark_ids.size() < 2 || route.landmark_ids.front() != route.source() ||
      route.landmark_ids.back() != route.destination()) {
    problems.push_back("landmarks must start at source and end at destination");
  } else {
    try {
      const auto idx = route.LandmarkIndices();
      if (route.sub_routes.size() + 1 != idx.size()) {
        problems.push_back("sub_routes do not match landmarks");
      } else {
        for (size_t i = 0; i + 1 < idx.size(); ++i) {
          const auto& sr = route.sub_routes[i];
          if (sr.size() != idx[i + 1] - idx[i] + 1 ||
              !std::equal(sr.begin(), sr.end(),
                          route.node_ids.begin() + static_cast<std::ptrdiff_t>(idx[i]))) {
            problems.push_back("sub_route " + std::to_string(i) + " is not a route slice");
          }
        }
      }
    } catch (const NavError& e) {
      problems.push_back(e.what());
    }
  }
  return problems;
}

std::vector<double> CumulativeDistances(const CityGraph& graph, const Route& route) {
  std::vector<double> cumulative(route.node_ids.size(), 0.0);
  for (size_t i = 1; i < route.node_ids.size(); ++i) {
    const DirectedEdge* e = graph.FindEdge(route.node_ids[i - 1], route.node_ids[i]);
    if (e == nullptr) {
      throw NavError(ErrorCode::kInvariantViolation, "route edge missing from graph");
    }
    cumulative[i] = cumulative[i - 1] + e->length;
  }
  return cumulative;
}

ClusterAssignment ClusterNodes(const CityGraph& graph, int k, std::uint64_t seed) {
  const std::vector<NodeId> ids = graph.NodeIds();
  if (ids.empty()) {
    throw NavError(ErrorCode::kInvalidArgument, "cannot cluster an empty graph");
  }
  if (k < 1 || static_cast<size_t>(k) > ids.size()) {
    throw NavError(ErrorCode::kInvalidArgument,
                   "k=" + std::to_string(k) + " exceeds node count " +
                       std::to_string(ids.size()));
  }

  std::mt19937_64 rng(seed);
  std::vector<NodeId> init;
  std::sample(ids.begin(), ids.end(), std::back_inserter(init), k, rng);

  ClusterAssignment out;
  out.k = k;
  for (NodeId id : init) out.centroids.push_back(graph.geo(id));

  std::vector<int> labels(ids.size(), 0);
  constexpr int kMaxIterations = 100;
  constexpr double kTolerance = 1e-9;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    for (size_t i = 0; i < ids.size(); ++i) {
      const GeoPoint& p = graph.geo(ids[i]);
      double best = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double dlat = p.lat - out.centroids[c].lat;
        const double dlon = p.lon - out.centroids[c].lon;
        const double d2 = dlat * dlat + dlon * dlon;
        if (d2 < best) {
          best = d2;
          labels[i] = c;
        }
      }
    }
    std::vector<GeoPoint> sums(k, GeoPoint{0.0, 0.0});
    std::vector<size_t> counts(k, 0);
    for (size_t i = 0; i < ids.size(); ++i) {
      const GeoPoint& p = graph.geo(ids[i]);
      sums[labels[i]].lat += p.lat;
      sums[labels[i]].lon += p.lon;
      ++counts[labels[i]];
    }
    double max_shift = 0.0;
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its centroid
      const GeoPoint next{sums[c].lat / static_cast<double>(counts[c]),
                          sums[c].lon / static_cast<double>(counts[c])};
      max_shift = std::max({max_shift, std::fabs(next.lat - out.centroids[c].lat),
                            std::fabs(next.lon - out.centroids[c].lon)});
      out.centroids[c] = next;
    }
    if (max_shift < kTolerance) break;
  }
  for (size_t i = 0; i < ids.size(); ++i) out.labels[ids[i]] = labels[i];
  return out;
}

std::pair<NodeId, NodeId> SampleEndpoints(const ClusterAssignment& assignment,
                                          std::uint64_t seed) {
  std::vector<std::vector<NodeId>> members(assignment.k);
  for (const auto& [id, label] : assignment.labels) {
    if (label < 0 || label >= assignment.k) {
      throw NavError(ErrorCode::kInvariantViolation, "cluster label out of range");
    }
    members[label].push_back(id);
  }
  std::vector<int> nonempty;
  for (int c = 0; c < assignment.k; ++c) {
    if (!members[c].empty()) nonempty.push_back(c);
  }
  if (nonempty.size() < 2) {
    throw NavError(ErrorCode::kFailedPrecondition,
                   "endpoint sampling needs at least two non-empty clusters");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick_first(0, nonempty.size() - 1);
  std::uniform_int_distribution<size_t> pick_second(0, nonempty.size() - 2);
  const size_t a = pick_first(rng);
  size_t b = pick_second(rng);
  if (b >= a) ++b;
  const auto& from = members[nonempty[a]];
  const auto& to = members[nonempty[b]];
  std::uniform_int_distribution<size_t> pick_from(0, from.size() - 1);
  std::uniform_int_distribution<size_t> pick_to(0, to.size() - 1);
  const NodeId source = from[pick_from(rng)];
  const NodeId destination = to[pick_to(rng)];
  return {source, destination};
}

Route ShortestRoute(const CityGraph& graph, NodeId source, NodeId destination) {
  if (!graph.HasNode(source) || !graph.HasNode(destination)) {
    throw NavError(ErrorCode::kNotFound, "route endpoint not in graph");
  }
  if (source == destination) return MakeRoute(graph, {source});

  double heuristic_scale = 1.0;
  for (const auto& [id, n] : graph.nodes()) {
    for (const DirectedEdge& e : graph.OutEdges(id)) {
      const double chord = GeodesicDistance(n.geo, graph.geo(e.to));
      if (chord > 0.0) heuristic_scale = std::min(heuristic_scale, e.length / chord);
    }
  }
  const GeoPoint& goal = graph.geo(destination);
  auto heuristic = [&](NodeId id) {
    return heuristic_scale * GeodesicDistance(graph.geo(id), goal);
  };

  using Entry = std::pair<double, NodeId>;  // (f, node); ties by smaller id
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::unordered_map<NodeId, double> g;
  std::unordered_map<NodeId, NodeId> parent;
  std::unordered_set<NodeId> closed;
  g[source] = 0.0;
  open.emplace(heuristic(source), source);

  while (!open.empty()) {
    const auto [f, current] = open.top();
    open.pop();
    if (closed.contains(current)) continue;
    if (current == destination) break;
    closed.insert(current);
    const double g_current = g.at(current);
    for (const DirectedEdge& e : graph.OutEdges(current)) {
      if (closed.contains(e.to)) continue;
      const double candidate = g_current + e.length;
      auto it = g.find(e.to);
      if (it == g.end() || candidate < it->second) {
        g[e.to] = candidate;
        parent[e.to] = current;
        open.emplace(candidate + heuristic(e.to), e.to);
      }
    }
  }
  if (!parent.contains(destination)) {
    throw NavError(ErrorCode::kUnreachable,
                   "node " + std::to_string(destination) + " unreachable from " +
                       std::to_string(source));
  }
  std::vector<NodeId> path{destination};
  while (path.back() != source) path.push_back(parent.at(path.back()));
  std::reverse(path.begin(), path.end());
  return MakeRoute(graph, std::move(path));
}

std::string SerializeRoute(const Route& route) {
  nlohmann::json doc = {{"nodes", route.node_ids},
                        {"landmarks", route.landmark_ids},
                        {"length_m", route.total_length}};
  return doc.dump() + "\n";
}

Route ParseRoute(std::string_view json_text) {
  Route route;
  std::vector<NodeId> landmarks;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    route.node_ids = doc.at("nodes").get<std::vector<NodeId>>();
    landmarks = doc.at("landmarks").get<std::vector<NodeId>>();
    route.total_length = doc.at("length_m").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw NavError(ErrorCode::kParse, std::string("route parse error: ") + e.what());
  }
  if (route.node_ids.empty()) {
    throw NavError(ErrorCode::kParse, "route has no nodes");
  }
  if (landmarks.empty()) landmarks = {route.source(), route.destination()};
  route.SetLandmarks(std::move(landmarks));
  return route;
}

Route LoadRoute(const std::filesystem::path& path) { return ParseRoute(ReadFile(path)); }

void SaveRoute(const Route& route, const std::filesystem::path& path) {
  WriteFile(path, SerializeRoute(route));
}

}  // namespace navsim
