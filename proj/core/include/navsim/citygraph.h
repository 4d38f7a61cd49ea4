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

#ifndef NAVSIM_CITYGRAPH_H_
#define NAVSIM_CITYGRAPH_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace navsim {

using NodeId = std::int64_t;

inline constexpr double kEarthRadiusMeters = 6371000.0;

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180)

  bool operator==(const GeoPoint&) const = default;
};

bool IsValid(const GeoPoint& p);

// Great-circle distance on the spherical Earth (haversine).
double GeodesicDistance(const GeoPoint& a, const GeoPoint& b);

// Forward azimuth from `a` to `b` in [0, 360), 0 = north, 90 = east.
// Throws NavError(kInvalidArgument) when the points coincide.
double InitialBearing(const GeoPoint& a, const GeoPoint& b);

// Point reached by travelling `meters` from `origin` along `bearing_deg`.
GeoPoint Destination(const GeoPoint& origin, double bearing_deg, double meters);

// Smallest absolute difference between two compass angles, in [0, 180].
double AngularDistance(double a_deg, double b_deg);

// Wraps an angle into [0, 360).
double WrapDegrees(double deg);

struct GraphNode {
  NodeId id = 0;
  GeoPoint geo;
  std::optional<std::string> panorama_ref;
};

struct DirectedEdge {
  NodeId from = 0;
  NodeId to = 0;
  double bearing = 0.0;  // degrees in [0, 360)
  double length = 0.0;   // meters, > 0
};

// Directed road graph. Nodes and adjacency are kept ordered by id so that
// iteration, serialization and tie-breaking are deterministic.
class CityGraph {
 public:
  // Adds a node; throws kInvalidArgument on duplicate id or invalid geo.
  void AddNode(GraphNode node);

  // Adds an edge. Missing bearing/length are derived from geometry.
  // Endpoints must already exist.
  void AddEdge(NodeId from, NodeId to, std::optional<double> bearing = {},
               std::optional<double> length = {});

  // Convenience for undirected source data: two directed edges.
  void AddRoad(NodeId a, NodeId b);

  bool HasNode(NodeId id) const { return nodes_.contains(id); }
  const GraphNode& node(NodeId id) const;
  const GeoPoint& geo(NodeId id) const { return node(id).geo; }

  // Outgoing edges sorted by target id.
  const std::vector<DirectedEdge>& OutEdges(NodeId id) const;
  const DirectedEdge* FindEdge(NodeId from, NodeId to) const;

  const std::map<NodeId, GraphNode>& nodes() const { return nodes_; }
  std::vector<NodeId> NodeIds() const;
  size_t num_nodes() const { return nodes_.size(); }
  size_t num_edges() const { return num_edges_; }

  // Returns one human-readable line per invariant violation; empty if the
  // graph is valid.
  std::vector<std::string> Validate() const;

 private:
  std::map<NodeId, GraphNode> nodes_;
  std::map<NodeId, std::vector<DirectedEdge>> adjacency_;
  size_t num_edges_ = 0;
};

// Parses the JSON graph schema. Throws kParse on malformed input and
// kInvariantViolation (message lists offending ids) on invalid graphs.
CityGraph ParseGraph(std::string_view json_text);
CityGraph LoadGraph(const std::filesystem::path& path);

// Canonical form: nodes sorted by id, edges sorted by (from, to).
std::string SerializeGraph(const CityGraph& graph);
void SaveGraph(const CityGraph& graph, const std::filesystem::path& path);

// Reads a whole file; throws kNotFound if it cannot be opened.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace navsim

#endif  // NAVSIM_CITYGRAPH_H_
