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

#include "navsim/citygraph.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "navsim/error.h"

namespace navsim {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kBearingToleranceDeg = 2.0;

std::string EdgeName(NodeId from, NodeId to) {
  std::ostringstream os;
  os << "edge " << from << "->" << to;
  return os.str();
}

}  // namespace

bool IsValid(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 &&
         p.lat <= 90.0 && p.lon >= -180.0 && p.lon < 180.0;
}

double GeodesicDistance(const GeoPoint& a, const GeoPoint& b) {
  const double lat1 = a.lat * kDegToRad;
  const double lat2 = b.lat * kDegToRad;
  const double dlat = lat2 - lat1;
  const double dlon = (b.lon - a.lon) * kDegToRad;
  const double s_lat = std::sin(dlat / 2.0);
  const double s_lon = std::sin(dlon / 2.0);
  double h = s_lat * s_lat + std::cos(lat1) * std::cos(lat2) * s_lon * s_lon;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusMeters * std::asin(std::sqrt(h));
}

double InitialBearing(const GeoPoint& a, const GeoPoint& b) {
  if (a == b) {
    throw NavError(ErrorCode::kInvalidArgument,
                   "initial bearing undefined for coincident points");
  }
  const double lat1 = a.lat * kDegToRad;
  const double lat2 = b.lat * kDegToRad;
  const double dlon = (b.lon - a.lon) * kDegToRad;
  const double y = std::sin(dlon) * std::cos(lat2);
  const double x = std::cos(lat1) * std::sin(lat2) -
                   std::sin(lat1) * std::cos(lat2) * std::cos(dlon);
  return WrapDegrees(std::atan2(y, x) * kRadToDeg);
}

GeoPoint Destination(const GeoPoint& origin, double bearing_deg,
                     double meters) {
  const double delta = meters / kEarthRadiusMeters;
  const double theta = bearing_deg * kDegToRad;
  const double lat1 = origin.lat * kDegToRad;
  const double lon1 = origin.lon * kDegToRad;
  const double lat2 = std::asin(std::sin(lat1) * std::cos(delta) +
                                std::cos(lat1) * std::sin(delta) *
                                    std::cos(theta));
  const double lon2 =
      lon1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(lat1),
                        std::cos(delta) - std::sin(lat1) * std::sin(lat2));
  double lon_deg = std::fmod(lon2 * kRadToDeg + 540.0, 360.0) - 180.0;
  if (lon_deg >= 180.0) lon_deg -= 360.0;
  return {lat2 * kRadToDeg, lon_deg};
}

double WrapDegrees(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w < 0.0) w += 360.0;
  // fmod of a tiny negative value can round up to exactly 360.
  if (w >= 360.0) w = 0.0;
  return w;
}

double AngularDistance(double a_deg, double b_deg) {
  const double d = std::fabs(WrapDegrees(a_deg) - WrapDegrees(b_deg));
  return std::min(d, 360.0 - d);
}

void CityGraph::AddNode(GraphNode node) {
  if (!IsValid(node.geo)) {
    throw NavError(ErrorCode::kInvalidArgument,
                   "node " + std::to_string(node.id) + " has invalid coordinates");
  }
  const NodeId id = node.id;
  auto [it, inserted] = nodes_.emplace(id, std::move(node));
  if (!inserted) {
    throw NavError(ErrorCode::kInvalidArgument,
                   "duplicate node id " + std::to_string(id));
  }
  adjacency_[id];
}

void CityGraph::AddEdge(NodeId from, NodeId to, std::optional<double> bearing,
                        std::optional<double> length) {
  if (!HasNode(from) || !HasNode(to)) {
    throw NavError(ErrorCode::kInvariantViolation,
                   EdgeName(from, to) + " references a missing node");
  }
  if (from == to) {
    throw NavError(ErrorCode::kInvariantViolation,
                   EdgeName(from, to) + " is a self-loop");
  }
  DirectedEdge edge{from, to, 0.0, 0.0};
  edge.bearing = bearing ? *bearing : InitialBearing(geo(from), geo(to));
  edge.length = length ? *length : GeodesicDistance(geo(from), geo(to));
  auto& out = adjacency_[from];
  auto pos = std::lower_bound(
      out.begin(), out.end(), to,
      [](const DirectedEdge& e, NodeId target) { return e.to < target; });
  if (pos != out.end() && pos->to == to) {
    throw NavError(ErrorCode::kInvariantViolation,
                   EdgeName(from, to) + " is duplicated");
  }
  out.insert(pos, edge);
  ++num_edges_;
}

void CityGraph::AddRoad(NodeId a, NodeId b) {
  AddEdge(a, b);
  AddEdge(b, a);
}

const GraphNode& CityGraph::node(NodeId id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) {
    throw NavError(ErrorCode::kNotFound, "unknown node " + std::to_string(id));
  }
  return it->second;
}

const std::vector<DirectedEdge>& CityGraph::OutEdges(NodeId id) const {
  auto it = adjacency_.find(id);
  if (it == adjacency_.end()) {
    throw NavError(ErrorCode::kNotFound, "unknown node " + std::to_string(id));
  }
  return it->second;
}

const DirectedEdge* CityGraph::FindEdge(NodeId from, NodeId to) const {
  auto it = adjacency_.find(from);
  if (it == adjacency_.end()) return nullptr;
  auto pos = std::lower_bound(
      it->second.begin(), it->second.end(), to,
      [](const DirectedEdge& e, NodeId target) { return e.to < target; });
  if (pos == it->second.end() || pos->to != to) return nullptr;
  return &*pos;
}

std::vector<NodeId> CityGraph::NodeIds() const {
  std::vector<NodeId> ids;
  ids.reserve(nodes_.size());
  for (const auto& [id, n] : nodes_) ids.push_back(id);
  return ids;
}

std::vector<std::string> CityGraph::Validate() const {
  std::vector<std::string> violations;
  for (const auto& [id, n] : nodes_) {
    if (!IsValid(n.geo)) {
      violations.push_back("node " + std::to_string(id) +
                           " has invalid coordinates");
    }
  }
  for (const auto& [from, edges] : adjacency_) {
    for (const DirectedEdge& e : edges) {
      const std::string name = EdgeName(e.from, e.to);
      if (!HasNode(e.from) || !HasNode(e.to)) {
        violations.push_back(name + " references a missing node");
        continue;
      }
      if (e.from == e.to) {
        violations.push_back(name + " is a self-loop");
        continue;
      }
      if (!(e.length > 0.0) || !std::isfinite(e.length)) {
        violations.push_back(name + " has non-positive length");
      }
      if (!(e.bearing >= 0.0 && e.bearing < 360.0)) {
        violations.push_back(name + " has bearing outside [0, 360)");
      } else if (geo(e.from) != geo(e.to)) {
        const double expected = InitialBearing(geo(e.from), geo(e.to));
        if (AngularDistance(expected, e.bearing) > kBearingToleranceDeg) {
          violations.push_back(name + " bearing disagrees with geometry");
        }
      }
    }
  }
  return violations;
}

CityGraph ParseGraph(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw NavError(ErrorCode::kParse, std::string("graph parse error: ") + e.what());
  }

  CityGraph graph;
  std::vector<std::string> violations;
  try {
    for (const auto& jn : doc.at("nodes")) {
      GraphNode node;
      node.id = jn.at("id").get<NodeId>();
      node.geo = {jn.at("lat").get<double>(), jn.at("lon").get<double>()};
      if (auto it = jn.find("pano"); it != jn.end() && !it->is_null()) {
        node.panorama_ref = it->get<std::string>();
      }
      if (!IsValid(node.geo)) {
        violations.push_back("node " + std::to_string(node.id) +
                             " has invalid coordinates");
        continue;
      }
      if (graph.HasNode(node.id)) {
        violations.push_back("duplicate node id " + std::to_string(node.id));
        continue;
      }
      graph.AddNode(std::move(node));
    }
    for (const auto& je : doc.at("edges")) {
      const NodeId from = je.at("from").get<NodeId>();
      const NodeId to = je.at("to").get<NodeId>();
      std::optional<double> bearing;
      std::optional<double> length;
      if (auto it = je.find("bearing"); it != je.end() && !it->is_null()) {
        bearing = it->get<double>();
      }
      if (auto it = je.find("length"); it != je.end() && !it->is_null()) {
        length = it->get<double>();
      }
      try {
        graph.AddEdge(from, to, bearing, length);
      } catch (const NavError& e) {
        violations.push_back(e.what());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw NavError(ErrorCode::kParse, std::string("graph schema error: ") + e.what());
  }

  for (auto& v : graph.Validate()) violations.push_back(std::move(v));
  if (!violations.empty()) {
    std::string message = "graph invariant violations:";
    for (const auto& v : violations) message += "\n  " + v;
    throw NavError(ErrorCode::kInvariantViolation, message);
  }
  return graph;
}

CityGraph LoadGraph(const std::filesystem::path& path) {
  return ParseGraph(ReadFile(path));
}

std::string SerializeGraph(const CityGraph& graph) {
  nlohmann::json nodes = nlohmann::json::array();
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [id, n] : graph.nodes()) {
    nlohmann::json jn = {{"id", id}, {"lat", n.geo.lat}, {"lon", n.geo.lon}};
    jn["pano"] = n.panorama_ref ? nlohmann::json(*n.panorama_ref) : nlohmann::json(nullptr);
    nodes.push_back(std::move(jn));
  }
  for (const auto& [id, n] : graph.nodes()) {
    for (const DirectedEdge& e : graph.OutEdges(id)) {
      edges.push_back({{"from", e.from},
                       {"to", e.to},
                       {"bearing", e.bearing},
                       {"length", e.length}});
    }
  }
  nlohmann::json doc = {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
  return doc.dump(1) + "\n";
}

void SaveGraph(const CityGraph& graph, const std::filesystem::path& path) {
  WriteFile(path, SerializeGraph(graph));
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw NavError(ErrorCode::kNotFound, "cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw NavError(ErrorCode::kNotFound, "cannot write " + path.string());
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

}  // namespace navsim
