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

#include "oracles/oracles.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

namespace navsim::oracle {
namespace {

double Rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

double LawOfCosinesDistance(const GeoPoint& a, const GeoPoint& b) {
  const double c = std::sin(Rad(a.lat)) * std::sin(Rad(b.lat)) +
                   std::cos(Rad(a.lat)) * std::cos(Rad(b.lat)) * std::cos(Rad(b.lon - a.lon));
  return kEarthRadius * std::acos(std::clamp(c, -1.0, 1.0));
}

double TangentBearing(const GeoPoint& a, const GeoPoint& b) {
  auto unit = [](const GeoPoint& p) {
    return std::array<double, 3>{std::cos(Rad(p.lat)) * std::cos(Rad(p.lon)),
                                 std::cos(Rad(p.lat)) * std::sin(Rad(p.lon)),
                                 std::sin(Rad(p.lat))};
  };
  const auto pa = unit(a);
  const auto pb = unit(b);
  const std::array<double, 3> east{-std::sin(Rad(a.lon)), std::cos(Rad(a.lon)), 0.0};
  const std::array<double, 3> north{-std::sin(Rad(a.lat)) * std::cos(Rad(a.lon)),
                                    -std::sin(Rad(a.lat)) * std::sin(Rad(a.lon)),
                                    std::cos(Rad(a.lat))};
  // Component of pb orthogonal to pa points along the great circle.
  double dot = 0.0;
  for (int i = 0; i < 3; ++i) dot += pa[i] * pb[i];
  double e = 0.0, n = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double t = pb[i] - dot * pa[i];
    e += t * east[i];
    n += t * north[i];
  }
  double deg = std::atan2(e, n) * 180.0 / std::numbers::pi;
  if (deg < 0.0) deg += 360.0;
  return deg;
}

double DijkstraLength(const CityGraph& graph, NodeId source, NodeId destination) {
  std::map<NodeId, double> dist;
  std::set<NodeId> done;
  dist[source] = 0.0;
  while (true) {
    NodeId u = 0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [id, d] : dist) {
      if (!done.contains(id) && d < best) {
        best = d;
        u = id;
      }
    }
    if (std::isinf(best)) return best;
    if (u == destination) return best;
    done.insert(u);
    for (const DirectedEdge& e : graph.OutEdges(u)) {
      auto it = dist.find(e.to);
      if (it == dist.end() || best + e.length < it->second) dist[e.to] = best + e.length;
    }
  }
}

double LandmarkObjective(const CityGraph& graph, const Route& route,
                         const std::vector<NodeId>& ids, const LandmarkInputs& in) {
  const auto& nodes = route.node_ids;
  std::vector<double> at(nodes.size(), 0.0);
  for (size_t i = 1; i < nodes.size(); ++i) {
    at[i] = at[i - 1] + graph.FindEdge(nodes[i - 1], nodes[i])->length;
  }
  const double total = at.back();

  std::vector<double> positions = {0.0, total};
  double prox = 0.0, rank = 0.0;
  for (NodeId id : ids) {
    const size_t i = std::find(nodes.begin(), nodes.end(), id) - nodes.begin();
    positions.push_back(at[i]);
    double d = total - at[i];
    for (size_t k = i; k < nodes.size(); ++k) {
      if (graph.OutEdges(nodes[k]).size() >= 3) {
        d = at[k] - at[i];
        break;
      }
    }
    prox += 1.0 / (d + in.sigma);
    rank += in.rank(id);
  }
  std::sort(positions.begin(), positions.end());
  double gap = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < positions.size(); ++i) gap = std::min(gap, positions[i] - positions[i - 1]);
  const double k = static_cast<double>(ids.size());
  return in.w1 * gap + in.w2 * prox / k + in.w3 * rank / k;
}

LandmarkChoice BruteForceLandmarks(const CityGraph& graph, const Route& route,
                                   const LandmarkInputs& in) {
  const std::vector<NodeId> interior(route.node_ids.begin() + 1, route.node_ids.end() - 1);
  const int n = static_cast<int>(interior.size());
  LandmarkChoice best;
  bool have = false;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != in.l) continue;
    std::vector<NodeId> ids;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) ids.push_back(interior[i]);
    }
    const double v = LandmarkObjective(graph, route, ids, in);
    std::sort(ids.begin(), ids.end());
    const double tol = 1e-12 * std::max({1.0, std::fabs(v), std::fabs(best.value)});
    if (!have || v > best.value + tol ||
        (std::fabs(v - best.value) <= tol && ids < best.sorted_ids)) {
      best = {v, ids};
      have = true;
    }
  }
  return best;
}

CityGraph RandomGeometricGraph(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lat(40.70, 40.73), lon(-74.02, -73.98);
  std::uniform_real_distribution<double> stretch(1.0, 1.5);
  CityGraph g;
  std::vector<GeoPoint> pts;
  for (int i = 0; i < n; ++i) {
    pts.push_back({lat(rng), lon(rng)});
    g.AddNode({i, pts.back(), std::nullopt});
  }
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> near;
    for (int j = 0; j < n; ++j) {
      if (j != i) near.push_back({LawOfCosinesDistance(pts[i], pts[j]), j});
    }
    std::sort(near.begin(), near.end());
    for (size_t k = 0; k < std::min<size_t>(3, near.size()); ++k) {
      const int j = near[k].second;
      if (!g.FindEdge(i, j)) g.AddEdge(i, j, std::nullopt, near[k].first * stretch(rng));
      if (!g.FindEdge(j, i)) g.AddEdge(j, i, std::nullopt, near[k].first * stretch(rng));
    }
  }
  return g;
}

LineInstance RandomLineInstance(std::uint64_t seed, int interior) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> step(20.0, 150.0), jitter(-20.0, 20.0);
  std::bernoulli_distribution spur(0.35);
  LineInstance out;
  GeoPoint p{40.75, -73.99};
  std::vector<NodeId> nodes;
  NodeId next_id = 0;
  // Shuffled ids so route order and id order differ.
  std::vector<NodeId> ids(static_cast<size_t>(interior + 2));
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  next_id = interior + 2;
  for (int i = 0; i < interior + 2; ++i) {
    if (i > 0) p = Destination(p, 90.0 + jitter(rng), step(rng));
    out.graph.AddNode({ids[i], p, std::nullopt});
    nodes.push_back(ids[i]);
    if (i > 0) out.graph.AddRoad(nodes[i - 1], nodes[i]);
  }
  for (int i = 1; i <= interior; ++i) {
    if (!spur(rng)) continue;
    const GeoPoint q = Destination(out.graph.geo(nodes[i]), 0.0, 60.0);
    out.graph.AddNode({next_id, q, std::nullopt});
    out.graph.AddRoad(nodes[i], next_id);
    ++next_id;
  }
  out.route = MakeRoute(out.graph, nodes);
  return out;
}

CityGraph GridGraph(int rows, int cols, double spacing, const GeoPoint& origin) {
  CityGraph g;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const GeoPoint row_start = Destination(origin, 180.0, r * spacing);
      g.AddNode({r * cols + c, Destination(row_start, 90.0, c * spacing), std::nullopt});
    }
  }
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const NodeId id = r * cols + c;
      if (c + 1 < cols) g.AddRoad(id, id + 1);
      if (r + 1 < rows) g.AddRoad(id, id + cols);
    }
  }
  return g;
}

}  // namespace navsim::oracle
