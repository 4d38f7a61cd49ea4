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

// Command-line front end: route generation, landmark mining, synthetic
// dataset export, batch episodes, evaluation and the HTTP service.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "navsim/citygraph.h"
#include "navsim/dataset.h"
#include "navsim/engine.h"
#include "navsim/error.h"
#include "navsim/eval.h"
#include "navsim/landmarks.h"
#include "navsim/routegen.h"
#include "navsim/service.h"
#include "navsim/synthworld.h"

namespace fs = std::filesystem;

namespace {

struct RoutegenArgs {
  std::string graph;
  int k = 5;
  std::uint64_t seed = 0;
  int count = 1;
  int min_edges = 1;
  std::string out;
};

int RunRoutegen(const RoutegenArgs& a) {
  const navsim::CityGraph graph = navsim::LoadGraph(a.graph);
  const navsim::ClusterAssignment clusters = navsim::ClusterNodes(graph, a.k, a.seed);
  std::mt19937_64 rng(a.seed);
  int written = 0;
  const int max_attempts = 100 * a.count;
  for (int attempt = 0; attempt < max_attempts && written < a.count; ++attempt) {
    const auto [src, dst] = navsim::SampleEndpoints(clusters, rng());
    navsim::Route route;
    try {
      route = navsim::ShortestRoute(graph, src, dst);
    } catch (const navsim::NavError& e) {
      if (e.code() == navsim::ErrorCode::kUnreachable) continue;
      throw;
    }
    if (static_cast<int>(route.node_ids.size()) - 1 < a.min_edges) continue;
    char name[32];
    std::snprintf(name, sizeof name, "route_%04d.json", written);
    navsim::SaveRoute(route, fs::path(a.out) / name);
    ++written;
  }
  std::cout << "wrote " << written << " routes to " << a.out << "\n";
  return written == a.count ? 0 : 2;
}

struct LandmarksArgs {
  std::string graph;
  std::string route;
  std::string out;
  navsim::ObjectiveWeights weights;
  bool exact = false;
  std::uint64_t rank_salt = 0;
};

int RunLandmarks(const LandmarksArgs& a) {
  a.weights.Check();
  const navsim::CityGraph graph = navsim::LoadGraph(a.graph);
  const navsim::Route route = navsim::LoadRoute(a.route);
  if (auto problems = navsim::ValidateRoute(graph, route); !problems.empty()) {
    throw navsim::NavError(navsim::ErrorCode::kInvariantViolation, problems.front());
  }
  const navsim::HashRankScorer scorer(a.rank_salt);
  const auto intersections = navsim::Intersections(graph);
  const navsim::Selection sel =
      a.exact ? navsim::SelectExact(graph, route, a.weights, scorer, intersections)
              : navsim::SelectGreedy(graph, route, a.weights, scorer, intersections);
  navsim::SaveRoute(navsim::WithLandmarks(route, sel), a.out.empty() ? a.route : a.out);
  std::cout << (a.exact ? "exact" : "greedy") << " objective " << sel.objective_value
            << " landmarks";
  for (navsim::NodeId id : sel.node_ids) std::cout << " " << id;
  std::cout << "\n";
  return 0;
}

struct SynthArgs {
  std::string out;
  std::string id = "synth";
  navsim::WorldSpec world;
  int per_level = 10;
};

int RunSynth(const SynthArgs& a) {
  const navsim::World world = navsim::GenerateWorld(a.world);
  std::vector<navsim::SynthEpisode> episodes;
  for (int level = 1; level <= 4; ++level) {
    for (int i = 0; i < a.per_level; ++i) {
      episodes.push_back(navsim::GenerateEpisode(
          world, level, a.world.seed * 1000003ULL + static_cast<std::uint64_t>(level * 100000 + i)));
    }
  }
  navsim::ExportDataset(world, episodes, a.id, a.out);
  std::cout << "exported " << episodes.size() << " episodes to " << a.out << "\n";
  return 0;
}

struct RunArgs {
  std::string data;
  std::string out;
  std::string policy = "oracle";
  std::string matcher = "oracle";
  std::uint64_t seed = 0;
  double threshold = 0.5;
  int min_gap = 1;
};

int RunEpisodes(const RunArgs& a) {
  const navsim::EpisodeConfig config;
  int n = 0;
  for (const auto& ds : navsim::LoadDatasets(a.data)) {
    const navsim::Environment env = ds->environment();
    for (const auto& [route_id, ep] : ds->episodes) {
      navsim::AgentBundle bundle = navsim::MakeBundle(a.policy, a.matcher, a.threshold, a.min_gap);
      const navsim::TrajectoryLog log =
          navsim::RunEpisode(env, ds->Spec(route_id), bundle, config, a.seed);
      navsim::WriteFile(fs::path(a.out) / ds->id / (route_id + ".jsonl"), navsim::SerializeLog(log));
      ++n;
    }
  }
  std::cout << "ran " << n << " episodes into " << a.out << "\n";
  return 0;
}

int RunEval(const std::string& logs, const std::string& out) {
  const navsim::MetricsReport report = navsim::Summarize(navsim::LoadResults(logs));
  const std::string text = navsim::SerializeReport(report);
  if (out.empty()) {
    std::cout << text;
  } else {
    navsim::WriteFile(out, text);
  }
  std::fprintf(stderr, "n=%d spl=%.3f nav_error=%.3f total_steps=%.3f\n", report.n, report.spl,
               report.nav_error, report.total_steps);
  return 0;
}

struct ServeArgs {
  std::string data;
  std::string host = "127.0.0.1";
  int port = 0;
  std::string log_dir;
};

int RunServe(const ServeArgs& a) {
  navsim::ServiceOptions options;
  if (!a.log_dir.empty()) options.log_dir = a.log_dir;
  navsim::NavService service(navsim::LoadDatasets(a.data), std::move(options));
  navsim::HttpServer server(service);
  const int port = server.Bind(a.host, a.port);
  if (port < 0) {
    std::cerr << "cannot bind " << a.host << ":" << a.port << "\n";
    return 1;
  }
  std::cout << "listening on http://" << a.host << ":" << port << std::endl;
  server.Run();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"navsim: vision-and-language navigation simulator"};
  app.require_subcommand(1);

  RoutegenArgs rg;
  auto* routegen = app.add_subcommand("routegen", "Sample routes between k-means clusters");
  routegen->add_option("--graph", rg.graph, "Graph JSON")->required();
  routegen->add_option("--k", rg.k, "Number of clusters");
  routegen->add_option("--seed", rg.seed, "Random seed");
  routegen->add_option("--count", rg.count, "Routes to write");
  routegen->add_option("--min-edges", rg.min_edges, "Shortest accepted route, in edges");
  routegen->add_option("--out", rg.out, "Output directory")->required();

  LandmarksArgs lm;
  auto* landmarks = app.add_subcommand("landmarks", "Mine landmarks along a route");
  landmarks->add_option("--graph", lm.graph, "Graph JSON the route lives in")->required();
  landmarks->add_option("--route", lm.route, "Route JSON (updated in place)")->required();
  landmarks->add_option("--out", lm.out, "Write here instead of updating the route");
  landmarks->add_option("--w1", lm.weights.w1, "Spacing weight");
  landmarks->add_option("--w2", lm.weights.w2, "Intersection proximity weight");
  landmarks->add_option("--w3", lm.weights.w3, "Rank score weight");
  landmarks->add_option("--sigma", lm.weights.sigma, "Proximity offset in meters");
  landmarks->add_option("--l", lm.weights.l, "Intermediate landmarks");
  landmarks->add_flag("--exact", lm.exact, "Exhaustive search instead of greedy");
  landmarks->add_option("--rank-salt", lm.rank_salt, "Salt of the hashed rank scorer");

  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "Export a synthetic grid-world dataset");
  synth->add_option("--out", sy.out, "Dataset directory")->required();
  synth->add_option("--id", sy.id, "Dataset id");
  synth->add_option("--seed", sy.world.seed, "World seed");
  synth->add_option("--rows", sy.world.rows, "Grid rows");
  synth->add_option("--cols", sy.world.cols, "Grid columns");
  synth->add_option("--per-level", sy.per_level, "Episodes per difficulty level");

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Run every dataset route and write trajectory logs");
  run->add_option("--data", ra.data, "Dataset directory or parent directory")->required();
  run->add_option("--out", ra.out, "Log directory")->required();
  run->add_option("--policy", ra.policy, "Policy key");
  run->add_option("--matcher", ra.matcher, "Matcher key");
  run->add_option("--seed", ra.seed, "Policy seed");
  run->add_option("--threshold", ra.threshold, "Indicator threshold");
  run->add_option("--min-gap", ra.min_gap, "Steps between indicator firings");

  std::string eval_logs, eval_out;
  auto* eval = app.add_subcommand("eval", "Summarize trajectory logs");
  eval->add_option("--logs", eval_logs, "Directory of *.jsonl logs")->required();
  eval->add_option("--out", eval_out, "Report JSON (stdout when omitted)");

  ServeArgs sv;
  sv.port = navsim::DefaultPort();
  auto* serve = app.add_subcommand("serve", "Serve the session HTTP API");
  serve->add_option("--data", sv.data, "Dataset directory or parent directory")->required();
  serve->add_option("--port", sv.port, "Port (default NAVSIM_PORT or 8080)");
  serve->add_option("--host", sv.host, "Bind address");
  serve->add_option("--log-dir", sv.log_dir, "Where finished trajectories are flushed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*routegen) return RunRoutegen(rg);
    if (*landmarks) return RunLandmarks(lm);
    if (*synth) return RunSynth(sy);
    if (*run) return RunEpisodes(ra);
    if (*eval) return RunEval(eval_logs, eval_out);
    if (*serve) return RunServe(sv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
