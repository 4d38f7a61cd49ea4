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

#include "navsim/eval.h"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "navsim/error.h"

namespace navsim {

EpisodeResult ResultFromLog(const TrajectoryLog& log) {
  return {log.outcome == Outcome::kSuccess, log.shortest_length, log.traveled,
          log.final_distance, log.steps};
}

double Spl(const std::vector<EpisodeResult>& results) {
  if (results.empty()) throw NavError(ErrorCode::kInvalidArgument, "SPL of no episodes");
  double total = 0.0;
  for (const EpisodeResult& r : results) {
    if (!r.success) continue;
    const double denom = std::max(r.traveled, r.shortest_length);
    // A zero-length route walked with zero travel is a perfect success.
    total += denom > 0.0 ? r.shortest_length / denom : 1.0;
  }
  return 100.0 * total / static_cast<double>(results.size());
}

MetricsReport Summarize(const std::vector<EpisodeResult>& results) {
  if (results.empty()) throw NavError(ErrorCode::kInvalidArgument, "no episodes to summarize");
  MetricsReport report;
  report.n = static_cast<int>(results.size());
  report.spl = Spl(results);
  double error = 0.0;
  double steps = 0.0;
  for (const EpisodeResult& r : results) {
    error += r.final_error;
    steps += r.steps;
  }
  report.nav_error = error / report.n;
  report.total_steps = steps / report.n;
  return report;
}

std::string SerializeReport(const MetricsReport& report) {
  const nlohmann::json doc = {{"spl", report.spl},
                              {"nav_error", report.nav_error},
                              {"total_steps", report.total_steps},
                              {"n", report.n}};
  return doc.dump(2) + "\n";
}

std::vector<EpisodeResult> LoadResults(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw NavError(ErrorCode::kNotFound, "log directory " + dir.string() + " not found");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<EpisodeResult> results;
  for (const auto& f : files) results.push_back(ResultFromLog(ParseLog(ReadFile(f))));
  return results;
}

std::vector<RouteEpisode> SubsampleDifficulty(const CityGraph& graph,
                                              const RouteEpisode& episode, int level) {
  constexpr int kPairs = 4;
  const Instruction& instr = episode.instruction;
  if (static_cast<int>(instr.pairs.size()) != kPairs) {
    throw NavError(ErrorCode::kInvalidArgument,
                   "difficulty sub-sampling needs a route with exactly 4 pairs, got " +
                       std::to_string(instr.pairs.size()));
  }
  if (static_cast<int>(episode.route.landmark_ids.size()) != kPairs + 1) {
    throw NavError(ErrorCode::kInvalidArgument,
                   "difficulty sub-sampling needs 4 landmarks after the source");
  }
  if (level < 1 || level > kPairs) {
    throw NavError(ErrorCode::kInvalidArgument, "difficulty level must be in 1..4");
  }
  const std::vector<size_t> idx = episode.route.LandmarkIndices();
  const auto& nodes = episode.route.node_ids;

  std::vector<RouteEpisode> windows;
  for (int start = 0; start + level <= kPairs; ++start) {
    std::vector<NodeId> sub_nodes(nodes.begin() + static_cast<std::ptrdiff_t>(idx[start]),
                                  nodes.begin() + static_cast<std::ptrdiff_t>(idx[start + level]) + 1);
    Route route = MakeRoute(graph, std::move(sub_nodes));
    route.SetLandmarks({episode.route.landmark_ids.begin() + start,
                        episode.route.landmark_ids.begin() + start + level + 1});

    // Re-index the tokens of the chosen pairs into a fresh token stream.
    Instruction sub;
    for (int p = start; p < start + level; ++p) {
      PairIndices pair;
      for (int i : instr.pairs[p].landmark) {
        pair.landmark.push_back(static_cast<int>(sub.tokens.size()));
        sub.tokens.push_back(instr.tokens[i]);
      }
      for (int i : instr.pairs[p].direction) {
        pair.direction.push_back(static_cast<int>(sub.tokens.size()));
        sub.tokens.push_back(instr.tokens[i]);
      }
      sub.pairs.push_back(std::move(pair));
      if (!instr.landmark_node_ids.empty()) {
        sub.landmark_node_ids.push_back(instr.landmark_node_ids[p]);
      }
    }
    for (const Token& t : sub.tokens) {
      if (!sub.text.empty()) sub.text += ' ';
      sub.text += t.text;
    }
    windows.push_back({std::move(route), std::move(sub)});
  }
  return windows;
}

}  // namespace navsim
