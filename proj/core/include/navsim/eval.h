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

#ifndef NAVSIM_EVAL_H_
#define NAVSIM_EVAL_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "navsim/citygraph.h"
#include "navsim/engine.h"
#include "navsim/instruction.h"
#include "navsim/routegen.h"

namespace navsim {

struct EpisodeResult {
  bool success = false;
  double shortest_length = 0.0;  // l
  double traveled = 0.0;         // p
  double final_error = 0.0;      // meters to the goal at the end
  int steps = 0;
};

struct MetricsReport {
  double spl = 0.0;          // percent
  double nav_error = 0.0;    // mean meters
  double total_steps = 0.0;  // mean over all episodes
  int n = 0;
};

EpisodeResult ResultFromLog(const TrajectoryLog& log);

// Success weighted by path length, in percent:
// 100 / N * sum S_i * l_i / max(p_i, l_i). Throws on empty input.
double Spl(const std::vector<EpisodeResult>& results);

// Navigation error and total steps are averaged over every episode,
// successful or not.
MetricsReport Summarize(const std::vector<EpisodeResult>& results);

std::string SerializeReport(const MetricsReport& report);

// Reads the summary record of every *.jsonl file under `dir`.
std::vector<EpisodeResult> LoadResults(const std::filesystem::path& dir);

// All contiguous windows of `level` consecutive landmark/direction pairs
// from a four-pair episode: 4, 3 and 2 windows for levels 1, 2 and 3.
// Each window starts at the preceding landmark (or the source).
// Throws kInvalidArgument if the episode does not have exactly four pairs or
// level is outside 1..4.
std::vector<RouteEpisode> SubsampleDifficulty(const CityGraph& graph,
                                              const RouteEpisode& episode, int level);

}  // namespace navsim

#endif  // NAVSIM_EVAL_H_
