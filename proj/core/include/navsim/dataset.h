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

#ifndef NAVSIM_DATASET_H_
#define NAVSIM_DATASET_H_

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "navsim/citygraph.h"
#include "navsim/engine.h"
#include "navsim/instruction.h"
#include "navsim/matching.h"
#include "navsim/synthworld.h"

namespace navsim {

// On-disk layout of a dataset directory:
//   dataset.json              {"id", "feature_dim", "routes":[route ids]}
//   graph.json                graph schema
//   routes/<id>.json          route schema
//   instructions/<id>.json    instruction schema
//   features.bin              float32 little-endian rows, one per node
//   features.index.json       {"dim", "node_ids":[...]} row order of features.bin
//   lexicon.json              {"dim", "words":{word:[...]}}
struct Dataset {
  std::string id;
  CityGraph graph;
  FeatureTable features;
  SegmentEmbedder embedder;
  std::map<std::string, RouteEpisode> episodes;

  Environment environment() const { return {&graph, &features, embedder}; }
  EpisodeSpec Spec(const std::string& route_id) const;
};

void SaveFeatureTable(const FeatureTable& features, const std::filesystem::path& bin_path,
                      const std::filesystem::path& index_path);
FeatureTable LoadFeatureTable(const std::filesystem::path& bin_path,
                              const std::filesystem::path& index_path);

void ExportDataset(const World& world, const std::vector<SynthEpisode>& episodes,
                   const std::string& id, const std::filesystem::path& dir);

// Loads one dataset directory. Every route is validated against the graph.
Dataset LoadDataset(const std::filesystem::path& dir);

// `root` is either a dataset directory or a directory of them.
std::vector<std::unique_ptr<Dataset>> LoadDatasets(const std::filesystem::path& root);

}  // namespace navsim

#endif  // NAVSIM_DATASET_H_
