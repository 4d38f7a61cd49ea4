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

#include "navsim/dataset.h"

#include <bit>
#include <cstring>

#include <nlohmann/json.hpp>

#include "navsim/error.h"

namespace navsim {
namespace {

static_assert(std::endian::native == std::endian::little,
              "feature tables are stored little-endian");

bool IsDatasetDir(const std::filesystem::path& dir) {
  return std::filesystem::is_regular_file(dir / "dataset.json");
}

}  // namespace

EpisodeSpec Dataset::Spec(const std::string& route_id) const {
  auto it = episodes.find(route_id);
  if (it == episodes.end()) {
    throw NavError(ErrorCode::kNotFound, "unknown route '" + route_id + "'");
  }
  return MakeEpisodeSpec(route_id, it->second);
}

void SaveFeatureTable(const FeatureTable& features, const std::filesystem::path& bin_path,
                      const std::filesystem::path& index_path) {
  size_t dim = features.empty() ? 0 : features.begin()->second.size();
  std::string blob;
  std::vector<NodeId> ids;
  for (const auto& [id, row] : features) {
    if (row.size() != dim) {
      throw NavError(ErrorCode::kInvalidArgument, "feature rows differ in dimension");
    }
    ids.push_back(id);
    for (double x : row) {
      const float f = static_cast<float>(x);
      char bytes[sizeof(float)];
      std::memcpy(bytes, &f, sizeof f);
      blob.append(bytes, sizeof bytes);
    }
  }
  WriteFile(bin_path, blob);
  const nlohmann::json index = {{"dim", dim}, {"node_ids", ids}};
  WriteFile(index_path, index.dump() + "\n");
}

FeatureTable LoadFeatureTable(const std::filesystem::path& bin_path,
                              const std::filesystem::path& index_path) {
  size_t dim = 0;
  std::vector<NodeId> ids;
  try {
    const auto index = nlohmann::json::parse(ReadFile(index_path));
    dim = index.at("dim").get<size_t>();
    ids = index.at("node_ids").get<std::vector<NodeId>>();
  } catch (const nlohmann::json::exception& e) {
    throw NavError(ErrorCode::kParse, std::string("feature index parse error: ") + e.what());
  }
  const std::string blob = ReadFile(bin_path);
  if (blob.size() != ids.size() * dim * sizeof(float)) {
    throw NavError(ErrorCode::kParse, "feature table size does not match its index");
  }
  FeatureTable table;
  const char* cursor = blob.data();
  for (NodeId id : ids) {
    std::vector<double> row(dim);
    for (size_t i = 0; i < dim; ++i) {
      float f;
      std::memcpy(&f, cursor, sizeof f);
      cursor += sizeof f;
      row[i] = f;
    }
    table[id] = std::move(row);
  }
  return table;
}

void ExportDataset(const World& world, const std::vector<SynthEpisode>& episodes,
                   const std::string& id, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "routes");
  std::filesystem::create_directories(dir / "instructions");
  SaveGraph(world.graph, dir / "graph.json");
  SaveFeatureTable(world.features, dir / "features.bin", dir / "features.index.json");

  nlohmann::json words = nlohmann::json::object();
  for (const auto& [word, vec] : world.embedder.lexicon()) words[word] = vec;
  const nlohmann::json lexicon = {{"dim", world.embedder.dim()}, {"words", std::move(words)}};
  WriteFile(dir / "lexicon.json", lexicon.dump() + "\n");

  std::vector<std::string> route_ids;
  for (const SynthEpisode& e : episodes) {
    SaveRoute(e.episode.route, dir / "routes" / (e.id + ".json"));
    SaveInstruction(e.episode.instruction, dir / "instructions" / (e.id + ".json"));
    route_ids.push_back(e.id);
  }
  const nlohmann::json manifest = {
      {"id", id}, {"feature_dim", world.spec.feature_dim}, {"routes", route_ids}};
  WriteFile(dir / "dataset.json", manifest.dump(2) + "\n");
}

Dataset LoadDataset(const std::filesystem::path& dir) {
  Dataset ds;
  std::vector<std::string> route_ids;
  try {
    const auto manifest = nlohmann::json::parse(ReadFile(dir / "dataset.json"));
    ds.id = manifest.at("id").get<std::string>();
    route_ids = manifest.at("routes").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw NavError(ErrorCode::kParse, std::string("dataset manifest error: ") + e.what());
  }
  ds.graph = LoadGraph(dir / "graph.json");
  if (std::filesystem::exists(dir / "features.bin")) {
    ds.features = LoadFeatureTable(dir / "features.bin", dir / "features.index.json");
  }
  if (std::filesystem::exists(dir / "lexicon.json")) {
    try {
      const auto lex = nlohmann::json::parse(ReadFile(dir / "lexicon.json"));
      std::map<std::string, std::vector<double>> words;
      for (const auto& [word, vec] : lex.at("words").items()) {
        words[word] = vec.get<std::vector<double>>();
      }
      ds.embedder = SegmentEmbedder(lex.at("dim").get<int>(), std::move(words));
    } catch (const nlohmann::json::exception& e) {
      throw NavError(ErrorCode::kParse, std::string("lexicon parse error: ") + e.what());
    }
  }
  for (const std::string& rid : route_ids) {
    RouteEpisode ep{LoadRoute(dir / "routes" / (rid + ".json")),
                    LoadInstruction(dir / "instructions" / (rid + ".json"))};
    if (auto problems = ValidateRoute(ds.graph, ep.route); !problems.empty()) {
      throw NavError(ErrorCode::kInvariantViolation,
                     "route " + rid + ": " + problems.front());
    }
    ds.episodes.emplace(rid, std::move(ep));
  }
  return ds;
}

std::vector<std::unique_ptr<Dataset>> LoadDatasets(const std::filesystem::path& root) {
  std::vector<std::unique_ptr<Dataset>> out;
  if (IsDatasetDir(root)) {
    out.push_back(std::make_unique<Dataset>(LoadDataset(root)));
    return out;
  }
  if (!std::filesystem::is_directory(root)) {
    throw NavError(ErrorCode::kNotFound, "data directory " + root.string() + " not found");
  }
  std::vector<std::filesystem::path> dirs;
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (entry.is_directory() && IsDatasetDir(entry.path())) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto& d : dirs) out.push_back(std::make_unique<Dataset>(LoadDataset(d)));
  return out;
}

}  // namespace navsim
