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

#include "navsim/instruction.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "navsim/error.h"

namespace navsim {
namespace {

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Pairs maximal runs of equal class; indices refer to `classes`.
std::vector<PairIndices> PairRuns(const std::vector<TokenClass>& classes) {
  std::vector<PairIndices> pairs;
  bool awaiting_direction = false;
  size_t i = 0;
  while (i < classes.size()) {
    const TokenClass cls = classes[i];
    std::vector<int> run;
    while (i < classes.size() && classes[i] == cls) run.push_back(static_cast<int>(i++));
    if (cls == TokenClass::kLandmark) {
      pairs.push_back({std::move(run), {}});
      awaiting_direction = true;
    } else if (awaiting_direction) {
      pairs.back().direction = std::move(run);
      awaiting_direction = false;
    } else {
      pairs.push_back({{}, std::move(run)});
    }
  }
  return pairs;
}

std::string JoinText(const std::vector<Token>& tokens) {
  std::string text;
  for (const Token& t : tokens) {
    if (!text.empty()) text += ' ';
    text += t.text;
  }
  return text;
}

}  // namespace

SegmentedInstruction GroupTokens(const std::vector<Token>& tokens) {
  if (tokens.empty()) {
    throw NavError(ErrorCode::kInvalidArgument, "cannot segment an empty instruction");
  }
  std::vector<TokenClass> classes;
  for (const Token& t : tokens) classes.push_back(t.cls);
  SegmentedInstruction out;
  out.raw_text = JoinText(tokens);
  for (const PairIndices& p : PairRuns(classes)) {
    SegmentPair pair;
    for (int i : p.landmark) pair.landmark_tokens.push_back(tokens[i]);
    for (int i : p.direction) pair.direction_tokens.push_back(tokens[i]);
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

std::vector<Token> Flatten(const SegmentedInstruction& instruction) {
  std::vector<Token> out;
  for (const SegmentPair& p : instruction.pairs) {
    out.insert(out.end(), p.landmark_tokens.begin(), p.landmark_tokens.end());
    out.insert(out.end(), p.direction_tokens.begin(), p.direction_tokens.end());
  }
  return out;
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

std::vector<Token> ClassifyTokens(const std::vector<std::string>& words) {
  static const std::set<std::string> kDirectionWords = {
      "go",     "turn",     "left",  "right", "straight", "ahead",  "walk",
      "head",   "continue", "keep",  "for",   "block",    "blocks", "meters",
      "metres", "north",    "south", "east",  "west",     "back",   "around",
      "then",   "take",     "first", "second", "third",   "one",    "two",
      "three",  "four",     "five",  "until", "move",     "proceed", "forward"};
  std::vector<Token> tokens;
  for (const std::string& w : words) {
    const std::string lw = Lower(w);
    const bool numeric = !lw.empty() && std::all_of(lw.begin(), lw.end(), [](char c) {
      return std::isdigit(static_cast<unsigned char>(c));
    });
    const bool direction = numeric || kDirectionWords.contains(lw);
    tokens.push_back({w, direction ? TokenClass::kDirection : TokenClass::kLandmark});
  }
  return tokens;
}

SegmentEmbedder::SegmentEmbedder(int dim,
                                 std::map<std::string, std::vector<double>> lexicon)
    : dim_(dim), lexicon_(std::move(lexicon)) {
  for (const auto& [word, vec] : lexicon_) {
    if (static_cast<int>(vec.size()) != dim_) {
      throw NavError(ErrorCode::kInvalidArgument,
                     "lexicon vector for '" + word + "' has wrong dimension");
    }
  }
}

SegmentFeature SegmentEmbedder::EmbedWords(const std::vector<std::string>& words) const {
  if (dim_ < 1) throw NavError(ErrorCode::kInvalidArgument, "embedding dimension must be >= 1");
  SegmentFeature v(static_cast<size_t>(dim_), 0.0);
  for (const std::string& raw : words) {
    const std::string w = Lower(raw);
    if (auto it = lexicon_.find(w); it != lexicon_.end()) {
      for (int i = 0; i < dim_; ++i) v[i] += it->second[i];
      continue;
    }
    const std::uint64_t h = Fnv1a(w);
    const double sign = (h >> 63) ? -1.0 : 1.0;
    v[h % static_cast<std::uint64_t>(dim_)] += sign;
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  }
  return v;
}

SegmentFeature SegmentEmbedder::Embed(const std::vector<Token>& tokens) const {
  std::vector<std::string> words;
  words.reserve(tokens.size());
  for (const Token& t : tokens) words.push_back(t.text);
  return EmbedWords(words);
}

EmbeddedInstruction EmbedInstruction(const SegmentedInstruction& instruction,
                                     const SegmentEmbedder& embedder) {
  EmbeddedInstruction out;
  for (const SegmentPair& p : instruction.pairs) {
    out.landmarks.push_back(embedder.Embed(p.landmark_tokens));
    out.directions.push_back(embedder.Embed(p.direction_tokens));
  }
  return out;
}

std::vector<double> AttentionWeights(double eta, int num_pairs, bool normalize) {
  if (num_pairs < 1) {
    throw NavError(ErrorCode::kInvalidArgument, "attention needs at least one pair");
  }
  std::vector<double> w(static_cast<size_t>(num_pairs));
  double total = 0.0;
  for (int j = 1; j <= num_pairs; ++j) {
    w[j - 1] = std::exp(-std::fabs(eta - static_cast<double>(j)));
    total += w[j - 1];
  }
  if (normalize) {
    for (double& x : w) x /= total;
  }
  return w;
}

AttendedSegments Attend(const EmbeddedInstruction& instruction, double eta,
                        bool normalize) {
  const int pairs = instruction.num_pairs();
  const std::vector<double> w = AttentionWeights(eta, pairs, normalize);
  const size_t dim = instruction.landmarks.front().size();
  AttendedSegments out{SegmentFeature(dim, 0.0), SegmentFeature(dim, 0.0)};
  for (int j = 0; j < pairs; ++j) {
    const auto& l = instruction.landmarks[j];
    const auto& d = instruction.directions[j];
    if (l.size() != dim || d.size() != dim) {
      throw NavError(ErrorCode::kInvalidArgument, "segment features differ in dimension");
    }
    for (size_t k = 0; k < dim; ++k) {
      out.landmark[k] += w[j] * l[k];
      out.direction[k] += w[j] * d[k];
    }
  }
  return out;
}

AttentionState Advance(const AttentionState& state, int phi) {
  if (phi != 0 && phi != 1) {
    throw NavError(ErrorCode::kInvalidArgument, "indicator output must be 0 or 1");
  }
  if (state.exhausted()) {
    throw NavError(ErrorCode::kFailedPrecondition,
                   "attention already past the last segment pair");
  }
  AttentionState next = state;
  next.eta += phi;
  return next;
}

SegmentedInstruction Instruction::Segmented() const {
  SegmentedInstruction out;
  out.raw_text = text;
  for (const PairIndices& p : pairs) {
    SegmentPair pair;
    for (int i : p.landmark) pair.landmark_tokens.push_back(tokens.at(i));
    for (int i : p.direction) pair.direction_tokens.push_back(tokens.at(i));
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

Instruction MakeInstruction(std::vector<Token> tokens,
                            std::vector<NodeId> landmark_node_ids) {
  if (tokens.empty()) {
    throw NavError(ErrorCode::kInvalidArgument, "cannot segment an empty instruction");
  }
  Instruction out;
  std::vector<TokenClass> classes;
  for (const Token& t : tokens) classes.push_back(t.cls);
  out.pairs = PairRuns(classes);
  out.text = JoinText(tokens);
  out.tokens = std::move(tokens);
  out.landmark_node_ids = std::move(landmark_node_ids);
  if (!out.landmark_node_ids.empty() && out.landmark_node_ids.size() != out.pairs.size()) {
    throw NavError(ErrorCode::kInvalidArgument,
                   "landmark correspondence must have one node per segment pair");
  }
  return out;
}

std::string SerializeInstruction(const Instruction& instruction) {
  nlohmann::json tokens = nlohmann::json::array();
  nlohmann::json classes = nlohmann::json::array();
  for (const Token& t : instruction.tokens) {
    tokens.push_back(t.text);
    classes.push_back(static_cast<int>(t.cls));
  }
  nlohmann::json pairs = nlohmann::json::array();
  for (const PairIndices& p : instruction.pairs) {
    pairs.push_back({{"landmark", p.landmark}, {"direction", p.direction}});
  }
  nlohmann::json doc = {{"text", instruction.text},
                        {"tokens", std::move(tokens)},
                        {"classes", std::move(classes)},
                        {"pairs", std::move(pairs)},
                        {"landmark_node_ids", instruction.landmark_node_ids}};
  return doc.dump() + "\n";
}

Instruction ParseInstruction(std::string_view json_text) {
  Instruction out;
  std::vector<int> classes;
  bool has_pairs = false;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    out.text = doc.value("text", std::string());
    const auto words = doc.at("tokens").get<std::vector<std::string>>();
    classes = doc.at("classes").get<std::vector<int>>();
    if (words.size() != classes.size()) {
      throw NavError(ErrorCode::kParse, "tokens and classes differ in length");
    }
    for (size_t i = 0; i < words.size(); ++i) {
      if (classes[i] != 0 && classes[i] != 1) {
        throw NavError(ErrorCode::kParse, "token class must be 0 or 1");
      }
      out.tokens.push_back({words[i], static_cast<TokenClass>(classes[i])});
    }
    if (auto it = doc.find("pairs"); it != doc.end() && !it->is_null()) {
      has_pairs = true;
      for (const auto& jp : *it) {
        out.pairs.push_back({jp.at("landmark").get<std::vector<int>>(),
                             jp.at("direction").get<std::vector<int>>()});
      }
    }
    if (auto it = doc.find("landmark_node_ids"); it != doc.end() && !it->is_null()) {
      out.landmark_node_ids = it->get<std::vector<NodeId>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw NavError(ErrorCode::kParse, std::string("instruction parse error: ") + e.what());
  }
  if (out.tokens.empty()) throw NavError(ErrorCode::kParse, "instruction has no tokens");
  if (!has_pairs) {
    std::vector<TokenClass> cls;
    for (const Token& t : out.tokens) cls.push_back(t.cls);
    out.pairs = PairRuns(cls);
  }
  const int n = static_cast<int>(out.tokens.size());
  for (const PairIndices& p : out.pairs) {
    for (int i : p.landmark) {
      if (i < 0 || i >= n || out.tokens[i].cls != TokenClass::kLandmark) {
        throw NavError(ErrorCode::kParse, "pair landmark index invalid");
      }
    }
    for (int i : p.direction) {
      if (i < 0 || i >= n || out.tokens[i].cls != TokenClass::kDirection) {
        throw NavError(ErrorCode::kParse, "pair direction index invalid");
      }
    }
  }
  if (out.pairs.empty()) throw NavError(ErrorCode::kParse, "instruction has no pairs");
  if (!out.landmark_node_ids.empty() && out.landmark_node_ids.size() != out.pairs.size()) {
    throw NavError(ErrorCode::kParse, "landmark_node_ids must match the pair count");
  }
  if (out.text.empty()) out.text = JoinText(out.tokens);
  return out;
}

Instruction LoadInstruction(const std::filesystem::path& path) {
  return ParseInstruction(ReadFile(path));
}

void SaveInstruction(const Instruction& instruction, const std::filesystem::path& path) {
  WriteFile(path, SerializeInstruction(instruction));
}

}  // namespace navsim
