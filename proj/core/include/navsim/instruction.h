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

#ifndef NAVSIM_INSTRUCTION_H_
#define NAVSIM_INSTRUCTION_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "navsim/citygraph.h"

namespace navsim {

enum class TokenClass : int { kLandmark = 0, kDirection = 1 };

struct Token {
  std::string text;
  TokenClass cls = TokenClass::kLandmark;

  bool operator==(const Token&) const = default;
};

// One landmark description and the directional instruction paired with it.
// Either side may be empty when the pairing rule had to pad.
struct SegmentPair {
  std::vector<Token> landmark_tokens;
  std::vector<Token> direction_tokens;

  bool operator==(const SegmentPair&) const = default;
};

struct SegmentedInstruction {
  std::vector<SegmentPair> pairs;
  std::string raw_text;

  int num_pairs() const { return static_cast<int>(pairs.size()); }
};

// Groups maximal same-class runs into (landmark, direction) pairs in order.
// A leading direction run pairs with an empty landmark; a trailing unpaired
// landmark run pairs with an empty direction. Throws on empty input.
SegmentedInstruction GroupTokens(const std::vector<Token>& tokens);

// Concatenated tokens of all pairs, landmark side first.
std::vector<Token> Flatten(const SegmentedInstruction& instruction);

// Lower-cases and splits on anything that is not alphanumeric.
std::vector<std::string> Tokenize(std::string_view text);

// Keyword rule: navigation verbs, turns, counts and units are direction
// tokens, everything else is a landmark token. Demo quality only.
std::vector<Token> ClassifyTokens(const std::vector<std::string>& words);

using SegmentFeature = std::vector<double>;

// Signed hashed bag-of-words embedder. Words found in the optional lexicon
// contribute their lexicon vector instead of a hashed one-hot. The output is
// L2-normalized unless it is all zeros.
class SegmentEmbedder {
 public:
  explicit SegmentEmbedder(int dim = 64) : dim_(dim) {}
  SegmentEmbedder(int dim, std::map<std::string, std::vector<double>> lexicon);

  int dim() const { return dim_; }
  const std::map<std::string, std::vector<double>>& lexicon() const { return lexicon_; }

  SegmentFeature Embed(const std::vector<Token>& tokens) const;
  SegmentFeature EmbedWords(const std::vector<std::string>& words) const;

 private:
  int dim_;
  std::map<std::string, std::vector<double>> lexicon_;
};

struct EmbeddedInstruction {
  std::vector<SegmentFeature> landmarks;   // L^j
  std::vector<SegmentFeature> directions;  // D^j

  int num_pairs() const { return static_cast<int>(landmarks.size()); }
};

EmbeddedInstruction EmbedInstruction(const SegmentedInstruction& instruction,
                                     const SegmentEmbedder& embedder);

// w_j = exp(-|eta - j|), j = 1..J. Left unnormalized unless `normalize`.
std::vector<double> AttentionWeights(double eta, int num_pairs, bool normalize = false);

struct AttendedSegments {
  SegmentFeature landmark;   // L-bar
  SegmentFeature direction;  // D-bar
};

AttendedSegments Attend(const EmbeddedInstruction& instruction, double eta,
                        bool normalize = false);

// Reference position into the pair sequence, starting at 1.
struct AttentionState {
  double eta = 1.0;
  int num_pairs = 1;

  bool exhausted() const { return eta > static_cast<double>(num_pairs); }
};

// eta += phi. Throws kFailedPrecondition when already exhausted.
AttentionState Advance(const AttentionState& state, int phi);

// Index lists into the token stream for one pair.
struct PairIndices {
  std::vector<int> landmark;
  std::vector<int> direction;
};

// On-disk instruction record. `landmark_node_ids[j]` is the node that pair j
// describes.
struct Instruction {
  std::string text;
  std::vector<Token> tokens;
  std::vector<PairIndices> pairs;
  std::vector<NodeId> landmark_node_ids;

  SegmentedInstruction Segmented() const;
};

// Builds a record from classified tokens, deriving pairs with GroupTokens.
Instruction MakeInstruction(std::vector<Token> tokens,
                            std::vector<NodeId> landmark_node_ids);

std::string SerializeInstruction(const Instruction& instruction);
Instruction ParseInstruction(std::string_view json_text);
Instruction LoadInstruction(const std::filesystem::path& path);
void SaveInstruction(const Instruction& instruction, const std::filesystem::path& path);

}  // namespace navsim

#endif  // NAVSIM_INSTRUCTION_H_
