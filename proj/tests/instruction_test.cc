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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "navsim/error.h"

namespace navsim {
namespace {

std::vector<Token> FromClasses(const std::vector<int>& classes) {
  std::vector<Token> out;
  for (size_t i = 0; i < classes.size(); ++i) {
    out.push_back({"w" + std::to_string(i), static_cast<TokenClass>(classes[i])});
  }
  return out;
}

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

TEST(GroupTokensTest, OnePair) {
  const auto s = GroupTokens(FromClasses({0, 0, 1, 1}));
  ASSERT_EQ(s.num_pairs(), 1);
  EXPECT_EQ(s.pairs[0].landmark_tokens.size(), 2u);
  EXPECT_EQ(s.pairs[0].direction_tokens.size(), 2u);
}

TEST(GroupTokensTest, TwoPairs) {
  EXPECT_EQ(GroupTokens(FromClasses({0, 1, 0, 1})).num_pairs(), 2);
}

TEST(GroupTokensTest, LeadingDirectionAndTrailingLandmarkArePadded) {
  const auto s = GroupTokens(FromClasses({1, 1, 0}));
  ASSERT_EQ(s.num_pairs(), 2);
  EXPECT_TRUE(s.pairs[0].landmark_tokens.empty());
  EXPECT_EQ(s.pairs[0].direction_tokens.size(), 2u);
  EXPECT_EQ(s.pairs[1].landmark_tokens.size(), 1u);
  EXPECT_TRUE(s.pairs[1].direction_tokens.empty());
}

TEST(GroupTokensTest, EmptyInputThrows) { EXPECT_THROW(GroupTokens({}), NavError); }

TEST(GroupTokensTest, FlattenRestoresClassSequence) {
  std::mt19937_64 rng(1);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> classes(1 + trial % 20);
    for (int& c : classes) c = coin(rng);
    const auto tokens = FromClasses(classes);
    EXPECT_EQ(Flatten(GroupTokens(tokens)), tokens);
  }
}

TEST(EmbedderTest, EmptySegmentIsZero) {
  const SegmentEmbedder e(16);
  EXPECT_EQ(e.Embed({}), std::vector<double>(16, 0.0));
}

TEST(EmbedderTest, BagSemanticsAndUnitNorm) {
  const SegmentEmbedder e(64);
  const auto a = e.EmbedWords({"turn", "left", "at", "the", "bank"});
  const auto b = e.EmbedWords({"bank", "the", "left", "turn", "at"});
  EXPECT_EQ(a, b);
  EXPECT_NEAR(Dot(a, a), 1.0, 1e-12);
}

TEST(EmbedderTest, DisjointVocabulariesNearlyOrthogonal) {
  const SegmentEmbedder e(1024);
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> len(1, 6);
  int nonzero = 0;
  double total = 0.0;
  for (int i = 0; i < 100; ++i) {
    std::vector<std::string> a, b;
    for (int k = len(rng); k > 0; --k) a.push_back("a" + std::to_string(rng() % 5000));
    for (int k = len(rng); k > 0; --k) b.push_back("b" + std::to_string(rng() % 5000));
    const double d = std::fabs(Dot(e.EmbedWords(a), e.EmbedWords(b)));
    nonzero += d > 0.0;
    total += d;
  }
  // At most 36 word pairs per sample collide with probability 1/1024 each.
  EXPECT_LE(nonzero, 10);
  EXPECT_LT(total / 100, 0.05);
}

TEST(EmbedderTest, LexiconWordsUseTheirVectors) {
  const SegmentEmbedder e(3, {{"church", {0.0, 3.0, 4.0}}});
  const auto v = e.EmbedWords({"church"});
  EXPECT_NEAR(v[0], 0.0, 1e-15);
  EXPECT_NEAR(v[1], 0.6, 1e-15);
  EXPECT_NEAR(v[2], 0.8, 1e-15);
}

TEST(AttentionTest, KernelValues) {
  const auto w1 = AttentionWeights(1, 3);
  EXPECT_EQ(w1[0], 1.0);
  EXPECT_NEAR(w1[1], std::exp(-1.0), 1e-15);
  EXPECT_NEAR(w1[2], std::exp(-2.0), 1e-15);
  const auto w2 = AttentionWeights(2, 3);
  EXPECT_NEAR(w2[0], std::exp(-1.0), 1e-15);
  EXPECT_EQ(w2[1], 1.0);
  EXPECT_NEAR(w2[2], std::exp(-1.0), 1e-15);
  EXPECT_EQ(AttentionWeights(1, 1), std::vector<double>({1.0}));
}

TEST(AttentionTest, NormalizedSumsToOne) {
  const auto w = AttentionWeights(2.5, 6, true);
  double s = 0;
  for (double x : w) s += x;
  EXPECT_NEAR(s, 1.0, 1e-15);
}

TEST(AttentionTest, ArgmaxIsRoundedEtaAndWeightsInRange) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 2000; ++i) {
    const int J = 1 + static_cast<int>(rng() % 8);
    const double eta = 1.0 + std::uniform_real_distribution<double>(0, J - 1)(rng);
    const auto w = AttentionWeights(eta, J);
    int arg = 0;
    for (int j = 1; j < J; ++j) {
      if (w[j] > w[arg]) arg = j;
    }
    // Half-integers tie; the first (lower) index wins the scan.
    const int expected = std::clamp(static_cast<int>(std::ceil(eta - 0.5)), 1, J);
    EXPECT_EQ(arg + 1, expected) << eta << " " << J;
    for (double x : w) {
      EXPECT_GT(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
  }
}

TEST(AttendTest, SinglePairIsIdentity) {
  EmbeddedInstruction e{{{0.3, -0.2, 0.9}}, {{1.0, 2.0, 3.0}}};
  const auto a = Attend(e, 1.0);
  EXPECT_EQ(a.landmark, e.landmarks[0]);
  EXPECT_EQ(a.direction, e.directions[0]);
}

TEST(AttendTest, IsolatesTheAttendedSegment) {
  EmbeddedInstruction e{{{0, 0}, {0.5, 0.25}, {0, 0}}, {{0, 0}, {1, 1}, {0, 0}}};
  EXPECT_EQ(Attend(e, 2.0).landmark, e.landmarks[1]);
}

TEST(AttendTest, MatchesDirectRecomputationAndIsLinear) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> nd;
  EmbeddedInstruction e;
  for (int j = 0; j < 3; ++j) {
    std::vector<double> l(5), d(5);
    for (auto& x : l) x = nd(rng);
    for (auto& x : d) x = nd(rng);
    e.landmarks.push_back(l);
    e.directions.push_back(d);
  }
  const auto a = Attend(e, 2.0);
  for (int k = 0; k < 5; ++k) {
    double want = 0;
    for (int j = 0; j < 3; ++j) want += e.landmarks[j][k] * std::exp(-std::abs(2.0 - (j + 1)));
    EXPECT_NEAR(a.landmark[k], want, 1e-12);
  }
  EmbeddedInstruction scaled = e;
  for (auto& v : scaled.landmarks) {
    for (auto& x : v) x *= 3.5;
  }
  const auto b = Attend(scaled, 2.0);
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(b.landmark[k], 3.5 * a.landmark[k], 1e-12);
}

TEST(AdvanceTest, Rules) {
  AttentionState s{1.0, 3};
  EXPECT_EQ(Advance(s, 0).eta, 1.0);
  EXPECT_EQ(Advance(s, 1).eta, 2.0);
  const AttentionState last{3.0, 3};
  EXPECT_FALSE(last.exhausted());
  const AttentionState done = Advance(last, 1);
  EXPECT_TRUE(done.exhausted());
  EXPECT_THROW(Advance(done, 1), NavError);
  EXPECT_THROW(Advance(s, 2), NavError);
}

TEST(InstructionFileTest, RoundTripAndValidation) {
  const Instruction in = MakeInstruction(
      {{"pass", TokenClass::kLandmark}, {"bank", TokenClass::kLandmark},
       {"turn", TokenClass::kDirection}, {"left", TokenClass::kDirection}},
      {42});
  const Instruction back = ParseInstruction(SerializeInstruction(in));
  EXPECT_EQ(back.tokens, in.tokens);
  EXPECT_EQ(back.landmark_node_ids, in.landmark_node_ids);
  ASSERT_EQ(back.pairs.size(), 1u);
  EXPECT_EQ(back.pairs[0].landmark, std::vector<int>({0, 1}));
  EXPECT_EQ(back.pairs[0].direction, std::vector<int>({2, 3}));
  EXPECT_EQ(back.Segmented().pairs, in.Segmented().pairs);
  EXPECT_THROW(ParseInstruction(R"({"text":"a","tokens":["a"],"classes":[2]})"), NavError);
  EXPECT_THROW(ParseInstruction(R"({"text":"a","tokens":["a"],"classes":[0],
                                    "pairs":[{"landmark":[5],"direction":[]}]})"),
               NavError);
}

TEST(ClassifierTest, KeywordStub) {
  const auto t = ClassifyTokens(Tokenize("Walk past the red church, then turn LEFT."));
  ASSERT_FALSE(t.empty());
  EXPECT_EQ(t.front().text, "walk");
  EXPECT_EQ(t.front().cls, TokenClass::kDirection);
  bool church_is_landmark = false;
  for (const auto& tok : t) {
    if (tok.text == "church") church_is_landmark = tok.cls == TokenClass::kLandmark;
  }
  EXPECT_TRUE(church_is_landmark);
}

}  // namespace
}  // namespace navsim
