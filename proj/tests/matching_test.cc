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

#include "navsim/matching.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "navsim/error.h"

namespace navsim {
namespace {

TEST(CosineMatcherTest, IdenticalOrthogonalOpposite) {
  const CosineMatcher m;
  const std::vector<double> a{0.6, 0.8}, b{-0.8, 0.6}, c{-0.6, -0.8};
  EXPECT_NEAR(ScorePair(m, a, a, {}), 1.0, 1e-15);
  EXPECT_NEAR(ScorePair(m, a, b, {}), 0.5, 1e-15);
  EXPECT_NEAR(ScorePair(m, a, c, {}), 0.0, 1e-15);
  EXPECT_EQ(ScorePair(m, a, std::vector<double>{0, 0}, {}), 0.5);
}

TEST(CosineMatcherTest, DimensionMismatchThrows) {
  const CosineMatcher m;
  EXPECT_THROW(ScorePair(m, std::vector<double>{1, 0}, std::vector<double>{1, 0, 0}, {}),
               NavError);
}

TEST(CosineMatcherTest, ScoresStayInUnitInterval) {
  const CosineMatcher m;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> a(8), b(8);
    for (auto& x : a) x = nd(rng);
    for (auto& x : b) x = nd(rng);
    const double s = ScorePair(m, a, b, {});
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(OracleMatcherTest, OneOnlyAtAimedLandmark) {
  const OracleMatcher m;
  EXPECT_EQ(ScorePair(m, {}, {}, {7, 7}), 1.0);
  EXPECT_EQ(ScorePair(m, {}, {}, {6, 7}), 0.0);
  EXPECT_THROW(ScorePair(m, {}, {}, {7, std::nullopt}), NavError);
}

class OutOfRange : public Matcher {
 public:
  std::string name() const override { return "bad"; }
  double Score(std::span<const double>, std::span<const double>,
               const MatchContext&) const override {
    return 1.5;
  }
};

TEST(ScorePairTest, RejectsOutOfRangeScores) {
  EXPECT_THROW(ScorePair(OutOfRange(), {}, {}, {}), NavError);
}

TEST(RegistryTest, BuiltInsAndPlugins) {
  EXPECT_EQ(MakeMatcher("oracle")->name(), "oracle");
  EXPECT_EQ(MakeMatcher("cosine")->name(), "cosine");
  EXPECT_THROW(MakeMatcher("nope"), NavError);
  RegisterMatcher("always_half", [] { return std::make_shared<ConstantMatcher>(0.5); });
  EXPECT_EQ(ScorePair(*MakeMatcher("always_half"), {}, {}, {}), 0.5);
}

TEST(ControllerTest, ThresholdRule) {
  const ThresholdController c(0.5, 1);
  EXPECT_EQ(ControllerStep(c, {0.9, 0.9}, c.Initial()).first, 1);
  EXPECT_EQ(ControllerStep(c, {0.9, 0.1}, c.Initial()).first, 0);
  EXPECT_EQ(ControllerStep(c, {0.5, 0.5}, c.Initial()).first, 1);
}

TEST(ControllerTest, DebounceAfterFiring) {
  const ThresholdController c(0.5, 2);
  auto [phi, h] = ControllerStep(c, {1, 1}, c.Initial());
  EXPECT_EQ(phi, 1);
  auto [phi2, h2] = ControllerStep(c, {1, 1}, h);
  EXPECT_EQ(phi2, 0);
  EXPECT_EQ(ControllerStep(c, {1, 1}, h2).first, 1);
}

TEST(ControllerTest, MonotoneInScores) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  for (int gap : {1, 2, 3}) {
    const ThresholdController c(0.5, gap);
    for (int i = 0; i < 2000; ++i) {
      const ControllerState h{static_cast<int>(rng() % 5)};
      const ScoreFeature s{u(rng), u(rng)};
      const ScoreFeature higher{s.s1 + u(rng) * (1 - s.s1), s.s2 + u(rng) * (1 - s.s2)};
      if (ControllerStep(c, s, h).first == 1) {
        EXPECT_EQ(ControllerStep(c, higher, h).first, 1);
      }
    }
  }
}

}  // namespace
}  // namespace navsim
