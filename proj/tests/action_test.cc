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

#include "navsim/action.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "navsim/error.h"
#include "oracles/oracles.h"

namespace navsim {
namespace {

// Hub node 0 with spokes at the given compass bearings, 100 m long.
CityGraph Star(const std::vector<double>& bearings) {
  CityGraph g;
  const GeoPoint hub{40.7, -74.0};
  g.AddNode({0, hub, std::nullopt});
  NodeId id = 1;
  for (double b : bearings) {
    g.AddNode({id, Destination(hub, b, 100.0), std::nullopt});
    g.AddEdge(0, id, b);
    ++id;
  }
  return g;
}

ActionDistribution RandomDistribution(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  ActionDistribution a;
  double s = 0;
  for (double& x : a) s += (x = u(rng));
  for (double& x : a) x /= s;
  return a;
}

TEST(FuseTest, HandArithmeticCase) {
  const ActionDistribution f = Fuse(DeltaDistribution(0), DeltaDistribution(2), {1, 3});
  EXPECT_EQ(f[0], 0.25);
  EXPECT_EQ(f[2], 0.75);
  for (int i : {1, 3, 4, 5, 6, 7}) EXPECT_EQ(f[i], 0.0);
}

TEST(FuseTest, DegenerateWeights) {
  std::mt19937_64 rng(1);
  const auto ae = RandomDistribution(rng), am = RandomDistribution(rng);
  const auto only_e = Fuse(ae, am, {1, 0});
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(only_e[i], ae[i], 1e-15);
  const auto same = Fuse(ae, ae, {0.3, 2.0});
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(same[i], ae[i], 1e-15);
  EXPECT_THROW(Fuse(ae, am, {0, 0}), NavError);
  EXPECT_THROW(Fuse(ae, am, {-1, 2}), NavError);
}

TEST(FuseTest, NormalizedSymmetricAndScaleInvariant) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> w(0, 5);
  for (int i = 0; i < 2000; ++i) {
    const auto ae = RandomDistribution(rng), am = RandomDistribution(rng);
    const FusionWeights fw{w(rng), w(rng) + 1e-3};
    const auto f = Fuse(ae, am, fw);
    EXPECT_TRUE(IsValidDistribution(f, 1e-9));
    const auto g = Fuse(am, ae, {fw.w1, fw.w0});
    const auto h = Fuse(ae, am, {7 * fw.w0, 7 * fw.w1});
    for (int k = 0; k < 8; ++k) {
      EXPECT_NEAR(f[k], g[k], 1e-15);
      EXPECT_NEAR(f[k], h[k], 1e-15);
    }
  }
}

TEST(BinTest, HalfOpenIntervals) {
  EXPECT_EQ(BinOfAngle(0), 0);
  EXPECT_EQ(BinOfAngle(22.5), 1);
  EXPECT_EQ(BinOfAngle(22.4999), 0);
  EXPECT_EQ(BinOfAngle(350), 0);
  EXPECT_EQ(BinOfAngle(337.5), 0);
  EXPECT_EQ(BinOfAngle(337.4999), 7);
  EXPECT_EQ(BinOfAngle(-45), 7);
  EXPECT_EQ(BinOfAngle(720 + 90), 2);
  for (int b = 0; b < 8; ++b) EXPECT_EQ(BinOfAngle(BinCenter(b)), b);
}

TEST(BinTest, PartitionsTheCircle) {
  int counts[8] = {};
  for (int i = 0; i < 3600; ++i) {
    const int b = BinOfAngle(i * 0.1);
    ASSERT_GE(b, 0);
    ASSERT_LT(b, 8);
    ++counts[b];
  }
  for (int c : counts) EXPECT_EQ(c, 450);
}

TEST(SelectEdgeTest, ClosestBearing) {
  const CityGraph g = Star({0, 90});
  EXPECT_EQ(SelectEdge(g, 0, 50, 0).to, 2);
}

TEST(SelectEdgeTest, Wraparound) {
  const CityGraph g = Star({10, 180});
  EXPECT_EQ(SelectEdge(g, 0, 350, 0).to, 1);
  // Agent frame: heading 300 plus 50 lands on 350 as well.
  EXPECT_EQ(SelectEdge(g, 0, 50, 300).to, 1);
}

TEST(SelectEdgeTest, TieGoesToLowerBearing) {
  const CityGraph g = Star({90, 0});
  const DirectedEdge e = SelectEdge(g, 0, 45, 0);
  EXPECT_NEAR(e.bearing, 0.0, 1e-9);
}

TEST(SelectEdgeTest, IsolatedNodeThrows) {
  const CityGraph g = Star({});
  EXPECT_THROW(SelectEdge(g, 0, 0, 0), NavError);
}

TEST(SelectEdgeTest, InvariantToFullTurns) {
  const CityGraph g = Star({12, 77, 140, 200, 290});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> a(0, 360);
  for (int i = 0; i < 1000; ++i) {
    const double angle = a(rng), heading = a(rng);
    const DirectedEdge e = SelectEdge(g, 0, angle, heading);
    EXPECT_EQ(SelectEdge(g, 0, angle + 360, heading).to, e.to);
    EXPECT_LE(AngularDistance(e.bearing, heading + angle), 180.0);
  }
}

TEST(WeightingTest, DefaultUsesScores) {
  const FusionWeights w = DefaultWeighting({0.2, 0.7});
  EXPECT_EQ(w.w0, 0.2);
  EXPECT_EQ(w.w1, 0.7);
  const FusionWeights z = DefaultWeighting({0, 0});
  EXPECT_EQ(z.w0, z.w1);
  EXPECT_GT(z.w0, 0.0);
}

TEST(PolicyTest, OracleFollowsRoute) {
  const CityGraph g = oracle::GridGraph(3, 3, 100, {40.7, -74.0});
  const Route r = MakeRoute(g, {0, 1, 4});
  OraclePolicy p;
  // At node 1 heading east (90), the next edge goes south (180): +90 = bin 2.
  const PolicyContext ctx{&g, 1, 90.0, &r, 4};
  EXPECT_EQ(ArgmaxBin(p.ActVisual({}, {}, ctx)), 2);
  EXPECT_EQ(ArgmaxBin(p.ActMemory({}, {}, ctx)), 2);
  const PolicyContext no_route{&g, 1, 90.0, nullptr, 4};
  EXPECT_THROW(p.ActVisual({}, {}, no_route), NavError);
}

TEST(PolicyTest, RandomIsSeededAndValid) {
  const CityGraph g = oracle::GridGraph(2, 2, 100, {40.7, -74.0});
  const PolicyContext ctx{&g, 0, 0.0, nullptr, std::nullopt};
  RandomPolicy a, b;
  a.Reset(5);
  b.Reset(5);
  for (int i = 0; i < 50; ++i) {
    const auto x = a.ActVisual({}, {}, ctx), y = b.ActVisual({}, {}, ctx);
    EXPECT_EQ(x, y);
    EXPECT_TRUE(IsValidDistribution(x));
    EXPECT_EQ(a.ActMemory({}, {}, ctx), x);
    b.ActMemory({}, {}, ctx);
  }
}

TEST(PolicyTest, RegistryKnowsBuiltIns) {
  EXPECT_EQ(MakePolicy("oracle")->name(), "oracle");
  EXPECT_EQ(MakePolicy("random")->name(), "random");
  EXPECT_THROW(MakePolicy("nope"), NavError);
}

}  // namespace
}  // namespace navsim
