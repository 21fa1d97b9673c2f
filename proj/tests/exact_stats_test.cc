//
// Copyright 2026 The dyngraph-dp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dyngraph_dp/exact_stats.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace dyngraph_dp {
namespace {

using testing::AllPairs;
using testing::GraphFromMask;
using testing::Rng;

std::vector<StatKind> AllKinds() {
  return {StatKind::EdgeCount(),   StatKind::TriangleCount(),
          StatKind::HighDegree(1), StatKind::HighDegree(2),
          StatKind::DegreeList(),  StatKind::DegreeHist(),
          StatKind::MaxMatching(), StatKind::ConnectedComponents()};
}

int64_t Scalar(StatKind k, const DynamicGraph& g) {
  return ExactValue(k, g).at(0);
}

TEST(ExactValueTest, Triangle) {
  DynamicGraph g = GraphFromMask(3, 0b111);
  EXPECT_EQ(Scalar(StatKind::TriangleCount(), g), 1);
  EXPECT_EQ(Scalar(StatKind::EdgeCount(), g), 3);
  EXPECT_EQ(Scalar(StatKind::ConnectedComponents(), g), 1);
  EXPECT_EQ(Scalar(StatKind::MaxMatching(), g), 1);
  EXPECT_EQ(ExactValue(StatKind::DegreeList(), g), (StatValue{2, 2, 2}));
}

TEST(ExactValueTest, EmptyGraph) {
  DynamicGraph g(5);
  EXPECT_EQ(Scalar(StatKind::ConnectedComponents(), g), 5);
  EXPECT_EQ(Scalar(StatKind::HighDegree(1), g), 0);
  EXPECT_EQ(ExactValue(StatKind::DegreeHist(), g), (StatValue{5, 0, 0, 0, 0}));
}

TEST(ExactValueTest, K5) {
  DynamicGraph g = GraphFromMask(5, ~uint64_t{0});
  EXPECT_EQ(Scalar(StatKind::TriangleCount(), g), 10);
  EXPECT_EQ(Scalar(StatKind::MaxMatching(), g), 2);
  EXPECT_EQ(testing::BruteTriangles(g), 10);
  EXPECT_EQ(testing::BruteMatching(g), 2);
}

TEST(ExactValueTest, DegreeHistSumsToN) {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    DynamicGraph g = GraphFromMask(7, rng());
    StatValue h = ExactValue(StatKind::DegreeHist(), g);
    ASSERT_EQ(h.size(), 7u);
    int64_t sum = 0;
    for (int64_t x : h) sum += x;
    EXPECT_EQ(sum, 7);
    for (int64_t d : ExactValue(StatKind::DegreeList(), g)) EXPECT_LT(d, 7);
  }
}

TEST(TriangleDeltaTest, Examples) {
  DynamicGraph path(3);
  ASSERT_TRUE(path.Apply(Update::Insert(0, 2)).ok());
  ASSERT_TRUE(path.Apply(Update::Insert(2, 1)).ok());
  EXPECT_EQ(*TriangleDelta(path, Update::Insert(0, 1)), 1);
  EXPECT_EQ(*TriangleDelta(path, Update::NoOp()), 0);
  DynamicGraph k4 = GraphFromMask(4, 0b111111);
  EXPECT_EQ(*TriangleDelta(k4, Update::Delete(0, 1)), -2);
  EXPECT_FALSE(TriangleDelta(k4, Update::Insert(0, 1)).ok());
}

// 500 random sequences, incremental count against triple enumeration.
TEST(StatTrackerTest, TrianglesMatchBruteForce) {
  Rng rng(17);
  for (int i = 0; i < 500; ++i) {
    const uint32_t n = 3 + i % 10;
    UpdateSequence s = testing::RandomValidSequence(rng, n, 1 + i % 64);
    StatTracker tracker(n);
    for (const Update& u : s.updates) {
      const int64_t before = tracker.triangles();
      auto delta = tracker.Apply(u);
      ASSERT_TRUE(delta.ok());
      ASSERT_EQ(tracker.triangles(), testing::BruteTriangles(tracker.graph()));
      ASSERT_EQ(before + *delta, tracker.triangles());
    }
  }
}

// Every graph on <= 8 nodes is too many; all graphs up to 6 nodes plus
// random ones on 7 and 8.
TEST(MatchingTest, MatchesExhaustiveSearch) {
  for (uint32_t n = 1; n <= 6; ++n) {
    const uint64_t masks = uint64_t{1} << (n * (n - 1) / 2);
    for (uint64_t m = 0; m < masks; ++m) {
      DynamicGraph g = GraphFromMask(n, m);
      ASSERT_EQ(MaxMatchingSize(g), testing::BruteMatching(g)) << n << " " << m;
    }
  }
  Rng rng(99);
  for (int i = 0; i < 3000; ++i) {
    const uint32_t n = 7 + i % 2;
    DynamicGraph g = GraphFromMask(n, rng() & rng());
    ASSERT_EQ(MaxMatchingSize(g), testing::BruteMatching(g));
  }
}

TEST(MatchingTest, MateArrayIsAMatching) {
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    DynamicGraph g = GraphFromMask(8, rng());
    std::vector<int64_t> mate = MaxMatching(g);
    int64_t matched = 0;
    for (NodeId v = 0; v < 8; ++v) {
      if (mate[v] < 0) continue;
      ++matched;
      ASSERT_EQ(mate[mate[v]], v);
      ASSERT_TRUE(g.HasEdge(v, static_cast<NodeId>(mate[v])));
    }
    EXPECT_EQ(matched / 2, MaxMatchingSize(g));
  }
}

TEST(ComponentsTest, MatchesRelaxation) {
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    DynamicGraph g = GraphFromMask(9, rng() & rng() & rng());
    EXPECT_EQ(CountConnectedComponents(g), testing::BruteComponents(g));
  }
}

TEST(DifferenceSequenceTest, Examples) {
  UpdateSequence s{2, {Update::Insert(0, 1), Update::Delete(0, 1)}};
  auto d = DifferenceSequence(StatKind::EdgeCount(), s);
  ASSERT_TRUE(d.ok());
  EXPECT_EQ(*d, (std::vector<StatValue>{{1}, {-1}}));
  UpdateSequence s3{3, {Update::Insert(0, 1)}};
  EXPECT_EQ(*DifferenceSequence(StatKind::DegreeList(), s3),
            (std::vector<StatValue>{{1, 1, 0}}));
  EXPECT_FALSE(DifferenceSequence(StatKind::EdgeCount(),
                                  UpdateSequence{2, {Update::Delete(0, 1)}})
                   .ok());
}

TEST(DifferenceSequenceTest, PrefixSumsReconstructValues) {
  Rng rng(21);
  for (int i = 0; i < 60; ++i) {
    const uint32_t n = 2 + i % 7;
    UpdateSequence s = testing::RandomValidSequence(rng, n, 40);
    for (StatKind k : AllKinds()) {
      auto deltas = DifferenceSequence(k, s);
      auto traj = ExactTrajectory(k, s);
      ASSERT_TRUE(deltas.ok() && traj.ok());
      DynamicGraph g(n);
      StatValue acc = ExactValue(k, g);
      for (int64_t t = 1; t <= s.horizon(); ++t) {
        ASSERT_TRUE(g.Apply(s.at(t)).ok());
        for (size_t c = 0; c < acc.size(); ++c) acc[c] += (*deltas)[t - 1][c];
        ASSERT_EQ(acc, ExactValue(k, g)) << StatName(k) << " t=" << t;
        ASSERT_EQ(acc, (*traj)[t - 1]);
      }
    }
  }
}

// Every graph on N <= 5 nodes and every single-pair flip.
TEST(SensitivityTest, ExhaustiveBounds) {
  for (uint32_t n = 2; n <= 5; ++n) {
    const std::vector<EdgeKey> pairs = AllPairs(n);
    for (StatKind k : AllKinds()) {
      double worst_l1 = 0;
      double worst_l2 = 0;
      for (uint64_t m = 0; m < (uint64_t{1} << pairs.size()); ++m) {
        DynamicGraph g = GraphFromMask(n, m);
        const StatValue before = ExactValue(k, g);
        for (size_t i = 0; i < pairs.size(); ++i) {
          DynamicGraph h = GraphFromMask(n, m ^ (uint64_t{1} << i));
          const StatValue after = ExactValue(k, h);
          double l1 = 0, l2 = 0;
          for (size_t c = 0; c < before.size(); ++c) {
            const double d = std::abs(double(after[c] - before[c]));
            l1 += d;
            l2 += d * d;
          }
          worst_l1 = std::max(worst_l1, l1);
          worst_l2 = std::max(worst_l2, std::sqrt(l2));
        }
      }
      const Sensitivity s = StaticSensitivity(k, n);
      EXPECT_LE(worst_l1, s.l1 + 1e-9) << StatName(k) << " N=" << n;
      EXPECT_LE(worst_l2, s.l2 + 1e-9) << StatName(k) << " N=" << n;
      if (n == 5) {
        // Tight at N = 5.
        EXPECT_NEAR(worst_l1, s.l1, 1e-9) << StatName(k);
        EXPECT_NEAR(worst_l2, s.l2, 1e-9) << StatName(k);
      }
    }
  }
}

TEST(SensitivityTest, Constants) {
  EXPECT_EQ(StaticSensitivity(StatKind::EdgeCount(), 10).l1, 1);
  EXPECT_EQ(StaticSensitivity(StatKind::TriangleCount(), 10).l1, 8);
  EXPECT_EQ(StaticSensitivity(StatKind::TriangleCount(), 10, 4).l1, 3);
  EXPECT_EQ(StaticSensitivity(StatKind::DegreeList(), 10).l1, 2);
  EXPECT_NEAR(StaticSensitivity(StatKind::DegreeList(), 10).l2, std::sqrt(2),
              1e-12);
  EXPECT_EQ(StaticSensitivity(StatKind::DegreeHist(), 10).l1, 4);
  EXPECT_EQ(StaticSensitivity(StatKind::HighDegree(3), 10).l1, 2);
}

TEST(AdditivityTest, DisjointUnion) {
  Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    DynamicGraph a = GraphFromMask(4, rng());
    DynamicGraph b = GraphFromMask(5, rng());
    DynamicGraph u(9);
    for (const EdgeKey& e : a.Edges()) (void)u.Apply(Update::Insert(e));
    for (const EdgeKey& e : b.Edges()) {
      (void)u.Apply(Update::Insert(e.u + 4, e.v + 4));
    }
    for (StatKind k : {StatKind::ConnectedComponents(), StatKind::MaxMatching(),
                       StatKind::TriangleCount(), StatKind::EdgeCount()}) {
      EXPECT_EQ(Scalar(k, u), Scalar(k, a) + Scalar(k, b)) << StatName(k);
    }
  }
}

TEST(StatKindTest, NamesRoundTrip) {
  for (StatKind k : AllKinds()) {
    auto back = ParseStatKind(StatName(k));
    ASSERT_TRUE(back.ok()) << StatName(k);
    EXPECT_EQ(*back, k);
  }
  EXPECT_FALSE(ParseStatKind("high-degree:x").ok());
  EXPECT_FALSE(ParseStatKind("nope").ok());
  EXPECT_EQ(OutputDimension(StatKind::DegreeHist(), 6), 6);
  EXPECT_EQ(OutputDimension(StatKind::TriangleCount(), 6), 1);
  EXPECT_TRUE(IsVectorStat(StatKind::DegreeList()));
}

}  // namespace
}  // namespace dyngraph_dp
