// Copyright 2026 The rbflp Authors
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

#include "rbflp/second_stage.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "reference_instances.h"

namespace rbflp {
namespace {

using reference::T1;
using reference::T2;

TEST(FollowerMinUnmetTest, ReferenceValues) {
  EXPECT_NEAR(FollowerMinUnmet(T1(), {{1, 1}}, {{0, 0}}), 0.0, 1e-9);
  EXPECT_NEAR(FollowerMinUnmet(T1(), {{1, 1}}, {{1, 0}}), 4.0, 1e-9);
  EXPECT_NEAR(FollowerMinUnmet(T1(), {{0, 0}}, {{0, 0}}), 10.0, 1e-9);
}

TEST(FollowerMinUnmetTest, DimensionMismatchThrows) {
  EXPECT_THROW(FollowerMinUnmet(T1(), {{1}}, {{0, 0}}), std::invalid_argument);
}

// Expected costs below were cross-checked with scipy's HiGHS.
TEST(OptimisticRecourseTest, ReferenceValues) {
  const SecondStageValue t1 = OptimisticRecourse(T1(), {{1, 1}}, {{1, 0}});
  EXPECT_NEAR(t1.cost, 47.0, 1e-9);
  EXPECT_NEAR(t1.total_unmet, 4.0, 1e-9);
  EXPECT_TRUE(IsFollowerFeasible(T1(), {{1, 1}}, {{1, 0}}, t1.plan));

  const SecondStageValue t2 = OptimisticRecourse(T2(), {{1}}, {{0}});
  EXPECT_NEAR(t2.cost, 3.41, 1e-8);
  EXPECT_NEAR(t2.total_unmet, 0.0, 1e-8);

  const SecondStageValue empty = OptimisticRecourse(T1(), {{0, 0}}, {{0, 0}});
  EXPECT_NEAR(empty.cost, 100.0, 1e-9);
  EXPECT_NEAR(empty.plan.unmet[0], 5.0, 1e-9);
  EXPECT_NEAR(empty.plan.unmet[1], 5.0, 1e-9);
}

TEST(RoRecourseTest, ReferenceValues) {
  const SecondStageValue t2 = RoRecourse(T2(), {{1}}, {{0}});
  EXPECT_NEAR(t2.cost, 3.2, 1e-9);
  EXPECT_NEAR(t2.total_unmet, 1.0, 1e-9);
  EXPECT_NEAR(t2.plan.unmet[2], 1.0, 1e-9);
  EXPECT_NEAR(RoRecourse(T1(), {{1, 1}}, {{1, 0}}).cost, 47.0, 1e-9);
  EXPECT_NEAR(RoRecourse(T1(), {{0, 0}}, {{0, 0}}).cost, 100.0, 1e-9);
  EXPECT_EQ(Recourse(T1(), {{1, 1}}, {{0, 0}}, ModelKind::kRo).kind,
            ModelKind::kRo);
}

TEST(ModelKindTest, ParseAndPrint) {
  EXPECT_EQ(ParseModelKind("rbo"), ModelKind::kRbo);
  EXPECT_EQ(ParseModelKind("ro"), ModelKind::kRo);
  EXPECT_STREQ(ToString(ModelKind::kRbo), "rbo");
  EXPECT_THROW(ParseModelKind("x"), std::invalid_argument);
}

TEST(SecondStagePropertyTest, RandomTriples) {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 200; ++trial) {
    const int nf = 1 + static_cast<int>(rng() % 5);
    const int nn = 1 + static_cast<int>(rng() % 8);
    const ProblemInstance inst = reference::RandomSmall(rng, nf, nn, 0);
    const LocationDecision y =
        reference::DecisionFromMask(nf, static_cast<int>(rng() % (1 << nf)));
    Scenario s;
    for (int j = 0; j < nf; ++j) s.disrupted.push_back(rng() % 3 == 0);
    SCOPED_TRACE(trial);
    const double closed = FollowerClosedForm(inst, y, s);
    EXPECT_NEAR(FollowerMinUnmet(inst, y, s), closed, 1e-6);
    const SecondStageValue rbo = OptimisticRecourse(inst, y, s);
    const SecondStageValue ro = RoRecourse(inst, y, s);
    EXPECT_NEAR(rbo.total_unmet, closed, 1e-6);
    EXPECT_GE(ro.total_unmet, closed - 1e-6);
    EXPECT_LE(ro.cost, rbo.cost + 1e-9);
    EXPECT_TRUE(IsFollowerFeasible(inst, y, s, rbo.plan));
    EXPECT_TRUE(IsFollowerFeasible(inst, y, s, ro.plan));
  }
}

TEST(SecondStagePropertyTest, HighPenaltyMakesModelsAgree) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const int nf = 1 + static_cast<int>(rng() % 4);
    const int nn = 1 + static_cast<int>(rng() % 6);
    ProblemInstance inst = reference::RandomSmall(rng, nf, nn, 0);
    inst.penalty.assign(nn, inst.max_assign_cost());
    const LocationDecision y =
        reference::DecisionFromMask(nf, static_cast<int>(rng() % (1 << nf)));
    Scenario s;
    for (int j = 0; j < nf; ++j) s.disrupted.push_back(rng() % 4 == 0);
    EXPECT_NEAR(OptimisticRecourse(inst, y, s).cost,
                RoRecourse(inst, y, s).cost, 1e-6);
  }
}

// Large demands once left roundoff-sized flow on closed arcs.
TEST(OptimisticRecourseTest, ClosedArcsCarryExactlyZero) {
  ProblemInstance inst = GenerateInstance(6, 40, 1);
  std::fill(inst.penalty.begin(), inst.penalty.end(), inst.min_assign_cost());
  const LocationDecision closed{BinaryVector(6, 0)};
  const Scenario none{BinaryVector(6, 0)};
  for (ModelKind kind : {ModelKind::kRbo, ModelKind::kRo}) {
    const SecondStageValue v = Recourse(inst, closed, none, kind);
    for (double x : v.plan.allocation) EXPECT_EQ(x, 0.0);
    EXPECT_EQ(v.plan.total_served(), 0.0);
  }
}

TEST(FixedCostTest, SumsOpenFacilities) {
  EXPECT_DOUBLE_EQ(FixedCost(T1(), {{1, 0}}), 10.0);
  EXPECT_DOUBLE_EQ(AvailableCapacity(T1(), {{1, 1}}, {{0, 1}}), 6.0);
}

}  // namespace
}  // namespace rbflp
