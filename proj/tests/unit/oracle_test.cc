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

#include "rbflp/oracle.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "reference_instances.h"

namespace rbflp {
namespace {

using reference::T1;
using reference::T2;
using reference::T3;

TEST(BruteForceSolveTest, T1Table) {
  const OracleResult r = BruteForceSolve(T1(), ModelKind::kRbo);
  ASSERT_EQ(r.table.size(), 4u);
  EXPECT_NEAR(r.table[0].value, 100.0, 1e-9);
  EXPECT_NEAR(r.table[1].value, 110.0, 1e-9);
  EXPECT_NEAR(r.table[2].value, 110.0, 1e-9);
  EXPECT_NEAR(r.table[3].value, 67.0, 1e-9);
  EXPECT_EQ(r.y.open, (BinaryVector{1, 1}));
  EXPECT_EQ(r.worst.disrupted, (BinaryVector{1, 0}));
  EXPECT_NEAR(r.objective, 67.0, 1e-9);

  std::ostringstream csv;
  WriteOracleCsv(r, csv);
  EXPECT_EQ(csv.str(),
            "y_bits,worst_s_bits,W_of_y\n"
            "00,00,100\n"
            "10,10,110\n"
            "01,01,110\n"
            "11,10,67\n");
}

TEST(BruteForceSolveTest, T1FullBudgetClosesEverything) {
  ProblemInstance inst = T1();
  inst.gamma = 2;
  for (ModelKind kind : {ModelKind::kRbo, ModelKind::kRo}) {
    const OracleResult r = BruteForceSolve(inst, kind);
    EXPECT_EQ(r.y.open, (BinaryVector{0, 0}));
    EXPECT_NEAR(r.objective, 100.0, 1e-9);
  }
}

TEST(BruteForceSolveTest, T2BothKinds) {
  const OracleResult ro = BruteForceSolve(T2(), ModelKind::kRo);
  const OracleResult rbo = BruteForceSolve(T2(), ModelKind::kRbo);
  EXPECT_EQ(ro.y.open, (BinaryVector{1}));
  EXPECT_EQ(rbo.y.open, (BinaryVector{1}));
  EXPECT_NEAR(ro.objective, 3.3, 1e-9);
  EXPECT_NEAR(rbo.objective, 3.51, 1e-9);
  EXPECT_NEAR(ro.table[0].value, 3.6, 1e-9);
}

TEST(BruteForceSolveTest, CheapPenaltyLeavesEverythingUnmet) {
  for (ModelKind kind : {ModelKind::kRbo, ModelKind::kRo}) {
    const OracleResult r = BruteForceSolve(T3(), kind);
    EXPECT_EQ(r.y.open, (BinaryVector{0, 0}));
    EXPECT_NEAR(r.objective, 5.0, 1e-12);
  }
}

TEST(BruteForceSolveTest, RelaxationIsALowerBound) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int nf = 1 + static_cast<int>(rng() % 4);
    const ProblemInstance inst =
        reference::RandomSmall(rng, nf, 1 + static_cast<int>(rng() % 5),
                               static_cast<int>(rng() % (nf + 1)));
    const double ro = BruteForceSolve(inst, ModelKind::kRo).objective;
    const double rbo = BruteForceSolve(inst, ModelKind::kRbo).objective;
    EXPECT_LE(ro, rbo + 1e-9) << trial;
  }
}

TEST(BruteForceSolveTest, ThreadCountDoesNotChangeTheResult) {
  std::mt19937_64 rng(8);
  const ProblemInstance inst = reference::RandomSmall(rng, 4, 5, 2);
  const OracleResult a = BruteForceSolve(inst, ModelKind::kRbo, 1);
  const OracleResult b = BruteForceSolve(inst, ModelKind::kRbo, 3);
  std::ostringstream ca, cb;
  WriteOracleCsv(a, ca);
  WriteOracleCsv(b, cb);
  EXPECT_EQ(ca.str(), cb.str());
  EXPECT_EQ(a.y, b.y);
}

TEST(BruteForceSolveTest, RejectsLargeInstances) {
  const ProblemInstance inst = GenerateInstance(16, 2, 1);
  EXPECT_THROW(BruteForceSolve(inst, ModelKind::kRo), std::invalid_argument);
}

}  // namespace
}  // namespace rbflp
