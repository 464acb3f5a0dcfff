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

#include "rbflp/experiment.h"

#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "rbflp/oracle.h"
#include "reference_instances.h"

namespace rbflp {
namespace {

using reference::T1;
using reference::T2;

std::string FirstLine(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

SweepConfig Gammas(std::vector<int> gammas, unsigned parallel = 1) {
  SweepConfig cfg;
  cfg.gammas = std::move(gammas);
  cfg.max_parallel = parallel;
  return cfg;
}

// T2 by hand: RO serves the two near customers, RBO all three.
TEST(MetricsTest, T2Reference) {
  const SolveReport rbo =
      SolveCcg(T2(), ModelKind::kRbo, Algorithm::kCcgDdu, {});
  const SolveReport ro = SolveCcg(T2(), ModelKind::kRo, Algorithm::kCcg, {});
  const MetricsRow b = MakeMetricsRow(T2(), rbo);
  const MetricsRow s = MakeMetricsRow(T2(), ro);
  EXPECT_NEAR(b.w, 3.51, 1e-9);
  EXPECT_NEAR(s.w, 3.3, 1e-9);
  ASSERT_TRUE(b.omega && s.omega);
  EXPECT_NEAR(*b.omega, 1.0, 1e-9);
  EXPECT_NEAR(*s.omega, 2.0 / 3.0, 1e-9);
  ASSERT_TRUE(b.usc && s.usc);
  EXPECT_NEAR(*b.usc, 1.17, 1e-9);
  EXPECT_NEAR(*s.usc, 1.65, 1e-9);
  const CostServiceRatios r = ComputeCostServiceRatios(rbo, ro);
  EXPECT_NEAR(*r.cost_ratio, 3.51 / 3.3, 1e-12);
  EXPECT_NEAR(*r.service_ratio, 1.5, 1e-12);
}

TEST(MetricsTest, UndefinedWhenNothingOpenOrServed) {
  ProblemInstance inst = T1();
  RecoursePlan plan;
  plan.allocation.assign(4, 0.0);
  plan.unmet = {5, 5};
  EXPECT_FALSE(CapacityUtilization(inst, {{0, 0}}, plan).has_value());
  EXPECT_FALSE(UnitServiceCost(100.0, 0.0).has_value());
  ASSERT_TRUE(CapacityUtilization(inst, {{1, 0}}, plan).has_value());
  EXPECT_EQ(*CapacityUtilization(inst, {{1, 0}}, plan), 0.0);
}

TEST(MetricsTest, UtilizationAveragesOpenFacilitiesOnly) {
  ProblemInstance inst = T1();
  RecoursePlan plan;
  plan.allocation = {3, 0, 0, 6};  // A at 3/6, B at 6/6
  plan.unmet = {2, 0};
  EXPECT_NEAR(*CapacityUtilization(inst, {{1, 1}}, plan), 0.75, 1e-12);
}

TEST(PercentileTest, LinearInterpolation) {
  const std::vector<double> v = {4, 1, 3, 2};
  EXPECT_EQ(Percentile(v, 0), 1.0);
  EXPECT_EQ(Percentile(v, 100), 4.0);
  EXPECT_DOUBLE_EQ(Percentile(v, 50), 2.5);
  EXPECT_DOUBLE_EQ(Percentile(v, 25), 1.75);
  EXPECT_THROW(Percentile({}, 50), std::invalid_argument);
  EXPECT_THROW(Percentile(v, 101), std::invalid_argument);
}

TEST(SweepGammaTest, T1MatchesOracle) {
  const std::vector<MetricsRow> rows = SweepGamma(T1(), Gammas({0, 1, 2}));
  ASSERT_EQ(rows.size(), 6u);
  const double rbo_expected[] = {30, 67, 100};
  for (int g = 0; g < 3; ++g) {
    const MetricsRow& b = rows[2 * g];
    const MetricsRow& s = rows[2 * g + 1];
    EXPECT_EQ(b.gamma, g);
    EXPECT_EQ(b.kind, ModelKind::kRbo);
    EXPECT_EQ(s.kind, ModelKind::kRo);
    EXPECT_FALSE(b.failed || s.failed);
    EXPECT_NEAR(b.w, rbo_expected[g], 1e-9);
    ProblemInstance inst = T1();
    inst.gamma = g;
    EXPECT_NEAR(s.w, BruteForceSolve(inst, ModelKind::kRo).objective, 1e-9);
  }
}

TEST(SweepGammaTest, RejectsBudgetOutsideRange) {
  EXPECT_THROW(SweepGamma(T1(), Gammas({3})), std::invalid_argument);
  EXPECT_THROW(SweepGamma(T1(), Gammas({-1})), std::invalid_argument);
}

TEST(SweepGammaTest, ParallelOutputIsByteIdentical) {
  std::mt19937_64 rng(11);
  const ProblemInstance inst = reference::RandomSmall(rng, 4, 6, 0);
  const std::vector<MetricsRow> serial = SweepGamma(inst, Gammas({0, 1, 2}, 1));
  const std::vector<MetricsRow> parallel =
      SweepGamma(inst, Gammas({0, 1, 2}, 4));
  for (auto writer : {WriteFig5Csv, WriteFig6Csv, WriteFig7Csv, WriteFig8Csv}) {
    std::ostringstream a, b;
    writer(serial, a);
    writer(parallel, b);
    EXPECT_EQ(a.str(), b.str());
  }
}

TEST(SweepPenaltyTest, ZeroPercentileRowIsZero) {
  const std::vector<PenaltyCell> cells =
      SweepPenalty(T1(), {0, 50, 100}, Gammas({0, 1, 2}));
  ASSERT_EQ(cells.size(), 9u);
  for (const PenaltyCell& c : cells) {
    ASSERT_TRUE(c.y_diff && c.x_diff);
    if (c.percentile != 0) continue;
    EXPECT_EQ(c.rho, 1.0);
    EXPECT_EQ(*c.y_diff, 0);
    EXPECT_EQ(*c.x_diff, 0.0);
    EXPECT_EQ(c.rbo.open, 0);
    EXPECT_EQ(c.ro.open, 0);
    EXPECT_EQ(c.rbo.penalty_label, "p0");
  }
}

TEST(SweepPenaltyTest, RejectsConstantCosts) {
  ProblemInstance inst = T1();
  inst.assign_cost = {2, 2, 2, 2};
  EXPECT_THROW(SweepPenalty(inst, {0}, Gammas({0})), std::invalid_argument);
}

TEST(CsvTest, HeadersAndRows) {
  const std::vector<MetricsRow> rows = SweepGamma(T2(), Gammas({0}));
  std::ostringstream f5, f6, f7, f8;
  WriteFig5Csv(rows, f5);
  WriteFig6Csv(rows, f6);
  WriteFig7Csv(rows, f7);
  WriteFig8Csv(rows, f8);
  EXPECT_EQ(f5.str(), "gamma,kind,W,served\n0,rbo,3.51,3\n0,ro,3.3,2\n");
  EXPECT_EQ(f6.str(), "gamma,kind,usc\n0,rbo,1.17\n0,ro,1.65\n");
  EXPECT_EQ(FirstLine(f7.str()), "gamma,cost_ratio,service_ratio");
  EXPECT_EQ(f8.str(), "gamma,kind,omega\n0,rbo,1\n0,ro,0.666666666667\n");

  std::vector<PenaltyCell> cells = SweepPenalty(T1(), {0}, Gammas({1}));
  std::ostringstream a, b;
  WriteFig10aCsv(cells, a);
  WriteFig10bCsv(cells, b);
  EXPECT_EQ(a.str(), "gamma,percentile,y_diff\n1,0,0\n");
  EXPECT_EQ(b.str(), "gamma,percentile,x_diff\n1,0,0\n");
}

TEST(CsvTest, UndefinedMarkers) {
  MetricsRow row;
  row.gamma = 2;
  row.kind = ModelKind::kRo;
  std::ostringstream f6, f8;
  WriteFig6Csv({row}, f6);
  WriteFig8Csv({row}, f8);
  EXPECT_EQ(f6.str(), "gamma,kind,usc\n2,ro,undefined\n");
  EXPECT_EQ(f8.str(), "gamma,kind,omega\n2,ro,undefined\n");
}

TEST(CsvTest, ArcsListPositiveFlows) {
  ProblemInstance inst = T2();
  inst.facility_coords = {{0, 0}};
  inst.customer_coords = {{1, 0}, {0, 1}, {1, 1}};
  const SolveReport ro = SolveCcg(inst, ModelKind::kRo, Algorithm::kCcg, {});
  std::ostringstream out;
  WriteArcsCsv(inst, {{ModelKind::kRo, 0, ro.plan}}, out);
  EXPECT_EQ(out.str(),
            "kind,gamma,customer,facility,customer_x,customer_y,facility_x,"
            "facility_y,flow\n"
            "ro,0,1,A,1,0,0,0,1\n"
            "ro,0,2,A,0,1,0,0,1\n");
}

TEST(JsonTest, ReportsCarryMetricsAndNulls) {
  const SolveReport rbo =
      SolveCcg(T2(), ModelKind::kRbo, Algorithm::kCcgDdu, {});
  const SolveReport ro = SolveCcg(T2(), ModelKind::kRo, Algorithm::kCcg, {});
  const std::string one = SolveReportJson(T2(), rbo);
  EXPECT_NE(one.find("\"model_kind\": \"rbo\""), std::string::npos);
  EXPECT_NE(one.find("\"termination\": \"converged\""), std::string::npos);
  EXPECT_NE(one.find("\"omega\": 1.0"), std::string::npos);
  const std::string both = CompareReportJson(T2(), rbo, ro);
  EXPECT_NE(both.find("\"service_ratio\": 1.5"), std::string::npos);

  SolveReport empty = ro;
  empty.y = {{0}};
  empty.plan.allocation = {0, 0, 0};
  EXPECT_NE(SolveReportJson(T2(), empty).find("\"omega\": null"),
            std::string::npos);
}

}  // namespace
}  // namespace rbflp
