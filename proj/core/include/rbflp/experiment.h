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

// Experiment metrics, parameter sweeps and their CSV / JSON outputs.
//
// Undefined metrics (no open facility, nothing served, zero denominators)
// are std::nullopt and print as "undefined" in CSV and null in JSON.

#ifndef RBFLP_EXPERIMENT_H_
#define RBFLP_EXPERIMENT_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rbflp/ccg.h"
#include "rbflp/instance.h"
#include "rbflp/second_stage.h"

namespace rbflp {

// Mean over open facilities of allocated / available capacity. Closed
// facilities are left out of both sums; nullopt when nothing is open.
std::optional<double> CapacityUtilization(const ProblemInstance& inst,
                                          const LocationDecision& y,
                                          const RecoursePlan& plan);

// Total cost per served unit; nullopt when nothing is served.
std::optional<double> UnitServiceCost(double total_cost, double served);

struct CostServiceRatios {
  std::optional<double> cost_ratio;     // W_RBO / W_RO
  std::optional<double> service_ratio;  // served_RBO / served_RO
};

CostServiceRatios ComputeCostServiceRatios(const SolveReport& rbo,
                                           const SolveReport& ro);

// Linear interpolation between order statistics; `pct` in [0, 100].
// Throws std::invalid_argument on an empty sample or a bad percentile.
double Percentile(std::vector<double> values, double pct);

struct MetricsRow {
  int gamma = 0;
  std::string penalty_label;  // "instance", or "p<percentile>"
  std::optional<double> rho;  // uniform penalty, when the sweep set one
  ModelKind kind = ModelKind::kRbo;
  Algorithm algorithm = Algorithm::kCcg;
  bool failed = false;
  std::string error;
  double w = 0.0;
  double served = 0.0;
  double unmet = 0.0;
  int open = 0;
  std::optional<double> usc;
  std::optional<double> omega;
  double wall_seconds = 0.0;
  int iterations = 0;
  Termination termination = Termination::kConverged;
  LocationDecision y;
  RecoursePlan plan;  // recourse under the reported worst scenario
};

MetricsRow MakeMetricsRow(const ProblemInstance& inst,
                          const SolveReport& report);

struct SweepConfig {
  std::vector<int> gammas;
  Algorithm rbo_algorithm = Algorithm::kCcgDdu;
  Algorithm ro_algorithm = Algorithm::kCcg;
  CcgConfig ccg;
  unsigned max_parallel = 0;  // 0 = hardware concurrency
};

// Default algorithm per model kind: ccg-ddu for RBO, ccg for RO.
Algorithm DefaultAlgorithm(ModelKind kind);

// One row per (gamma, kind), RBO before RO, in the order of config.gammas.
// A cell whose solve throws is marked failed and the sweep continues. Throws
// std::invalid_argument if a gamma lies outside [0, |F|].
std::vector<MetricsRow> SweepGamma(const ProblemInstance& inst,
                                   const SweepConfig& config);

struct PenaltyCell {
  int gamma = 0;
  double percentile = 0.0;
  double rho = 0.0;
  MetricsRow rbo;
  MetricsRow ro;
  std::optional<int> y_diff;     // open_RO - open_RBO
  std::optional<double> x_diff;  // served_RO - served_RBO
};

// Sets every rho_i to the given percentile of the c_ij population and solves
// both kinds. Cells are ordered by (gamma, percentile). Throws
// std::invalid_argument when all c_ij are equal.
std::vector<PenaltyCell> SweepPenalty(const ProblemInstance& inst,
                                      const std::vector<double>& percentiles,
                                      const SweepConfig& config);

// CSV writers; headers exactly:
//   fig5.csv   gamma,kind,W,served
//   fig6.csv   gamma,kind,usc
//   fig7.csv   gamma,cost_ratio,service_ratio
//   fig8.csv   gamma,kind,omega
//   fig10a.csv gamma,percentile,y_diff
//   fig10b.csv gamma,percentile,x_diff
//   arcs.csv   kind,gamma,customer,facility,customer_x,customer_y,
//              facility_x,facility_y,flow
void WriteFig5Csv(const std::vector<MetricsRow>& rows, std::ostream& out);
void WriteFig6Csv(const std::vector<MetricsRow>& rows, std::ostream& out);
void WriteFig7Csv(const std::vector<MetricsRow>& rows, std::ostream& out);
void WriteFig8Csv(const std::vector<MetricsRow>& rows, std::ostream& out);
void WriteFig10aCsv(const std::vector<PenaltyCell>& cells, std::ostream& out);
void WriteFig10bCsv(const std::vector<PenaltyCell>& cells, std::ostream& out);

struct ArcSet {
  ModelKind kind = ModelKind::kRbo;
  int gamma = 0;
  RecoursePlan plan;
};

void WriteArcsCsv(const ProblemInstance& inst, const std::vector<ArcSet>& sets,
                  std::ostream& out);

// One JSON document mirroring SolveReport, plus the metrics of the final
// plan.
std::string SolveReportJson(const ProblemInstance& inst,
                            const SolveReport& report);

// Both reports, their metrics and the cost / service ratios.
std::string CompareReportJson(const ProblemInstance& inst,
                              const SolveReport& rbo, const SolveReport& ro);

}  // namespace rbflp

#endif  // RBFLP_EXPERIMENT_H_
