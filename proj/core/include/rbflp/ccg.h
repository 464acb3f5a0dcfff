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

// Column-and-constraint generation: alternate the master problem over a
// growing scenario pool (lower bound) with the worst-case subproblem at the
// master's location (upper bound) until the relative gap closes.

#ifndef RBFLP_CCG_H_
#define RBFLP_CCG_H_

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rbflp/instance.h"
#include "rbflp/milp_solver.h"
#include "rbflp/reformulation.h"
#include "rbflp/second_stage.h"

namespace rbflp {

inline constexpr double kCcgGapTol = 1e-3;
inline constexpr uint64_t kEnumerationCap = 1'000'000;

// kCcg and kCcgDdu differ in the subproblem's scenario set. kEnumeration runs
// the same loop with the enumeration subproblem. kOracle enumerates every
// location vector.
enum class Algorithm { kCcg, kCcgDdu, kEnumeration, kOracle };

const char* ToString(Algorithm algorithm);
// Accepts "ccg", "ccg-ddu", "enum", "enumeration" and "oracle".
Algorithm ParseAlgorithm(const std::string& text);

enum class Termination { kConverged, kCap, kStalled };

const char* ToString(Termination termination);

class EnumerationCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpEnumerationResult {
  Scenario worst;  // smallest bit pattern among the maximizers
  double value = 0.0;
  uint64_t evaluated = 0;
};

// Exact max over the scenario space of f'y + recourse cost. Throws
// EnumerationCapError when the space has more than `cap` members.
SpEnumerationResult SolveSpEnumeration(const ProblemInstance& inst,
                                       const LocationDecision& y,
                                       ModelKind kind, ScenarioKind space,
                                       uint64_t cap = kEnumerationCap);

// Worst-case total cost W(y) over the plain scenario set.
double EvaluateFirstStage(const ProblemInstance& inst,
                          const LocationDecision& y, ModelKind kind);

struct CcgConfig {
  int max_iterations = 1000;
  double time_limit_seconds = 0.0;  // <= 0 means unlimited
  double gap_tol = kCcgGapTol;
  MasterEncoding encoding = MasterEncoding::kCompactKkt;
  // RO subproblems enumerate scenarios up to this many facilities.
  int ro_enumeration_max_facilities = 12;
  // Cross-check every MILP subproblem against enumeration.
  bool verify_subproblem = false;
  MilpConfig milp;
  std::ostream* trace = nullptr;  // tab-separated, one line per iteration
};

struct IterationRecord {
  int iteration = 0;
  LocationDecision y;  // master solution
  double eta = 0.0;
  double psi = 0.0;   // subproblem value at y
  Scenario scenario;  // subproblem worst case
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double gap = 0.0;
  double mp_seconds = 0.0;
  double sp_seconds = 0.0;
  int64_t mp_nodes = 0;
  int64_t sp_nodes = 0;
};

struct SolveReport {
  ModelKind kind = ModelKind::kRbo;
  Algorithm algorithm = Algorithm::kCcg;
  LocationDecision y;
  Scenario worst;
  RecoursePlan plan;
  double objective = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double gap = 0.0;
  std::vector<IterationRecord> iterations;
  std::vector<Scenario> scenarios_added;  // pool order, seed included
  int iteration_count = 0;
  double wall_seconds = 0.0;
  Termination termination = Termination::kConverged;
};

// (UB - LB) / UB; UB = 0 counts as closed when LB >= -tol.
double RelativeGap(double lower, double upper, double tol = kCcgGapTol);

// Throws std::runtime_error if a master problem is not solved to optimality.
SolveReport SolveCcg(const ProblemInstance& inst, ModelKind kind,
                     Algorithm algorithm, const CcgConfig& config = {});

std::string TraceHeader();
std::string TraceLine(const IterationRecord& record);

}  // namespace rbflp

#endif  // RBFLP_CCG_H_
