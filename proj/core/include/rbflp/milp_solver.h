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

// Branch and bound over the bounded simplex for mixed-binary models.
//
// Best-bound node selection (ties go to the deeper, then newer node) and
// most-fractional branching with ties to the lowest index. Nodes re-optimize
// from the engine's current basis with the dual simplex.

#ifndef RBFLP_MILP_SOLVER_H_
#define RBFLP_MILP_SOLVER_H_

#include <cstdint>
#include <vector>

#include "rbflp/linear_model.h"

namespace rbflp {

enum class MilpStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kNodeLimit,
  kTimeLimit
};

const char* ToString(MilpStatus status);

inline constexpr double kMilpGapTol = 1e-6;
inline constexpr double kIntegralityTol = 1e-6;
inline constexpr double kIncumbentTieTol = 1e-9;

struct MilpConfig {
  int64_t node_limit = 5'000'000;
  double time_limit_seconds = 0.0;  // <= 0 means unlimited
  double relative_gap = kMilpGapTol;
  // Binaries compared (in bit-pattern order, last listed is most
  // significant) when two incumbents tie. Empty means all binaries.
  std::vector<int> tie_break_vars;
  // Keep exploring nodes whose bound ties the incumbent so that the
  // tie-break rule sees every optimal assignment. Meant for models with few
  // binaries.
  bool explore_ties = false;
};

struct MilpSolution {
  MilpStatus status = MilpStatus::kInfeasible;
  bool has_incumbent = false;
  double objective = kInf;  // incumbent objective
  double best_bound = -kInf;
  double gap = kInf;  // (objective - bound) / max(1, |objective|)
  std::vector<double> values;
  int64_t nodes = 0;
  int64_t lp_iterations = 0;
  std::vector<double> bound_trace;  // global bound after each node
};

// Throws std::invalid_argument on an invalid model and NumericalFailure if a
// node LP cannot be solved to tolerance.
MilpSolution SolveMilp(const LinearModel& model, const MilpConfig& config = {});

}  // namespace rbflp

#endif  // RBFLP_MILP_SOLVER_H_
