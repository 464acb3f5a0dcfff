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

// Dense bounded-variable simplex.
//
// Every row i is given a slack column so that a_i x + r_i = b_i, with
//   <= : r_i in [0, inf)     >= : r_i in (-inf, 0]     = : r_i in [0, 0].
// Rows whose initial residual the slack cannot absorb get an artificial
// column and are repaired in phase 1. Phase 2 runs Dantzig pricing and falls
// back to Bland's rule after 5 * (rows + cols) consecutive degenerate pivots.
// A bounded dual simplex re-optimizes after bound changes (branch and bound).
//
// Dual sign convention: multipliers of inequality rows are non-negative at
// optimality. For >= and = rows the dual equals d(objective)/d(rhs); for <=
// rows it equals -d(objective)/d(rhs). Reduced costs are c_j minus the row
// contributions, i.e. d(objective)/d(x_j) for a nonbasic x_j.

#ifndef RBFLP_LP_SOLVER_H_
#define RBFLP_LP_SOLVER_H_

#include <memory>
#include <stdexcept>
#include <vector>

#include "rbflp/linear_model.h"

namespace rbflp {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* ToString(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> primal;
  std::vector<double> dual;          // one per row
  std::vector<double> reduced_cost;  // one per variable
  int iterations = 0;
};

struct KktResiduals {
  double primal = 0.0;           // max row / bound violation
  double dual = 0.0;             // stationarity and sign violations
  double complementarity = 0.0;  // max |multiplier * slack|
  double duality_gap = 0.0;      // primal objective - dual objective
};

// Thrown when the simplex cannot meet its residual tolerances even after
// refactorization and anti-cycling recovery.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fixed solver tolerances.
inline constexpr double kPivotTol = 1e-9;
inline constexpr double kFeasibilityTol = 1e-7;
inline constexpr double kDualityGapTol = 1e-6;

// Solves the LP. Requires at least one variable and no binary flags.
LpSolution SolveLp(const LinearModel& model);

// Throws std::invalid_argument if the vectors do not match the model.
KktResiduals CheckKktResiduals(const LinearModel& model, const LpSolution& sol);

// Final simplex state, sufficient to warm start a related model with the
// same rows and columns.
struct Basis {
  std::vector<int> basic;             // column basic in each row
  std::vector<signed char> at_upper;  // nonbasic status per column
};

// Stateful engine over the continuous relaxation of a model. Column bounds
// may be tightened between solves; Solve() re-optimizes from the previous
// basis with the dual simplex when possible.
class SimplexEngine {
 public:
  explicit SimplexEngine(const LinearModel& model);
  ~SimplexEngine();
  SimplexEngine(SimplexEngine&&) noexcept;
  SimplexEngine& operator=(SimplexEngine&&) noexcept;

  void SetBounds(int var, double lower, double upper);
  double lower(int var) const;
  double upper(int var) const;

  LpSolution Solve();

  // Basis of the last optimal solve, if any.
  std::shared_ptr<const Basis> basis() const;
  // Installs a previously saved basis; the next Solve() starts from it.
  void LoadBasis(const Basis& basis);

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rbflp

#endif  // RBFLP_LP_SOLVER_H_
