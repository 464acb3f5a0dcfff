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

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "rbflp/linear_model.h"
#include "rbflp/lp_solver.h"

namespace rbflp {

const char* ToString(ModelKind kind) {
  return kind == ModelKind::kRbo ? "rbo" : "ro";
}

ModelKind ParseModelKind(const std::string& text) {
  if (text == "rbo") return ModelKind::kRbo;
  if (text == "ro") return ModelKind::kRo;
  throw std::invalid_argument("unknown model kind '" + text + "'");
}

namespace {

void CheckDimensions(const ProblemInstance& inst, const LocationDecision& y,
                     const Scenario& s) {
  if (y.size() != inst.num_facilities() || s.size() != inst.num_facilities()) {
    throw std::invalid_argument(
        "location/scenario length does not match the facility count");
  }
}

struct RecourseLp {
  LinearModel model;
  int nf = 0;
  int nn = 0;
  int x(int i, int j) const { return i * nf + j; }
  int u(int i) const { return nn * nf + i; }
};

// Capacity and demand-balance rows. `leader_costs` selects the c/rho
// objective instead of sum u.
RecourseLp BuildRecourseLp(const ProblemInstance& inst,
                           const LocationDecision& y, const Scenario& s,
                           bool leader_costs, std::optional<double> unmet_cap) {
  RecourseLp lp;
  lp.nf = inst.num_facilities();
  lp.nn = inst.num_customers();
  for (int i = 0; i < lp.nn; ++i) {
    for (int j = 0; j < lp.nf; ++j) {
      const bool usable = y.open[j] == 1 && s.disrupted[j] == 0;
      lp.model.AddVariable(0.0, usable ? kInf : 0.0,
                           leader_costs ? inst.cost(i, j) : 0.0);
    }
  }
  for (int i = 0; i < lp.nn; ++i) {
    lp.model.AddVariable(0.0, kInf, leader_costs ? inst.penalty[i] : 1.0);
  }
  for (int j = 0; j < lp.nf; ++j) {
    if (y.open[j] != 1 || s.disrupted[j] != 0) continue;
    std::vector<Term> terms;
    for (int i = 0; i < lp.nn; ++i) terms.push_back({lp.x(i, j), 1.0});
    lp.model.AddRow(std::move(terms), RowSense::kLessEqual, inst.capacity[j]);
  }
  for (int i = 0; i < lp.nn; ++i) {
    std::vector<Term> terms;
    for (int j = 0; j < lp.nf; ++j) terms.push_back({lp.x(i, j), 1.0});
    terms.push_back({lp.u(i), 1.0});
    lp.model.AddRow(std::move(terms), RowSense::kEqual, inst.demand[i]);
  }
  if (unmet_cap) {
    std::vector<Term> terms;
    for (int i = 0; i < lp.nn; ++i) terms.push_back({lp.u(i), 1.0});
    lp.model.AddRow(std::move(terms), RowSense::kLessEqual, *unmet_cap);
  }
  return lp;
}

SecondStageValue Extract(const ProblemInstance& inst, const RecourseLp& lp,
                         const LpSolution& sol, ModelKind kind) {
  if (sol.status != LpStatus::kOptimal) {
    throw NumericalFailure(std::string("recourse LP not optimal: ") +
                           ToString(sol.status));
  }
  SecondStageValue v;
  v.kind = kind;
  v.plan.allocation.resize(static_cast<size_t>(lp.nn) * lp.nf);
  v.plan.unmet.resize(lp.nn);
  for (int i = 0; i < lp.nn; ++i) {
    for (int j = 0; j < lp.nf; ++j) {
      v.plan.allocation[lp.x(i, j)] = std::max(0.0, sol.primal[lp.x(i, j)]);
    }
    v.plan.unmet[i] = std::max(0.0, sol.primal[lp.u(i)]);
  }
  double cost = 0.0;
  for (int i = 0; i < lp.nn; ++i) {
    for (int j = 0; j < lp.nf; ++j) {
      cost += inst.cost(i, j) * v.plan.allocation[lp.x(i, j)];
    }
    cost += inst.penalty[i] * v.plan.unmet[i];
  }
  v.cost = cost;
  v.total_unmet = v.plan.total_unmet();
  return v;
}

}  // namespace

double AvailableCapacity(const ProblemInstance& inst, const LocationDecision& y,
                         const Scenario& s) {
  CheckDimensions(inst, y, s);
  double cap = 0.0;
  for (int j = 0; j < inst.num_facilities(); ++j) {
    if (y.open[j] == 1 && s.disrupted[j] == 0) cap += inst.capacity[j];
  }
  return cap;
}

double FollowerClosedForm(const ProblemInstance& inst,
                          const LocationDecision& y, const Scenario& s) {
  return std::max(0.0, inst.total_demand() - AvailableCapacity(inst, y, s));
}

double FollowerMinUnmet(const ProblemInstance& inst, const LocationDecision& y,
                        const Scenario& s) {
  CheckDimensions(inst, y, s);
  const RecourseLp lp = BuildRecourseLp(inst, y, s, false, std::nullopt);
  const LpSolution sol = SolveLp(lp.model);
  if (sol.status != LpStatus::kOptimal) {
    throw NumericalFailure("follower LP not optimal");
  }
  const double closed = FollowerClosedForm(inst, y, s);
  if (std::abs(sol.objective - closed) > 1e-6 * std::max(1.0, closed)) {
    throw NumericalFailure("follower LP value disagrees with closed form");
  }
  return sol.objective;
}

SecondStageValue OptimisticRecourse(const ProblemInstance& inst,
                                    const LocationDecision& y,
                                    const Scenario& s) {
  FollowerMinUnmet(inst, y, s);
  // The closed form is exact; the LP value only confirms it. Any slack here
  // would leak into the leader's plan as a sliver of extra unmet demand.
  const RecourseLp lp =
      BuildRecourseLp(inst, y, s, true, FollowerClosedForm(inst, y, s));
  return Extract(inst, lp, SolveLp(lp.model), ModelKind::kRbo);
}

SecondStageValue RoRecourse(const ProblemInstance& inst,
                            const LocationDecision& y, const Scenario& s) {
  CheckDimensions(inst, y, s);
  const RecourseLp lp = BuildRecourseLp(inst, y, s, true, std::nullopt);
  return Extract(inst, lp, SolveLp(lp.model), ModelKind::kRo);
}

SecondStageValue Recourse(const ProblemInstance& inst,
                          const LocationDecision& y, const Scenario& s,
                          ModelKind kind) {
  return kind == ModelKind::kRbo ? OptimisticRecourse(inst, y, s)
                                 : RoRecourse(inst, y, s);
}

double FixedCost(const ProblemInstance& inst, const LocationDecision& y) {
  if (y.size() != inst.num_facilities()) {
    throw std::invalid_argument("location length does not match");
  }
  double total = 0.0;
  for (int j = 0; j < inst.num_facilities(); ++j) {
    if (y.open[j] == 1) total += inst.fixed_cost[j];
  }
  return total;
}

}  // namespace rbflp
