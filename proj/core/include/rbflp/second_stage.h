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

// Exact second-stage evaluation for a fixed (y, s).

#ifndef RBFLP_SECOND_STAGE_H_
#define RBFLP_SECOND_STAGE_H_

#include "rbflp/instance.h"

namespace rbflp {

// kRbo: the leader picks the cheapest plan among the follower's optimal
// (minimum unmet) plans. kRo: the leader picks any feasible plan.
enum class ModelKind { kRbo, kRo };

const char* ToString(ModelKind kind);
ModelKind ParseModelKind(const std::string& text);

struct SecondStageValue {
  ModelKind kind = ModelKind::kRbo;
  double cost = 0.0;  // sum c x + sum rho u, fixed costs excluded
  double total_unmet = 0.0;
  RecoursePlan plan;
};

// Capacity left after disruption: sum_j K_j y_j (1 - s_j).
double AvailableCapacity(const ProblemInstance& inst, const LocationDecision& y,
                         const Scenario& s);

// max(0, sum d - AvailableCapacity).
double FollowerClosedForm(const ProblemInstance& inst,
                          const LocationDecision& y, const Scenario& s);

// Solves the follower LP (min total unmet). Throws NumericalFailure if the
// LP disagrees with the closed form by more than 1e-6.
double FollowerMinUnmet(const ProblemInstance& inst, const LocationDecision& y,
                        const Scenario& s);

// Cost-minimizing plan subject to sum u <= FollowerMinUnmet.
SecondStageValue OptimisticRecourse(const ProblemInstance& inst,
                                    const LocationDecision& y,
                                    const Scenario& s);

// Cost-minimizing plan without the follower optimality cut.
SecondStageValue RoRecourse(const ProblemInstance& inst,
                            const LocationDecision& y, const Scenario& s);

SecondStageValue Recourse(const ProblemInstance& inst,
                          const LocationDecision& y, const Scenario& s,
                          ModelKind kind);

// sum_j f_j y_j.
double FixedCost(const ProblemInstance& inst, const LocationDecision& y);

}  // namespace rbflp

#endif  // RBFLP_SECOND_STAGE_H_
