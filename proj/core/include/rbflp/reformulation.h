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

// Single-level MILP models for the master problem (MP) and the worst-case
// subproblem (SP).
//
// MP over a scenario pool: min eta subject to, per pooled scenario l,
//   eta >= f'y + c'x^l + rho'u^l, (x^l, u^l) feasible for (y, s^l), and, for
//   the bilevel kind, (x^l, u^l) optimal for the follower (min sum u).
// Follower optimality encodings:
//   kFullKkt       duals lambda, mu in [0, 1] with one complementarity binary
//                  per arc, per customer and per facility.
//   kCompactKkt    one regime binary theta^l with lambda = mu = theta^l. The
//                  follower LP always has an optimal dual of this form:
//                  theta = 1 (all capacity saturated) when demand exceeds the
//                  surviving capacity and theta = 0 (nothing unmet) otherwise.
//   kValueFunction sum u^l <= max(0, D - sum_j K_j (1 - s^l_j) y_j) with one
//                  binary; an independent cross-check.
//
// SP at a fixed y*: max over s in U (or U(y*)) of f'y* plus the leader-best
// follower-optimal recourse cost. The follower optimum is pinned through the
// outer copy (x_bar, u_bar) and the inner leader LP is replaced by primal
// feasibility, dual feasibility and a strong-duality row. Products of a
// binary s_j with a bounded dual are linearized exactly (McCormick).

#ifndef RBFLP_REFORMULATION_H_
#define RBFLP_REFORMULATION_H_

#include <string>
#include <vector>

#include "rbflp/instance.h"
#include "rbflp/linear_model.h"
#include "rbflp/milp_solver.h"
#include "rbflp/second_stage.h"

namespace rbflp {

struct BigMBundle {
  std::vector<double> x_bound;      // min(K_j, d_i), customer-major
  std::vector<double> u_bound;      // d_i
  std::vector<double> slack_bound;  // K_j
  double lower_dual_bound = 1.0;    // lambda_j, mu_i
  double m_dual = 0.0;              // alpha_j, beta_i, gamma
};

BigMBundle DeriveBigM(const ProblemInstance& inst);

enum class MasterEncoding { kFullKkt, kCompactKkt, kValueFunction };
enum class SpVariant { kPlain, kDdu };

const char* ToString(MasterEncoding encoding);
const char* ToString(SpVariant variant);

struct MasterBlock {
  Scenario scenario;
  std::vector<int> x;  // customer-major
  std::vector<int> u;
  std::vector<int> lambda;    // kFullKkt only
  std::vector<int> mu;        // kFullKkt only
  std::vector<int> binaries;  // complementarity / regime binaries
  int epigraph_row = -1;
};

struct MasterArtifacts {
  LinearModel model;
  ModelKind kind = ModelKind::kRbo;
  MasterEncoding encoding = MasterEncoding::kCompactKkt;
  std::vector<int> y;
  int eta = -1;
  std::vector<MasterBlock> blocks;
};

// Throws std::invalid_argument on an empty pool or a scenario of the wrong
// length.
MasterArtifacts BuildMaster(
    const ProblemInstance& inst, const std::vector<Scenario>& pool,
    ModelKind kind, MasterEncoding encoding = MasterEncoding::kCompactKkt);

struct MasterResult {
  LocationDecision y;
  double eta = 0.0;
  std::vector<RecoursePlan> plans;  // one per pooled scenario
  MilpSolution milp;
};

// Throws std::runtime_error if the MP is not solved to optimality.
MasterResult SolveMaster(const MasterArtifacts& mp, const MilpConfig& config);

struct SubproblemArtifacts {
  LinearModel model;
  ModelKind kind = ModelKind::kRbo;
  SpVariant variant = SpVariant::kPlain;
  LocationDecision y_star;
  double m_dual = 0.0;
  std::vector<int> s;
  int pin = -1;            // RBO only
  std::vector<int> x_bar;  // RBO only
  std::vector<int> u_bar;  // RBO only
  std::vector<int> x;
  std::vector<int> u;
  std::vector<int> alpha;
  std::vector<int> beta;
  int gamma = -1;      // RBO only
  std::vector<int> q;  // alpha_j * s_j
  std::vector<int> p;  // gamma * s_j, RBO only
  int v = -1;          // epigraph of gamma * sum u_bar, RBO only
  double fixed_cost = 0.0;
};

// `m_dual` <= 0 uses DeriveBigM(inst).m_dual.
SubproblemArtifacts BuildSubproblem(const ProblemInstance& inst,
                                    const LocationDecision& y_star,
                                    SpVariant variant,
                                    ModelKind kind = ModelKind::kRbo,
                                    double m_dual = 0.0);

struct SubproblemResult {
  Scenario worst;
  double value = 0.0;       // psi, fixed cost included
  RecoursePlan plan;        // inner (leader-best) recourse
  RecoursePlan outer_plan;  // (x_bar, u_bar), RBO only
  double m_dual = 0.0;      // bound in force for the accepted solve
  int escalations = 0;
  int64_t nodes = 0;
};

class BigMEscalationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solves the SP MILP with the big-M audit: while an objective-relevant dual
// sits within 1e-6 of its bound and the optimum moved, the bound doubles
// (at most 3 times).
SubproblemResult SolveSubproblem(const ProblemInstance& inst,
                                 const LocationDecision& y_star,
                                 SpVariant variant, ModelKind kind,
                                 const MilpConfig& config = {});

}  // namespace rbflp

#endif  // RBFLP_REFORMULATION_H_
