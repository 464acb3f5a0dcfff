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

#include "rbflp/reformulation.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rbflp {

const char* ToString(MasterEncoding encoding) {
  switch (encoding) {
    case MasterEncoding::kFullKkt:
      return "full-kkt";
    case MasterEncoding::kCompactKkt:
      return "compact-kkt";
    case MasterEncoding::kValueFunction:
      return "value-function";
  }
  return "unknown";
}

const char* ToString(SpVariant variant) {
  return variant == SpVariant::kPlain ? "plain" : "ddu";
}

BigMBundle DeriveBigM(const ProblemInstance& inst) {
  const int nf = inst.num_facilities();
  const int nn = inst.num_customers();
  BigMBundle b;
  for (int i = 0; i < nn; ++i) {
    for (int j = 0; j < nf; ++j) {
      b.x_bound.push_back(std::min(inst.capacity[j], inst.demand[i]));
    }
  }
  b.u_bound = inst.demand;
  b.slack_bound = inst.capacity;
  b.lower_dual_bound = 1.0;
  b.m_dual = inst.max_penalty() + inst.max_assign_cost();
  return b;
}

namespace {

std::string Name(const char* stem, int a) {
  return std::string(stem) + "_" + std::to_string(a);
}

std::string Name(const char* stem, int a, int b) {
  return std::string(stem) + "_" + std::to_string(a) + "_" + std::to_string(b);
}

std::string Name(const char* stem, int a, int b, int c) {
  return std::string(stem) + "_" + std::to_string(a) + "_" + std::to_string(b) +
         "_" + std::to_string(c);
}

// Follower optimality rows for one block, full complementarity version.
void AddFullKkt(const ProblemInstance& inst, const BigMBundle& big_m, int l,
                const std::vector<int>& y, MasterBlock& blk, LinearModel& m) {
  const int nf = inst.num_facilities();
  const int nn = inst.num_customers();
  const auto& s = blk.scenario.disrupted;
  for (int j = 0; j < nf; ++j) {
    blk.lambda.push_back(m.AddVariable(0.0, big_m.lower_dual_bound, 0.0,
                                       VarType::kContinuous,
                                       Name("lambda", l, j)));
  }
  for (int i = 0; i < nn; ++i) {
    blk.mu.push_back(m.AddVariable(0.0, big_m.lower_dual_bound, 0.0,
                                   VarType::kContinuous, Name("mu", l, i)));
  }
  // Dual feasibility of x_ij: lambda_j - mu_i >= 0. Dual feasibility of u_i
  // (1 - mu_i >= 0) is the upper bound on mu.
  for (int i = 0; i < nn; ++i) {
    for (int j = 0; j < nf; ++j) {
      m.AddRow({{blk.lambda[j], 1.0}, {blk.mu[i], -1.0}},
               RowSense::kGreaterEqual, 0.0, Name("dfx", l, i, j));
    }
  }
  // x_ij > 0 => lambda_j = mu_i.
  for (int i = 0; i < nn; ++i) {
    for (int j = 0; j < nf; ++j) {
      if (s[j] == 1) continue;  // x fixed at zero
      const int b = m.AddBinary(0.0, Name("bx", l, i, j));
      blk.binaries.push_back(b);
      const int x = blk.x[i * nf + j];
      m.AddRow({{x, 1.0}, {b, -big_m.x_bound[i * nf + j]}},
               RowSense::kLessEqual, 0.0, Name("csx", l, i, j));
      m.AddRow({{blk.lambda[j], 1.0}, {blk.mu[i], -1.0}, {b, 1.0}},
               RowSense::kLessEqual, 1.0, Name("csd", l, i, j));
    }
  }
  // u_i > 0 => mu_i = 1.
  for (int i = 0; i < nn; ++i) {
    const int w = m.AddBinary(0.0, Name("bu", l, i));
    blk.binaries.push_back(w);
    m.AddRow({{blk.u[i], 1.0}, {w, -big_m.u_bound[i]}}, RowSense::kLessEqual,
             0.0, Name("csu", l, i));
    m.AddRow({{blk.mu[i], 1.0}, {w, -1.0}}, RowSense::kGreaterEqual, 0.0,
             Name("csmu", l, i));
  }
  // lambda_j > 0 => capacity slack_j = 0.
  for (int j = 0; j < nf; ++j) {
    const int r = m.AddBinary(0.0, Name("bc", l, j));
    blk.binaries.push_back(r);
    // slack = K_j y_j (1 - s_j) - sum_i x_ij <= K_j (1 - r)
    std::vector<Term> terms;
    if (s[j] == 0) terms.push_back({y[j], inst.capacity[j]});
    for (int i = 0; i < nn; ++i) terms.push_back({blk.x[i * nf + j], -1.0});
    terms.push_back({r, big_m.slack_bound[j]});
    m.AddRow(std::move(terms), RowSense::kLessEqual, big_m.slack_bound[j],
             Name("css", l, j));
    m.AddRow({{blk.lambda[j], 1.0}, {r, -1.0}}, RowSense::kLessEqual, 0.0,
             Name("csl", l, j));
  }
}

// One regime binary: theta = 1 saturates every surviving facility, theta = 0
// serves everyone.
void AddCompactKkt(const ProblemInstance& inst, int l,
                   const std::vector<int>& y, MasterBlock& blk,
                   LinearModel& m) {
  const int nf = inst.num_facilities();
  const int nn = inst.num_customers();
  const auto& s = blk.scenario.disrupted;
  const int theta = m.AddBinary(0.0, Name("theta", l));
  blk.binaries.push_back(theta);
  for (int i = 0; i < nn; ++i) {
    m.AddRow({{blk.u[i], 1.0}, {theta, -inst.demand[i]}}, RowSense::kLessEqual,
             0.0, Name("regu", l, i));
  }
  for (int j = 0; j < nf; ++j) {
    if (s[j] == 1) continue;
    std::vector<Term> terms = {{y[j], inst.capacity[j]}};
    for (int i = 0; i < nn; ++i) terms.push_back({blk.x[i * nf + j], -1.0});
    terms.push_back({theta, inst.capacity[j]});
    m.AddRow(std::move(terms), RowSense::kLessEqual, inst.capacity[j],
             Name("regc", l, j));
  }
}

// sum u <= max(0, D - sum_j K_j (1 - s_j) y_j) with one binary t.
void AddValueFunctionCut(const ProblemInstance& inst, int l,
                         const std::vector<int>& y, MasterBlock& blk,
                         LinearModel& m) {
  const int nf = inst.num_facilities();
  const double total = inst.total_demand();
  double cap_sum = 0.0;
  for (double k : inst.capacity) cap_sum += k;
  const int t = m.AddBinary(0.0, Name("vf", l));
  blk.binaries.push_back(t);
  std::vector<Term> zero_branch;
  for (int u : blk.u) zero_branch.push_back({u, 1.0});
  std::vector<Term> shortage_branch = zero_branch;
  zero_branch.push_back({t, -total});
  m.AddRow(std::move(zero_branch), RowSense::kLessEqual, 0.0, Name("vf0", l));
  for (int j = 0; j < nf; ++j) {
    if (blk.scenario.disrupted[j] == 0) {
      shortage_branch.push_back({y[j], inst.capacity[j]});
    }
  }
  shortage_branch.push_back({t, cap_sum});
  m.AddRow(std::move(shortage_branch), RowSense::kLessEqual, total + cap_sum,
           Name("vf1", l));
}

}  // namespace

MasterArtifacts BuildMaster(const ProblemInstance& inst,
                            const std::vector<Scenario>& pool, ModelKind kind,
                            MasterEncoding encoding) {
  const int nf = inst.num_facilities();
  const int nn = inst.num_customers();
  if (pool.empty()) throw std::invalid_argument("BuildMaster: empty pool");
  for (const Scenario& s : pool) {
    if (s.size() != nf) {
      throw std::invalid_argument("BuildMaster: scenario length mismatch");
    }
  }
  const BigMBundle big_m = DeriveBigM(inst);
  MasterArtifacts mp;
  mp.kind = kind;
  mp.encoding = encoding;
  LinearModel& m = mp.model;
  for (int j = 0; j < nf; ++j) mp.y.push_back(m.AddBinary(0.0, Name("y", j)));
  mp.eta = m.AddVariable(0.0, kInf, 1.0, VarType::kContinuous, "eta");

  for (int l = 0; l < static_cast<int>(pool.size()); ++l) {
    MasterBlock blk;
    blk.scenario = pool[l];
    const auto& s = blk.scenario.disrupted;
    for (int i = 0; i < nn; ++i) {
      for (int j = 0; j < nf; ++j) {
        blk.x.push_back(m.AddVariable(0.0, s[j] == 1 ? 0.0 : kInf, 0.0,
                                      VarType::kContinuous,
                                      Name("x", l, i, j)));
      }
    }
    for (int i = 0; i < nn; ++i) {
      blk.u.push_back(
          m.AddVariable(0.0, kInf, 0.0, VarType::kContinuous, Name("u", l, i)));
    }
    // Capacity: sum_i x_ij <= K_j y_j for surviving facilities.
    for (int j = 0; j < nf; ++j) {
      if (s[j] == 1) continue;
      std::vector<Term> terms;
      for (int i = 0; i < nn; ++i) terms.push_back({blk.x[i * nf + j], 1.0});
      terms.push_back({mp.y[j], -inst.capacity[j]});
      m.AddRow(std::move(terms), RowSense::kLessEqual, 0.0, Name("cap", l, j));
    }
    for (int i = 0; i < nn; ++i) {
      std::vector<Term> terms;
      for (int j = 0; j < nf; ++j) {
        if (s[j] == 0) terms.push_back({blk.x[i * nf + j], 1.0});
      }
      terms.push_back({blk.u[i], 1.0});
      m.AddRow(std::move(terms), RowSense::kEqual, inst.demand[i],
               Name("bal", l, i));
    }
    if (kind == ModelKind::kRbo) {
      switch (encoding) {
        case MasterEncoding::kFullKkt:
          AddFullKkt(inst, big_m, l, mp.y, blk, m);
          break;
        case MasterEncoding::kCompactKkt:
          AddCompactKkt(inst, l, mp.y, blk, m);
          break;
        case MasterEncoding::kValueFunction:
          AddValueFunctionCut(inst, l, mp.y, blk, m);
          break;
      }
    }
    // eta >= f'y + c'x + rho'u
    std::vector<Term> epi = {{mp.eta, 1.0}};
    for (int j = 0; j < nf; ++j) epi.push_back({mp.y[j], -inst.fixed_cost[j]});
    for (int i = 0; i < nn; ++i) {
      for (int j = 0; j < nf; ++j) {
        if (s[j] == 0 && inst.cost(i, j) != 0.0) {
          epi.push_back({blk.x[i * nf + j], -inst.cost(i, j)});
        }
      }
      if (inst.penalty[i] != 0.0) {
        epi.push_back({blk.u[i], -inst.penalty[i]});
      }
    }
    blk.epigraph_row =
        m.AddRow(std::move(epi), RowSense::kGreaterEqual, 0.0, Name("epi", l));
    mp.blocks.push_back(std::move(blk));
  }
  return mp;
}

MasterResult SolveMaster(const MasterArtifacts& mp, const MilpConfig& config) {
  MilpConfig cfg = config;
  cfg.tie_break_vars = mp.y;
  MasterResult r;
  r.milp = SolveMilp(mp.model, cfg);
  if (r.milp.status != MilpStatus::kOptimal) {
    throw std::runtime_error(std::string("master problem not solved: ") +
                             ToString(r.milp.status));
  }
  for (int v : mp.y) r.y.open.push_back(r.milp.values[v] > 0.5 ? 1 : 0);
  r.eta = r.milp.objective;
  for (const MasterBlock& blk : mp.blocks) {
    RecoursePlan plan;
    for (int v : blk.x) plan.allocation.push_back(r.milp.values[v]);
    for (int v : blk.u) plan.unmet.push_back(r.milp.values[v]);
    r.plans.push_back(std::move(plan));
  }
  return r;
}

SubproblemArtifacts BuildSubproblem(const ProblemInstance& inst,
                                    const LocationDecision& y_star,
                                    SpVariant variant, ModelKind kind,
                                    double m_dual) {
  const int nf = inst.num_facilities();
  const int nn = inst.num_customers();
  if (y_star.size() != nf) {
    throw std::invalid_argument("BuildSubproblem: location length mismatch");
  }
  SubproblemArtifacts sp;
  sp.kind = kind;
  sp.variant = variant;
  sp.y_star = y_star;
  sp.m_dual = m_dual > 0.0 ? m_dual : DeriveBigM(inst).m_dual;
  sp.fixed_cost = FixedCost(inst, y_star);
  const double big = sp.m_dual;
  const bool rbo = kind == ModelKind::kRbo;
  const bool ddu = variant == SpVariant::kDdu;
  const auto& y = y_star.open;
  LinearModel& m = sp.model;

  // K_j y*_j, the capacity a facility can lose.
  std::vector<double> ky(nf);
  double ky_sum = 0.0;
  for (int j = 0; j < nf; ++j) {
    ky[j] = y[j] == 1 ? inst.capacity[j] : 0.0;
    ky_sum += ky[j];
  }
  const double total = inst.total_demand();

  for (int j = 0; j < nf; ++j) {
    const double ub = ddu && y[j] == 0 ? 0.0 : 1.0;
    sp.s.push_back(m.AddVariable(0.0, ub, 0.0, VarType::kBinary, Name("s", j)));
  }
  if (rbo) sp.pin = m.AddBinary(0.0, "z");

  std::vector<Term> budget;
  for (int v : sp.s) budget.push_back({v, 1.0});
  m.AddRow(std::move(budget), RowSense::kLessEqual, inst.gamma, "budget");
  if (ddu) {
    for (int j = 0; j < nf; ++j) {
      m.AddRow({{sp.s[j], 1.0}}, RowSense::kLessEqual, y[j], Name("ddu", j));
    }
  }

  // Outer follower-feasible copy (x_bar, u_bar) and the pin of sum u_bar to
  // the follower optimum max(0, E(s)), E(s) = D - sum_j K_j y_j (1 - s_j).
  if (rbo) {
    for (int i = 0; i < nn; ++i) {
      for (int j = 0; j < nf; ++j) {
        sp.x_bar.push_back(m.AddVariable(0.0, y[j] == 1 ? kInf : 0.0, 0.0,
                                         VarType::kContinuous,
                                         Name("xb", i, j)));
      }
    }
    for (int i = 0; i < nn; ++i) {
      sp.u_bar.push_back(
          m.AddVariable(0.0, kInf, 0.0, VarType::kContinuous, Name("ub", i)));
    }
    for (int j = 0; j < nf; ++j) {
      if (y[j] == 0) continue;
      std::vector<Term> terms;
      for (int i = 0; i < nn; ++i) terms.push_back({sp.x_bar[i * nf + j], 1.0});
      terms.push_back({sp.s[j], ky[j]});
      m.AddRow(std::move(terms), RowSense::kLessEqual, ky[j], Name("ocap", j));
    }
    for (int i = 0; i < nn; ++i) {
      std::vector<Term> terms;
      for (int j = 0; j < nf; ++j) {
        if (y[j] == 1) terms.push_back({sp.x_bar[i * nf + j], 1.0});
      }
      terms.push_back({sp.u_bar[i], 1.0});
      m.AddRow(std::move(terms), RowSense::kEqual, inst.demand[i],
               Name("obal", i));
    }
    std::vector<Term> pin0;
    for (int v : sp.u_bar) pin0.push_back({v, 1.0});
    std::vector<Term> pin1 = pin0;
    pin0.push_back({sp.pin, -total});
    m.AddRow(std::move(pin0), RowSense::kLessEqual, 0.0, "pin0");
    const double pin_m = total + ky_sum;
    for (int j = 0; j < nf; ++j) {
      if (ky[j] > 0.0) pin1.push_back({sp.s[j], -ky[j]});
    }
    pin1.push_back({sp.pin, pin_m});
    m.AddRow(std::move(pin1), RowSense::kLessEqual, total - ky_sum + pin_m,
             "pin1");
  }

  // Inner leader LP: min c'x + rho'u over the follower-feasible set with
  // sum u <= sum u_bar.
  for (int i = 0; i < nn; ++i) {
    for (int j = 0; j < nf; ++j) {
      sp.x.push_back(m.AddVariable(0.0, y[j] == 1 ? kInf : 0.0,
                                   -inst.cost(i, j), VarType::kContinuous,
                                   Name("x", i, j)));
    }
  }
  for (int i = 0; i < nn; ++i) {
    sp.u.push_back(m.AddVariable(0.0, kInf, -inst.penalty[i],
                                 VarType::kContinuous, Name("u", i)));
  }
  for (int j = 0; j < nf; ++j) {
    if (y[j] == 0) continue;
    std::vector<Term> terms;
    for (int i = 0; i < nn; ++i) terms.push_back({sp.x[i * nf + j], 1.0});
    std::vector<Term> plain_terms = terms;
    terms.push_back({sp.s[j], ky[j]});
    m.AddRow(std::move(terms), RowSense::kLessEqual, ky[j], Name("icap", j));
    if (ddu) {
      m.AddRow(std::move(plain_terms), RowSense::kLessEqual, ky[j],
               Name("icap_ddu", j));
    }
  }
  for (int i = 0; i < nn; ++i) {
    std::vector<Term> terms;
    for (int j = 0; j < nf; ++j) {
      if (y[j] == 1) terms.push_back({sp.x[i * nf + j], 1.0});
    }
    terms.push_back({sp.u[i], 1.0});
    m.AddRow(std::move(terms), RowSense::kEqual, inst.demand[i],
             Name("ibal", i));
  }
  if (rbo) {
    std::vector<Term> terms;
    for (int v : sp.u) terms.push_back({v, 1.0});
    for (int v : sp.u_bar) terms.push_back({v, -1.0});
    m.AddRow(std::move(terms), RowSense::kLessEqual, 0.0, "ibudget");
  }

  // Inner duals: alpha_j (capacity), beta_i (balance), gamma (budget).
  for (int j = 0; j < nf; ++j) {
    sp.alpha.push_back(
        m.AddVariable(0.0, big, 0.0, VarType::kContinuous, Name("alpha", j)));
  }
  for (int i = 0; i < nn; ++i) {
    sp.beta.push_back(
        m.AddVariable(0.0, big, 0.0, VarType::kContinuous, Name("beta", i)));
  }
  if (rbo) {
    sp.gamma = m.AddVariable(0.0, big, 0.0, VarType::kContinuous, "gamma");
  }
  for (int i = 0; i < nn; ++i) {
    for (int j = 0; j < nf; ++j) {
      if (y[j] == 0) continue;
      m.AddRow({{sp.alpha[j], 1.0}, {sp.beta[i], -1.0}},
               RowSense::kGreaterEqual, -inst.cost(i, j), Name("dfx", i, j));
    }
    std::vector<Term> terms = {{sp.beta[i], -1.0}};
    if (rbo) terms.push_back({sp.gamma, 1.0});
    m.AddRow(std::move(terms), RowSense::kGreaterEqual, -inst.penalty[i],
             Name("dfu", i));
  }

  // q_j = alpha_j s_j and p_j = gamma s_j.
  auto add_product = [&](int dual, int j, const char* stem) {
    const int w =
        m.AddVariable(0.0, big, 0.0, VarType::kContinuous, Name(stem, j));
    m.AddRow({{w, 1.0}, {sp.s[j], -big}}, RowSense::kLessEqual, 0.0,
             Name(stem, j, 0));
    m.AddRow({{w, 1.0}, {dual, -1.0}}, RowSense::kLessEqual, 0.0,
             Name(stem, j, 1));
    m.AddRow({{w, 1.0}, {dual, -1.0}, {sp.s[j], -big}}, RowSense::kGreaterEqual,
             -big, Name(stem, j, 2));
    return w;
  };
  for (int j = 0; j < nf; ++j) {
    sp.q.push_back(y[j] == 1 ? add_product(sp.alpha[j], j, "q") : -1);
  }
  if (rbo) {
    for (int j = 0; j < nf; ++j) {
      sp.p.push_back(y[j] == 1 ? add_product(sp.gamma, j, "p") : -1);
    }
    // v >= gamma * E(s) = gamma (D - sum K y) + sum K y p.
    sp.v = m.AddVariable(0.0, kInf, 0.0, VarType::kContinuous, "v");
    std::vector<Term> terms = {{sp.v, 1.0}, {sp.gamma, -(total - ky_sum)}};
    for (int j = 0; j < nf; ++j) {
      if (y[j] == 1) terms.push_back({sp.p[j], -ky[j]});
    }
    m.AddRow(std::move(terms), RowSense::kGreaterEqual, 0.0, "vepi");
  }

  // Strong duality (primal <= dual):
  // c'x + rho'u - beta'd + sum_j K_j y_j (alpha_j - q_j) + v <= 0.
  std::vector<Term> sd;
  for (int i = 0; i < nn; ++i) {
    for (int j = 0; j < nf; ++j) {
      if (y[j] == 1 && inst.cost(i, j) != 0.0) {
        sd.push_back({sp.x[i * nf + j], inst.cost(i, j)});
      }
    }
    if (inst.penalty[i] != 0.0) sd.push_back({sp.u[i], inst.penalty[i]});
    sd.push_back({sp.beta[i], -inst.demand[i]});
  }
  for (int j = 0; j < nf; ++j) {
    if (y[j] == 0) continue;
    sd.push_back({sp.alpha[j], ky[j]});
    sd.push_back({sp.q[j], -ky[j]});
  }
  if (rbo) sd.push_back({sp.v, 1.0});
  m.AddRow(std::move(sd), RowSense::kLessEqual, 0.0, "strong_duality");

  m.set_objective_offset(-sp.fixed_cost);
  return sp;
}

namespace {

SubproblemResult ReadSubproblem(const SubproblemArtifacts& sp,
                                const MilpSolution& sol) {
  SubproblemResult r;
  for (int v : sp.s) r.worst.disrupted.push_back(sol.values[v] > 0.5 ? 1 : 0);
  r.value = -sol.objective;
  for (int v : sp.x) r.plan.allocation.push_back(std::max(0.0, sol.values[v]));
  for (int v : sp.u) r.plan.unmet.push_back(std::max(0.0, sol.values[v]));
  for (int v : sp.x_bar) {
    r.outer_plan.allocation.push_back(std::max(0.0, sol.values[v]));
  }
  for (int v : sp.u_bar) {
    r.outer_plan.unmet.push_back(std::max(0.0, sol.values[v]));
  }
  r.m_dual = sp.m_dual;
  r.nodes = sol.nodes;
  return r;
}

// True when a dual that carries objective weight sits at its big-M.
bool DualAtBound(const ProblemInstance& inst, const SubproblemArtifacts& sp,
                 const MilpSolution& sol, const Scenario& worst) {
  const double limit = sp.m_dual - 1e-6;
  for (int i = 0; i < inst.num_customers(); ++i) {
    if (inst.demand[i] > 0.0 && sol.values[sp.beta[i]] >= limit) return true;
  }
  for (int j = 0; j < inst.num_facilities(); ++j) {
    if (sp.y_star.open[j] == 1 && worst.disrupted[j] == 0 &&
        sol.values[sp.alpha[j]] >= limit) {
      return true;
    }
  }
  if (sp.gamma >= 0 && sol.values[sp.gamma] >= limit) {
    double unmet = 0.0;
    for (int v : sp.u_bar) unmet += sol.values[v];
    if (unmet > 1e-9) return true;
  }
  return false;
}

}  // namespace

SubproblemResult SolveSubproblem(const ProblemInstance& inst,
                                 const LocationDecision& y_star,
                                 SpVariant variant, ModelKind kind,
                                 const MilpConfig& config) {
  MilpConfig cfg = config;
  cfg.explore_ties = true;
  double m_dual = DeriveBigM(inst).m_dual;
  if (m_dual <= 0.0) m_dual = 1.0;  // all-zero costs: any positive bound
  int escalations = 0;
  auto solve = [&](double big) {
    SubproblemArtifacts sp = BuildSubproblem(inst, y_star, variant, kind, big);
    cfg.tie_break_vars = sp.s;
    MilpSolution sol = SolveMilp(sp.model, cfg);
    if (sol.status != MilpStatus::kOptimal) {
      throw std::runtime_error(std::string("subproblem not solved: ") +
                               ToString(sol.status));
    }
    return std::make_pair(std::move(sp), std::move(sol));
  };
  auto [sp, sol] = solve(m_dual);
  SubproblemResult result = ReadSubproblem(sp, sol);
  while (DualAtBound(inst, sp, sol, result.worst)) {
    if (escalations == 3) {
      throw BigMEscalationError(
          "subproblem dual bound still binding after 3 doublings");
    }
    m_dual *= 2.0;
    ++escalations;
    auto [sp2, sol2] = solve(m_dual);
    SubproblemResult next = ReadSubproblem(sp2, sol2);
    const bool moved = std::abs(next.value - result.value) >
                       1e-9 * std::max(1.0, std::abs(result.value));
    sp = std::move(sp2);
    sol = std::move(sol2);
    result = std::move(next);
    if (!moved) break;
  }
  result.escalations = escalations;
  return result;
}

}  // namespace rbflp
