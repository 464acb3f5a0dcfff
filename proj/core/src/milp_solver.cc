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

#include "rbflp/milp_solver.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <utility>

#include "rbflp/lp_solver.h"

namespace rbflp {

const char* ToString(MilpStatus status) {
  switch (status) {
    case MilpStatus::kOptimal:
      return "optimal";
    case MilpStatus::kInfeasible:
      return "infeasible";
    case MilpStatus::kUnbounded:
      return "unbounded";
    case MilpStatus::kNodeLimit:
      return "node-limit";
    case MilpStatus::kTimeLimit:
      return "time-limit";
  }
  return "unknown";
}

namespace {

struct Node {
  double bound;
  int depth;
  int64_t id;
  std::vector<std::pair<int, signed char>> fixes;  // binary var -> value
};

struct NodeOrder {
  // priority_queue pops the "largest": invert for best-bound first.
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id < b.id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const LinearModel& model, const MilpConfig& config)
      : model_(model), config_(config), engine_(model) {
    for (int j = 0; j < model.num_vars(); ++j) {
      if (model.var(j).type == VarType::kBinary) binaries_.push_back(j);
    }
    tie_vars_ =
        config.tie_break_vars.empty() ? binaries_ : config.tie_break_vars;
    applied_.assign(model.num_vars(), -1);
    start_ = std::chrono::steady_clock::now();
  }

  MilpSolution Run() {
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    open.push(Node{-kInf, 0, next_id_++, {}});
    double trace_bound = -kInf;
    bool stopped = false;
    MilpStatus stop_status = MilpStatus::kOptimal;

    while (!open.empty()) {
      if (result_.nodes >= config_.node_limit) {
        stopped = true;
        stop_status = MilpStatus::kNodeLimit;
        break;
      }
      if (config_.time_limit_seconds > 0 &&
          Elapsed() > config_.time_limit_seconds) {
        stopped = true;
        stop_status = MilpStatus::kTimeLimit;
        break;
      }
      Node node = open.top();
      open.pop();
      if (result_.has_incumbent && Prunable(node.bound)) continue;
      ++result_.nodes;

      Apply(node.fixes);
      const LpSolution lp = engine_.Solve();
      result_.lp_iterations += lp.iterations;
      if (lp.status == LpStatus::kUnbounded) {
        result_.status = MilpStatus::kUnbounded;
        return result_;
      }
      if (lp.status == LpStatus::kOptimal &&
          !(result_.has_incumbent && Prunable(lp.objective))) {
        const int branch_var = MostFractional(lp.primal);
        if (branch_var < 0) {
          OfferIncumbent(node.fixes, lp);
          // An integral node may still hide a tied optimum with a smaller
          // tie-break pattern.
          const int tie_var =
              config_.explore_ties ? TieBranchVar(node.fixes, lp.primal) : -1;
          if (tie_var >= 0) {
            for (int value = 1; value >= 0; --value) {
              Node child{std::max(node.bound, lp.objective), node.depth + 1,
                         next_id_++, node.fixes};
              child.fixes.emplace_back(tie_var,
                                       static_cast<signed char>(value));
              open.push(std::move(child));
            }
          }
        } else {
          const double v = lp.primal[branch_var];
          for (int side = 0; side < 2; ++side) {
            Node child{std::max(node.bound, lp.objective), node.depth + 1,
                       next_id_++, node.fixes};
            // The child pushed last pops first on ties: make it the one
            // nearest to the LP value.
            const int value = (side == 1) == (v >= 0.5) ? 1 : 0;
            child.fixes.emplace_back(branch_var,
                                     static_cast<signed char>(value));
            open.push(std::move(child));
          }
        }
      }
      double bound = open.empty() ? result_.objective : open.top().bound;
      if (result_.has_incumbent) bound = std::min(bound, result_.objective);
      trace_bound = std::max(trace_bound, bound);
      result_.bound_trace.push_back(trace_bound);
    }

    if (stopped) {
      double bound = open.empty() ? result_.objective : open.top().bound;
      if (result_.has_incumbent) bound = std::min(bound, result_.objective);
      result_.best_bound = std::max(trace_bound, bound);
      result_.status = stop_status;
    } else {
      result_.status = result_.has_incumbent ? MilpStatus::kOptimal
                                             : MilpStatus::kInfeasible;
      // Every leaf is integral, infeasible or pruned; pruned nodes may carry
      // bounds just below the incumbent.
      result_.best_bound = result_.has_incumbent
                               ? std::min(result_.objective, lowest_pruned_)
                               : kInf;
    }
    if (result_.has_incumbent) {
      result_.gap = std::max(0.0, result_.objective - result_.best_bound) /
                    std::max(1.0, std::abs(result_.objective));
    }
    return result_;
  }

 private:
  double Elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

  bool Prunable(double bound) {
    const double inc = result_.objective;
    const double scale = std::max(1.0, std::abs(inc));
    const bool prune = config_.explore_ties
                           ? bound > inc + kIncumbentTieTol * scale
                           : bound >= inc - config_.relative_gap * scale;
    if (prune) lowest_pruned_ = std::min(lowest_pruned_, bound);
    return prune;
  }

  void Apply(const std::vector<std::pair<int, signed char>>& fixes) {
    std::vector<signed char> want(model_.num_vars(), -1);
    for (const auto& [var, value] : fixes) want[var] = value;
    for (int j : binaries_) {
      if (want[j] == applied_[j]) continue;
      if (want[j] < 0) {
        engine_.SetBounds(j, model_.var(j).lower, model_.var(j).upper);
      } else {
        const double v = want[j];
        engine_.SetBounds(j, v, v);
      }
      applied_[j] = want[j];
    }
  }

  int MostFractional(const std::vector<double>& x) const {
    int best = -1;
    double best_dist = 0.5;
    for (int j : binaries_) {
      const double frac = x[j] - std::floor(x[j]);
      if (frac <= kIntegralityTol || frac >= 1.0 - kIntegralityTol) continue;
      const double dist = std::abs(frac - 0.5);
      if (best < 0 || dist < best_dist - 1e-12) {
        best = j;
        best_dist = dist;
      }
    }
    return best;
  }

  // Most significant free tie-break binary sitting at 1, or -1.
  int TieBranchVar(const std::vector<std::pair<int, signed char>>& fixes,
                   const std::vector<double>& x) const {
    for (auto it = tie_vars_.rbegin(); it != tie_vars_.rend(); ++it) {
      if (x[*it] < 0.5) continue;
      bool fixed = false;
      for (const auto& f : fixes) fixed = fixed || f.first == *it;
      if (!fixed) return *it;
    }
    return -1;
  }

  bool TieBreakLess(const std::vector<double>& a,
                    const std::vector<double>& b) const {
    for (auto it = tie_vars_.rbegin(); it != tie_vars_.rend(); ++it) {
      const int va = a[*it] > 0.5;
      const int vb = b[*it] > 0.5;
      if (va != vb) return va < vb;
    }
    return false;
  }

  // Re-solves with every binary fixed at its rounded value so the reported
  // point is exactly integral and feasible to the LP tolerances.
  void OfferIncumbent(const std::vector<std::pair<int, signed char>>& fixes,
                      const LpSolution& lp) {
    std::vector<std::pair<int, signed char>> all;
    all.reserve(binaries_.size());
    for (int j : binaries_) {
      all.emplace_back(j, static_cast<signed char>(std::lround(lp.primal[j])));
    }
    std::vector<double> values = lp.primal;
    double objective = lp.objective;
    if (!binaries_.empty()) {
      Apply(all);
      const LpSolution fixed = engine_.Solve();
      result_.lp_iterations += fixed.iterations;
      Apply(fixes);
      if (fixed.status != LpStatus::kOptimal) return;
      values = fixed.primal;
      objective = fixed.objective;
      for (int j : binaries_) values[j] = std::round(values[j]);
    }
    bool take = !result_.has_incumbent;
    if (!take) {
      if (objective < result_.objective - kIncumbentTieTol) {
        take = true;
      } else if (objective <= result_.objective + kIncumbentTieTol &&
                 TieBreakLess(values, result_.values)) {
        take = true;
      }
    }
    if (take) {
      result_.has_incumbent = true;
      result_.objective = objective;
      result_.values = std::move(values);
    }
  }

  const LinearModel& model_;
  const MilpConfig& config_;
  SimplexEngine engine_;
  std::vector<int> binaries_;
  std::vector<int> tie_vars_;
  std::vector<signed char> applied_;
  MilpSolution result_;
  int64_t next_id_ = 0;
  double lowest_pruned_ = kInf;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

MilpSolution SolveMilp(const LinearModel& model, const MilpConfig& config) {
  model.Validate();
  if (model.num_vars() < 1) {
    throw std::invalid_argument("SolveMilp: model has no variables");
  }
  for (int v : config.tie_break_vars) {
    if (v < 0 || v >= model.num_vars()) {
      throw std::invalid_argument("SolveMilp: bad tie-break variable");
    }
  }
  BranchAndBound bb(model, config);
  return bb.Run();
}

}  // namespace rbflp
