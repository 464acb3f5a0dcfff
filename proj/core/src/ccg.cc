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

#include "rbflp/ccg.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "number_format.h"
#include "rbflp/oracle.h"

namespace rbflp {

const char* ToString(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kCcg:
      return "ccg";
    case Algorithm::kCcgDdu:
      return "ccg-ddu";
    case Algorithm::kEnumeration:
      return "enum";
    case Algorithm::kOracle:
      return "oracle";
  }
  return "unknown";
}

Algorithm ParseAlgorithm(const std::string& text) {
  if (text == "ccg") return Algorithm::kCcg;
  if (text == "ccg-ddu") return Algorithm::kCcgDdu;
  if (text == "enum" || text == "enumeration") return Algorithm::kEnumeration;
  if (text == "oracle") return Algorithm::kOracle;
  throw std::invalid_argument("unknown algorithm: " + text);
}

const char* ToString(Termination termination) {
  switch (termination) {
    case Termination::kConverged:
      return "converged";
    case Termination::kCap:
      return "cap";
    case Termination::kStalled:
      return "stalled";
  }
  return "unknown";
}

SpEnumerationResult SolveSpEnumeration(const ProblemInstance& inst,
                                       const LocationDecision& y,
                                       ModelKind kind, ScenarioKind space,
                                       uint64_t cap) {
  const int m =
      space == ScenarioKind::kPlain ? inst.num_facilities() : y.count();
  if (ScenarioCount(m, inst.gamma) > cap) {
    throw EnumerationCapError("scenario space exceeds the enumeration cap");
  }
  const ScenarioSet set = EnumerateScenarios(
      inst, space,
      space == ScenarioKind::kPlain ? std::optional<LocationDecision>() : y);
  const double fixed = FixedCost(inst, y);
  SpEnumerationResult r;
  for (const Scenario& s : set.scenarios) {
    const double v = fixed + Recourse(inst, y, s, kind).cost;
    const double tol = kIncumbentTieTol * std::max(1.0, std::abs(r.value));
    if (r.evaluated++ == 0 || v > r.value + tol ||
        (v >= r.value - tol &&
         BitPatternLess(s.disrupted, r.worst.disrupted))) {
      r.value = r.evaluated == 1 ? v : std::max(r.value, v);
      r.worst = s;
    }
  }
  return r;
}

double EvaluateFirstStage(const ProblemInstance& inst,
                          const LocationDecision& y, ModelKind kind) {
  return SolveSpEnumeration(inst, y, kind, ScenarioKind::kPlain).value;
}

double RelativeGap(double lower, double upper, double tol) {
  if (upper <= 0.0) return lower >= -tol ? 0.0 : kInf;
  return std::max(0.0, (upper - lower) / upper);  // LB may pass UB by roundoff
}

std::string TraceHeader() {
  return "iteration\tLB\tUB\tgap\tscenario\tmp_seconds\tsp_seconds";
}

std::string TraceLine(const IterationRecord& r) {
  using internal::FormatNumber;
  std::ostringstream out;
  out << r.iteration << '\t' << FormatNumber(r.lower_bound) << '\t'
      << FormatNumber(r.upper_bound) << '\t' << FormatNumber(r.gap) << '\t'
      << BitString(r.scenario.disrupted) << '\t' << FormatNumber(r.mp_seconds)
      << '\t' << FormatNumber(r.sp_seconds);
  return out.str();
}

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point from) {
  return std::chrono::duration<double>(Clock::now() - from).count();
}

SolveReport FromOracle(const ProblemInstance& inst, ModelKind kind,
                       Clock::time_point start) {
  const OracleResult o = BruteForceSolve(inst, kind);
  SolveReport rep;
  rep.kind = kind;
  rep.algorithm = Algorithm::kOracle;
  rep.y = o.y;
  rep.worst = o.worst;
  rep.plan = Recourse(inst, o.y, o.worst, kind).plan;
  rep.objective = rep.lower_bound = rep.upper_bound = o.objective;
  rep.gap = 0.0;
  IterationRecord rec;
  rec.iteration = 1;
  rec.y = o.y;
  rec.eta = rec.psi = o.objective;
  rec.scenario = o.worst;
  rec.lower_bound = rec.upper_bound = o.objective;
  rep.iteration_count = 1;
  rep.wall_seconds = Seconds(start);
  rec.sp_seconds = rep.wall_seconds;
  rep.iterations.push_back(rec);
  return rep;
}

}  // namespace

SolveReport SolveCcg(const ProblemInstance& inst, ModelKind kind,
                     Algorithm algorithm, const CcgConfig& config) {
  const Clock::time_point start = Clock::now();
  if (algorithm == Algorithm::kOracle) return FromOracle(inst, kind, start);

  const int nf = inst.num_facilities();
  const bool ddu = algorithm == Algorithm::kCcgDdu;
  const ScenarioKind space =
      ddu ? ScenarioKind::kDecisionDependent : ScenarioKind::kPlain;
  const bool enumerate_sp =
      algorithm == Algorithm::kEnumeration ||
      (kind == ModelKind::kRo && nf <= config.ro_enumeration_max_facilities);

  SolveReport rep;
  rep.kind = kind;
  rep.algorithm = algorithm;
  rep.termination = Termination::kCap;
  std::vector<Scenario> pool = {Scenario{BinaryVector(nf, 0)}};
  rep.scenarios_added = pool;
  double lb = -kInf;
  double ub = kInf;
  if (config.trace != nullptr) *config.trace << TraceHeader() << '\n';

  for (int it = 1; it <= config.max_iterations; ++it) {
    if (config.time_limit_seconds > 0 &&
        Seconds(start) > config.time_limit_seconds) {
      break;
    }
    IterationRecord rec;
    rec.iteration = it;

    Clock::time_point t = Clock::now();
    const MasterArtifacts mp = BuildMaster(inst, pool, kind, config.encoding);
    const MasterResult mres = SolveMaster(mp, config.milp);
    rec.mp_seconds = Seconds(t);
    rec.mp_nodes = mres.milp.nodes;
    rec.y = mres.y;
    rec.eta = mres.eta;
    lb = std::max(lb, mres.eta);

    t = Clock::now();
    if (enumerate_sp) {
      const SpEnumerationResult e =
          SolveSpEnumeration(inst, mres.y, kind, space);
      rec.psi = e.value;
      rec.scenario = e.worst;
    } else {
      const SubproblemResult sp = SolveSubproblem(
          inst, mres.y, ddu ? SpVariant::kDdu : SpVariant::kPlain, kind,
          config.milp);
      rec.psi = sp.value;
      rec.scenario = sp.worst;
      rec.sp_nodes = sp.nodes;
      if (config.verify_subproblem) {
        const SpEnumerationResult e =
            SolveSpEnumeration(inst, mres.y, kind, space);
        if (std::abs(e.value - sp.value) >
            1e-6 * std::max(1.0, std::abs(e.value))) {
          throw std::logic_error("subproblem MILP disagrees with enumeration");
        }
      }
    }
    rec.sp_seconds = Seconds(t);

    if (rec.psi < ub) {
      ub = rec.psi;
      rep.y = rec.y;
      rep.worst = rec.scenario;
    }
    rec.lower_bound = lb;
    rec.upper_bound = ub;
    rec.gap = RelativeGap(lb, ub, config.gap_tol);
    rep.iterations.push_back(rec);
    if (config.trace != nullptr) *config.trace << TraceLine(rec) << '\n';

    if (rec.gap <= config.gap_tol) {
      rep.termination = Termination::kConverged;
      break;
    }
    if (std::find(pool.begin(), pool.end(), rec.scenario) != pool.end()) {
      // A repeated scenario leaves the master unchanged.
      rep.termination = Termination::kStalled;
      break;
    }
    pool.push_back(rec.scenario);
    rep.scenarios_added.push_back(rec.scenario);
  }

  rep.iteration_count = static_cast<int>(rep.iterations.size());
  rep.lower_bound = lb;
  rep.upper_bound = ub;
  rep.gap = rep.iterations.empty() ? kInf : RelativeGap(lb, ub, config.gap_tol);
  rep.objective = ub;
  if (!rep.iterations.empty()) {
    rep.plan = Recourse(inst, rep.y, rep.worst, kind).plan;
  }
  rep.wall_seconds = Seconds(start);
  return rep;
}

}  // namespace rbflp
