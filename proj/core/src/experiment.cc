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

#include "rbflp/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "number_format.h"

namespace rbflp {

using internal::FormatNumber;
using Json = nlohmann::ordered_json;

std::optional<double> CapacityUtilization(const ProblemInstance& inst,
                                          const LocationDecision& y,
                                          const RecoursePlan& plan) {
  const int nf = inst.num_facilities();
  const int nn = inst.num_customers();
  double sum = 0.0;
  int open = 0;
  for (int j = 0; j < nf; ++j) {
    if (y.open[j] == 0) continue;
    double used = 0.0;
    for (int i = 0; i < nn; ++i) used += plan.allocation[i * nf + j];
    sum += used / inst.capacity[j];
    ++open;
  }
  if (open == 0) return std::nullopt;
  return sum / open;
}

std::optional<double> UnitServiceCost(double total_cost, double served) {
  if (served <= 0.0) return std::nullopt;
  return total_cost / served;
}

CostServiceRatios ComputeCostServiceRatios(const SolveReport& rbo,
                                           const SolveReport& ro) {
  CostServiceRatios r;
  if (ro.objective != 0.0) r.cost_ratio = rbo.objective / ro.objective;
  const double ro_served = ro.plan.total_served();
  if (ro_served > 0.0) r.service_ratio = rbo.plan.total_served() / ro_served;
  return r;
}

double Percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw std::invalid_argument("Percentile: empty sample");
  if (!(pct >= 0.0 && pct <= 100.0)) {
    throw std::invalid_argument("Percentile: percentile outside [0, 100]");
  }
  std::sort(values.begin(), values.end());
  const double pos = pct / 100.0 * static_cast<double>(values.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] +
         (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

MetricsRow MakeMetricsRow(const ProblemInstance& inst,
                          const SolveReport& report) {
  MetricsRow row;
  row.gamma = inst.gamma;
  row.penalty_label = "instance";
  row.kind = report.kind;
  row.algorithm = report.algorithm;
  row.w = report.objective;
  row.served = report.plan.total_served();
  row.unmet = report.plan.total_unmet();
  row.open = report.y.count();
  row.usc = UnitServiceCost(report.objective, row.served);
  row.omega = CapacityUtilization(inst, report.y, report.plan);
  row.wall_seconds = report.wall_seconds;
  row.iterations = report.iteration_count;
  row.termination = report.termination;
  row.y = report.y;
  row.plan = report.plan;
  return row;
}

Algorithm DefaultAlgorithm(ModelKind kind) {
  return kind == ModelKind::kRbo ? Algorithm::kCcgDdu : Algorithm::kCcg;
}

namespace {

// Runs every task on a small pool; each task writes only its own slot.
void RunAll(std::vector<std::function<void()>>& tasks, unsigned max_parallel) {
  unsigned workers = max_parallel != 0
                         ? max_parallel
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<size_t>(workers, tasks.size()));
  std::atomic<size_t> next{0};
  auto drain = [&] {
    for (size_t k = next++; k < tasks.size(); k = next++) tasks[k]();
  };
  if (workers <= 1) {
    drain();
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(drain);
  for (std::thread& t : pool) t.join();
}

MetricsRow SolveCell(ProblemInstance inst, int gamma, ModelKind kind,
                     const SweepConfig& config) {
  inst.gamma = gamma;
  const Algorithm algo =
      kind == ModelKind::kRbo ? config.rbo_algorithm : config.ro_algorithm;
  try {
    return MakeMetricsRow(inst, SolveCcg(inst, kind, algo, config.ccg));
  } catch (const std::exception& e) {
    MetricsRow row;
    row.gamma = gamma;
    row.kind = kind;
    row.algorithm = algo;
    row.failed = true;
    row.error = e.what();
    return row;
  }
}

void CheckGammas(const ProblemInstance& inst, const std::vector<int>& gammas) {
  for (int g : gammas) {
    if (g < 0 || g > inst.num_facilities()) {
      throw std::invalid_argument("gamma " + std::to_string(g) +
                                  " outside [0, |F|]");
    }
  }
}

std::string Cell(const std::optional<double>& v) {
  return v ? FormatNumber(*v) : "undefined";
}

std::string Cell(const MetricsRow& row, const std::optional<double>& v) {
  return row.failed ? "failed" : Cell(v);
}

const MetricsRow* Find(const std::vector<MetricsRow>& rows, int gamma,
                       ModelKind kind) {
  for (const MetricsRow& r : rows) {
    if (r.gamma == gamma && r.kind == kind) return &r;
  }
  return nullptr;
}

std::string PercentileLabel(double pct) { return "p" + FormatNumber(pct); }

}  // namespace

std::vector<MetricsRow> SweepGamma(const ProblemInstance& inst,
                                   const SweepConfig& config) {
  CheckGammas(inst, config.gammas);
  std::vector<MetricsRow> rows(2 * config.gammas.size());
  std::vector<std::function<void()>> tasks;
  for (size_t g = 0; g < config.gammas.size(); ++g) {
    for (int k = 0; k < 2; ++k) {
      const ModelKind kind = k == 0 ? ModelKind::kRbo : ModelKind::kRo;
      tasks.push_back([&, g, k, kind] {
        rows[2 * g + k] = SolveCell(inst, config.gammas[g], kind, config);
      });
    }
  }
  RunAll(tasks, config.max_parallel);
  return rows;
}

std::vector<PenaltyCell> SweepPenalty(const ProblemInstance& inst,
                                      const std::vector<double>& percentiles,
                                      const SweepConfig& config) {
  CheckGammas(inst, config.gammas);
  const auto [lo, hi] =
      std::minmax_element(inst.assign_cost.begin(), inst.assign_cost.end());
  if (lo == inst.assign_cost.end() || *lo == *hi) {
    throw std::invalid_argument("SweepPenalty: assignment costs are all equal");
  }
  std::vector<PenaltyCell> cells;
  for (int g : config.gammas) {
    for (double pct : percentiles) {
      PenaltyCell c;
      c.gamma = g;
      c.percentile = pct;
      c.rho = Percentile(inst.assign_cost, pct);
      cells.push_back(c);
    }
  }
  std::vector<std::function<void()>> tasks;
  for (PenaltyCell& c : cells) {
    for (int k = 0; k < 2; ++k) {
      tasks.push_back([&inst, &config, &c, k] {
        ProblemInstance copy = inst;
        std::fill(copy.penalty.begin(), copy.penalty.end(), c.rho);
        const ModelKind kind = k == 0 ? ModelKind::kRbo : ModelKind::kRo;
        MetricsRow row = SolveCell(std::move(copy), c.gamma, kind, config);
        row.penalty_label = PercentileLabel(c.percentile);
        row.rho = c.rho;
        (k == 0 ? c.rbo : c.ro) = std::move(row);
      });
    }
  }
  RunAll(tasks, config.max_parallel);
  for (PenaltyCell& c : cells) {
    if (c.rbo.failed || c.ro.failed) continue;
    c.y_diff = c.ro.open - c.rbo.open;
    c.x_diff = c.ro.served - c.rbo.served;
  }
  return cells;
}

void WriteFig5Csv(const std::vector<MetricsRow>& rows, std::ostream& out) {
  out << "gamma,kind,W,served\n";
  for (const MetricsRow& r : rows) {
    out << r.gamma << ',' << ToString(r.kind) << ',' << Cell(r, r.w) << ','
        << Cell(r, r.served) << '\n';
  }
}

void WriteFig6Csv(const std::vector<MetricsRow>& rows, std::ostream& out) {
  out << "gamma,kind,usc\n";
  for (const MetricsRow& r : rows) {
    out << r.gamma << ',' << ToString(r.kind) << ',' << Cell(r, r.usc) << '\n';
  }
}

void WriteFig7Csv(const std::vector<MetricsRow>& rows, std::ostream& out) {
  out << "gamma,cost_ratio,service_ratio\n";
  std::vector<int> seen;
  for (const MetricsRow& r : rows) {
    if (std::find(seen.begin(), seen.end(), r.gamma) != seen.end()) continue;
    seen.push_back(r.gamma);
    const MetricsRow* rbo = Find(rows, r.gamma, ModelKind::kRbo);
    const MetricsRow* ro = Find(rows, r.gamma, ModelKind::kRo);
    out << r.gamma << ',';
    if (rbo == nullptr || ro == nullptr || rbo->failed || ro->failed) {
      out << "failed,failed\n";
      continue;
    }
    std::optional<double> cost, service;
    if (ro->w != 0.0) cost = rbo->w / ro->w;
    if (ro->served > 0.0) service = rbo->served / ro->served;
    out << Cell(cost) << ',' << Cell(service) << '\n';
  }
}

void WriteFig8Csv(const std::vector<MetricsRow>& rows, std::ostream& out) {
  out << "gamma,kind,omega\n";
  for (const MetricsRow& r : rows) {
    out << r.gamma << ',' << ToString(r.kind) << ',' << Cell(r, r.omega)
        << '\n';
  }
}

void WriteFig10aCsv(const std::vector<PenaltyCell>& cells, std::ostream& out) {
  out << "gamma,percentile,y_diff\n";
  for (const PenaltyCell& c : cells) {
    out << c.gamma << ',' << FormatNumber(c.percentile) << ','
        << (c.y_diff ? std::to_string(*c.y_diff) : "failed") << '\n';
  }
}

void WriteFig10bCsv(const std::vector<PenaltyCell>& cells, std::ostream& out) {
  out << "gamma,percentile,x_diff\n";
  for (const PenaltyCell& c : cells) {
    out << c.gamma << ',' << FormatNumber(c.percentile) << ','
        << (c.x_diff ? FormatNumber(*c.x_diff) : "failed") << '\n';
  }
}

void WriteArcsCsv(const ProblemInstance& inst, const std::vector<ArcSet>& sets,
                  std::ostream& out) {
  const int nf = inst.num_facilities();
  const int nn = inst.num_customers();
  const bool coords = static_cast<int>(inst.facility_coords.size()) == nf &&
                      static_cast<int>(inst.customer_coords.size()) == nn;
  out << "kind,gamma,customer,facility,customer_x,customer_y,facility_x,"
         "facility_y,flow\n";
  for (const ArcSet& s : sets) {
    for (int i = 0; i < nn; ++i) {
      for (int j = 0; j < nf; ++j) {
        const double flow = s.plan.allocation[i * nf + j];
        if (flow <= 1e-9) continue;
        out << ToString(s.kind) << ',' << s.gamma << ',' << inst.customer_ids[i]
            << ',' << inst.facility_ids[j] << ',';
        if (coords) {
          out << FormatNumber(inst.customer_coords[i].x) << ','
              << FormatNumber(inst.customer_coords[i].y) << ','
              << FormatNumber(inst.facility_coords[j].x) << ','
              << FormatNumber(inst.facility_coords[j].y);
        } else {
          out << ",,,";
        }
        out << ',' << FormatNumber(flow) << '\n';
      }
    }
  }
}

namespace {

Json Optional(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json Bound(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json MetricsJson(const ProblemInstance& inst, const SolveReport& rep) {
  const MetricsRow row = MakeMetricsRow(inst, rep);
  Json j;
  j["served"] = row.served;
  j["unmet"] = row.unmet;
  j["open"] = row.open;
  j["usc"] = Optional(row.usc);
  j["omega"] = Optional(row.omega);
  return j;
}

Json ReportJson(const ProblemInstance& inst, const SolveReport& rep) {
  Json j;
  j["model_kind"] = ToString(rep.kind);
  j["algorithm"] = ToString(rep.algorithm);
  j["gamma"] = inst.gamma;
  j["termination"] = ToString(rep.termination);
  j["objective"] = Bound(rep.objective);
  j["lower_bound"] = Bound(rep.lower_bound);
  j["upper_bound"] = Bound(rep.upper_bound);
  j["gap"] = Bound(rep.gap);
  j["y"] = BitString(rep.y.open);
  j["worst_scenario"] = BitString(rep.worst.disrupted);
  j["iteration_count"] = rep.iteration_count;
  j["wall_seconds"] = rep.wall_seconds;
  Json added = Json::array();
  for (const Scenario& s : rep.scenarios_added) {
    added.push_back(BitString(s.disrupted));
  }
  j["scenarios_added"] = std::move(added);
  Json iters = Json::array();
  for (const IterationRecord& r : rep.iterations) {
    Json it;
    it["iteration"] = r.iteration;
    it["lower_bound"] = Bound(r.lower_bound);
    it["upper_bound"] = Bound(r.upper_bound);
    it["gap"] = Bound(r.gap);
    it["y"] = BitString(r.y.open);
    it["eta"] = r.eta;
    it["psi"] = r.psi;
    it["scenario"] = BitString(r.scenario.disrupted);
    it["mp_seconds"] = r.mp_seconds;
    it["sp_seconds"] = r.sp_seconds;
    it["mp_nodes"] = r.mp_nodes;
    it["sp_nodes"] = r.sp_nodes;
    iters.push_back(std::move(it));
  }
  j["iterations"] = std::move(iters);
  Json plan;
  plan["allocation"] = rep.plan.allocation;
  plan["unmet"] = rep.plan.unmet;
  j["plan"] = std::move(plan);
  j["metrics"] = MetricsJson(inst, rep);
  return j;
}

}  // namespace

std::string SolveReportJson(const ProblemInstance& inst,
                            const SolveReport& report) {
  return ReportJson(inst, report).dump(2) + "\n";
}

std::string CompareReportJson(const ProblemInstance& inst,
                              const SolveReport& rbo, const SolveReport& ro) {
  const CostServiceRatios ratios = ComputeCostServiceRatios(rbo, ro);
  Json j;
  j["gamma"] = inst.gamma;
  j["rbo"] = ReportJson(inst, rbo);
  j["ro"] = ReportJson(inst, ro);
  j["cost_ratio"] = Optional(ratios.cost_ratio);
  j["service_ratio"] = Optional(ratios.service_ratio);
  return j.dump(2) + "\n";
}

}  // namespace rbflp
