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

#include "rbflp/instance.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace rbflp {

namespace {

// Attribute ranges for the synthetic generator.
constexpr double kCoordMax = 100.0;
constexpr double kPopulationMin = 0.5e5;
constexpr double kPopulationMax = 4.0e7;
constexpr double kHomeValueMin = 3.0e4;
constexpr double kHomeValueMax = 2.0e5;

// Uniform double in [lo, hi) from the top 53 bits; independent of the
// standard library's distribution implementations.
double Uniform(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

bool IsFiniteNonNegative(double v) { return std::isfinite(v) && v >= 0.0; }

void CheckVector(const std::vector<double>& v, const std::string& prefix,
                 const std::string& name, bool strictly_positive,
                 ValidationReport& report) {
  for (size_t k = 0; k < v.size(); ++k) {
    const std::string field = prefix + "[" + std::to_string(k) + "]." + name;
    if (!IsFiniteNonNegative(v[k])) {
      report.push_back({field, "must be finite and >= 0"});
    } else if (strictly_positive && v[k] <= 0.0) {
      report.push_back({field, "must be > 0"});
    }
  }
}

}  // namespace

double ProblemInstance::total_demand() const {
  return std::accumulate(demand.begin(), demand.end(), 0.0);
}

double ProblemInstance::max_assign_cost() const {
  return assign_cost.empty()
             ? 0.0
             : *std::max_element(assign_cost.begin(), assign_cost.end());
}

double ProblemInstance::min_assign_cost() const {
  return assign_cost.empty()
             ? 0.0
             : *std::min_element(assign_cost.begin(), assign_cost.end());
}

double ProblemInstance::max_penalty() const {
  return penalty.empty() ? 0.0
                         : *std::max_element(penalty.begin(), penalty.end());
}

int Scenario::count() const {
  return static_cast<int>(std::count(disrupted.begin(), disrupted.end(), 1));
}

int LocationDecision::count() const {
  return static_cast<int>(std::count(open.begin(), open.end(), 1));
}

double RecoursePlan::total_served() const {
  return std::accumulate(allocation.begin(), allocation.end(), 0.0);
}

double RecoursePlan::total_unmet() const {
  return std::accumulate(unmet.begin(), unmet.end(), 0.0);
}

bool ScenarioSet::Contains(const Scenario& s) const {
  return std::find(scenarios.begin(), scenarios.end(), s) != scenarios.end();
}

ValidationReport ValidateInstance(const ProblemInstance& inst) {
  ValidationReport report;
  const size_t nf = inst.facility_ids.size();
  const size_t nn = inst.customer_ids.size();

  if (nf == 0) report.push_back({"facilities", "at least one facility"});
  if (nn == 0) report.push_back({"customers", "at least one customer"});

  auto check_size = [&](size_t got, size_t want, const std::string& field) {
    if (got != want) {
      report.push_back({field, "expected " + std::to_string(want) +
                                   " entries, got " + std::to_string(got)});
    }
  };
  check_size(inst.fixed_cost.size(), nf, "facilities.fixed_cost");
  check_size(inst.capacity.size(), nf, "facilities.capacity");
  check_size(inst.demand.size(), nn, "customers.demand");
  check_size(inst.penalty.size(), nn, "customers.penalty");
  check_size(inst.assign_cost.size(), nf * nn, "assign_cost");
  if (!inst.facility_coords.empty()) {
    check_size(inst.facility_coords.size(), nf, "facilities.coords");
  }
  if (!inst.customer_coords.empty()) {
    check_size(inst.customer_coords.size(), nn, "customers.coords");
  }

  CheckVector(inst.fixed_cost, "facilities", "fixed_cost", false, report);
  CheckVector(inst.capacity, "facilities", "capacity", true, report);
  CheckVector(inst.demand, "customers", "demand", false, report);
  CheckVector(inst.penalty, "customers", "penalty", false, report);
  for (size_t k = 0; k < inst.assign_cost.size(); ++k) {
    if (!IsFiniteNonNegative(inst.assign_cost[k])) {
      const size_t i = nf == 0 ? 0 : k / nf;
      const size_t j = nf == 0 ? 0 : k % nf;
      report.push_back(
          {"assign_cost[" + std::to_string(i) + "][" + std::to_string(j) + "]",
           "must be finite and >= 0"});
    }
  }

  if (inst.gamma < 0 || static_cast<size_t>(inst.gamma) > nf) {
    report.push_back({"gamma", "budget must lie in [0, " + std::to_string(nf) +
                                   "], got " + std::to_string(inst.gamma)});
  }

  auto check_unique = [&](const std::vector<std::string>& ids,
                          const std::string& prefix) {
    std::set<std::string> seen;
    for (size_t k = 0; k < ids.size(); ++k) {
      if (!seen.insert(ids[k]).second) {
        report.push_back({prefix + "[" + std::to_string(k) + "].id",
                          "duplicate identifier '" + ids[k] + "'"});
      }
    }
  };
  check_unique(inst.facility_ids, "facilities");
  check_unique(inst.customer_ids, "customers");
  return report;
}

void ComputeEuclideanCosts(ProblemInstance& inst) {
  const int nf = inst.num_facilities();
  const int nn = inst.num_customers();
  if (static_cast<int>(inst.facility_coords.size()) != nf ||
      static_cast<int>(inst.customer_coords.size()) != nn) {
    throw InstanceError("coordinates missing; cannot derive cost_matrix");
  }
  inst.assign_cost.assign(static_cast<size_t>(nf) * nn, 0.0);
  for (int i = 0; i < nn; ++i) {
    for (int j = 0; j < nf; ++j) {
      const Point& a = inst.customer_coords[i];
      const Point& b = inst.facility_coords[j];
      inst.assign_cost[static_cast<size_t>(i) * nf + j] =
          std::hypot(a.x - b.x, a.y - b.y);
    }
  }
}

ProblemInstance GenerateInstance(int n_facilities, int n_customers,
                                 uint64_t seed) {
  if (n_facilities < 1 || n_customers < 1) {
    throw InstanceError(
        "generate_instance needs at least one facility and "
        "one customer");
  }
  std::mt19937_64 rng(seed);
  ProblemInstance inst;
  inst.gamma = std::min(1, n_facilities);

  // Each node draws (x, y, population, home value) in that order; facilities
  // use the home value, customers the population.
  struct NodeDraw {
    Point p;
    double population;
    double home_value;
  };
  auto draw = [&rng]() {
    NodeDraw n;
    n.p.x = Uniform(rng, 0.0, kCoordMax);
    n.p.y = Uniform(rng, 0.0, kCoordMax);
    n.population = Uniform(rng, kPopulationMin, kPopulationMax);
    n.home_value = Uniform(rng, kHomeValueMin, kHomeValueMax);
    return n;
  };

  for (int j = 0; j < n_facilities; ++j) {
    const NodeDraw n = draw();
    inst.facility_ids.push_back("F" + std::to_string(j));
    inst.facility_coords.push_back(n.p);
    inst.fixed_cost.push_back(n.home_value * 1e-2);
  }
  for (int i = 0; i < n_customers; ++i) {
    const NodeDraw n = draw();
    inst.customer_ids.push_back("C" + std::to_string(i));
    inst.customer_coords.push_back(n.p);
    inst.demand.push_back(n.population * 1e-4);
  }

  const double total_demand = inst.total_demand();
  const double total_fixed =
      std::accumulate(inst.fixed_cost.begin(), inst.fixed_cost.end(), 0.0);
  inst.capacity.assign(n_facilities, 1.2 * total_demand / n_facilities);
  inst.penalty.assign(n_customers, 0.01 * total_fixed / n_facilities);
  ComputeEuclideanCosts(inst);
  return inst;
}

uint64_t ScenarioCount(int m, int gamma) {
  uint64_t total = 0;
  uint64_t binom = 1;  // C(m, k)
  for (int k = 0; k <= std::min(gamma, m); ++k) {
    total += binom;
    binom = binom * static_cast<uint64_t>(m - k) / static_cast<uint64_t>(k + 1);
  }
  return total;
}

bool BitPatternLess(const BinaryVector& a, const BinaryVector& b) {
  // Highest index is the most significant bit.
  const size_t n = std::max(a.size(), b.size());
  for (size_t k = n; k-- > 0;) {
    const int av = k < a.size() ? a[k] : 0;
    const int bv = k < b.size() ? b[k] : 0;
    if (av != bv) return av < bv;
  }
  return false;
}

bool ScenarioLess(const BinaryVector& a, const BinaryVector& b) {
  const auto ca = std::count(a.begin(), a.end(), 1);
  const auto cb = std::count(b.begin(), b.end(), 1);
  if (ca != cb) return ca < cb;
  return BitPatternLess(a, b);
}

ScenarioSet EnumerateScenarios(const ProblemInstance& inst, ScenarioKind kind,
                               const std::optional<LocationDecision>& y) {
  const int nf = inst.num_facilities();
  if (kind == ScenarioKind::kDecisionDependent) {
    if (!y.has_value()) {
      throw std::invalid_argument(
          "decision-dependent enumeration requires a location decision");
    }
    if (y->size() != nf) {
      throw std::invalid_argument("location decision has wrong length");
    }
  }
  if (nf > 30) throw std::invalid_argument("too many facilities to enumerate");

  // Eligible positions; DDU restricts disruptions to open facilities.
  std::vector<int> eligible;
  for (int j = 0; j < nf; ++j) {
    if (kind == ScenarioKind::kPlain || y->open[j] == 1) eligible.push_back(j);
  }
  const int m = static_cast<int>(eligible.size());

  ScenarioSet set;
  set.kind = kind;
  if (kind == ScenarioKind::kDecisionDependent) set.decision = y;
  // Masks over the eligible positions in (popcount, value) order. Mapping
  // eligible positions back to facilities preserves the relative order.
  for (int k = 0; k <= std::min(inst.gamma, m); ++k) {
    for (uint64_t mask = 0; mask < (uint64_t{1} << m); ++mask) {
      if (std::popcount(mask) != k) continue;
      Scenario s;
      s.disrupted.assign(nf, 0);
      for (int b = 0; b < m; ++b) {
        if (mask & (uint64_t{1} << b)) s.disrupted[eligible[b]] = 1;
      }
      set.scenarios.push_back(std::move(s));
    }
  }
  return set;
}

std::string BitString(const BinaryVector& v) {
  std::string out;
  out.reserve(v.size());
  for (int b : v) out.push_back(b ? '1' : '0');
  return out;
}

BinaryVector ParseBitString(const std::string& bits) {
  BinaryVector v;
  v.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("bit string may only contain 0/1: " + bits);
    }
    v.push_back(c == '1');
  }
  return v;
}

bool IsFollowerFeasible(const ProblemInstance& inst, const LocationDecision& y,
                        const Scenario& s, const RecoursePlan& plan,
                        double tol) {
  const int nf = inst.num_facilities();
  const int nn = inst.num_customers();
  if (static_cast<int>(plan.allocation.size()) != nf * nn ||
      static_cast<int>(plan.unmet.size()) != nn) {
    return false;
  }
  for (double v : plan.allocation) {
    if (v < -tol) return false;
  }
  for (double v : plan.unmet) {
    if (v < -tol) return false;
  }
  for (int i = 0; i < nn; ++i) {
    double served = 0.0;
    for (int j = 0; j < nf; ++j) served += plan.allocation[i * nf + j];
    if (std::abs(served + plan.unmet[i] - inst.demand[i]) > tol) return false;
  }
  for (int j = 0; j < nf; ++j) {
    double load = 0.0;
    for (int i = 0; i < nn; ++i) load += plan.allocation[i * nf + j];
    const double cap = inst.capacity[j] * y.open[j] * (1 - s.disrupted[j]);
    if (load > cap + tol) return false;
  }
  return true;
}

}  // namespace rbflp
