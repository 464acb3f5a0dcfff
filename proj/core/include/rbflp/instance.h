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

// Problem data for the capacitated facility location problem under
// budgeted facility disruption, plus the binary vectors that live on it:
// location decisions y, disruption scenarios s and recourse plans (x, u).
//
// Indexing convention used throughout the library:
//   * facility j in [0, |F|), customer i in [0, |N|)
//   * assign_cost is stored row-major by customer: c(i, j) = c[i * |F| + j]
//   * x(i, j) in a RecoursePlan uses the same layout.

#ifndef RBFLP_INSTANCE_H_
#define RBFLP_INSTANCE_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbflp {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct ProblemInstance {
  std::vector<std::string> facility_ids;
  std::vector<std::string> customer_ids;
  std::vector<double> fixed_cost;      // f_j
  std::vector<double> capacity;        // K_j
  std::vector<double> demand;          // d_i
  std::vector<double> penalty;         // rho_i
  std::vector<double> assign_cost;     // c_ij, |N| x |F| row-major
  int gamma = 0;                       // disruption budget
  std::vector<Point> facility_coords;  // empty or |F| entries
  std::vector<Point> customer_coords;  // empty or |N| entries

  int num_facilities() const { return static_cast<int>(facility_ids.size()); }
  int num_customers() const { return static_cast<int>(customer_ids.size()); }
  double cost(int i, int j) const {
    return assign_cost[static_cast<size_t>(i) * facility_ids.size() + j];
  }
  double total_demand() const;
  double max_assign_cost() const;
  double min_assign_cost() const;
  double max_penalty() const;
};

// A binary vector over facilities. Facility j is bit j, so the "bit pattern"
// ordering treats the vector as the integer sum_j b_j 2^j.
using BinaryVector = std::vector<int>;

struct Scenario {
  BinaryVector disrupted;  // s_j

  int size() const { return static_cast<int>(disrupted.size()); }
  int count() const;
  bool operator==(const Scenario&) const = default;
};

struct LocationDecision {
  BinaryVector open;  // y_j

  int size() const { return static_cast<int>(open.size()); }
  int count() const;
  bool operator==(const LocationDecision&) const = default;
};

// Allocation x_ij (customer-major, like assign_cost) and unmet demand u_i.
struct RecoursePlan {
  std::vector<double> allocation;
  std::vector<double> unmet;

  double total_served() const;
  double total_unmet() const;
};

enum class ScenarioKind { kPlain, kDecisionDependent };

struct ScenarioSet {
  ScenarioKind kind = ScenarioKind::kPlain;
  std::optional<LocationDecision> decision;  // recorded for DDU sets
  std::vector<Scenario> scenarios;

  size_t size() const { return scenarios.size(); }
  bool Contains(const Scenario& s) const;
};

struct Violation {
  std::string field;  // e.g. "customers[3].demand"
  std::string message;
};

using ValidationReport = std::vector<Violation>;

// Thrown for malformed instance documents and bad generator arguments.
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Returns every invariant violation; an empty report means the instance is
// valid. Never throws.
ValidationReport ValidateInstance(const ProblemInstance& inst);

// Synthetic instance in the style of the 49-city benchmark template:
// d_i = population * 1e-4, f_j = home value * 1e-2, c_ij = Euclidean
// distance, rho_i = 0.01 * mean(f), K_j = 1.2 * sum(d) / |F|.
// Deterministic for a fixed seed. `gamma` defaults to 1.
ProblemInstance GenerateInstance(int n_facilities, int n_customers,
                                 uint64_t seed);

// All s with sum(s) <= gamma, optionally restricted to s <= y. Ordered by
// popcount, then by bit pattern.
ScenarioSet EnumerateScenarios(const ProblemInstance& inst, ScenarioKind kind,
                               const std::optional<LocationDecision>& y = {});

// sum_{k=0..min(gamma,m)} C(m, k).
uint64_t ScenarioCount(int m, int gamma);

// Strict weak ordering by (popcount, bit pattern).
bool ScenarioLess(const BinaryVector& a, const BinaryVector& b);
// Ordering by bit pattern only; used for incumbent tie-breaking.
bool BitPatternLess(const BinaryVector& a, const BinaryVector& b);

// "10" means facility 0 disrupted/open, facility 1 not.
std::string BitString(const BinaryVector& v);
BinaryVector ParseBitString(const std::string& bits);

bool IsFollowerFeasible(const ProblemInstance& inst, const LocationDecision& y,
                        const Scenario& s, const RecoursePlan& plan,
                        double tol = 1e-7);

// JSON document I/O. Reading reports parse errors with line/column and
// schema errors naming every missing or unexpected field.
ProblemInstance ReadInstance(std::istream& in);
ProblemInstance ReadInstanceFile(const std::string& path);
void WriteInstance(const ProblemInstance& inst, std::ostream& out);
void WriteInstanceFile(const ProblemInstance& inst, const std::string& path);

// Recomputes assign_cost from coordinates (Euclidean, unrounded).
void ComputeEuclideanCosts(ProblemInstance& inst);

}  // namespace rbflp

#endif  // RBFLP_INSTANCE_H_
