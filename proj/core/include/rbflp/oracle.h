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

// Exhaustive solver: every location vector against every scenario, each cell
// evaluated with the second-stage LPs. No bounding.

#ifndef RBFLP_ORACLE_H_
#define RBFLP_ORACLE_H_

#include <iosfwd>
#include <vector>

#include "rbflp/instance.h"
#include "rbflp/second_stage.h"

namespace rbflp {

inline constexpr int kOracleMaxFacilities = 15;

struct OracleEntry {
  LocationDecision y;
  Scenario worst;
  double value = 0.0;  // W(y)
};

struct OracleResult {
  ModelKind kind = ModelKind::kRbo;
  LocationDecision y;
  Scenario worst;
  double objective = 0.0;
  std::vector<OracleEntry> table;  // indexed by the bit pattern of y
};

// Ties in W go to the smallest bit pattern of y. `threads` = 0 uses the
// hardware concurrency. Throws std::invalid_argument above
// kOracleMaxFacilities facilities.
OracleResult BruteForceSolve(const ProblemInstance& inst, ModelKind kind,
                             unsigned threads = 0);

// Columns y_bits, worst_s_bits, W_of_y.
void WriteOracleCsv(const OracleResult& result, std::ostream& out);

}  // namespace rbflp

#endif  // RBFLP_ORACLE_H_
