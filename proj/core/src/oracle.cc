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

#include "rbflp/oracle.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "number_format.h"
#include "rbflp/ccg.h"

namespace rbflp {

OracleResult BruteForceSolve(const ProblemInstance& inst, ModelKind kind,
                             unsigned threads) {
  const int nf = inst.num_facilities();
  if (nf > kOracleMaxFacilities) {
    throw std::invalid_argument("BruteForceSolve: too many facilities");
  }
  const size_t n = size_t{1} << nf;
  OracleResult r;
  r.kind = kind;
  r.table.resize(n);

  auto cells = [&](size_t begin, size_t step) {
    for (size_t mask = begin; mask < n; mask += step) {
      LocationDecision y;
      for (int j = 0; j < nf; ++j) y.open.push_back((mask >> j) & 1);
      const SpEnumerationResult e =
          SolveSpEnumeration(inst, y, kind, ScenarioKind::kPlain);
      r.table[mask] = OracleEntry{std::move(y), e.worst, e.value};
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<size_t>(threads, n));
  if (threads <= 1) {
    cells(0, 1);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          cells(t, threads);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  // Reduction in bit-pattern order; the first minimum within the tie
  // tolerance wins.
  size_t best = 0;
  for (size_t mask = 1; mask < n; ++mask) {
    const double cur = r.table[best].value;
    if (r.table[mask].value <
        cur - kIncumbentTieTol * std::max(1.0, std::abs(cur))) {
      best = mask;
    }
  }
  r.y = r.table[best].y;
  r.worst = r.table[best].worst;
  r.objective = r.table[best].value;
  return r;
}

void WriteOracleCsv(const OracleResult& result, std::ostream& out) {
  out << "y_bits,worst_s_bits,W_of_y\n";
  for (const OracleEntry& e : result.table) {
    out << BitString(e.y.open) << ',' << BitString(e.worst.disrupted) << ','
        << internal::FormatNumber(e.value) << '\n';
  }
}

}  // namespace rbflp
