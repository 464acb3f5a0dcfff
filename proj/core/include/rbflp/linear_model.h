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

#ifndef RBFLP_LINEAR_MODEL_H_
#define RBFLP_LINEAR_MODEL_H_

#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace rbflp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };
enum class VarType { kContinuous, kBinary };

struct Term {
  int var;
  double coef;
};

struct Variable {
  double lower = 0.0;
  double upper = kInf;
  VarType type = VarType::kContinuous;
  double cost = 0.0;
  std::string name;
};

struct Row {
  std::vector<Term> terms;  // sparse; duplicate indices are summed
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

// A minimization model: min c'x + offset subject to rows and bounds.
class LinearModel {
 public:
  int AddVariable(double lower, double upper, double cost,
                  VarType type = VarType::kContinuous, std::string name = {});
  int AddBinary(double cost, std::string name = {}) {
    return AddVariable(0.0, 1.0, cost, VarType::kBinary, std::move(name));
  }
  int AddRow(std::vector<Term> terms, RowSense sense, double rhs,
             std::string name = {});

  void SetCost(int var, double cost) { vars_[var].cost = cost; }
  void SetBounds(int var, double lower, double upper) {
    vars_[var].lower = lower;
    vars_[var].upper = upper;
  }
  void set_objective_offset(double offset) { offset_ = offset; }

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const Variable& var(int j) const { return vars_[j]; }
  const Row& row(int i) const { return rows_[i]; }
  const std::vector<Variable>& vars() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }
  double objective_offset() const { return offset_; }
  bool HasBinaries() const;
  int num_binaries() const;

  // Throws std::invalid_argument on non-finite coefficients, out-of-range
  // indices, inverted bounds or binaries with bounds outside [0, 1].
  void Validate() const;

  double Objective(const std::vector<double>& x) const;
  double RowActivity(int i, const std::vector<double>& x) const;

 private:
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
  double offset_ = 0.0;
};

// Plain-text dump in an LP-format style (objective, rows, bounds, binaries)
// for cross-validation with external solvers.
void WriteLpFormat(const LinearModel& model, std::ostream& out);

}  // namespace rbflp

#endif  // RBFLP_LINEAR_MODEL_H_
