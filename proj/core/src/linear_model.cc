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

#include "rbflp/linear_model.h"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace rbflp {

int LinearModel::AddVariable(double lower, double upper, double cost,
                             VarType type, std::string name) {
  vars_.push_back({lower, upper, type, cost, std::move(name)});
  return static_cast<int>(vars_.size()) - 1;
}

int LinearModel::AddRow(std::vector<Term> terms, RowSense sense, double rhs,
                        std::string name) {
  rows_.push_back({std::move(terms), sense, rhs, std::move(name)});
  return static_cast<int>(rows_.size()) - 1;
}

bool LinearModel::HasBinaries() const { return num_binaries() > 0; }

int LinearModel::num_binaries() const {
  int count = 0;
  for (const auto& v : vars_) count += v.type == VarType::kBinary;
  return count;
}

void LinearModel::Validate() const {
  const int n = num_vars();
  for (int j = 0; j < n; ++j) {
    const Variable& v = vars_[j];
    if (!std::isfinite(v.cost)) {
      throw std::invalid_argument("non-finite cost on variable " +
                                  std::to_string(j));
    }
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper ||
        v.lower == kInf || v.upper == -kInf) {
      throw std::invalid_argument("invalid bounds on variable " +
                                  std::to_string(j));
    }
    if (v.type == VarType::kBinary && (v.lower < 0.0 || v.upper > 1.0)) {
      throw std::invalid_argument("binary variable " + std::to_string(j) +
                                  " has bounds outside [0, 1]");
    }
  }
  for (int i = 0; i < num_rows(); ++i) {
    const Row& r = rows_[i];
    if (!std::isfinite(r.rhs)) {
      throw std::invalid_argument("non-finite rhs on row " + std::to_string(i));
    }
    for (const Term& t : r.terms) {
      if (t.var < 0 || t.var >= n) {
        throw std::invalid_argument("row " + std::to_string(i) +
                                    " references unknown variable");
      }
      if (!std::isfinite(t.coef)) {
        throw std::invalid_argument("non-finite coefficient on row " +
                                    std::to_string(i));
      }
    }
  }
}

double LinearModel::Objective(const std::vector<double>& x) const {
  double obj = offset_;
  for (int j = 0; j < num_vars(); ++j) obj += vars_[j].cost * x[j];
  return obj;
}

double LinearModel::RowActivity(int i, const std::vector<double>& x) const {
  double act = 0.0;
  for (const Term& t : rows_[i].terms) act += t.coef * x[t.var];
  return act;
}

namespace {

std::string VarName(const LinearModel& m, int j) {
  const std::string& name = m.var(j).name;
  return name.empty() ? "x" + std::to_string(j) : name;
}

void WriteTerms(const LinearModel& m, const std::vector<Term>& terms,
                std::ostream& out) {
  bool first = true;
  for (const Term& t : terms) {
    if (t.coef == 0.0) continue;
    if (!first || t.coef < 0) out << (t.coef < 0 ? " - " : " + ");
    out << std::abs(t.coef) << ' ' << VarName(m, t.var);
    first = false;
  }
  if (first) out << "0";
}

}  // namespace

void WriteLpFormat(const LinearModel& model, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "\\ rbflp model: " << model.num_vars() << " vars, " << model.num_rows()
      << " rows\n";
  out << "Minimize\n obj: ";
  std::vector<Term> obj;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.var(j).cost != 0.0) obj.push_back({j, model.var(j).cost});
  }
  WriteTerms(model, obj, out);
  if (model.objective_offset() != 0.0) {
    out << (model.objective_offset() < 0 ? " - " : " + ")
        << std::abs(model.objective_offset());
  }
  out << "\nSubject To\n";
  for (int i = 0; i < model.num_rows(); ++i) {
    const Row& r = model.row(i);
    out << ' ' << (r.name.empty() ? "r" + std::to_string(i) : r.name) << ": ";
    WriteTerms(model, r.terms, out);
    switch (r.sense) {
      case RowSense::kLessEqual:
        out << " <= ";
        break;
      case RowSense::kEqual:
        out << " = ";
        break;
      case RowSense::kGreaterEqual:
        out << " >= ";
        break;
    }
    out << r.rhs << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < model.num_vars(); ++j) {
    const Variable& v = model.var(j);
    if (v.type == VarType::kBinary) continue;
    out << ' ';
    if (v.lower == -kInf && v.upper == kInf) {
      out << VarName(model, j) << " free\n";
      continue;
    }
    if (v.lower == -kInf) {
      out << "-inf";
    } else {
      out << v.lower;
    }
    out << " <= " << VarName(model, j) << " <= ";
    if (v.upper == kInf) {
      out << "+inf";
    } else {
      out << v.upper;
    }
    out << '\n';
  }
  if (model.HasBinaries()) {
    out << "Binaries\n";
    for (int j = 0; j < model.num_vars(); ++j) {
      if (model.var(j).type == VarType::kBinary) {
        out << ' ' << VarName(model, j) << '\n';
      }
    }
  }
  out << "End\n";
  out.precision(old_precision);
}

}  // namespace rbflp
