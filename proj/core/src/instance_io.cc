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

// Instance JSON document:
//   {"facilities": [{"id", "fixed_cost", "capacity", "x", "y"}...],
//    "customers":  [{"id", "demand", "penalty", "x", "y"}...],
//    "cost_matrix": optional |N| x |F| row-major array,
//    "gamma": int}

#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rbflp/instance.h"

namespace rbflp {

namespace {

using nlohmann::json;

const std::set<std::string> kTopKeys = {"facilities", "customers",
                                        "cost_matrix", "gamma"};
const std::set<std::string> kFacilityKeys = {"id", "fixed_cost", "capacity",
                                             "x", "y"};
const std::set<std::string> kCustomerKeys = {"id", "demand", "penalty", "x",
                                             "y"};

std::string LineColumn(const std::string& text, size_t byte) {
  size_t line = 1;
  size_t col = 1;
  for (size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

// Collects missing/extra keys of one object into `problems`.
void CheckKeys(const json& obj, const std::set<std::string>& allowed,
               const std::set<std::string>& required, const std::string& path,
               std::vector<std::string>& problems) {
  if (!obj.is_object()) {
    problems.push_back(path + ": expected an object");
    return;
  }
  for (const auto& key : required) {
    if (!obj.contains(key)) {
      problems.push_back("missing field \"" + key + "\" at " + path);
    }
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      problems.push_back("unexpected field \"" + it.key() + "\" at " + path);
    }
  }
}

double Number(const json& obj, const std::string& key, const std::string& path,
              std::vector<std::string>& problems) {
  const auto it = obj.find(key);
  if (it == obj.end()) return 0.0;
  if (!it->is_number()) {
    problems.push_back(path + "." + key + ": expected a number");
    return 0.0;
  }
  return it->get<double>();
}

std::string StringOr(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it != obj.end() && it->is_string() ? it->get<std::string>() : "";
}

}  // namespace

ProblemInstance ReadInstance(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InstanceError("instance parse error at " +
                        LineColumn(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                        e.what());
  }

  std::vector<std::string> problems;
  CheckKeys(doc, kTopKeys, {"facilities", "customers", "gamma"}, "$", problems);
  if (!problems.empty() && !doc.is_object()) {
    throw InstanceError("instance schema error: " + problems.front());
  }

  ProblemInstance inst;
  if (doc.contains("facilities")) {
    const json& arr = doc["facilities"];
    if (!arr.is_array()) {
      problems.push_back("$.facilities: expected an array");
    } else {
      for (size_t k = 0; k < arr.size(); ++k) {
        const std::string path = "$.facilities[" + std::to_string(k) + "]";
        const json& f = arr[k];
        CheckKeys(f, kFacilityKeys, kFacilityKeys, path, problems);
        if (!f.is_object()) continue;
        if (f.contains("id") && !f["id"].is_string()) {
          problems.push_back(path + ".id: expected a string");
        }
        inst.facility_ids.push_back(StringOr(f, "id"));
        inst.fixed_cost.push_back(Number(f, "fixed_cost", path, problems));
        inst.capacity.push_back(Number(f, "capacity", path, problems));
        inst.facility_coords.push_back(
            {Number(f, "x", path, problems), Number(f, "y", path, problems)});
      }
    }
  }
  if (doc.contains("customers")) {
    const json& arr = doc["customers"];
    if (!arr.is_array()) {
      problems.push_back("$.customers: expected an array");
    } else {
      for (size_t k = 0; k < arr.size(); ++k) {
        const std::string path = "$.customers[" + std::to_string(k) + "]";
        const json& c = arr[k];
        CheckKeys(c, kCustomerKeys, kCustomerKeys, path, problems);
        if (!c.is_object()) continue;
        if (c.contains("id") && !c["id"].is_string()) {
          problems.push_back(path + ".id: expected a string");
        }
        inst.customer_ids.push_back(StringOr(c, "id"));
        inst.demand.push_back(Number(c, "demand", path, problems));
        inst.penalty.push_back(Number(c, "penalty", path, problems));
        inst.customer_coords.push_back(
            {Number(c, "x", path, problems), Number(c, "y", path, problems)});
      }
    }
  }
  if (doc.contains("gamma")) {
    const json& g = doc["gamma"];
    if (!g.is_number_integer()) {
      problems.push_back("$.gamma: expected an integer");
    } else {
      inst.gamma = g.get<int>();
    }
  }
  if (doc.contains("cost_matrix")) {
    const json& m = doc["cost_matrix"];
    const size_t nf = inst.facility_ids.size();
    const size_t nn = inst.customer_ids.size();
    if (!m.is_array() || m.size() != nn) {
      problems.push_back("$.cost_matrix: expected " + std::to_string(nn) +
                         " rows");
    } else {
      for (size_t i = 0; i < nn; ++i) {
        if (!m[i].is_array() || m[i].size() != nf) {
          problems.push_back("$.cost_matrix[" + std::to_string(i) +
                             "]: expected " + std::to_string(nf) + " entries");
          continue;
        }
        for (size_t j = 0; j < nf; ++j) {
          if (!m[i][j].is_number()) {
            problems.push_back("$.cost_matrix[" + std::to_string(i) + "][" +
                               std::to_string(j) + "]: expected a number");
            inst.assign_cost.push_back(0.0);
          } else {
            inst.assign_cost.push_back(m[i][j].get<double>());
          }
        }
      }
    }
  }

  if (!problems.empty()) {
    std::string msg = "instance schema error:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw InstanceError(msg);
  }
  if (!doc.contains("cost_matrix")) ComputeEuclideanCosts(inst);
  return inst;
}

ProblemInstance ReadInstanceFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  return ReadInstance(in);
}

void WriteInstance(const ProblemInstance& inst, std::ostream& out) {
  const int nf = inst.num_facilities();
  const int nn = inst.num_customers();
  json doc;
  json facilities = json::array();
  for (int j = 0; j < nf; ++j) {
    const Point p =
        inst.facility_coords.empty() ? Point{} : inst.facility_coords[j];
    facilities.push_back({{"id", inst.facility_ids[j]},
                          {"fixed_cost", inst.fixed_cost[j]},
                          {"capacity", inst.capacity[j]},
                          {"x", p.x},
                          {"y", p.y}});
  }
  json customers = json::array();
  for (int i = 0; i < nn; ++i) {
    const Point p =
        inst.customer_coords.empty() ? Point{} : inst.customer_coords[i];
    customers.push_back({{"id", inst.customer_ids[i]},
                         {"demand", inst.demand[i]},
                         {"penalty", inst.penalty[i]},
                         {"x", p.x},
                         {"y", p.y}});
  }
  json matrix = json::array();
  for (int i = 0; i < nn; ++i) {
    json row = json::array();
    for (int j = 0; j < nf; ++j) row.push_back(inst.cost(i, j));
    matrix.push_back(std::move(row));
  }
  doc["facilities"] = std::move(facilities);
  doc["customers"] = std::move(customers);
  doc["cost_matrix"] = std::move(matrix);
  doc["gamma"] = inst.gamma;
  out << doc.dump(2) << '\n';
}

void WriteInstanceFile(const ProblemInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  WriteInstance(inst, out);
  if (!out) throw std::ios_base::failure("write failed for " + path);
}

}  // namespace rbflp
