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

#include "cli.h"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rbflp/ccg.h"
#include "rbflp/experiment.h"
#include "rbflp/instance.h"
#include "rbflp/oracle.h"

namespace rbflp::cli {
namespace {

namespace fs = std::filesystem;

// Distinguishes file-system failures from everything else.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonSolveOptions {
  std::string instance;
  std::optional<int> gamma;
  int max_iterations = 1000;
  double time_limit = 0.0;
  bool quiet = false;
};

void AddCommon(CLI::App* cmd, CommonSolveOptions& o) {
  cmd->add_option("--instance", o.instance, "Instance JSON file")->required();
  cmd->add_option("--gamma", o.gamma, "Override the disruption budget");
  cmd->add_option("--max-iter", o.max_iterations, "C&CG iteration cap")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--time-limit", o.time_limit,
                  "Wall-time cap in seconds per solve (0 = none)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--quiet", o.quiet, "Suppress the iteration trace");
}

ProblemInstance LoadInstance(const CommonSolveOptions& o) {
  ProblemInstance inst = ReadInstanceFile(o.instance);
  if (o.gamma) {
    inst.gamma = *o.gamma;
    const ValidationReport report = ValidateInstance(inst);
    if (!report.empty()) {
      throw InstanceError(report.front().field + ": " + report.front().message);
    }
  }
  return inst;
}

CcgConfig MakeConfig(const CommonSolveOptions& o, std::ostream& err) {
  CcgConfig cfg;
  cfg.max_iterations = o.max_iterations;
  cfg.time_limit_seconds = o.time_limit;
  if (!o.quiet) cfg.trace = &err;
  return cfg;
}

void WriteText(const std::string& path, const std::string& text,
               std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << text;
  if (!f) throw IoError("write failed for " + path);
}

void WriteCsv(const fs::path& path,
              const std::function<void(std::ostream&)>& writer) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  writer(f);
  if (!f) throw IoError("write failed for " + path.string());
}

void Summarize(const SolveReport& r, std::ostream& out) {
  out << ToString(r.kind) << ' ' << ToString(r.algorithm)
      << ": W=" << r.objective << " y=" << BitString(r.y.open)
      << " worst=" << BitString(r.worst.disrupted)
      << " iterations=" << r.iteration_count
      << " termination=" << ToString(r.termination) << '\n';
}

// Parses "A..B" or a single "A".
std::vector<int> ParseGammaRange(const std::string& text) {
  const size_t dots = text.find("..");
  try {
    size_t used = 0;
    if (dots == std::string::npos) {
      const int g = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {g};
    }
    const std::string a = text.substr(0, dots);
    const std::string b = text.substr(dots + 2);
    const int lo = std::stoi(a, &used);
    if (used != a.size()) throw std::invalid_argument(text);
    const int hi = std::stoi(b, &used);
    if (used != b.size() || hi < lo) throw std::invalid_argument(text);
    std::vector<int> gammas;
    for (int g = lo; g <= hi; ++g) gammas.push_back(g);
    return gammas;
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--gamma-range",
                               "expected A..B with A <= B, got " + text);
  }
}

int RunGenerate(int facilities, int customers, uint64_t seed,
                std::optional<int> gamma, const std::string& path,
                std::ostream& out) {
  ProblemInstance inst = GenerateInstance(facilities, customers, seed);
  if (gamma) inst.gamma = *gamma;
  std::ostringstream doc;
  WriteInstance(inst, doc);
  WriteText(path, doc.str(), out);
  return kExitOk;
}

int RunSolve(const CommonSolveOptions& o, const std::string& model,
             const std::optional<std::string>& algo,
             const std::string& report_path,
             const std::optional<std::string>& oracle_table, std::ostream& out,
             std::ostream& err) {
  const ProblemInstance inst = LoadInstance(o);
  const ModelKind kind = model == "rbo" ? ModelKind::kRbo : ModelKind::kRo;
  const Algorithm algorithm =
      algo ? ParseAlgorithm(*algo) : DefaultAlgorithm(kind);
  const SolveReport r = SolveCcg(inst, kind, algorithm, MakeConfig(o, err));
  WriteText(report_path, SolveReportJson(inst, r), out);
  if (oracle_table) {
    const OracleResult table = BruteForceSolve(inst, kind);
    WriteCsv(*oracle_table, [&](std::ostream& f) { WriteOracleCsv(table, f); });
  }
  Summarize(r, report_path == "-" ? err : out);
  return r.termination == Termination::kConverged ? kExitOk
                                                  : kExitGapNotReached;
}

int RunCompare(const CommonSolveOptions& o, const std::string& report_path,
               std::ostream& out, std::ostream& err) {
  const ProblemInstance inst = LoadInstance(o);
  const CcgConfig cfg = MakeConfig(o, err);
  const SolveReport rbo =
      SolveCcg(inst, ModelKind::kRbo, DefaultAlgorithm(ModelKind::kRbo), cfg);
  const SolveReport ro =
      SolveCcg(inst, ModelKind::kRo, DefaultAlgorithm(ModelKind::kRo), cfg);
  WriteText(report_path, CompareReportJson(inst, rbo, ro), out);
  std::ostream& summary = report_path == "-" ? err : out;
  Summarize(rbo, summary);
  Summarize(ro, summary);
  const bool ok = rbo.termination == Termination::kConverged &&
                  ro.termination == Termination::kConverged;
  return ok ? kExitOk : kExitGapNotReached;
}

int RunSweep(const CommonSolveOptions& o, const std::string& range,
             const std::vector<double>& percentiles, unsigned jobs,
             const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const ProblemInstance inst = LoadInstance(o);
  SweepConfig cfg;
  cfg.gammas = ParseGammaRange(range);
  cfg.ccg.max_iterations = o.max_iterations;
  cfg.ccg.time_limit_seconds = o.time_limit;
  cfg.max_parallel = jobs;

  const std::vector<MetricsRow> rows = SweepGamma(inst, cfg);
  std::vector<PenaltyCell> cells;
  if (!percentiles.empty()) cells = SweepPenalty(inst, percentiles, cfg);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  const fs::path dir(out_dir);
  WriteCsv(dir / "fig5.csv", [&](std::ostream& f) { WriteFig5Csv(rows, f); });
  WriteCsv(dir / "fig6.csv", [&](std::ostream& f) { WriteFig6Csv(rows, f); });
  WriteCsv(dir / "fig7.csv", [&](std::ostream& f) { WriteFig7Csv(rows, f); });
  WriteCsv(dir / "fig8.csv", [&](std::ostream& f) { WriteFig8Csv(rows, f); });
  if (!percentiles.empty()) {
    WriteCsv(dir / "fig10a.csv",
             [&](std::ostream& f) { WriteFig10aCsv(cells, f); });
    WriteCsv(dir / "fig10b.csv",
             [&](std::ostream& f) { WriteFig10bCsv(cells, f); });
  }
  std::vector<ArcSet> arcs;
  for (const MetricsRow& r : rows) {
    if (!r.failed) arcs.push_back({r.kind, r.gamma, r.plan});
  }
  WriteCsv(dir / "arcs.csv",
           [&](std::ostream& f) { WriteArcsCsv(inst, arcs, f); });

  bool ok = true;
  auto check = [&](const MetricsRow& r) {
    if (r.failed) {
      err << "gamma " << r.gamma << ' ' << ToString(r.kind) << " "
          << r.penalty_label << " failed: " << r.error << '\n';
      ok = false;
    } else if (r.termination != Termination::kConverged) {
      ok = false;
    }
  };
  for (const MetricsRow& r : rows) {
    check(r);
    if (!o.quiet) {
      err << "gamma " << r.gamma << ' ' << ToString(r.kind) << " W=" << r.w
          << " iterations=" << r.iterations << " " << ToString(r.termination)
          << '\n';
    }
  }
  for (const PenaltyCell& c : cells) {
    check(c.rbo);
    check(c.ro);
  }
  out << "wrote " << (percentiles.empty() ? 5 : 7) << " CSV files to "
      << out_dir << '\n';
  return ok ? kExitOk : kExitGapNotReached;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Two-stage robust bilevel facility location solver", "rbflp"};
  app.require_subcommand(1);

  int facilities = 0, customers = 0;
  uint64_t seed = 0;
  std::optional<int> gen_gamma;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("generate", "Generate a random instance");
  gen->add_option("--facilities", facilities)
      ->required()
      ->check(CLI::PositiveNumber);
  gen->add_option("--customers", customers)
      ->required()
      ->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed)->required();
  gen->add_option("--gamma", gen_gamma, "Disruption budget (default 1)");
  gen->add_option("--out", gen_out, "Output path, - for stdout")->required();

  CommonSolveOptions solve_opts;
  std::string model, solve_report;
  std::optional<std::string> algo, oracle_table;
  CLI::App* solve = app.add_subcommand("solve", "Solve one model");
  AddCommon(solve, solve_opts);
  solve->add_option("--model", model)
      ->required()
      ->check(CLI::IsMember({"rbo", "ro"}));
  solve
      ->add_option("--algo", algo,
                   "ccg | ccg-ddu | enum | oracle (default: ccg-ddu for rbo, "
                   "ccg for ro)")
      ->check(
          CLI::IsMember({"ccg", "ccg-ddu", "enum", "enumeration", "oracle"}));
  solve->add_option("--report", solve_report, "JSON report, - for stdout")
      ->required();
  solve->add_option("--oracle-table", oracle_table,
                    "Also write the brute-force W(y) table as CSV");

  CommonSolveOptions compare_opts;
  std::string compare_report;
  CLI::App* compare =
      app.add_subcommand("compare", "Solve both models and compare them");
  AddCommon(compare, compare_opts);
  compare->add_option("--report", compare_report, "JSON report, - for stdout")
      ->required();

  CommonSolveOptions sweep_opts;
  std::string range, out_dir;
  std::vector<double> percentiles = {0, 25, 50, 75, 100};
  unsigned jobs = 0;
  CLI::App* sweep = app.add_subcommand("sweep", "Budget and penalty sweeps");
  AddCommon(sweep, sweep_opts);
  sweep->add_option("--gamma-range", range, "A..B")->required();
  sweep
      ->add_option("--rho-percentiles", percentiles,
                   "Comma-separated c_ij percentiles for the penalty sweep")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 100.0))
      ->capture_default_str();
  sweep->add_option("--jobs", jobs, "Concurrent solves (0 = all cores)");
  sweep->add_option("--out-dir", out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*gen) {
      return RunGenerate(facilities, customers, seed, gen_gamma, gen_out, out);
    }
    if (*solve) {
      return RunSolve(solve_opts, model, algo, solve_report, oracle_table, out,
                      err);
    }
    if (*compare) return RunCompare(compare_opts, compare_report, out, err);
    return RunSweep(sweep_opts, range, percentiles, jobs, out_dir, out, err);
  } catch (const CLI::ValidationError& e) {
    return app.exit(e, out, err);
  } catch (const IoError& e) {
    err << "rbflp: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    err << "rbflp: " << e.what() << '\n';
    return kExitIo;
  } catch (const InstanceError& e) {
    err << "rbflp: invalid instance: " << e.what() << '\n';
    return kExitInvalidInstance;
  } catch (const std::invalid_argument& e) {
    err << "rbflp: invalid instance: " << e.what() << '\n';
    return kExitInvalidInstance;
  } catch (const std::exception& e) {
    // Solver failures: no certified bound pair to report.
    err << "rbflp: solve failed: " << e.what() << '\n';
    return kExitGapNotReached;
  }
}

}  // namespace rbflp::cli
