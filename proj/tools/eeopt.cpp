// Copyright 2026 The eeopt Authors
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

// Command-line front end: solve, sweep, pareto, benchmark, grid.
//
// Exit status: 0 success, 2 infeasible, 3 iteration cap, 64 configuration
// error, 1 any other failure.

#include "eeopt/io.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitIterationCap = 3;
constexpr int kExitConfig = 64;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string solver;
  std::string metric;
  std::optional<std::size_t> trials;
  bool quiet = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON experiment configuration");
  cmd->add_option("--seed", f.seed, "base seed (overrides the config)");
  cmd->add_option("--out", f.out, "CSV output path; a .json mirror is written next to it");
  cmd->add_option("--solver", f.solver, "monotonic | sequential | sum-rate | full-power | grid");
  cmd->add_option("--metric", f.metric, "gee | wmee | wsee | wpee");
  cmd->add_option("--trials", f.trials, "Monte Carlo trials (benchmark)");
  cmd->add_flag("--quiet", f.quiet, "no progress output on stderr");
}

eeopt::ExperimentConfig resolve(const Flags& f) {
  eeopt::ExperimentConfig c = f.config.empty() ? eeopt::ExperimentConfig{} : eeopt::load_config(f.config);
  try {
    if (f.seed) c.seed = *f.seed;
    if (!f.solver.empty()) c.solver = eeopt::parse_solver(f.solver);
    if (!f.metric.empty()) c.metric = eeopt::parse_metric(f.metric);
    if (f.trials) c.trials = *f.trials;
    if (!f.out.empty()) c.output = f.out;
  } catch (const eeopt::InvalidInput& e) {
    throw eeopt::ConfigError(e.what());
  }
  if (c.trials < 1) throw eeopt::ConfigError("--trials must be >= 1");
  return c;
}

std::string json_path(const std::string& csv_path) {
  const auto dot = csv_path.rfind('.');
  const auto slash = csv_path.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return csv_path.substr(0, dot) + ".json";
  return csv_path + ".json";
}

void write_outputs(const eeopt::ExperimentConfig& c, const eeopt::CsvTable& table, const eeopt::Json& mirror,
                   bool quiet) {
  const std::string csv = eeopt::emit_csv(table);
  if (c.output.empty()) {
    std::cout << csv;
    return;
  }
  std::ofstream out(c.output);
  if (!out) throw eeopt::ConfigError("cannot write '" + c.output + "'");
  out << csv;
  std::ofstream js(json_path(c.output));
  if (!js) throw eeopt::ConfigError("cannot write '" + json_path(c.output) + "'");
  js << mirror.dump(2) << '\n';
  if (!quiet) std::cerr << "wrote " << c.output << " and " << json_path(c.output) << '\n';
}

int status_exit(eeopt::SolveStatus s) {
  switch (s) {
    case eeopt::SolveStatus::kOptimal:
      return kExitOk;
    case eeopt::SolveStatus::kInfeasible:
      return kExitInfeasible;
    case eeopt::SolveStatus::kIterationCap:
      return kExitIterationCap;
  }
  return kExitFailure;
}

int run_single(const eeopt::ExperimentConfig& c, eeopt::SolverKind solver, bool quiet) {
  const eeopt::NetworkInstance inst = eeopt::build_instance(c.scenario, c.seed);
  const eeopt::SolveReport r = eeopt::run_solver(inst, c.metric, solver, c.settings);
  if (!quiet) {
    std::cerr << eeopt::to_string(solver) << ' ' << eeopt::to_string(c.metric) << " = " << eeopt::format_number(r.value)
              << " (" << eeopt::to_string(r.status) << ", " << r.iterations << " iterations)\n";
  }
  eeopt::Json mirror = eeopt::report_json(r);
  write_outputs(c, eeopt::solve_table({r}), mirror, quiet);
  return status_exit(r.status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-efficient power control: global and sequential solvers"};
  app.require_subcommand(1);
  Flags flags;
  auto* solve = app.add_subcommand("solve", "solve one instance with --solver");
  auto* sweep = app.add_subcommand("sweep", "metric versus p_max for several solvers");
  auto* pareto = app.add_subcommand("pareto", "trace the energy-efficient Pareto boundary (WMEE)");
  auto* bench = app.add_subcommand("benchmark", "mean outer iterations versus p_max");
  auto* grid = app.add_subcommand("grid", "exhaustive grid search");
  for (auto* cmd : {solve, sweep, pareto, bench, grid}) add_flags(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const eeopt::ExperimentConfig c = resolve(flags);
    if (*solve) return run_single(c, c.solver, flags.quiet);
    if (*grid) return run_single(c, eeopt::SolverKind::kGrid, flags.quiet);
    if (*sweep) {
      std::vector<eeopt::SolverKind> solvers = c.sweep_solvers;
      if (!flags.solver.empty()) solvers = {c.solver};
      const auto rows = eeopt::run_sweep(c.scenario, c.seed, c.metric, c.sweep_dbw, solvers, c.settings);
      write_outputs(c, eeopt::sweep_table(rows), eeopt::sweep_json(rows), flags.quiet);
      return kExitOk;
    }
    if (*pareto) {
      const eeopt::SolverKind solver = flags.solver.empty() ? c.pareto_solver : c.solver;
      const eeopt::NetworkInstance inst = eeopt::build_instance(c.scenario, c.seed);
      const auto points = eeopt::run_pareto(inst, c.pareto_directions, solver, c.settings);
      write_outputs(c, eeopt::pareto_table(points), eeopt::pareto_json(points), flags.quiet);
      return kExitOk;
    }
    if (*bench) {
      const auto rows = eeopt::run_benchmark(c.scenario, c.seed, c.benchmark_dbw, c.trials, c.settings,
                                             c.benchmark_rel_sq_tol);
      write_outputs(c, eeopt::benchmark_table(rows), eeopt::benchmark_json(rows), flags.quiet);
      return kExitOk;
    }
  } catch (const eeopt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const eeopt::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
