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

#pragma once

// Experiment orchestration: solver dispatch, grid oracle, Pmax sweeps,
// Pareto tracing and iteration benchmarks.

#include "eeopt/global.hpp"
#include "eeopt/parallel.hpp"
#include "eeopt/scenarios.hpp"
#include "eeopt/sequential.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace eeopt {

enum class SolverKind { kMonotonic, kSequential, kSumRate, kFullPower, kGrid };

inline std::string_view to_string(SolverKind s) {
  switch (s) {
    case SolverKind::kMonotonic:
      return "monotonic";
    case SolverKind::kSequential:
      return "sequential";
    case SolverKind::kSumRate:
      return "sum-rate";
    case SolverKind::kFullPower:
      return "full-power";
    case SolverKind::kGrid:
      return "grid";
  }
  return "unknown";
}

inline SolverKind parse_solver(std::string_view name) {
  for (SolverKind s : {SolverKind::kMonotonic, SolverKind::kSequential, SolverKind::kSumRate,
                       SolverKind::kFullPower, SolverKind::kGrid}) {
    if (name == to_string(s)) return s;
  }
  throw InvalidInput("unknown solver '" + std::string(name) + "'");
}

struct SolverSettings {
  DinkelbachConfig dinkelbach;
  BrbConfig brb;
  GlobalOptions global;
  ScaConfig sca;
  int grid_points = 201;  ///< per axis
  /// Monotonic solver, gee and wmee: run the sequential solver from the
  /// branch-and-bound point and keep its result when the metric improves.
  bool polish = false;
};

struct GridResult {
  double value = -std::numeric_limits<double>::infinity();
  Vec point;
  std::size_t evaluations = 0;
  bool found = false;  ///< some grid point was feasible
};

inline constexpr double kGridEvaluationLimit = 1e8;

/// Exhaustive search on the uniform grid with `points_per_axis` points on
/// each axis of [0, p_max], corners included. Infeasible points are skipped.
inline GridResult grid_search(const NetworkInstance& inst, EeMetric metric, int points_per_axis) {
  require(points_per_axis >= 2, "grid_search: need at least 2 points per axis");
  const auto k = static_cast<int>(inst.k());
  require(k * std::log(static_cast<double>(points_per_axis)) <= std::log(kGridEvaluationLimit) + 1e-12,
          "grid_search: points_per_axis^K exceeds 1e8");
  const Vec pmax = inst.p_max();
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  GridResult best;
  Vec p(k);
  const double denom = points_per_axis - 1;
  while (true) {
    for (int i = 0; i < k; ++i) p(i) = pmax(i) * (idx[static_cast<std::size_t>(i)] / denom);
    ++best.evaluations;
    if (inst.constraints().empty() || is_feasible(inst, p)) {
      const double v = metric_value(inst, metric, p);
      if (!best.found || v > best.value) {
        best.value = v;
        best.point = p;
        best.found = true;
      }
    }
    int axis = 0;
    while (axis < k && ++idx[static_cast<std::size_t>(axis)] == points_per_axis) {
      idx[static_cast<std::size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == k) break;
  }
  return best;
}

/// Runs one solver on one instance.
inline SolveReport run_solver(const NetworkInstance& inst, EeMetric metric, SolverKind solver,
                              const SolverSettings& settings) {
  switch (solver) {
    case SolverKind::kMonotonic: {
      SolveReport r = solve_global(inst, metric, settings.dinkelbach, settings.brb, settings.global);
      if (!settings.polish || r.status == SolveStatus::kInfeasible ||
          (metric != EeMetric::kGee && metric != EeMetric::kWmee)) {
        return r;
      }
      ScaConfig cfg = settings.sca;
      cfg.start = r.powers;
      const SolveReport local = metric == EeMetric::kGee ? sca_gee(inst, cfg) : sca_wmee(inst, cfg);
      if (local.status != SolveStatus::kInfeasible && local.value > r.value) {
        const double ms = r.wall_ms + local.wall_ms;
        SolveReport polished = make_report(inst, metric, local.powers, r.solver, r.status);
        polished.iterations = r.iterations;
        polished.lambda_trace = std::move(r.lambda_trace);
        polished.brb_runs = std::move(r.brb_runs);
        polished.brb_trace = std::move(r.brb_trace);
        polished.objective_trace = local.objective_trace;
        polished.wall_ms = ms;
        return polished;
      }
      return r;
    }
    case SolverKind::kSequential:
      if (metric == EeMetric::kGee) return sca_gee(inst, settings.sca);
      if (metric == EeMetric::kWmee) return sca_wmee(inst, settings.sca);
      throw InvalidInput("sequential solver supports gee and wmee only");
    case SolverKind::kSumRate:
      return sum_rate_max(inst, settings.sca, metric);
    case SolverKind::kFullPower: {
      if (!is_feasible(inst, inst.p_max())) return infeasible_report(inst, metric, "full-power");
      SolveReport r = make_report(inst, metric, inst.p_max(), "full-power");
      r.iterations = 0;
      return r;
    }
    case SolverKind::kGrid: {
      Stopwatch clock;
      const GridResult g = grid_search(inst, metric, settings.grid_points);
      SolveReport r = g.found ? make_report(inst, metric, g.point, "grid") : infeasible_report(inst, metric, "grid");
      r.iterations = static_cast<int>(g.evaluations);
      r.wall_ms = clock.elapsed_ms();
      return r;
    }
  }
  throw InvalidInput("run_solver: unknown solver");
}

// ---------------------------------------------------------------------------
// Scenarios.

/// Where instances come from: a generator config or a fixed instance.
using ScenarioSpec = std::variant<MassiveMimoScenarioConfig, LteScenarioConfig, NetworkInstance>;

/// Instance for `seed`, optionally with every p_max replaced (dBW).
inline NetworkInstance build_instance(const ScenarioSpec& spec, std::uint64_t seed,
                                      std::optional<double> p_max_dbw = std::nullopt) {
  return std::visit(
      [&](const auto& s) -> NetworkInstance {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NetworkInstance>) {
          return p_max_dbw ? s.with_p_max(db_to_linear(*p_max_dbw)) : s;
        } else {
          T cfg = s;
          cfg.seed = seed;
          if (p_max_dbw) cfg.radio.p_max_dbw = *p_max_dbw;
          if constexpr (std::is_same_v<T, MassiveMimoScenarioConfig>) {
            return generate_massive_mimo(cfg);
          } else {
            return generate_lte(cfg);
          }
        }
      },
      spec);
}

// ---------------------------------------------------------------------------
// Sweeps.

struct SweepRow {
  double p_max_dbw = 0.0;
  SolverKind solver = SolverKind::kMonotonic;
  SolveReport report;
  std::string error;  ///< non-empty when the cell failed
};

/// One row per (p_max, solver), p_max-major. Cells run in parallel.
inline std::vector<SweepRow> run_sweep(const ScenarioSpec& scenario, std::uint64_t seed, EeMetric metric,
                                       const std::vector<double>& p_max_dbw, const std::vector<SolverKind>& solvers,
                                       const SolverSettings& settings) {
  require(!solvers.empty(), "run_sweep: need at least one solver");
  for (std::size_t i = 0; i < p_max_dbw.size(); ++i) {
    require(std::isfinite(p_max_dbw[i]), "run_sweep: values must be finite");
    require(i == 0 || p_max_dbw[i] > p_max_dbw[i - 1], "run_sweep: values must be strictly increasing");
  }
  const std::size_t cells = p_max_dbw.size() * solvers.size();
  return parallel_map(cells, [&](std::size_t c) {
    SweepRow row;
    row.p_max_dbw = p_max_dbw[c / solvers.size()];
    row.solver = solvers[c % solvers.size()];
    try {
      const NetworkInstance inst = build_instance(scenario, seed, row.p_max_dbw);
      row.report = run_solver(inst, metric, row.solver, settings);
    } catch (const std::exception& e) {
      row.error = e.what();
      row.report.solver = std::string(to_string(row.solver));
      row.report.metric = metric;
      row.report.value = std::numeric_limits<double>::quiet_NaN();
      row.report.status = SolveStatus::kInfeasible;
    }
    return row;
  });
}

// ---------------------------------------------------------------------------
// Pareto tracing.

/// D positive unit directions: uniform angles on the quarter circle (K = 2),
/// a Fibonacci spiral on the positive octant (K = 3), a Kronecker sequence
/// normalized to the unit sphere otherwise.
inline std::vector<Vec> pareto_directions(std::size_t k, std::size_t count) {
  require(k >= 1 && count >= 1, "pareto_directions: need K >= 1 and at least one direction");
  std::vector<Vec> dirs;
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (std::size_t d = 0; d < count; ++d) {
    const double t = (static_cast<double>(d) + 0.5) / static_cast<double>(count);
    Vec u(static_cast<Eigen::Index>(k));
    if (k == 1) {
      u << 1.0;
    } else if (k == 2) {
      const double theta = t * M_PI / 2.0;
      u << std::cos(theta), std::sin(theta);
    } else if (k == 3) {
      const double z = 1.0 - t;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double frac = std::fmod((static_cast<double>(d) + 0.5) * golden, 1.0);
      const double phi = frac * M_PI / 2.0;
      u << r * std::cos(phi), r * std::sin(phi), z;
    } else {
      for (std::size_t i = 0; i < k; ++i) {
        const double alpha = std::fmod(std::sqrt(static_cast<double>(2 + 3 * i)), 1.0);
        u(static_cast<Eigen::Index>(i)) = 0.05 + std::fmod((static_cast<double>(d) + 0.5) * alpha, 1.0);
      }
      u.normalize();
    }
    dirs.push_back(u);
  }
  return dirs;
}

/// WMEE weights steering the max-min solution onto the ray along u:
/// w_k proportional to 1 / u_k, normalized to sum 1. Components of u are
/// floored at 1e-9.
inline Vec pareto_weights(const Vec& u) {
  Vec w = u.cwiseMax(1e-9).cwiseInverse();
  return w / w.sum();
}

struct ParetoPoint {
  Vec weights;
  SolveReport report;  ///< report.ee is the Pareto point
  std::string error;
};

inline std::vector<ParetoPoint> run_pareto(const NetworkInstance& inst, std::size_t directions, SolverKind solver,
                                           const SolverSettings& settings) {
  require(solver == SolverKind::kMonotonic || solver == SolverKind::kSequential || solver == SolverKind::kGrid,
          "run_pareto: solver must be monotonic, sequential or grid");
  const std::vector<Vec> dirs = pareto_directions(inst.k(), directions);
  return parallel_map(dirs.size(), [&](std::size_t d) {
    ParetoPoint pt;
    pt.weights = pareto_weights(dirs[d]);
    try {
      pt.report = run_solver(inst.with_weights(pt.weights), EeMetric::kWmee, solver, settings);
    } catch (const std::exception& e) {
      pt.error = e.what();
      pt.report = infeasible_report(inst, EeMetric::kWmee, std::string(to_string(solver)));
    }
    return pt;
  });
}

// ---------------------------------------------------------------------------
// Iteration benchmark.

struct BenchmarkRow {
  double p_max_dbw = 0.0;
  SolverKind solver = SolverKind::kMonotonic;
  double mean_iterations = 0.0;
  std::vector<int> iterations;  ///< per trial, trial order
  std::vector<double> values;   ///< GEE per trial
};

/// Settings used by the benchmark: both solvers start from full power and
/// stop once the squared relative change of the GEE value is <= rel_sq_tol.
inline SolverSettings benchmark_settings(SolverSettings base, double rel_sq_tol = 1e-4) {
  base.dinkelbach.ratio_rel_sq_tol = rel_sq_tol;
  base.sca.rel_sq_tol = rel_sq_tol;
  base.sca.start.reset();
  return base;
}

/// Mean outer iterations of the monotonic (Dinkelbach updates, started at
/// the full-power GEE) and sequential (surrogates solved) GEE solvers.
/// Trial t uses seed + t.
inline std::vector<BenchmarkRow> run_benchmark(const ScenarioSpec& scenario, std::uint64_t seed,
                                               const std::vector<double>& p_max_dbw, std::size_t trials,
                                               const SolverSettings& base, double rel_sq_tol = 1e-4) {
  require(trials >= 1, "run_benchmark: trials must be >= 1");
  const SolverSettings settings = benchmark_settings(base, rel_sq_tol);
  struct Cell {
    int mono_iters;
    int seq_iters;
    double mono_value;
    double seq_value;
  };
  const std::size_t cells = p_max_dbw.size() * trials;
  const auto results = parallel_map(cells, [&](std::size_t c) {
    const double dbw = p_max_dbw[c / trials];
    const std::uint64_t trial_seed = seed + c % trials;
    const NetworkInstance inst = build_instance(scenario, trial_seed, dbw);
    SolverSettings s = settings;
    s.dinkelbach.lambda0 = metric_value(inst, EeMetric::kGee, inst.p_max());
    const SolveReport mono = solve_global(inst, EeMetric::kGee, s.dinkelbach, s.brb, s.global);
    const SolveReport seq = sca_gee(inst, s.sca);
    return Cell{mono.iterations, seq.iterations, mono.value, seq.value};
  });
  std::vector<BenchmarkRow> rows;
  for (std::size_t v = 0; v < p_max_dbw.size(); ++v) {
    BenchmarkRow mono{p_max_dbw[v], SolverKind::kMonotonic, 0.0, {}, {}};
    BenchmarkRow seq{p_max_dbw[v], SolverKind::kSequential, 0.0, {}, {}};
    for (std::size_t t = 0; t < trials; ++t) {
      const Cell& c = results[v * trials + t];
      mono.iterations.push_back(c.mono_iters);
      mono.values.push_back(c.mono_value);
      seq.iterations.push_back(c.seq_iters);
      seq.values.push_back(c.seq_value);
    }
    for (BenchmarkRow* r : {&mono, &seq}) {
      double sum = 0.0;
      for (int i : r->iterations) sum += i;
      r->mean_iterations = sum / static_cast<double>(trials);
      rows.push_back(*r);
    }
  }
  return rows;
}

}  // namespace eeopt
