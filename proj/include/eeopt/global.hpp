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

// Globally optimal EE power control: Dinkelbach outer loop, branch-reduce-and-
// bound on the canonical monotonic subproblem inside.

#include "eeopt/brb.hpp"
#include "eeopt/canonical.hpp"
#include "eeopt/dinkelbach.hpp"
#include "eeopt/network.hpp"
#include "eeopt/report.hpp"

#include <vector>

namespace eeopt {

/// Ratios whose (min-)ratio equals metric / metric_scale.
struct MetricRatios {
  std::vector<MonotoneRatio> ratios;
  double metric_scale = 1.0;
};

inline MetricRatios metric_ratios(const NetworkInstance& inst, EeMetric metric) {
  switch (metric) {
    case EeMetric::kGee:
      return {{gee_ratio(inst)}, inst.bandwidth()};
    case EeMetric::kWmee:
      return {wmee_ratios(inst), inst.bandwidth()};
    case EeMetric::kWsee:
      return {{wsee_as_single_ratio(inst)}, 1.0};
    case EeMetric::kWpee:
      return {{wpee_as_single_ratio(inst)}, 1.0};
  }
  throw InvalidInput("metric_ratios: unknown metric");
}

struct GlobalOptions {
  /// Branch on warped power coordinates (see PowerWarp).
  bool warp_powers = true;
  /// Tighten box bounds with per-link rate bounds (see rate_upper_bounds).
  bool ratio_bounds = true;
};

/// Global maximization of `metric`. `dinkelbach_cfg.lambda0` is in metric
/// units (bit/J for gee, wmee and wsee).
inline SolveReport solve_global(const NetworkInstance& inst, EeMetric metric,
                                const DinkelbachConfig& dinkelbach_cfg, const BrbConfig& brb_cfg,
                                const GlobalOptions& options = {}) {
  Stopwatch clock;
  const MetricRatios mr = metric_ratios(inst, metric);
  const RatioSpec<Vec> spec = to_ratio_spec(mr.ratios);
  const std::vector<DcFunction> constraints = realized_constraints(inst);
  const Vec pmax = inst.p_max();
  const Vec kappa = options.warp_powers ? power_warp_scales(inst.sinr(), pmax) : Vec();

  std::vector<BrbRunSummary> runs;
  std::vector<BoundRecord> last_trace;
  auto inner = [&](double lambda) {
    const CanonicalForm form = canonicalize_ratios(mr.ratios, constraints, pmax, std::max(0.0, lambda), kappa,
                                                   options.ratio_bounds);
    BrbResult res = brb_solve(form.problem, brb_cfg);
    runs.push_back({lambda, res.upper_bound - form.offset, res.value - form.offset, res.boxes_processed, res.status,
                    (res.upper_bound - res.value) / std::max(1.0, std::abs(res.upper_bound))});
    last_trace = res.trace;
    InnerSolution<Vec> sol;
    sol.status = res.status;
    if (!res.has_solution()) {
      sol.status = SolveStatus::kInfeasible;
      sol.x = Vec::Zero(pmax.size());
      return sol;
    }
    // Canonical points may overshoot the power box by rounding only.
    sol.x = form.layout.power(res.argmax).cwiseMax(0.0).cwiseMin(pmax);
    sol.gap = std::max(0.0, res.upper_bound - res.value);
    return sol;
  };

  DinkelbachConfig cfg = dinkelbach_cfg;
  cfg.lambda0 = dinkelbach_cfg.lambda0 / mr.metric_scale;
  const DinkelbachResult<Vec> dk = dinkelbach(spec, inner, cfg);

  if (dk.status == SolveStatus::kInfeasible) {
    SolveReport r = infeasible_report(inst, metric, "monotonic");
    r.iterations = dk.iterations;
    r.brb_runs = std::move(runs);
    r.wall_ms = clock.elapsed_ms();
    return r;
  }
  SolveStatus status = dk.status;
  if (status == SolveStatus::kOptimal && dk.inner_capped) status = SolveStatus::kIterationCap;
  SolveReport r = make_report(inst, metric, dk.x, "monotonic", status);
  r.iterations = dk.iterations;
  for (const auto& it : dk.trace) r.lambda_trace.push_back(it.lambda * mr.metric_scale);
  for (auto& run : runs) run.lambda *= mr.metric_scale;
  r.brb_runs = std::move(runs);
  r.brb_trace = std::move(last_trace);
  r.wall_ms = clock.elapsed_ms();
  return r;
}

}  // namespace eeopt
