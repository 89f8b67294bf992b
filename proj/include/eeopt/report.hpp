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

#include "eeopt/brb.hpp"
#include "eeopt/common.hpp"
#include "eeopt/network.hpp"

#include <chrono>
#include <string>
#include <vector>

namespace eeopt {

/// Summary of one branch-and-bound run inside the Dinkelbach loop.
struct BrbRunSummary {
  double lambda = 0.0;  ///< ratio-unit parameter of this run
  double upper = 0.0;
  double lower = 0.0;
  std::size_t boxes = 0;
  SolveStatus status = SolveStatus::kOptimal;
  /// (UB - LB) / max(1, |UB|) on the canonical objective, the quantity the search terminates on.
  double rel_gap = 0.0;
};

/// Common result of every solver entry point.
struct SolveReport {
  std::string solver;
  EeMetric metric = EeMetric::kGee;
  SolveStatus status = SolveStatus::kOptimal;
  Vec powers;
  double value = 0.0;  ///< metric at `powers`, in bit/J (or (bit/J)^K for wpee)
  Vec rates;           ///< bit/s
  Vec ee;              ///< bit/J per link
  int iterations = 0;  ///< Dinkelbach updates (global) or surrogate problems solved (sequential)
  double wall_ms = 0.0;
  std::vector<double> lambda_trace;     ///< Dinkelbach parameters, metric units
  std::vector<BrbRunSummary> brb_runs;  ///< global solver only
  std::vector<BoundRecord> brb_trace;   ///< bounds of the last branch-and-bound run
  std::vector<double> objective_trace;  ///< sequential solvers: objective after each accepted step
};

/// Fills powers, value, rates and ee for a feasible point.
inline SolveReport make_report(const NetworkInstance& inst, EeMetric metric, const Vec& p, std::string solver,
                               SolveStatus status = SolveStatus::kOptimal) {
  SolveReport r;
  r.solver = std::move(solver);
  r.metric = metric;
  r.status = status;
  r.powers = p;
  r.value = metric_value(inst, metric, p);
  r.rates = rates(inst, p);
  r.ee = energy_efficiencies(inst, p);
  return r;
}

inline SolveReport infeasible_report(const NetworkInstance& inst, EeMetric metric, std::string solver) {
  SolveReport r;
  r.solver = std::move(solver);
  r.metric = metric;
  r.status = SolveStatus::kInfeasible;
  r.powers = Vec::Zero(static_cast<Eigen::Index>(inst.k()));
  r.rates = r.powers;
  r.ee = r.powers;
  r.value = 0.0;
  return r;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace eeopt
