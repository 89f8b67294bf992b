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

// Generalized Dinkelbach iteration for max_x min_k f_k(x) / g_k(x).
//
// The parametric subproblem max_x min_k [f_k(x) - lambda g_k(x)] is solved by
// an injected inner maximizer, so the same loop drives both the global
// (branch-reduce-and-bound) and the surrogate (concave) solvers.

#include "eeopt/common.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace eeopt {

template <class X>
struct RatioSpec {
  std::vector<std::function<double(const X&)>> numerators;
  std::vector<std::function<double(const X&)>> denominators;

  std::size_t size() const { return numerators.size(); }
};

struct DinkelbachConfig {
  double lambda0 = 0.0;
  double epsilon = 1e-6;  ///< threshold on F(lambda), relative to max(1, |lambda| min_k g_k)
  int max_iter = 100;
  /// When > 0, also stop once ((lambda_{j+1} - lambda_j) / lambda_{j+1})^2 <= this.
  double ratio_rel_sq_tol = 0.0;
};

/// What the inner maximizer hands back for one value of lambda.
template <class X>
struct InnerSolution {
  X x;
  /// Certified bound on how far F(lambda) may exceed the value at x (0 if exact).
  double gap = 0.0;
  SolveStatus status = SolveStatus::kOptimal;
};

template <class X>
struct DinkelbachIterate {
  double lambda;
  double aux;  ///< min_k [f_k(x) - lambda g_k(x)] at the inner solution
  double gap;
  X x;
};

template <class X>
struct DinkelbachResult {
  SolveStatus status = SolveStatus::kOptimal;
  double lambda = 0.0;
  X x;
  int iterations = 0;
  bool inner_capped = false;  ///< some inner solve hit its own budget
  std::vector<DinkelbachIterate<X>> trace;
};

template <class X>
double ratio_value(const RatioSpec<X>& spec, const X& x) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double g = spec.denominators[k](x);
    if (!(g > 0.0)) throw SolverError("ratio denominator must be positive on the feasible set");
    best = std::min(best, spec.numerators[k](x) / g);
  }
  return best;
}

/// min_k [f_k(x) - lambda g_k(x)].
template <class X>
double auxiliary_value(const RatioSpec<X>& spec, double lambda, const X& x) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double g = spec.denominators[k](x);
    if (!(g > 0.0)) throw SolverError("ratio denominator must be positive on the feasible set");
    best = std::min(best, spec.numerators[k](x) - lambda * g);
  }
  return best;
}

template <class X>
double min_denominator(const RatioSpec<X>& spec, const X& x) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : spec.denominators) best = std::min(best, g(x));
  return best;
}

/// Runs the (generalized) Dinkelbach iteration.
///
/// `inner(lambda)` must return an InnerSolution<X> holding a (near) global
/// maximizer of the parametric problem. The loop stops when the auxiliary
/// value at the inner solution drops to epsilon (or to the inner solver's
/// own certified gap, whichever is larger).
template <class X, class Inner>
DinkelbachResult<X> dinkelbach(const RatioSpec<X>& spec, Inner&& inner, const DinkelbachConfig& cfg) {
  if (spec.size() == 0 || spec.numerators.size() != spec.denominators.size()) {
    throw InvalidInput("dinkelbach: need matching, non-empty numerator/denominator lists");
  }
  if (!(cfg.epsilon > 0.0)) throw InvalidInput("dinkelbach: epsilon must be positive");
  if (cfg.max_iter < 1) throw InvalidInput("dinkelbach: max_iter must be >= 1");

  DinkelbachResult<X> out;
  double lambda = cfg.lambda0;
  bool have_prev = false;
  X prev_x{};

  for (int j = 0; j < cfg.max_iter; ++j) {
    InnerSolution<X> sol = inner(lambda);
    if (sol.status == SolveStatus::kInfeasible) {
      out.status = SolveStatus::kInfeasible;
      out.iterations = j + 1;
      return out;
    }
    if (sol.status == SolveStatus::kIterationCap) out.inner_capped = true;

    const double aux = auxiliary_value(spec, lambda, sol.x);
    const double scale = std::max(1.0, std::abs(lambda) * min_denominator(spec, sol.x));
    const double tol = std::max(cfg.epsilon * scale, sol.gap);
    out.trace.push_back({lambda, aux, sol.gap, sol.x});
    out.iterations = j + 1;

    if (j == 0 && aux < -tol) {
      throw SolverError("dinkelbach: F(lambda0) < 0, invalid starting parameter");
    }
    if (aux <= tol) {
      out.lambda = lambda;
      // A slightly negative value means the inner point is marginally worse
      // than the previous one, whose ratio is exactly lambda.
      out.x = (aux < 0.0 && have_prev) ? prev_x : sol.x;
      if (aux < 0.0 && !have_prev) out.lambda = ratio_value(spec, sol.x);
      return out;
    }

    const double next = ratio_value(spec, sol.x);
    if (cfg.ratio_rel_sq_tol > 0.0 && next != 0.0) {
      const double rel = (next - lambda) / next;
      if (rel * rel <= cfg.ratio_rel_sq_tol) {
        out.lambda = next;
        out.x = sol.x;
        return out;
      }
    }
    prev_x = sol.x;
    have_prev = true;
    lambda = next;
  }
  out.status = SolveStatus::kIterationCap;
  out.lambda = lambda;
  out.x = prev_x;
  return out;
}

}  // namespace eeopt
