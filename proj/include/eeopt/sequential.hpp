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

// Sequential fractional programming. Each outer step replaces the concave
// minus-parts by their tangent planes at the current point, which gives a
// concave-over-affine surrogate that lower-bounds the true ratio, is tight at
// the expansion point and whose feasible set lies inside the original one.
// The surrogate is solved by Dinkelbach with a concave inner maximizer.

#include "eeopt/concave.hpp"
#include "eeopt/dinkelbach.hpp"
#include "eeopt/network.hpp"
#include "eeopt/report.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace eeopt {

/// p -> value + gradient . (p - point)
struct AffineFunction {
  double value = 0.0;
  Vec gradient;
  Vec point;

  double operator()(const Vec& p) const { return value + gradient.dot(p - point); }
};

/// Tangent plane of dc.minus at pj; an upper bound on dc.minus because the
/// minus part is concave.
inline AffineFunction linearize_minus(const DcFunction& dc, const Vec& pj) {
  require(static_cast<bool>(dc.minus) && static_cast<bool>(dc.grad_minus), "linearize_minus: incomplete DcFunction");
  return {dc.minus(pj), dc.grad_minus(pj), pj};
}

struct SurrogateProblem {
  Vec expansion_point;
  std::vector<SmoothConcave> numerators;     ///< one per ratio (min-ratio when several)
  std::vector<AffineFunction> denominators;  ///< positive on the box
  std::vector<SmoothConcave> constraints;    ///< concave, >= 0 when feasible
  Vec lower;
  Vec upper;
  double metric_scale = 1.0;  ///< metric = metric_scale * (min-)ratio

  /// (Min-)ratio of the surrogate at p, in ratio units.
  double ratio(const Vec& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < numerators.size(); ++k) {
      best = std::min(best, numerators[k].value(p) / denominators[k](p));
    }
    return best;
  }
};

namespace detail {

inline void require_feasible_start(const NetworkInstance& inst, const Vec& pj) {
  if (!is_feasible(inst, pj)) throw InvalidInput("surrogate: expansion point is not feasible");
}

// Concave lower bound of sum_k weight_k (q_k^+ - q_k^-) with the listed links
// and the minus parts linearized at pj.
inline SmoothConcave linearized_rate_sum(std::shared_ptr<const SinrModel> model, const Vec& pj, const Vec& weights) {
  const Vec qm = q_minus(*model, pj);
  const Mat gm = grad_q_minus(*model, pj);
  const double lin_value = weights.dot(qm);
  const Vec lin_grad = gm.transpose() * weights;
  SmoothConcave f;
  f.value = [model, weights, lin_value, lin_grad, pj](const Vec& p) {
    return weights.dot(q_plus(*model, p)) - lin_value - lin_grad.dot(p - pj);
  };
  f.gradient = [model, weights, lin_grad](const Vec& p) {
    return Vec(grad_q_plus(*model, p).transpose() * weights - lin_grad);
  };
  f.hessian = [model, weights](const Vec& p) {
    Mat h = Mat::Zero(p.size(), p.size());
    for (Eigen::Index k = 0; k < weights.size(); ++k) {
      if (weights(k) != 0.0) h += weights(k) * hess_q_plus(*model, p, k);
    }
    return h;
  };
  return f;
}

inline std::vector<SmoothConcave> linearized_constraints(const NetworkInstance& inst, const Vec& pj) {
  std::vector<SmoothConcave> out;
  for (const auto& spec : inst.constraints()) {
    const DcFunction& dc = spec.realized;
    const AffineFunction lin = linearize_minus(dc, pj);
    out.push_back({[dc, lin](const Vec& p) { return dc.plus(p) - lin(p); },
                   [dc, lin](const Vec& p) { return Vec(dc.grad_plus(p) - lin.gradient); },
                   [dc](const Vec& p) { return dc.hess_plus(p); }});
  }
  return out;
}

inline AffineFunction consumed_power(const NetworkInstance& inst, const Vec& weights) {
  const Vec pj = Vec::Zero(static_cast<Eigen::Index>(inst.k()));
  return {weights.dot(inst.psi()), weights.cwiseProduct(inst.mu()), pj};
}

inline SurrogateProblem base_surrogate(const NetworkInstance& inst, const Vec& pj) {
  require_feasible_start(inst, pj);
  SurrogateProblem s;
  s.expansion_point = pj;
  s.constraints = linearized_constraints(inst, pj);
  s.lower = Vec::Zero(pj.size());
  s.upper = inst.p_max();
  return s;
}

}  // namespace detail

/// Single ratio: sum_k [q_k^+ - linearized q_k^-] over sum_k (mu_k p_k + psi_k).
inline SurrogateProblem build_gee_surrogate(const NetworkInstance& inst, const Vec& pj) {
  SurrogateProblem s = detail::base_surrogate(inst, pj);
  const Vec ones = Vec::Ones(pj.size());
  s.numerators.push_back(detail::linearized_rate_sum(inst.sinr_ptr(), pj, ones));
  s.denominators.push_back(detail::consumed_power(inst, ones));
  s.metric_scale = inst.bandwidth();
  return s;
}

/// K ratios w_k [q_k^+ - linearized q_k^-] / (mu_k p_k + psi_k), max-min.
inline SurrogateProblem build_wmee_surrogate(const NetworkInstance& inst, const Vec& pj) {
  SurrogateProblem s = detail::base_surrogate(inst, pj);
  const Vec w = inst.weights();
  for (Eigen::Index k = 0; k < pj.size(); ++k) {
    const Vec e = Vec::Unit(pj.size(), k);
    s.numerators.push_back(detail::linearized_rate_sum(inst.sinr_ptr(), pj, w(k) * e));
    s.denominators.push_back(detail::consumed_power(inst, e));
  }
  s.metric_scale = inst.bandwidth();
  return s;
}

/// Sum rate with unit denominator (metric_scale B gives bit/s).
inline SurrogateProblem build_sum_rate_surrogate(const NetworkInstance& inst, const Vec& pj) {
  SurrogateProblem s = detail::base_surrogate(inst, pj);
  const Vec ones = Vec::Ones(pj.size());
  s.numerators.push_back(detail::linearized_rate_sum(inst.sinr_ptr(), pj, ones));
  s.denominators.push_back({1.0, Vec::Zero(pj.size()), Vec::Zero(pj.size())});
  s.metric_scale = inst.bandwidth();
  return s;
}

struct ScaConfig {
  double outer_tol = 1e-6;  ///< relative improvement threshold
  int calm_iterations = 2;  ///< consecutive small improvements needed to stop
  int max_outer = 100;
  /// When > 0, stop as soon as ((v_j - v_{j-1}) / v_j)^2 <= this (replaces outer_tol).
  double rel_sq_tol = 0.0;
  InnerSolverConfig inner;
  double dinkelbach_epsilon = 1e-10;
  int dinkelbach_max_iter = 100;
  /// Starting point; when unset, p_max halved until feasible (at most 30 times).
  std::optional<Vec> start;
  int start_halvings = 30;
};

inline void validate(const ScaConfig& cfg) {
  require(cfg.outer_tol > 0.0, "ScaConfig: outer_tol must be positive");
  require(cfg.calm_iterations >= 1, "ScaConfig: calm_iterations must be >= 1");
  require(cfg.max_outer >= 1, "ScaConfig: max_outer must be >= 1");
  require(cfg.rel_sq_tol >= 0.0, "ScaConfig: rel_sq_tol must be >= 0");
  require(cfg.dinkelbach_epsilon > 0.0, "ScaConfig: dinkelbach_epsilon must be positive");
  validate(cfg.inner);
}

struct SurrogateSolution {
  SolveStatus status = SolveStatus::kOptimal;
  Vec p;
  double ratio = 0.0;  ///< surrogate (min-)ratio at p
  int dinkelbach_iterations = 0;
};

/// Global maximizer of the (concave-over-affine) surrogate.
inline SurrogateSolution solve_surrogate(const SurrogateProblem& s, const ScaConfig& cfg) {
  RatioSpec<Vec> spec;
  for (std::size_t k = 0; k < s.numerators.size(); ++k) {
    spec.numerators.push_back(s.numerators[k].value);
    spec.denominators.push_back(s.denominators[k]);
  }
  const bool single = s.numerators.size() == 1;
  const bool box_only = s.constraints.empty();

  Vec interior;
  if (!single || !box_only) {
    const auto found = find_strictly_feasible(s.constraints, s.lower, s.upper, s.expansion_point, cfg.inner);
    if (!found) return {SolveStatus::kInfeasible, s.expansion_point, 0.0, 0};
    interior = *found;
  }

  Vec warm = single && box_only ? s.expansion_point : interior;
  bool capped = false;
  auto inner = [&](double lambda) {
    InnerSolution<Vec> sol;
    std::vector<SmoothConcave> pieces;
    for (std::size_t k = 0; k < s.numerators.size(); ++k) {
      const SmoothConcave& f = s.numerators[k];
      const AffineFunction& g = s.denominators[k];
      pieces.push_back({[f, g, lambda](const Vec& p) { return f.value(p) - lambda * g(p); },
                        [f, g, lambda](const Vec& p) { return Vec(f.gradient(p) - lambda * g.gradient); },
                        f.hessian});
    }
    ConcaveMaxResult res;
    if (single && box_only) {
      res = maximize_on_box(pieces[0], s.lower, s.upper, warm, cfg.inner);
    } else if (single) {
      res = maximize_with_barrier(pieces[0], s.constraints, OpenBox{s.lower, s.upper}, warm, cfg.inner);
    } else {
      res = maximize_min_of_concave(pieces, s.constraints, s.lower, s.upper, warm, cfg.inner);
    }
    if (res.status == SolveStatus::kIterationCap) capped = true;
    warm = res.x;
    sol.x = res.x;
    sol.gap = res.gap;
    sol.status = res.status;
    return sol;
  };

  DinkelbachConfig dcfg;
  dcfg.lambda0 = s.ratio(s.expansion_point);
  dcfg.epsilon = cfg.dinkelbach_epsilon;
  dcfg.max_iter = cfg.dinkelbach_max_iter;
  const DinkelbachResult<Vec> dk = dinkelbach(spec, inner, dcfg);

  SurrogateSolution out;
  out.dinkelbach_iterations = dk.iterations;
  out.p = dk.x.cwiseMax(s.lower).cwiseMin(s.upper);
  out.ratio = s.ratio(out.p);
  out.status = (dk.status == SolveStatus::kOptimal && capped) ? SolveStatus::kIterationCap : dk.status;
  return out;
}

/// p_max if feasible, else p_max / 2^j for the first feasible j.
inline std::optional<Vec> sca_start(const NetworkInstance& inst, const ScaConfig& cfg) {
  if (cfg.start) {
    if (is_feasible(inst, *cfg.start)) return *cfg.start;
    return std::nullopt;
  }
  Vec p = inst.p_max();
  for (int j = 0; j <= cfg.start_halvings; ++j, p *= 0.5) {
    if (is_feasible(inst, p)) return p;
  }
  return std::nullopt;
}

namespace detail {

template <class Build, class Objective>
SolveReport sequential_ascent(const NetworkInstance& inst, EeMetric report_metric, const std::string& name,
                              Build&& build, Objective&& objective, const ScaConfig& cfg) {
  validate(cfg);
  Stopwatch clock;
  const auto start = sca_start(inst, cfg);
  if (!start) {
    SolveReport r = infeasible_report(inst, report_metric, name);
    r.wall_ms = clock.elapsed_ms();
    return r;
  }
  Vec p = *start;
  double v = objective(p);
  std::vector<double> trace{v};
  SolveStatus status = SolveStatus::kIterationCap;
  int iterations = 0;
  int calm = 0;
  for (int j = 1; j <= cfg.max_outer; ++j) {
    iterations = j;
    const SurrogateSolution sol = solve_surrogate(build(inst, p), cfg);
    if (sol.status == SolveStatus::kInfeasible) {
      // The previous iterate stays feasible; the surrogate solver gave up.
      status = SolveStatus::kOptimal;
      break;
    }
    const double v_new = objective(sol.p);
    if (!(v_new >= v) || !is_feasible(inst, sol.p)) {
      // Inexact inner solution at a stationary point: keep p.
      status = SolveStatus::kOptimal;
      break;
    }
    const double rel = v_new != 0.0 ? (v_new - v) / std::abs(v_new) : 0.0;
    p = sol.p;
    v = v_new;
    trace.push_back(v);
    if (cfg.rel_sq_tol > 0.0) {
      if (rel * rel <= cfg.rel_sq_tol) {
        status = SolveStatus::kOptimal;
        break;
      }
    } else if (rel <= cfg.outer_tol) {
      if (++calm >= cfg.calm_iterations) {
        status = SolveStatus::kOptimal;
        break;
      }
    } else {
      calm = 0;
    }
  }
  SolveReport r = make_report(inst, report_metric, p, name, status);
  r.iterations = iterations;
  r.objective_trace = std::move(trace);
  r.wall_ms = clock.elapsed_ms();
  return r;
}

}  // namespace detail

inline SolveReport sca_gee(const NetworkInstance& inst, const ScaConfig& cfg = {}) {
  return detail::sequential_ascent(
      inst, EeMetric::kGee, "sequential", build_gee_surrogate,
      [&](const Vec& p) { return metric_value(inst, EeMetric::kGee, p); }, cfg);
}

inline SolveReport sca_wmee(const NetworkInstance& inst, const ScaConfig& cfg = {}) {
  return detail::sequential_ascent(
      inst, EeMetric::kWmee, "sequential", build_wmee_surrogate,
      [&](const Vec& p) { return metric_value(inst, EeMetric::kWmee, p); }, cfg);
}

/// Sequential ascent on the sum rate. The report carries `report_metric` at
/// the final point; objective_trace holds sum rates in bit/s.
inline SolveReport sum_rate_max(const NetworkInstance& inst, const ScaConfig& cfg = {},
                                EeMetric report_metric = EeMetric::kGee) {
  return detail::sequential_ascent(
      inst, report_metric, "sum-rate", build_sum_rate_surrogate,
      [&](const Vec& p) { return rates(inst, p).sum(); }, cfg);
}

/// Gradient of GEE (bit/J per W).
inline Vec gee_gradient(const NetworkInstance& inst, const Vec& p) {
  const double b = inst.bandwidth();
  const Mat gp = grad_q_plus(inst.sinr(), p);
  const Mat gm = grad_q_minus(inst.sinr(), p);
  const Vec grad_rate = b * (gp - gm).colwise().sum().transpose();
  const double r = rates(inst, p).sum();
  const double d = power_consumption(inst, p).sum();
  return (grad_rate * d - r * inst.mu()) / (d * d);
}

/// Scale-free stationarity measure of GEE on the box: infinity norm of the
/// projected step in coordinates y = p / p_max with the gradient divided by
/// the GEE value. Zero exactly at KKT points of the box-constrained problem.
inline double gee_stationarity(const NetworkInstance& inst, const Vec& p) {
  const Vec pmax = inst.p_max();
  const double v = metric_value(inst, EeMetric::kGee, p);
  require(v > 0.0, "gee_stationarity: GEE must be positive");
  const Vec y = p.cwiseQuotient(pmax);
  const Vec g = gee_gradient(inst, p).cwiseProduct(pmax) / v;
  return ((y + g).cwiseMax(0.0).cwiseMin(1.0) - y).cwiseAbs().maxCoeff();
}

}  // namespace eeopt
