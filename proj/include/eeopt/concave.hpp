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

// Smooth concave maximization: projected Newton on a box, and a log-barrier
// Newton method when concave constraints c_j(x) >= 0 are present.

#include "eeopt/common.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace eeopt {

/// A twice-differentiable concave function.
struct SmoothConcave {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> hessian;
};

struct InnerSolverConfig {
  double grad_tol = 1e-9;        ///< projected-gradient / Newton-decrement tolerance
  int max_iters = 200;           ///< Newton steps (per barrier stage)
  double barrier_weight0 = 1e-3;  ///< initial barrier weight, relative to max(1, |f(x0)|)
  double barrier_shrink = 0.1;
  int barrier_stages = 5;
};

inline void validate(const InnerSolverConfig& cfg) {
  require(cfg.grad_tol > 0.0, "InnerSolverConfig: grad_tol must be positive");
  require(cfg.max_iters > 0, "InnerSolverConfig: max_iters must be positive");
  require(cfg.barrier_weight0 > 0.0, "InnerSolverConfig: barrier_weight0 must be positive");
  require(cfg.barrier_shrink > 0.0 && cfg.barrier_shrink < 1.0, "InnerSolverConfig: barrier_shrink must lie in (0, 1)");
  require(cfg.barrier_stages > 0, "InnerSolverConfig: barrier_stages must be positive");
}

struct ConcaveMaxResult {
  SolveStatus status = SolveStatus::kOptimal;
  Vec x;
  double value = 0.0;
  double residual = 0.0;  ///< projected-gradient norm, or final Newton decrement
  double gap = 0.0;       ///< barrier duality-gap estimate (0 for the box solver)
  int iterations = 0;
};

namespace detail {

// Solves (A + delta I) d = g for symmetric PSD A, raising delta until the
// factorization succeeds.
inline Vec regularized_solve(const Mat& a, const Vec& g) {
  const double base = 1e-12 * (1.0 + a.diagonal().cwiseAbs().maxCoeff());
  double delta = base;
  for (int attempt = 0; attempt < 12; ++attempt) {
    Eigen::LLT<Mat> llt(a + delta * Mat::Identity(a.rows(), a.cols()));
    if (llt.info() == Eigen::Success) {
      Vec d = llt.solve(g);
      if (d.allFinite()) return d;
    }
    delta *= 100.0;
  }
  return g;
}

}  // namespace detail

/// Maximizes a concave f over the box [lo, hi] by projected Newton steps
/// (free variables only) with Armijo backtracking on the projection arc.
/// Works in coordinates normalized to [0, 1] per axis.
inline ConcaveMaxResult maximize_on_box(const SmoothConcave& f, const Vec& lo, const Vec& hi, const Vec& x0,
                                        const InnerSolverConfig& cfg) {
  validate(cfg);
  require(lo.size() == hi.size() && lo.size() == x0.size(), "maximize_on_box: dimension mismatch");
  require((lo.array() <= hi.array()).all() && lo.allFinite() && hi.allFinite(),
          "maximize_on_box: box must be finite with lo <= hi");
  const Eigen::Index n = lo.size();
  const Vec w = hi - lo;
  auto to_x = [&](const Vec& y) { return Vec(lo + w.cwiseProduct(y)); };
  auto project = [](const Vec& y) { return Vec(y.cwiseMax(0.0).cwiseMin(1.0)); };

  Vec y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = w(i) > 0.0 ? std::clamp((x0(i) - lo(i)) / w(i), 0.0, 1.0) : 0.0;
  Vec x = to_x(y);
  double fx = f.value(x);

  ConcaveMaxResult out;
  out.status = SolveStatus::kIterationCap;
  for (int it = 0; it < cfg.max_iters; ++it) {
    const Vec g = w.cwiseProduct(f.gradient(x));
    out.residual = (project(y + g) - y).cwiseAbs().maxCoeff();
    out.iterations = it;
    if (out.residual <= cfg.grad_tol * std::max(1.0, std::abs(fx))) {
      out.status = SolveStatus::kOptimal;
      break;
    }

    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool at_lo = y(i) <= 0.0 && g(i) <= 0.0;
      const bool at_hi = y(i) >= 1.0 && g(i) >= 0.0;
      if (w(i) > 0.0 && !at_lo && !at_hi) free.push_back(i);
    }
    Vec newton = Vec::Zero(n);
    if (!free.empty()) {
      const Mat h = w.asDiagonal() * f.hessian(x) * w.asDiagonal();
      const auto m = static_cast<Eigen::Index>(free.size());
      Mat a(m, m);
      Vec gf(m);
      for (Eigen::Index r = 0; r < m; ++r) {
        gf(r) = g(free[static_cast<std::size_t>(r)]);
        for (Eigen::Index c = 0; c < m; ++c) a(r, c) = -h(free[static_cast<std::size_t>(r)], free[static_cast<std::size_t>(c)]);
      }
      const Vec d = detail::regularized_solve(a, gf);
      if (d.dot(gf) > 0.0) {
        for (Eigen::Index r = 0; r < m; ++r) newton(free[static_cast<std::size_t>(r)]) = d(r);
      }
    }

    bool moved = false;
    for (const Vec* dir : {static_cast<const Vec*>(&newton), &g}) {
      if (dir->cwiseAbs().maxCoeff() == 0.0) continue;
      double step = 1.0;
      for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
        const Vec y_new = project(y + step * *dir);
        const Vec x_new = to_x(y_new);
        const double f_new = f.value(x_new);
        if (std::isfinite(f_new) && f_new >= fx + 1e-4 * g.dot(y_new - y) && f_new >= fx) {
          moved = (y_new - y).cwiseAbs().maxCoeff() > 0.0;
          y = y_new;
          x = x_new;
          fx = f_new;
          break;
        }
      }
      if (moved) break;
    }
    if (!moved) {
      // No ascent left at working precision.
      out.status = SolveStatus::kOptimal;
      break;
    }
  }
  out.x = x;
  out.value = fx;
  return out;
}

/// Box with possibly infinite sides used by the barrier solver.
struct OpenBox {
  Vec lo;  ///< -inf allowed
  Vec hi;  ///< +inf allowed
};

/// Maximizes concave f subject to concave c_j(x) >= 0 and lo < x < hi with a
/// log-barrier Newton method. x0 must be strictly feasible. `stop_when`
/// (optional) ends the run early once it returns true for an iterate.
inline ConcaveMaxResult maximize_with_barrier(const SmoothConcave& f, const std::vector<SmoothConcave>& cons,
                                              const OpenBox& box, const Vec& x0, const InnerSolverConfig& cfg,
                                              const std::function<bool(const Vec&)>& stop_when = {}) {
  validate(cfg);
  const Eigen::Index n = x0.size();
  require(box.lo.size() == n && box.hi.size() == n, "maximize_with_barrier: dimension mismatch");

  auto slacks_ok = [&](const Vec& x, std::vector<double>* cvals) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(x(i) > box.lo(i)) || !(x(i) < box.hi(i))) return false;
    }
    if (cvals) cvals->clear();
    for (const auto& c : cons) {
      const double v = c.value(x);
      if (!(v > 0.0)) return false;
      if (cvals) cvals->push_back(v);
    }
    return true;
  };
  std::vector<double> cv;
  if (!slacks_ok(x0, &cv)) throw SolverError("maximize_with_barrier: starting point is not strictly feasible");

  auto psi = [&](const Vec& x, double mu) {
    std::vector<double> c;
    if (!slacks_ok(x, &c)) return -std::numeric_limits<double>::infinity();
    double v = f.value(x);
    double b = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::isfinite(box.lo(i))) b += std::log(x(i) - box.lo(i));
      if (std::isfinite(box.hi(i))) b += std::log(box.hi(i) - x(i));
    }
    for (double ci : c) b += std::log(ci);
    return v + mu * b;
  };

  int terms = static_cast<int>(cons.size());
  for (Eigen::Index i = 0; i < n; ++i) terms += std::isfinite(box.lo(i)) + std::isfinite(box.hi(i));

  Vec x = x0;
  double mu = cfg.barrier_weight0 * std::max(1.0, std::abs(f.value(x0)));
  ConcaveMaxResult out;
  out.status = SolveStatus::kOptimal;
  int total = 0;
  for (int stage = 0; stage < cfg.barrier_stages; ++stage) {
    bool stage_done = false;
    for (int it = 0; it < cfg.max_iters; ++it, ++total) {
      if (stop_when && stop_when(x)) {
        out.x = x;
        out.value = f.value(x);
        out.iterations = total;
        return out;
      }
      std::vector<double> c;
      slacks_ok(x, &c);
      Vec g = f.gradient(x);
      Mat h = f.hessian(x);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (std::isfinite(box.lo(i))) {
          const double s = x(i) - box.lo(i);
          g(i) += mu / s;
          h(i, i) -= mu / (s * s);
        }
        if (std::isfinite(box.hi(i))) {
          const double s = box.hi(i) - x(i);
          g(i) -= mu / s;
          h(i, i) -= mu / (s * s);
        }
      }
      for (std::size_t j = 0; j < cons.size(); ++j) {
        const Vec gc = cons[j].gradient(x);
        g += (mu / c[j]) * gc;
        h += (mu / c[j]) * cons[j].hessian(x) - (mu / (c[j] * c[j])) * gc * gc.transpose();
      }
      const Vec d = detail::regularized_solve(-h, g);
      const double decrement = std::sqrt(std::max(0.0, g.dot(d)));
      out.residual = decrement;
      if (decrement * decrement <= 2.0 * cfg.grad_tol * cfg.grad_tol * std::max(1.0, mu) || !(g.dot(d) > 0.0)) {
        stage_done = true;
        break;
      }
      const double base = psi(x, mu);
      double step = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 80; ++ls, step *= 0.5) {
        const Vec xn = x + step * d;
        const double v = psi(xn, mu);
        if (std::isfinite(v) && v >= base + 1e-4 * step * g.dot(d)) {
          x = xn;
          moved = true;
          break;
        }
      }
      if (!moved) {
        stage_done = true;
        break;
      }
    }
    if (!stage_done) out.status = SolveStatus::kIterationCap;
    if (stage + 1 < cfg.barrier_stages) mu *= cfg.barrier_shrink;
  }
  out.x = x;
  out.value = f.value(x);
  out.gap = terms * mu;
  out.iterations = total;
  return out;
}

/// Phase 1: a point with lo < x < hi and every c_j(x) > 0, found by
/// maximizing the smallest constraint value s in epigraph form. Returns
/// nothing when no strictly feasible point is found.
inline std::optional<Vec> find_strictly_feasible(const std::vector<SmoothConcave>& cons, const Vec& lo, const Vec& hi,
                                                 const Vec& hint, const InnerSolverConfig& cfg) {
  const Eigen::Index n = lo.size();
  require(hi.size() == n && hint.size() == n, "find_strictly_feasible: dimension mismatch");
  const Vec w = hi - lo;
  Vec x0(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    require(w(i) > 0.0, "find_strictly_feasible: box must have non-empty interior");
    x0(i) = std::clamp(hint(i), lo(i) + 1e-6 * w(i), hi(i) - 1e-6 * w(i));
  }
  auto strictly = [&](const Vec& x) {
    for (const auto& c : cons) {
      if (!(c.value(x) > 0.0)) return false;
    }
    return true;
  };
  if (strictly(x0)) return x0;

  // Variables (x, s): maximize s subject to c_j(x) - s >= 0.
  double cmin = std::numeric_limits<double>::infinity();
  for (const auto& c : cons) cmin = std::min(cmin, c.value(x0));
  Vec y0(n + 1);
  y0.head(n) = x0;
  y0(n) = cmin - std::max(1.0, std::abs(cmin));

  SmoothConcave obj{[n](const Vec& y) { return y(n); }, [n](const Vec&) { return Vec(Vec::Unit(n + 1, n)); },
                    [n](const Vec&) { return Mat(Mat::Zero(n + 1, n + 1)); }};
  std::vector<SmoothConcave> lifted;
  for (const auto& c : cons) {
    lifted.push_back({[c, n](const Vec& y) { return c.value(y.head(n)) - y(n); },
                      [c, n](const Vec& y) {
                        Vec g(n + 1);
                        g.head(n) = c.gradient(y.head(n));
                        g(n) = -1.0;
                        return g;
                      },
                      [c, n](const Vec& y) {
                        Mat h = Mat::Zero(n + 1, n + 1);
                        h.topLeftCorner(n, n) = c.hessian(y.head(n));
                        return h;
                      }});
  }
  OpenBox box{Vec(n + 1), Vec(n + 1)};
  box.lo.head(n) = lo;
  box.hi.head(n) = hi;
  box.lo(n) = -std::numeric_limits<double>::infinity();
  box.hi(n) = std::numeric_limits<double>::infinity();
  InnerSolverConfig phase1 = cfg;
  phase1.barrier_weight0 = 1.0;
  const auto res = maximize_with_barrier(obj, lifted, box, y0, phase1,
                                         [&](const Vec& y) { return y(n) > 0.0 && strictly(y.head(n)); });
  const Vec x = res.x.head(n);
  if (strictly(x)) return x;
  return std::nullopt;
}

/// Maximizes min_k pieces_k(x) subject to c_j(x) >= 0 and lo <= x <= hi via
/// the epigraph form max z s.t. pieces_k(x) - z >= 0. x0 must be strictly
/// inside the box and strictly feasible for the constraints.
inline ConcaveMaxResult maximize_min_of_concave(const std::vector<SmoothConcave>& pieces,
                                                const std::vector<SmoothConcave>& cons, const Vec& lo, const Vec& hi,
                                                const Vec& x0, const InnerSolverConfig& cfg) {
  require(!pieces.empty(), "maximize_min_of_concave: need at least one piece");
  const Eigen::Index n = lo.size();
  double zmin = std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) zmin = std::min(zmin, p.value(x0));
  Vec y0(n + 1);
  y0.head(n) = x0;
  y0(n) = zmin - std::max(1e-3, 0.1 * std::abs(zmin));

  SmoothConcave obj{[n](const Vec& y) { return y(n); }, [n](const Vec&) { return Vec(Vec::Unit(n + 1, n)); },
                    [n](const Vec&) { return Mat(Mat::Zero(n + 1, n + 1)); }};
  std::vector<SmoothConcave> all;
  auto lift = [n](const SmoothConcave& c, double z_coeff) {
    return SmoothConcave{[c, n, z_coeff](const Vec& y) { return c.value(y.head(n)) + z_coeff * y(n); },
                         [c, n, z_coeff](const Vec& y) {
                           Vec g(n + 1);
                           g.head(n) = c.gradient(y.head(n));
                           g(n) = z_coeff;
                           return g;
                         },
                         [c, n](const Vec& y) {
                           Mat h = Mat::Zero(n + 1, n + 1);
                           h.topLeftCorner(n, n) = c.hessian(y.head(n));
                           return h;
                         }};
  };
  for (const auto& p : pieces) all.push_back(lift(p, -1.0));
  for (const auto& c : cons) all.push_back(lift(c, 0.0));
  OpenBox box{Vec(n + 1), Vec(n + 1)};
  box.lo.head(n) = lo;
  box.hi.head(n) = hi;
  box.lo(n) = -std::numeric_limits<double>::infinity();
  box.hi(n) = std::numeric_limits<double>::infinity();
  ConcaveMaxResult res = maximize_with_barrier(obj, all, box, y0, cfg);
  res.x = res.x.head(n).eval();
  res.value = std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) res.value = std::min(res.value, p.value(res.x));
  return res;
}

}  // namespace eeopt
