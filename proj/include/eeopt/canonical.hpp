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

// Rewrites the parametric EE subproblem
//
//   max_p min_k [ f_k(p) - lambda g_k(p) ]   s.t. c(p) >= 0, 0 <= p <= pmax
//
// into canonical monotonic form over x = [t, s?, p], where every numerator is
// split as f_k = f_k^+ - f_k^- with increasing parts.

#include "eeopt/brb.hpp"
#include "eeopt/common.hpp"
#include "eeopt/dinkelbach.hpp"
#include "eeopt/network.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

namespace eeopt {

/// One ratio (f^+ - f^-) / g with f^+, f^-, g increasing and g > 0.
struct MonotoneRatio {
  std::function<double(const Vec&)> num_plus;
  std::function<double(const Vec&)> num_minus;
  std::function<double(const Vec&)> den;
  /// Optional: upper bound of f^+ - f^- over the power box [lo, hi].
  std::function<double(const Vec&, const Vec&)> num_upper;

  double value(const Vec& p) const { return (num_plus(p) - num_minus(p)) / den(p); }
};

inline RatioSpec<Vec> to_ratio_spec(const std::vector<MonotoneRatio>& ratios) {
  RatioSpec<Vec> spec;
  for (const auto& r : ratios) {
    spec.numerators.push_back([r](const Vec& p) { return r.num_plus(p) - r.num_minus(p); });
    spec.denominators.push_back(r.den);
  }
  return spec;
}

/// log2(1 + sinr_k) at the point (hi_k, lo_{-k}) for every link k. Every
/// built-in SINR grows with the link's own power and falls with the others',
/// so this bounds the link's rate over the box [lo, hi] from above.
inline Vec rate_upper_bounds(const SinrModel& model, const Vec& lo, const Vec& hi) {
  Vec out(lo.size());
  for (Eigen::Index k = 0; k < lo.size(); ++k) {
    Vec p = lo;
    p(k) = hi(k);
    out(k) = std::log1p(sinr(model, p)(k)) / kLn2;
  }
  return out;
}

/// Sum rate over total consumed power, in bit/s/Hz per W (multiply by B for bit/J).
inline MonotoneRatio gee_ratio(const NetworkInstance& inst) {
  auto model = inst.sinr_ptr();
  const Vec mu = inst.mu();
  const double psi = inst.psi().sum();
  return {[model](const Vec& p) { return rate_split(*model, p).plus.sum(); },
          [model](const Vec& p) { return rate_split(*model, p).minus.sum(); },
          [mu, psi](const Vec& p) { return mu.dot(p) + psi; },
          [model](const Vec& lo, const Vec& hi) { return rate_upper_bounds(*model, lo, hi).sum(); }};
}

/// One ratio per link, w_k q_k / (mu_k p_k + psi_k), in bit/s/Hz per W.
inline std::vector<MonotoneRatio> wmee_ratios(const NetworkInstance& inst) {
  auto model = inst.sinr_ptr();
  std::vector<MonotoneRatio> out;
  for (std::size_t i = 0; i < inst.k(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const LinkParams l = inst.links()[i];
    out.push_back({[model, k, w = l.weight](const Vec& p) { return w * rate_split(*model, p).plus(k); },
                   [model, k, w = l.weight](const Vec& p) { return w * rate_split(*model, p).minus(k); },
                   [k, mu = l.mu, psi = l.psi](const Vec& p) { return mu * p(k) + psi; },
                   [model, k, w = l.weight](const Vec& lo, const Vec& hi) {
                     Vec p = lo;
                     p(k) = hi(k);
                     return w * std::log1p(sinr(*model, p)(k)) / kLn2;
                   }});
  }
  return out;
}

namespace detail {

struct SplitProducts {
  double plus = 0.0;
  double minus = 0.0;
};

// B sum_k w_k q_k^{+/-} prod_{i != k} g_i
inline SplitProducts wsee_numerator(const NetworkInstance& inst, const Vec& p) {
  const RateSplit q = rate_split(inst.sinr(), p);
  const Vec g = power_consumption(inst, p);
  const Vec w = inst.weights();
  SplitProducts out;
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    double others = 1.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      if (i != k) others *= g(i);
    }
    out.plus += w(k) * q.plus(k) * others;
    out.minus += w(k) * q.minus(k) * others;
  }
  out.plus *= inst.bandwidth();
  out.minus *= inst.bandwidth();
  return out;
}

// prod_k B (q_k^+ - q_k^-) expanded over all sign patterns; patterns with an
// even number of minus factors are collected in the plus part.
inline SplitProducts wpee_numerator(const NetworkInstance& inst, const Vec& p) {
  const RateSplit q = rate_split(inst.sinr(), p);
  const double b = inst.bandwidth();
  const auto k = static_cast<int>(q.plus.size());
  SplitProducts out;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    double term = 1.0;
    int minus_count = 0;
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) {
        term *= b * q.minus(i);
        ++minus_count;
      } else {
        term *= b * q.plus(i);
      }
    }
    (minus_count % 2 == 0 ? out.plus : out.minus) += term;
  }
  return out;
}

}  // namespace detail

/// Weighted sum of EEs over a common denominator, in bit/J.
inline MonotoneRatio wsee_as_single_ratio(const NetworkInstance& inst) {
  auto shared = std::make_shared<const NetworkInstance>(inst);
  return {[shared](const Vec& p) { return detail::wsee_numerator(*shared, p).plus; },
          [shared](const Vec& p) { return detail::wsee_numerator(*shared, p).minus; },
          [shared](const Vec& p) { return power_consumption(*shared, p).prod(); },
          [shared](const Vec& lo, const Vec& hi) {
            const Vec r = rate_upper_bounds(shared->sinr(), lo, hi);
            const Vec g = power_consumption(*shared, hi);
            const Vec w = shared->weights();
            double total = 0.0;
            for (Eigen::Index k = 0; k < r.size(); ++k) {
              double others = 1.0;
              for (Eigen::Index i = 0; i < r.size(); ++i) {
                if (i != k) others *= g(i);
              }
              total += w(k) * r(k) * others;
            }
            return shared->bandwidth() * total;
          }};
}

/// Product of EEs as one ratio, in (bit/J)^K. Only unit weights are supported.
inline MonotoneRatio wpee_as_single_ratio(const NetworkInstance& inst) {
  const Vec w = inst.weights();
  if (((w.array() - 1.0).abs() > 0.0).any()) {
    throw InvalidInput("wpee: the monotonic product form requires all weights equal to 1");
  }
  require(inst.k() <= 16, "wpee: too many links for the product expansion");
  auto shared = std::make_shared<const NetworkInstance>(inst);
  return {[shared](const Vec& p) { return detail::wpee_numerator(*shared, p).plus; },
          [shared](const Vec& p) { return detail::wpee_numerator(*shared, p).minus; },
          [shared](const Vec& p) { return power_consumption(*shared, p).prod(); },
          [shared](const Vec& lo, const Vec& hi) {
            return (shared->bandwidth() * rate_upper_bounds(shared->sinr(), lo, hi).array()).prod();
          }};
}

/// Collapses constraints c_i = c_i^+ - c_i^- >= 0 into a single pair:
/// c^+ = min_i [c_i^+ + sum_{j != i} c_j^-], c^- = sum_i c_i^-.
/// Then min_i c_i >= 0 exactly when c^+ >= c^-.
struct LiftedConstraint {
  std::function<double(const Vec&)> plus;
  std::function<double(const Vec&)> minus;
};

inline LiftedConstraint lift_constraints(const std::vector<DcFunction>& cs) {
  if (cs.empty()) {
    return {[](const Vec&) { return 0.0; }, [](const Vec&) { return 0.0; }};
  }
  LiftedConstraint out;
  out.minus = [cs](const Vec& p) {
    double s = 0.0;
    for (const auto& c : cs) s += c.minus(p);
    return s;
  };
  out.plus = [cs](const Vec& p) {
    std::vector<double> minus(cs.size());
    double total = 0.0;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      minus[i] = cs[i].minus(p);
      total += minus[i];
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cs.size(); ++i) best = std::min(best, cs[i].plus(p) + total - minus[i]);
    return best;
  };
  return out;
}

inline std::vector<DcFunction> realized_constraints(const NetworkInstance& inst) {
  std::vector<DcFunction> out;
  for (const auto& c : inst.constraints()) out.push_back(c.realized);
  return out;
}

/// Increasing change of variables p_k = pmax_k (e^{kappa_k y_k} - 1) / (e^{kappa_k} - 1)
/// from y in [0, 1]^K. Midpoint splits in y then act like geometric splits in
/// p at high SNR, which is where corner bounds are loose. An empty kappa
/// means no warping: the canonical coordinates are the powers themselves.
struct PowerWarp {
  Vec pmax;
  Vec kappa;

  bool active() const { return kappa.size() > 0; }
  Vec upper() const { return active() ? Vec::Ones(pmax.size()).eval() : pmax; }

  Vec apply(const Vec& y) const {
    if (!active()) return y;
    Vec p(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double yi = std::clamp(y(i), 0.0, 1.0);
      p(i) = kappa(i) < 1e-9 ? pmax(i) * yi : pmax(i) * std::expm1(kappa(i) * yi) / std::expm1(kappa(i));
      p(i) = std::min(p(i), pmax(i));
    }
    return p;
  }
};

/// Where the pieces of p live inside the canonical variable x.
struct CanonicalLayout {
  bool has_s = false;
  Eigen::Index k = 0;
  PowerWarp warp;

  Eigen::Index p_offset() const { return has_s ? 2 : 1; }
  Eigen::Index dim() const { return p_offset() + k; }
  Vec power(const Vec& x) const { return warp.apply(x.segment(p_offset(), k)); }
};

/// Warp scales: kappa_k = ln 2 times the largest plus-part rate any receiver
/// sees when link k alone transmits at full power.
inline Vec power_warp_scales(const SinrModel& model, const Vec& pmax) {
  Vec kappa(pmax.size());
  for (Eigen::Index k = 0; k < pmax.size(); ++k) {
    Vec p = Vec::Zero(pmax.size());
    p(k) = pmax(k);
    kappa(k) = std::min(kLn2 * rate_split(model, p).plus.maxCoeff(), 600.0);
  }
  return kappa;
}

struct CanonicalForm {
  CanonicalMonotonicProblem problem;
  CanonicalLayout layout;
  /// F(lambda) = max objective - offset.
  double offset = 0.0;
};

/// Canonical form of max_p min_k [f_k - lambda g_k] s.t. constraints.
///
/// With nu_k = f_k^- + lambda g_k and Nu = sum_k nu_k:
///   objective  min_k [f_k^+ + Nu - nu_k](p) + t
///   normal     t + Nu(p) <= Nu(pmax),   s + c^-(p) <= c^-(pmax)
///   co-normal  s + c^+(p) >= c^-(pmax)
/// t spans [0, Nu(pmax) - Nu(0)] and s spans [0, c^-(pmax) - c^-(0)]; s is
/// dropped when there are no constraints. With a non-empty `warp_kappa` the
/// power coordinates are the warped y of PowerWarp instead of p.
inline CanonicalForm canonicalize_ratios(const std::vector<MonotoneRatio>& ratios,
                                         const std::vector<DcFunction>& constraints, const Vec& pmax,
                                         double lambda, const Vec& warp_kappa = Vec(),
                                         bool use_ratio_bounds = false) {
  require(!ratios.empty(), "canonicalize: need at least one ratio");
  require(lambda >= 0.0 && std::isfinite(lambda), "canonicalize: lambda must be finite and >= 0");
  require((pmax.array() > 0.0).all(), "canonicalize: pmax must be positive");

  require(warp_kappa.size() == 0 || warp_kappa.size() == pmax.size(), "canonicalize: kappa must have K entries");
  CanonicalLayout layout{!constraints.empty(), pmax.size(), PowerWarp{pmax, warp_kappa}};
  const Eigen::Index off = layout.p_offset();
  const Eigen::Index k = layout.k;

  // Sum of nu_k plus the per-ratio objective pieces, evaluated together.
  auto parts = [ratios, lambda](const Vec& p, double& nu_total, double& obj) {
    nu_total = 0.0;
    std::vector<double> plus(ratios.size()), nu(ratios.size());
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      plus[i] = ratios[i].num_plus(p);
      nu[i] = ratios[i].num_minus(p) + lambda * ratios[i].den(p);
      nu_total += nu[i];
    }
    obj = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ratios.size(); ++i) obj = std::min(obj, plus[i] + nu_total - nu[i]);
  };
  auto nu_sum = [ratios, lambda](const Vec& p) {
    double s = 0.0;
    for (const auto& r : ratios) s += r.num_minus(p) + lambda * r.den(p);
    return s;
  };

  const Vec zero = Vec::Zero(k);
  const double nu_max = nu_sum(pmax);
  const double t_span = std::max(0.0, nu_max - nu_sum(zero));
  const LiftedConstraint lifted = lift_constraints(constraints);
  const double cm_max = lifted.minus(pmax);
  const double s_span = std::max(0.0, cm_max - lifted.minus(zero));

  Vec lo = Vec::Zero(layout.dim());
  Vec hi(layout.dim());
  hi(0) = t_span;
  if (layout.has_s) hi(1) = s_span;
  hi.segment(off, k) = layout.warp.upper();

  CanonicalForm form;
  form.layout = layout;
  form.offset = nu_max;
  CanonicalMonotonicProblem& prob = form.problem;
  prob.domain = HyperRectangle(lo, hi);
  // t and s are pinned by reduction to their best values for each power box.
  prob.branch_mask.assign(static_cast<std::size_t>(layout.dim()), true);
  for (Eigen::Index i = 0; i < off; ++i) prob.branch_mask[static_cast<std::size_t>(i)] = false;

  prob.objective = [parts, layout](const Vec& x) {
    double nu_total = 0.0, obj = 0.0;
    parts(layout.power(x), nu_total, obj);
    return obj + x(0);
  };
  prob.normal.push_back({[nu_sum, layout](const Vec& x) { return x(0) + nu_sum(layout.power(x)); }, nu_max});
  if (layout.has_s) {
    auto minus = lifted.minus;
    auto plus = lifted.plus;
    prob.normal.push_back({[minus, layout](const Vec& x) { return x(1) + minus(layout.power(x)); }, cm_max});
    prob.conormal.push_back({[plus, layout](const Vec& x) { return x(1) + plus(layout.power(x)); }, cm_max});
  }

  // Points with t and s pushed to their largest feasible values for the two
  // power corners of a box; cheap, and exact whenever the optimum sits there.
  prob.candidates = [nu_sum, lifted, layout, nu_max, cm_max, t_span, s_span](const HyperRectangle& box) {
    std::vector<Vec> out;
    const Eigen::Index o = layout.p_offset();
    for (const Vec* corner : {&box.lower, &box.upper}) {
      const Vec p = layout.power(*corner);
      Vec x(layout.dim());
      x(0) = std::clamp(nu_max - nu_sum(p), 0.0, t_span);
      if (layout.has_s) x(1) = std::clamp(cm_max - lifted.minus(p), 0.0, s_span);
      x.segment(o, layout.k) = corner->segment(o, layout.k);
      out.push_back(std::move(x));
    }
    return out;
  };

  // With t + Nu(p) <= Nu(pmax), every feasible x in a box satisfies
  //   objective(x) <= min_k [f_k(p) - lambda g_k(p)] + Nu(pmax),
  // and the ratios' own box bounds cap the right-hand side.
  bool all_bounded = use_ratio_bounds;
  for (const auto& r : ratios) all_bounded = all_bounded && static_cast<bool>(r.num_upper);
  if (all_bounded) {
    prob.box_bound = [ratios, layout, lambda, nu_max](const HyperRectangle& box) {
      const Vec lo = layout.power(box.lower);
      const Vec hi = layout.power(box.upper);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& r : ratios) best = std::min(best, r.num_upper(lo, hi) - lambda * r.den(lo));
      return best + nu_max;
    };
  }

  return form;
}

inline CanonicalForm canonicalize_gee(const NetworkInstance& inst, double lambda, bool warp = false,
                                       bool ratio_bounds = false) {
  const Vec kappa = warp ? power_warp_scales(inst.sinr(), inst.p_max()) : Vec();
  return canonicalize_ratios({gee_ratio(inst)}, realized_constraints(inst), inst.p_max(), lambda, kappa, ratio_bounds);
}

inline CanonicalForm canonicalize_wmee(const NetworkInstance& inst, double lambda, bool warp = false,
                                       bool ratio_bounds = false) {
  const Vec kappa = warp ? power_warp_scales(inst.sinr(), inst.p_max()) : Vec();
  return canonicalize_ratios(wmee_ratios(inst), realized_constraints(inst), inst.p_max(), lambda, kappa, ratio_bounds);
}

}  // namespace eeopt
