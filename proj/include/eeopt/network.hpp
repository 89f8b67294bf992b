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

#include "eeopt/common.hpp"
#include "eeopt/sinr.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace eeopt {

struct LinkParams {
  double mu = 1.0;      ///< inverse amplifier efficiency, >= 1
  double psi = 1.0;     ///< circuit power [W]
  double p_max = 1.0;   ///< maximum transmit power [W]
  double weight = 1.0;  ///< EE weight
};

enum class EeMetric { kGee, kWmee, kWsee, kWpee };

inline std::string_view to_string(EeMetric m) {
  switch (m) {
    case EeMetric::kGee:
      return "gee";
    case EeMetric::kWmee:
      return "wmee";
    case EeMetric::kWsee:
      return "wsee";
    case EeMetric::kWpee:
      return "wpee";
  }
  return "unknown";
}

inline EeMetric parse_metric(std::string_view name) {
  for (auto m : {EeMetric::kGee, EeMetric::kWmee, EeMetric::kWsee, EeMetric::kWpee}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidInput("unknown metric '" + std::string(name) + "'");
}

struct DcFlags {
  bool plus_increasing = true;
  bool minus_increasing = true;
  bool plus_concave = true;
  bool minus_concave = true;
};

/// f(p) = plus(p) - minus(p) with both parts non-negative on the power box.
struct DcFunction {
  using Scalar = std::function<double(const Vec&)>;
  using Gradient = std::function<Vec(const Vec&)>;
  using Hessian = std::function<Mat(const Vec&)>;

  Scalar plus;
  Scalar minus;
  Gradient grad_plus;
  Gradient grad_minus;
  Hessian hess_plus;
  DcFlags flags;

  double operator()(const Vec& p) const { return plus(p) - minus(p); }

  /// Affine helper: plus = c_plus, minus = c_minus + coeffs.p.
  static DcFunction affine(double c_plus, double c_minus, Vec coeffs) {
    const auto k = coeffs.size();
    DcFunction f;
    f.plus = [c_plus](const Vec&) { return c_plus; };
    f.minus = [c_minus, coeffs](const Vec& p) { return c_minus + coeffs.dot(p); };
    f.grad_plus = [k](const Vec&) { return Vec::Zero(k).eval(); };
    f.grad_minus = [coeffs](const Vec&) { return coeffs; };
    f.hess_plus = [k](const Vec&) { return Mat::Zero(k, k).eval(); };
    return f;
  }
};

struct MinRate {
  std::size_t link = 0;
  double r_min = 0.0;  ///< bit/s
};

struct InterferenceTemperature {
  Vec coeffs;          ///< gain from each transmitter into the protected receiver
  double i_max = 0.0;  ///< W
};

struct TotalPower {
  double p_tot = 0.0;  ///< W
};

using ConstraintKind = std::variant<MinRate, InterferenceTemperature, TotalPower>;

/// A constraint c(p) = c^+(p) - c^-(p) >= 0 together with its realization.
struct ConstraintSpec {
  ConstraintKind kind;
  DcFunction realized;
};

/// Builds the difference-of-increasing realization of a constraint kind.
inline ConstraintSpec make_constraint(const ConstraintKind& kind,
                                      std::shared_ptr<const SinrModel> model, double bandwidth) {
  const auto k = static_cast<Eigen::Index>(model->link_count());
  ConstraintSpec spec{kind, {}};
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, MinRate>) {
          require(c.link < static_cast<std::size_t>(k), "MinRate: link index out of range");
          require(c.r_min > 0.0, "MinRate: r_min must be positive");
          const auto link = static_cast<Eigen::Index>(c.link);
          const double b = bandwidth;
          const double r_min = c.r_min;
          DcFunction& f = spec.realized;
          f.plus = [model, link, b](const Vec& p) { return b * rate_split(*model, p).plus(link); };
          f.minus = [model, link, b, r_min](const Vec& p) {
            return b * rate_split(*model, p).minus(link) + r_min;
          };
          f.grad_plus = [model, link, b](const Vec& p) {
            return Vec(b * grad_q_plus(*model, p).row(link).transpose());
          };
          f.grad_minus = [model, link, b](const Vec& p) {
            return Vec(b * grad_q_minus(*model, p).row(link).transpose());
          };
          f.hess_plus = [model, link, b](const Vec& p) { return Mat(b * hess_q_plus(*model, p, link)); };
        } else if constexpr (std::is_same_v<T, InterferenceTemperature>) {
          require(c.coeffs.size() == k, "InterferenceTemperature: coeffs must have K entries");
          require((c.coeffs.array() >= 0.0).all(), "InterferenceTemperature: coeffs must be >= 0");
          require(c.i_max > 0.0, "InterferenceTemperature: i_max must be positive");
          spec.realized = DcFunction::affine(c.i_max, 0.0, c.coeffs);
        } else {
          require(c.p_tot > 0.0, "TotalPower: p_tot must be positive");
          spec.realized = DcFunction::affine(c.p_tot, 0.0, Vec::Ones(k));
        }
      },
      kind);
  return spec;
}

/// All parameters of one power-control problem. Immutable after construction.
class NetworkInstance {
 public:
  NetworkInstance(double bandwidth, std::vector<LinkParams> links, SinrModel sinr,
                  std::vector<ConstraintKind> constraints = {})
      : bandwidth_(bandwidth),
        links_(std::move(links)),
        sinr_(std::make_shared<const SinrModel>(std::move(sinr))) {
    require(bandwidth_ > 0.0 && std::isfinite(bandwidth_), "NetworkInstance: bandwidth must be positive");
    require(links_.size() == sinr_->link_count(), "NetworkInstance: link count mismatch with SINR model");
    for (const auto& l : links_) {
      require(l.mu >= 1.0, "LinkParams: mu must be >= 1");
      require(l.psi > 0.0, "LinkParams: psi must be positive");
      require(l.p_max > 0.0, "LinkParams: p_max must be positive");
      require(l.weight > 0.0, "LinkParams: weight must be positive");
    }
    for (const auto& c : constraints) constraints_.push_back(make_constraint(c, sinr_, bandwidth_));
  }

  std::size_t k() const { return links_.size(); }
  double bandwidth() const { return bandwidth_; }
  const std::vector<LinkParams>& links() const { return links_; }
  const SinrModel& sinr() const { return *sinr_; }
  std::shared_ptr<const SinrModel> sinr_ptr() const { return sinr_; }
  const std::vector<ConstraintSpec>& constraints() const { return constraints_; }

  std::vector<ConstraintKind> constraint_kinds() const {
    std::vector<ConstraintKind> out;
    for (const auto& c : constraints_) out.push_back(c.kind);
    return out;
  }

  Vec p_max() const { return gather([](const LinkParams& l) { return l.p_max; }); }
  Vec mu() const { return gather([](const LinkParams& l) { return l.mu; }); }
  Vec psi() const { return gather([](const LinkParams& l) { return l.psi; }); }
  Vec weights() const { return gather([](const LinkParams& l) { return l.weight; }); }

  NetworkInstance with_p_max(double p_max) const {
    auto links = links_;
    for (auto& l : links) l.p_max = p_max;
    return NetworkInstance(bandwidth_, std::move(links), *sinr_, constraint_kinds());
  }

  NetworkInstance with_weights(const Vec& w) const {
    require(static_cast<std::size_t>(w.size()) == k(), "with_weights: need K weights");
    auto links = links_;
    for (std::size_t i = 0; i < links.size(); ++i) links[i].weight = w(static_cast<Eigen::Index>(i));
    return NetworkInstance(bandwidth_, std::move(links), *sinr_, constraint_kinds());
  }

  NetworkInstance with_constraints(std::vector<ConstraintKind> constraints) const {
    return NetworkInstance(bandwidth_, links_, *sinr_, std::move(constraints));
  }

 private:
  template <class F>
  Vec gather(F&& f) const {
    Vec v(static_cast<Eigen::Index>(links_.size()));
    for (std::size_t i = 0; i < links_.size(); ++i) v(static_cast<Eigen::Index>(i)) = f(links_[i]);
    return v;
  }

  double bandwidth_;
  std::vector<LinkParams> links_;
  std::shared_ptr<const SinrModel> sinr_;
  std::vector<ConstraintSpec> constraints_;
};

/// Achievable rates B log2(1 + sinr_k) in bit/s.
inline Vec rates(const NetworkInstance& inst, const Vec& p) {
  const Vec g = sinr(inst.sinr(), p);
  return (inst.bandwidth() / kLn2) * g.array().log1p().matrix();
}

/// Consumed power mu_k p_k + psi_k per link [W].
inline Vec power_consumption(const NetworkInstance& inst, const Vec& p) {
  return (inst.mu().array() * p.array() + inst.psi().array()).matrix();
}

/// Per-link energy efficiencies in bit/J.
inline Vec energy_efficiencies(const NetworkInstance& inst, const Vec& p) {
  return (rates(inst, p).array() / power_consumption(inst, p).array()).matrix();
}

inline double metric_value(const NetworkInstance& inst, EeMetric metric, const Vec& p) {
  const Vec r = rates(inst, p);
  const Vec d = power_consumption(inst, p);
  const Vec w = inst.weights();
  switch (metric) {
    case EeMetric::kGee:
      return r.sum() / d.sum();
    case EeMetric::kWmee:
      return (w.array() * r.array() / d.array()).minCoeff();
    case EeMetric::kWsee:
      return (w.array() * r.array() / d.array()).sum();
    case EeMetric::kWpee: {
      double prod = 1.0;
      for (Eigen::Index i = 0; i < r.size(); ++i) {
        const double ee = r(i) / d(i);
        prod *= ee > 0.0 ? std::pow(ee, w(i)) : 0.0;  // 0^w = 0 for w > 0
      }
      return prod;
    }
  }
  return 0.0;
}

/// c_k(p) for every configured constraint.
inline Vec constraint_values(const NetworkInstance& inst, const Vec& p) {
  Vec c(static_cast<Eigen::Index>(inst.constraints().size()));
  for (std::size_t i = 0; i < inst.constraints().size(); ++i) {
    c(static_cast<Eigen::Index>(i)) = inst.constraints()[i].realized(p);
  }
  return c;
}

/// Box membership plus c_k(p) >= -tol for every constraint.
inline bool is_feasible(const NetworkInstance& inst, const Vec& p, double tol = 1e-9) {
  const Vec pmax = inst.p_max();
  if (p.size() != pmax.size()) return false;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) < -tol || p(i) > pmax(i) * (1.0 + tol) + tol) return false;
  }
  if (inst.constraints().empty()) return true;
  return constraint_values(inst, p).minCoeff() >= -tol;
}

}  // namespace eeopt
