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

// Branch-reduce-and-bound for monotonic optimization in canonical form:
//
//   maximize Phi(x)  s.t.  x in S ∩ S_c ∩ [a, b]
//
// with Phi increasing, S = {h_i(x) <= l_i} normal and S_c = {e_j(x) >= m_j}
// co-normal (all h_i, e_j increasing). A box [lo, hi] can only contain
// feasible points if lo is in S and hi is in S_c, and Phi(hi) bounds the
// objective over the box from above.

#include "eeopt/common.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

namespace eeopt {

struct HyperRectangle {
  Vec lower;
  Vec upper;

  HyperRectangle() = default;
  HyperRectangle(Vec lo, Vec hi) : lower(std::move(lo)), upper(std::move(hi)) {
    require(lower.size() == upper.size(), "HyperRectangle: corner dimensions differ");
    require((lower.array() <= upper.array()).all(), "HyperRectangle: lower corner must be <= upper corner");
  }

  Eigen::Index dim() const { return lower.size(); }

  bool contains(const Vec& x, double tol = 0.0) const {
    return x.size() == lower.size() && (x.array() >= lower.array() - tol).all() &&
           (x.array() <= upper.array() + tol).all();
  }

  Vec clamp(const Vec& x) const { return x.cwiseMax(lower).cwiseMin(upper); }
};

/// An increasing function paired with its limit: fn(x) <= bound (normal) or
/// fn(x) >= bound (co-normal) depending on the list it sits in.
struct MonotoneConstraint {
  std::function<double(const Vec&)> fn;
  double bound = 0.0;
};

struct CanonicalMonotonicProblem {
  std::function<double(const Vec&)> objective;
  std::vector<MonotoneConstraint> normal;
  std::vector<MonotoneConstraint> conormal;
  HyperRectangle domain;
  /// Optional extra incumbent candidates for a box (checked for feasibility).
  std::function<std::vector<Vec>(const HyperRectangle&)> candidates;
  /// Coordinates eligible for branching (empty: all). Coordinates left out
  /// are never split; instead they are always reduced, so they should be
  /// auxiliary variables whose best value follows from the others.
  std::vector<bool> branch_mask;
  /// Optional bound on the objective over the feasible points of a box; the
  /// search uses the smaller of this and objective(upper corner).
  std::function<double(const HyperRectangle&)> box_bound;

  Eigen::Index dim() const { return domain.dim(); }
};

struct BrbConfig {
  double rel_gap = 1e-3;
  std::size_t max_boxes = 200000;
  /// Bisection steps per coordinate for box reduction; 0 disables reduction.
  int reduction_steps = 0;
  /// Bisection steps of the diagonal feasibility search.
  int bisection_steps = 48;
  /// Relative slack when testing constraint membership.
  double feas_tol = 1e-12;
};

struct BoundRecord {
  double upper;
  double lower;
};

struct BrbResult {
  SolveStatus status = SolveStatus::kInfeasible;
  double value = -std::numeric_limits<double>::infinity();  ///< objective at argmax
  Vec argmax;
  double upper_bound = std::numeric_limits<double>::infinity();
  std::vector<BoundRecord> trace;  ///< global (upper, lower) after each step
  std::size_t boxes_processed = 0;

  bool has_solution() const { return argmax.size() > 0; }
  double gap() const { return upper_bound - value; }
};

enum class PruneReason { kLowerCornerInfeasible, kUpperCornerInfeasible, kBound, kReducedAway };

/// Observer for tests: called whenever a box leaves the search.
using PruneObserver = std::function<void(const HyperRectangle&, PruneReason)>;

namespace detail {

inline bool within(double value, double bound, double tol, bool upper) {
  const double slack = tol * std::max(1.0, std::abs(bound));
  return upper ? value <= bound + slack : value >= bound - slack;
}

class BrbSearch {
 public:
  BrbSearch(const CanonicalMonotonicProblem& p, const BrbConfig& cfg, const PruneObserver& observer)
      : p_(p), cfg_(cfg), observer_(observer) {
    root_width_ = p.domain.upper - p.domain.lower;
    branchable_.assign(static_cast<std::size_t>(p.dim()), true);
    if (!p.branch_mask.empty()) branchable_ = p.branch_mask;
    for (bool b : branchable_) has_fixed_ |= !b;
  }

  static constexpr int kFixedReductionSteps = 60;

  BrbResult run() {
    BrbResult out;
    HyperRectangle root = p_.domain;
    if (!admissible(root)) {
      notify(root, PruneReason::kLowerCornerInfeasible);
      out.status = SolveStatus::kInfeasible;
      return out;
    }
    if (reducing() && !reduce(root)) {
      notify(root, PruneReason::kReducedAway);
      out.status = SolveStatus::kInfeasible;
      return out;
    }
    probe(root);
    const double root_ub = bound(root, std::numeric_limits<double>::infinity());
    queue_.push({root_ub, std::move(root)});

    out.status = SolveStatus::kOptimal;
    while (true) {
      const double top = queue_.empty() ? -std::numeric_limits<double>::infinity() : queue_.top().ub;
      double global_ub = has_incumbent_ ? std::max(top, best_) : top;
      if (queue_.empty()) global_ub = best_;
      out.trace.push_back({global_ub, best_});
      out.upper_bound = global_ub;
      if (queue_.empty()) break;
      if (has_incumbent_ && converged(global_ub)) break;
      if (out.boxes_processed >= cfg_.max_boxes) {
        out.status = SolveStatus::kIterationCap;
        break;
      }

      Node node = queue_.top();
      queue_.pop();
      ++out.boxes_processed;
      if (has_incumbent_ && node.ub <= best_) {
        notify(node.box, PruneReason::kBound);
        continue;
      }
      branch(node.box, node.ub);
    }

    if (!has_incumbent_) {
      out.status = out.status == SolveStatus::kIterationCap ? SolveStatus::kIterationCap
                                                            : SolveStatus::kInfeasible;
      return out;
    }
    out.value = best_;
    out.argmax = best_x_;
    out.upper_bound = std::max(out.upper_bound, best_);
    return out;
  }

 private:
  struct Node {
    double ub;
    HyperRectangle box;
    bool operator<(const Node& o) const { return ub < o.ub; }
  };

  bool in_normal(const Vec& x) const {
    for (const auto& c : p_.normal) {
      if (!within(c.fn(x), c.bound, cfg_.feas_tol, true)) return false;
    }
    return true;
  }

  bool in_conormal(const Vec& x) const {
    for (const auto& c : p_.conormal) {
      if (!within(c.fn(x), c.bound, cfg_.feas_tol, false)) return false;
    }
    return true;
  }

  bool admissible(const HyperRectangle& box) const {
    return in_normal(box.lower) && in_conormal(box.upper);
  }

  bool converged(double global_ub) const {
    return global_ub - best_ <= cfg_.rel_gap * std::max(1.0, std::abs(global_ub));
  }

  void notify(const HyperRectangle& box, PruneReason why) const {
    if (observer_) observer_(box, why);
  }

  void offer(const Vec& x) {
    if (!p_.domain.contains(x, 0.0) || !in_normal(x) || !in_conormal(x)) return;
    const double v = p_.objective(x);
    if (!has_incumbent_ || v > best_) {
      best_ = v;
      best_x_ = x;
      has_incumbent_ = true;
    }
  }

  // Incumbent search: the last point of the diagonal lo -> hi that stays in
  // the normal set, then whatever candidates the problem proposes.
  void probe(const HyperRectangle& box) {
    const Vec& lo = box.lower;
    const Vec d = box.upper - box.lower;
    if (in_normal(box.upper)) {
      offer(box.upper);
    } else {
      double inside = 0.0, outside = 1.0;
      for (int i = 0; i < cfg_.bisection_steps; ++i) {
        const double mid = 0.5 * (inside + outside);
        if (in_normal(lo + mid * d)) {
          inside = mid;
        } else {
          outside = mid;
        }
      }
      offer(lo + inside * d);
    }
    if (p_.candidates) {
      for (const auto& x : p_.candidates(box)) offer(x);
    }
  }

  // Shrinks the box without losing feasible points: upper corner against the
  // normal set, then lower corner against the co-normal set. Bisection keeps
  // the outer end of each bracket. Returns false if nothing feasible remains.
  bool reducing() const { return cfg_.reduction_steps > 0 || has_fixed_; }

  int steps_for(Eigen::Index i) const {
    return branchable_[static_cast<std::size_t>(i)] ? cfg_.reduction_steps : kFixedReductionSteps;
  }

  bool reduce(HyperRectangle& box) const {
    Vec& lo = box.lower;
    Vec& hi = box.upper;
    if (!in_normal(hi)) {
      Vec new_hi = hi;
      for (Eigen::Index i = 0; i < lo.size(); ++i) {
        const double w = hi(i) - lo(i);
        const int steps = steps_for(i);
        if (w <= 0.0 || steps == 0) continue;
        Vec x = lo;
        x(i) = hi(i);
        if (in_normal(x)) continue;
        double inside = 0.0, outside = 1.0;
        for (int s = 0; s < steps; ++s) {
          const double mid = 0.5 * (inside + outside);
          x(i) = lo(i) + mid * w;
          if (in_normal(x)) {
            inside = mid;
          } else {
            outside = mid;
          }
        }
        new_hi(i) = lo(i) + outside * w;
      }
      hi = new_hi;
    }
    if (!in_conormal(hi)) return false;
    if (!in_conormal(lo)) {
      Vec new_lo = lo;
      for (Eigen::Index i = 0; i < lo.size(); ++i) {
        const double w = hi(i) - lo(i);
        const int steps = steps_for(i);
        if (w <= 0.0 || steps == 0) continue;
        Vec x = hi;
        x(i) = lo(i);
        if (in_conormal(x)) continue;
        double inside = 0.0, outside = 1.0;
        for (int s = 0; s < steps; ++s) {
          const double mid = 0.5 * (inside + outside);
          x(i) = hi(i) - mid * w;
          if (in_conormal(x)) {
            inside = mid;
          } else {
            outside = mid;
          }
        }
        new_lo(i) = hi(i) - outside * w;
      }
      lo = new_lo;
    }
    return in_normal(lo);
  }

  void branch(const HyperRectangle& box, double parent_ub) {
    Eigen::Index axis = -1;
    double longest = 0.0;
    for (Eigen::Index i = 0; i < box.dim(); ++i) {
      if (root_width_(i) <= 0.0 || !branchable_[static_cast<std::size_t>(i)]) continue;
      const double rel = (box.upper(i) - box.lower(i)) / root_width_(i);
      if (rel > longest) {
        longest = rel;
        axis = i;
      }
    }
    if (axis < 0 || longest < 1e-14) {
      // Degenerate box: nothing left to split.
      offer(box.lower);
      notify(box, PruneReason::kBound);
      return;
    }
    const double mid = 0.5 * (box.lower(axis) + box.upper(axis));
    HyperRectangle left = box, right = box;
    left.upper(axis) = mid;
    right.lower(axis) = mid;
    for (auto* child : {&left, &right}) consider(*child, parent_ub);
  }

  double bound(const HyperRectangle& box, double parent_ub) const {
    double ub = p_.objective(box.upper);
    if (p_.box_bound) ub = std::min(ub, p_.box_bound(box));
    return std::min(ub, parent_ub);
  }

  void consider(HyperRectangle& child, double parent_ub) {
    if (!in_normal(child.lower)) {
      notify(child, PruneReason::kLowerCornerInfeasible);
      return;
    }
    if (!in_conormal(child.upper)) {
      notify(child, PruneReason::kUpperCornerInfeasible);
      return;
    }
    if (reducing() && !reduce(child)) {
      notify(child, PruneReason::kReducedAway);
      return;
    }
    const double ub = bound(child, parent_ub);
    if (has_incumbent_ && ub <= best_) {
      notify(child, PruneReason::kBound);
      return;
    }
    probe(child);
    if (has_incumbent_ && ub <= best_) {
      notify(child, PruneReason::kBound);
      return;
    }
    queue_.push({ub, std::move(child)});
  }

  const CanonicalMonotonicProblem& p_;
  const BrbConfig& cfg_;
  const PruneObserver& observer_;
  Vec root_width_;
  std::vector<bool> branchable_;
  bool has_fixed_ = false;
  std::priority_queue<Node> queue_;
  bool has_incumbent_ = false;
  double best_ = -std::numeric_limits<double>::infinity();
  Vec best_x_;
};

}  // namespace detail

/// Globally maximizes a canonical monotonic problem to the configured
/// relative gap. Infeasibility is reported through the status field.
inline BrbResult brb_solve(const CanonicalMonotonicProblem& problem, const BrbConfig& cfg,
                           const PruneObserver& observer = {}) {
  require(static_cast<bool>(problem.objective), "brb_solve: objective missing");
  require(problem.dim() >= 1, "brb_solve: empty domain");
  require(cfg.rel_gap > 0.0, "brb_solve: rel_gap must be positive");
  require(problem.branch_mask.empty() || problem.branch_mask.size() == static_cast<std::size_t>(problem.dim()),
          "brb_solve: branch_mask must have one entry per coordinate");
  return detail::BrbSearch(problem, cfg, observer).run();
}

}  // namespace eeopt
