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

#include "eeopt/global.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace eeopt {
namespace {

using testing::Rng;
using testing::uniform;

// max x1 + 2 x2 on [0, 1]^2 with x1 + x2 <= 1 and x1 + x2 >= 0.5: optimum 2 at (0, 1).
CanonicalMonotonicProblem linear_toy() {
  CanonicalMonotonicProblem p;
  p.objective = [](const Vec& x) { return x(0) + 2.0 * x(1); };
  p.normal.push_back({[](const Vec& x) { return x.sum(); }, 1.0});
  p.conormal.push_back({[](const Vec& x) { return x.sum(); }, 0.5});
  p.domain = HyperRectangle(Vec::Zero(2), Vec::Ones(2));
  return p;
}

bool toy_feasible(const CanonicalMonotonicProblem& p, const Vec& x) {
  for (const auto& c : p.normal) {
    if (c.fn(x) > c.bound + 1e-12) return false;
  }
  for (const auto& c : p.conormal) {
    if (c.fn(x) < c.bound - 1e-12) return false;
  }
  return true;
}

TEST(Brb, FindsKnownOptimumOfLinearToy) {
  const auto prob = linear_toy();
  BrbConfig cfg;
  cfg.rel_gap = 1e-6;
  const BrbResult r = brb_solve(prob, cfg);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.value, 2.0, 1e-5);
  EXPECT_TRUE(toy_feasible(prob, r.argmax));
  EXPECT_LE(r.gap(), cfg.rel_gap * std::max(1.0, std::abs(r.upper_bound)) + 1e-15);
}

TEST(Brb, PrunedBoxesHoldNoBetterFeasiblePoint) {
  const auto prob = linear_toy();
  BrbConfig cfg;
  cfg.rel_gap = 1e-4;
  std::vector<std::pair<HyperRectangle, PruneReason>> pruned;
  const BrbResult r = brb_solve(prob, cfg, [&](const HyperRectangle& b, PruneReason why) { pruned.emplace_back(b, why); });
  ASSERT_TRUE(r.has_solution());
  ASSERT_FALSE(pruned.empty());
  const double slack = cfg.rel_gap * std::max(1.0, std::abs(r.upper_bound)) + 1e-12;
  Rng rng(7);
  for (const auto& [box, why] : pruned) {
    if (why == PruneReason::kLowerCornerInfeasible) {
      EXPECT_FALSE(toy_feasible(prob, box.lower)) << "normal set contains the lower corner";
    }
    if (why == PruneReason::kUpperCornerInfeasible) {
      EXPECT_LT(prob.conormal[0].fn(box.upper), prob.conormal[0].bound);
    }
    for (int s = 0; s < 20; ++s) {
      Vec x(2);
      for (int i = 0; i < 2; ++i) x(i) = uniform(rng, box.lower(i), box.upper(i));
      if (toy_feasible(prob, x)) {
        EXPECT_LE(prob.objective(x), r.value + slack);
      }
    }
  }
}

TEST(Brb, BoundTraceIsASandwich) {
  const auto inst = testing::scalar_k2_instance();
  const CanonicalForm form = canonicalize_gee(inst, 0.3, true, true);
  const BrbResult r = brb_solve(form.problem, BrbConfig{});
  ASSERT_FALSE(r.trace.empty());
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    EXPECT_GE(r.trace[i].upper, r.trace[i].lower - 1e-12);
    if (i > 0) {
      EXPECT_LE(r.trace[i].upper, r.trace[i - 1].upper + 1e-12);
      EXPECT_GE(r.trace[i].lower, r.trace[i - 1].lower - 1e-12);
    }
  }
  EXPECT_LE(r.gap(), 1e-3 * std::max(1.0, std::abs(r.upper_bound)) + 1e-12);
}

TEST(Brb, IncumbentsAreFeasibleUnderConstraints) {
  const auto base = testing::scalar_k2_instance();
  Vec coeffs(2);
  coeffs << 1.0, 2.0;
  const auto inst = base.with_constraints({MinRate{1, 0.3}, InterferenceTemperature{coeffs, 1.2}});
  for (double lambda : {0.0, 0.2, 0.5}) {
    const CanonicalForm form = canonicalize_gee(inst, lambda, true, true);
    const BrbResult r = brb_solve(form.problem, BrbConfig{});
    ASSERT_TRUE(r.has_solution());
    EXPECT_TRUE(is_feasible(inst, form.layout.power(r.argmax), 1e-6));
  }
  const SolveReport rep = solve_global(inst, EeMetric::kGee, DinkelbachConfig{}, BrbConfig{});
  ASSERT_EQ(rep.status, SolveStatus::kOptimal);
  EXPECT_TRUE(is_feasible(inst, rep.powers, 1e-6));
}

// max_p min_k [f_k - lambda g_k] over a fine grid, independent of the canonical form.
double grid_auxiliary(const NetworkInstance& inst, const std::vector<MonotoneRatio>& ratios, double lambda, int n) {
  const Vec pmax = inst.p_max();
  double best = -std::numeric_limits<double>::infinity();
  Vec p(2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      p << pmax(0) * i / (n - 1.0), pmax(1) * j / (n - 1.0);
      if (!is_feasible(inst, p)) continue;
      double v = std::numeric_limits<double>::infinity();
      for (const auto& r : ratios) v = std::min(v, r.num_plus(p) - r.num_minus(p) - lambda * r.den(p));
      best = std::max(best, v);
    }
  }
  return best;
}

TEST(Canonical, OptimalValueMatchesAuxiliaryFunction) {
  Rng rng(11);
  const auto inst = testing::scalar_k2_instance();
  for (int trial = 0; trial < 50; ++trial) {
    const bool wmee = trial % 2 == 1;
    const double lambda = uniform(rng, 0.0, 1.0);
    const auto ratios = wmee ? wmee_ratios(inst) : std::vector<MonotoneRatio>{gee_ratio(inst)};
    const CanonicalForm form = canonicalize_ratios(ratios, {}, inst.p_max(), lambda);
    BrbConfig cfg;
    cfg.rel_gap = 1e-3;
    const BrbResult r = brb_solve(form.problem, cfg);
    ASSERT_TRUE(r.has_solution());
    const double f_grid = grid_auxiliary(inst, ratios, lambda, 201);
    const double lower = r.value - form.offset;
    const double upper = r.upper_bound - form.offset;
    EXPECT_GE(upper, f_grid - 1e-9) << "lambda " << lambda;
    EXPECT_NEAR(lower, f_grid, 2e-2 * std::max(1.0, std::abs(f_grid))) << "lambda " << lambda;
  }
}

TEST(Canonical, ObjectiveEqualsAuxiliaryAtReducedPoints) {
  Rng rng(3);
  const auto inst = testing::scalar_k2_instance();
  const auto ratios = wmee_ratios(inst);
  for (int trial = 0; trial < 50; ++trial) {
    const double lambda = uniform(rng, 0.0, 2.0);
    const CanonicalForm form = canonicalize_ratios(ratios, {}, inst.p_max(), lambda);
    Vec y = testing::random_vec(rng, 2, 0.0, 1.0);
    Vec x(3);
    x << 0.0, y;
    // The candidates hook pins t at its largest feasible value for a corner.
    const auto cands = form.problem.candidates(HyperRectangle(x, x));
    const Vec& xc = cands.front();
    double want = std::numeric_limits<double>::infinity();
    for (const auto& r : ratios) want = std::min(want, r.num_plus(y) - r.num_minus(y) - lambda * r.den(y));
    EXPECT_NEAR(form.problem.objective(xc) - form.offset, want, 1e-12 * std::max(1.0, form.offset));
    EXPECT_LE(form.problem.normal[0].fn(xc), form.problem.normal[0].bound + 1e-12);
  }
}

TEST(Canonical, LambdaAgreesAcrossGapSettings) {
  const auto inst = testing::scalar_k2_instance();
  BrbConfig coarse, fine;
  coarse.rel_gap = 1e-3;
  fine.rel_gap = 1e-4;
  const double a = solve_global(inst, EeMetric::kGee, DinkelbachConfig{}, coarse).value;
  const double b = solve_global(inst, EeMetric::kGee, DinkelbachConfig{}, fine).value;
  EXPECT_NEAR(a, b, 1e-4 * std::max(1.0, b));
}

TEST(Canonical, WseeAndWpeeSingleRatiosReproduceMetrics) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto model = trial % 2 ? testing::random_scalar(rng, 3) : testing::random_self_interference(rng, 3);
    std::vector<LinkParams> links;
    for (int i = 0; i < 3; ++i) links.push_back(LinkParams{uniform(rng, 1.0, 3.0), uniform(rng, 0.1, 2.0), 1.0, 1.0});
    const NetworkInstance plain(180.0, links, model);
    const NetworkInstance weighted = plain.with_weights(testing::random_vec(rng, 3, 0.5, 2.0));
    const MonotoneRatio wsee = wsee_as_single_ratio(weighted);
    const MonotoneRatio wpee = wpee_as_single_ratio(plain);
    for (int s = 0; s < 10; ++s) {
      const Vec p = testing::random_vec(rng, 3, 0.0, 1.0);
      const double ws = metric_value(weighted, EeMetric::kWsee, p);
      const double wp = metric_value(plain, EeMetric::kWpee, p);
      EXPECT_NEAR(wsee.value(p), ws, 1e-9 * std::max(1.0, std::abs(ws)));
      EXPECT_NEAR(wpee.value(p), wp, 1e-9 * std::max(1.0, std::abs(wp)));
    }
  }
}

TEST(Canonical, WpeeRejectsNonUnitWeights) {
  const auto inst = testing::scalar_k2_instance().with_weights(Vec::Constant(2, 2.0));
  EXPECT_THROW(wpee_as_single_ratio(inst), InvalidInput);
}

TEST(Canonical, RateUpperBoundsCoverTheBox) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    for (const auto& model : testing::model_family(rng, 3)) {
      Vec a = testing::random_vec(rng, 3, 0.0, 1.0), b = testing::random_vec(rng, 3, 0.0, 1.0);
      const Vec lo = a.cwiseMin(b), hi = a.cwiseMax(b);
      const Vec ub = rate_upper_bounds(model, lo, hi);
      for (int s = 0; s < 20; ++s) {
        Vec p(3);
        for (int i = 0; i < 3; ++i) p(i) = uniform(rng, lo(i), hi(i));
        const Vec r = (sinr(model, p).array().log1p() / kLn2).matrix();
        EXPECT_TRUE((r.array() <= ub.array() + 1e-12).all());
      }
    }
  }
}

TEST(Global, PlainRuleMatchesGrid) {
  const auto inst = testing::scalar_k2_instance();
  const double grid = testing::brute_force_max(inst, EeMetric::kGee, 1001);
  BrbConfig brb;
  brb.rel_gap = 1e-5;
  const SolveReport r = solve_global(inst, EeMetric::kGee, DinkelbachConfig{}, brb, GlobalOptions{false, false});
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  // The gap certificate is relative to the canonical upper bound, which carries the offset.
  EXPECT_GE(r.value, grid - 1e-5 * grid);
  EXPECT_NEAR(r.value, grid, 2e-2 * grid);
}

TEST(Brb, RejectsBadInput) {
  auto prob = linear_toy();
  BrbConfig cfg;
  cfg.rel_gap = 0.0;
  EXPECT_THROW(brb_solve(prob, cfg), InvalidInput);
  prob.branch_mask = {true};
  EXPECT_THROW(brb_solve(prob, BrbConfig{}), InvalidInput);
  CanonicalMonotonicProblem empty;
  empty.domain = HyperRectangle(Vec::Zero(1), Vec::Ones(1));
  EXPECT_THROW(brb_solve(empty, BrbConfig{}), InvalidInput);
  EXPECT_THROW(HyperRectangle(Vec::Ones(2), Vec::Zero(2)), InvalidInput);
  const auto inst = testing::scalar_k2_instance();
  EXPECT_THROW(canonicalize_gee(inst, -1.0), InvalidInput);
}

TEST(Brb, ReportsInfeasibility) {
  auto prob = linear_toy();
  prob.conormal[0].bound = 3.0;  // x1 + x2 >= 3 cannot hold on the unit box
  const BrbResult r = brb_solve(prob, BrbConfig{});
  EXPECT_EQ(r.status, SolveStatus::kInfeasible);
  EXPECT_FALSE(r.has_solution());

  const auto inst = testing::scalar_k2_instance().with_constraints({MinRate{0, 100.0}});
  const SolveReport rep = solve_global(inst, EeMetric::kGee, DinkelbachConfig{}, BrbConfig{});
  EXPECT_EQ(rep.status, SolveStatus::kInfeasible);
}

}  // namespace
}  // namespace eeopt
