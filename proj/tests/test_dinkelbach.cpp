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

#include "eeopt/dinkelbach.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace eeopt {
namespace {

// f = 2x - x^2, g = x + 1 on [0, 1].
RatioSpec<double> quadratic_over_affine() {
  RatioSpec<double> s;
  s.numerators.push_back([](const double& x) { return 2.0 * x - x * x; });
  s.denominators.push_back([](const double& x) { return x + 1.0; });
  return s;
}

// Exact maximizer of 2x - x^2 - lambda (x + 1) over [0, 1].
InnerSolution<double> quadratic_inner(double lambda) {
  return {std::clamp(1.0 - lambda / 2.0, 0.0, 1.0), 0.0, SolveStatus::kOptimal};
}

TEST(Dinkelbach, SingleRatioClosedForm) {
  DinkelbachConfig cfg;
  cfg.epsilon = 1e-12;
  const auto r = dinkelbach(quadratic_over_affine(), quadratic_inner, cfg);
  EXPECT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.lambda, 4.0 - 2.0 * std::sqrt(3.0), 1e-10);
  EXPECT_NEAR(r.x, std::sqrt(3.0) - 1.0, 1e-5);
}

TEST(Dinkelbach, SingleRatioAgreesWithDenseGrid) {
  const auto spec = quadratic_over_affine();
  double best = 0.0;
  for (int i = 0; i <= 1000000; ++i) best = std::max(best, ratio_value(spec, i / 1e6));
  DinkelbachConfig cfg;
  cfg.epsilon = 1e-12;
  const auto r = dinkelbach(spec, quadratic_inner, cfg);
  EXPECT_GE(r.lambda, best - 1e-9);
  EXPECT_NEAR(r.lambda, best, 1e-8);
}

TEST(Dinkelbach, ConstantRatioStopsAfterOneUpdate) {
  const double c = 2.75;
  RatioSpec<double> s;
  s.numerators.push_back([c](const double& x) { return c * (x + 0.5); });
  s.denominators.push_back([](const double& x) { return x + 0.5; });
  const auto r = dinkelbach(
      s, [](double) { return InnerSolution<double>{0.3, 0.0, SolveStatus::kOptimal}; }, DinkelbachConfig{});
  EXPECT_DOUBLE_EQ(r.lambda, c);
  EXPECT_EQ(r.iterations, 2);  // one update, then the zero check
  EXPECT_EQ(r.trace.front().lambda, 0.0);
}

TEST(Dinkelbach, MaxMinOfCrossingLines) {
  RatioSpec<double> s;
  s.numerators = {[](const double& x) { return x; }, [](const double& x) { return 1.0 - x; }};
  s.denominators = {[](const double&) { return 1.0; }, [](const double&) { return 1.0; }};
  // max_x min(x, 1 - x) - lambda is attained at x = 1/2 for every lambda.
  const auto r = dinkelbach(
      s, [](double) { return InnerSolution<double>{0.5, 0.0, SolveStatus::kOptimal}; }, DinkelbachConfig{});
  EXPECT_DOUBLE_EQ(r.lambda, 0.5);
  EXPECT_DOUBLE_EQ(r.x, 0.5);
}

TEST(AuxiliaryValue, HandValues) {
  const auto single = quadratic_over_affine();
  EXPECT_DOUBLE_EQ(auxiliary_value(single, 0.0, 1.0), 1.0);
  const double x = 0.4;
  EXPECT_NEAR(auxiliary_value(single, ratio_value(single, x), x), 0.0, 1e-15);

  RatioSpec<double> two;
  two.numerators = {[](const double& v) { return v; }, [](const double& v) { return 1.0 - v; }};
  two.denominators = {[](const double&) { return 1.0; }, [](const double&) { return 1.0; }};
  EXPECT_DOUBLE_EQ(auxiliary_value(two, 0.5, 0.5), 0.0);
}

TEST(Dinkelbach, LambdaStrictlyIncreasesAndFDecreases) {
  DinkelbachConfig cfg;
  cfg.epsilon = 1e-12;
  const auto r = dinkelbach(quadratic_over_affine(), quadratic_inner, cfg);
  ASSERT_GE(r.trace.size(), 2u);
  for (std::size_t j = 1; j < r.trace.size(); ++j) {
    if (r.trace[j - 1].aux > cfg.epsilon) {
      EXPECT_GT(r.trace[j].lambda, r.trace[j - 1].lambda);
    }
    EXPECT_LE(r.trace[j].aux, r.trace[j - 1].aux);
  }
}

TEST(Dinkelbach, AuxiliaryFunctionDecreasesInLambda) {
  const auto spec = quadratic_over_affine();
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20; ++i) {
    const double lambda = 0.05 * i;
    const double f = auxiliary_value(spec, lambda, quadratic_inner(lambda).x);
    EXPECT_LE(f, prev);
    prev = f;
  }
}

TEST(Dinkelbach, ZeroCharacterization) {
  DinkelbachConfig cfg;
  cfg.epsilon = 1e-9;
  const auto spec = quadratic_over_affine();
  const auto r = dinkelbach(spec, quadratic_inner, cfg);
  const double f = auxiliary_value(spec, r.lambda, r.x);
  EXPECT_LE(std::abs(f), cfg.epsilon * std::max(1.0, r.lambda * 2.0));
  const double ratio = ratio_value(spec, r.x);
  EXPECT_GE(ratio, r.lambda - 1e-15);
  EXPECT_LE(ratio, r.lambda + cfg.epsilon / min_denominator(spec, r.x) * std::max(1.0, r.lambda * 2.0));
}

TEST(Dinkelbach, SuperlinearFromZero) {
  DinkelbachConfig cfg;
  cfg.epsilon = 1e-10;
  const auto r = dinkelbach(quadratic_over_affine(), quadratic_inner, cfg);
  EXPECT_LE(r.iterations, 6);
}

TEST(Dinkelbach, RejectsNegativeStart) {
  DinkelbachConfig cfg;
  cfg.lambda0 = 5.0;
  EXPECT_THROW(dinkelbach(quadratic_over_affine(), quadratic_inner, cfg), SolverError);
}

TEST(Dinkelbach, RejectsBadConfigAndSpec) {
  DinkelbachConfig cfg;
  cfg.epsilon = 0.0;
  EXPECT_THROW(dinkelbach(quadratic_over_affine(), quadratic_inner, cfg), InvalidInput);
  EXPECT_THROW(dinkelbach(RatioSpec<double>{}, quadratic_inner, DinkelbachConfig{}), InvalidInput);
}

TEST(Dinkelbach, ReportsIterationCap) {
  DinkelbachConfig cfg;
  cfg.epsilon = 1e-14;
  cfg.max_iter = 1;
  const auto r = dinkelbach(quadratic_over_affine(), quadratic_inner, cfg);
  EXPECT_EQ(r.status, SolveStatus::kIterationCap);
}

TEST(Dinkelbach, PropagatesInnerInfeasibility) {
  const auto r = dinkelbach(
      quadratic_over_affine(), [](double) { return InnerSolution<double>{0.0, 0.0, SolveStatus::kInfeasible}; },
      DinkelbachConfig{});
  EXPECT_EQ(r.status, SolveStatus::kInfeasible);
}

TEST(Dinkelbach, NonPositiveDenominatorIsAnError) {
  RatioSpec<double> s;
  s.numerators.push_back([](const double&) { return 1.0; });
  s.denominators.push_back([](const double&) { return 0.0; });
  EXPECT_THROW(ratio_value(s, 0.0), SolverError);
}

TEST(Dinkelbach, InexactInnerStopsAtItsGap) {
  // An inner solver that certifies only 1e-3 stops as soon as F <= 1e-3.
  const auto spec = quadratic_over_affine();
  const auto r = dinkelbach(
      spec,
      [](double lambda) {
        auto s = quadratic_inner(lambda);
        s.gap = 1e-3;
        return s;
      },
      DinkelbachConfig{});
  EXPECT_LE(r.trace.back().aux, 1e-3);
  EXPECT_NEAR(r.lambda, 4.0 - 2.0 * std::sqrt(3.0), 1e-3);
}

TEST(Dinkelbach, RatioRelativeChangeStop) {
  DinkelbachConfig cfg;
  cfg.epsilon = 1e-14;
  cfg.ratio_rel_sq_tol = 1e-4;
  const auto loose = dinkelbach(quadratic_over_affine(), quadratic_inner, cfg);
  cfg.ratio_rel_sq_tol = 0.0;
  const auto tight = dinkelbach(quadratic_over_affine(), quadratic_inner, cfg);
  EXPECT_LE(loose.iterations, tight.iterations);
  EXPECT_NEAR(loose.lambda, tight.lambda, 1e-2 * tight.lambda);
}

}  // namespace
}  // namespace eeopt
