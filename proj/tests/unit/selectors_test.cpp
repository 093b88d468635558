// Copyright 2026 The mos Authors.
//
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

#include "mos/selectors.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "mos/error.hpp"
#include "mos/random.hpp"
#include "mos/simulate.hpp"
#include "mos/specfun.hpp"

namespace mos {
namespace {

// Seeded result of the calibration itself, recorded as a regression pin.
constexpr double kDesignPin20_10 = 3.7300377429505254;
constexpr std::uint64_t kDesignPinSeed = 12345;

TEST(ThresholdTable, MatchesThresholdFunction) {
  const auto t = ThresholdTable::build(30, 20, 0.1);
  ASSERT_EQ(t.gamma.size(), 20u);
  EXPECT_NEAR(t.log_alpha, std::log(0.1), 1e-15);
  for (int k = 1; k <= 20; ++k) {
    EXPECT_EQ(t.gamma[k - 1], rrt_threshold(30, 20, k, 0.1));
    if (k > 1) EXPECT_LT(t.gamma[k - 1], t.gamma[k - 2]);
  }
  const auto tl = ThresholdTable::build_log(1000, 10, -1000.0);
  EXPECT_EQ(tl.alpha, 0.0);
  EXPECT_GT(tl.gamma[4], 0.1);
  EXPECT_THROW(ThresholdTable::build(10, 10, 0.1), DomainError);
}

TEST(RrtSelect, NoiselessTrueOrder) {
  const auto t = ThresholdTable::build(20, 8, 0.1);
  const std::vector<double> rr = {0.6, 0.4, 0.0, 1, 1, 1, 1, 1};
  const auto out = rrt_select(rr, t);
  EXPECT_EQ(out.k_hat, 3);
  EXPECT_FALSE(out.fallback);
  EXPECT_EQ(out.alpha_used, 0.1);
  EXPECT_EQ(out.criterion, "rrt");
  ASSERT_EQ(out.trace.size(), 8u);
  for (int k = 1; k <= 8; ++k) EXPECT_EQ(out.trace[k - 1], rr[k - 1] - t.gamma[k - 1]);
}

TEST(RrtSelect, PicksLargestAdmissibleOrder) {
  const auto t = ThresholdTable::build(40, 6, 0.1);
  std::vector<double> rr(6, 0.999);
  rr[1] = 0.0;
  rr[4] = t.gamma[4];  // boundary counts
  EXPECT_EQ(rrt_select(rr, t).k_hat, 5);
}

// Gamma^p(k) = 1 for every k, so at the grid's top level every order is
// admissible and the maximum is p.
TEST(RrtSelect, AllOnesFallsBackToTopLevel) {
  const auto t = ThresholdTable::build(30, 20, 0.1);
  const std::vector<double> ones(20, 1.0);
  const auto out = rrt_select(ones, t);
  EXPECT_TRUE(out.fallback);
  EXPECT_NEAR(out.alpha_used, 20.0, 1e-12);
  EXPECT_EQ(out.k_hat, 20);
  EXPECT_NEAR(alpha_new(ones, 30, 20, 0.1), 20.0, 1e-12);
}

TEST(RrtSelect, FallbackRaisesLevel) {
  Rng rng(3);
  const auto t = ThresholdTable::build(30, 20, 0.01);
  int fallbacks = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto x = gen_design(30, 20, DesignModel::kGaussian1OverN, rng);
    Eigen::VectorXd y(30);
    for (int i = 0; i < 30; ++i) y[i] = rng.normal();
    const auto out = rrt_select(residual_profile(x, y).ratios, t);
    EXPECT_GE(out.k_hat, 1);
    EXPECT_LE(out.k_hat, 20);
    if (out.fallback) {
      ++fallbacks;
      EXPECT_GT(out.alpha_used, 0.01);
    }
  }
  EXPECT_GT(fallbacks, 0);
}

TEST(AlphaNew, GridShape) {
  const auto g = fallback_grid_log(std::log(0.1), 20, kDefaultFallbackGrid);
  ASSERT_EQ(g.size(), 100u);
  EXPECT_EQ(g.back(), std::log(20.0));
  EXPECT_GT(g.front(), std::log(0.1));
  for (std::size_t i = 1; i < g.size(); ++i) {
    EXPECT_NEAR(g[i] - g[i - 1], g[1] - g[0], 1e-12);
  }
}

// Ratios touching Gamma^{a*} at one order: the answer is the first grid
// level at or above a*.
TEST(AlphaNew, SmallestGridPointAboveConstructedLevel) {
  constexpr int n = 30, p = 20;
  const double la = std::log(0.1);
  const auto g = fallback_grid_log(la, p, 100);
  for (int j : {0, 10, 37, 80}) {
    const double a_star = std::exp(0.5 * ((j == 0 ? la : g[j - 1]) + g[j]));
    std::vector<double> rr(p, 1.0);
    rr[4] = rrt_threshold(n, p, 5, a_star);
    EXPECT_NEAR(alpha_new(rr, n, p, 0.1), std::exp(g[j]), 1e-12 * std::exp(g[j]))
        << j;
  }
}

TEST(RrtSelect, ScaleInvariant) {
  Rng rng(5);
  const auto x = gen_design(25, 10, DesignModel::kGaussianUnitCols, rng);
  Eigen::VectorXd y(25);
  for (int i = 0; i < 25; ++i) y[i] = rng.normal();
  y += 3.0 * x.col(0) - x.col(1);
  const auto t = ThresholdTable::build(25, 10, 0.1);
  const auto a = rrt_select(residual_profile(x, y).ratios, t);
  const auto b = rrt_select(residual_profile(x, 0.125 * y).ratios, t);
  EXPECT_EQ(a.k_hat, b.k_hat);
  EXPECT_EQ(a.fallback, b.fallback);
}

TEST(RrtSelect, Deterministic) {
  const auto t = ThresholdTable::build(30, 20, 0.01);
  std::vector<double> rr(20, 0.97);
  const auto a = rrt_select(rr, t);
  const auto b = rrt_select(rr, t);
  EXPECT_EQ(a.k_hat, b.k_hat);
  EXPECT_EQ(a.alpha_used, b.alpha_used);
  EXPECT_EQ(a.trace, b.trace);
}

TEST(PenaltyRule, Values) {
  EXPECT_EQ(PenaltyRule::aic()(3, 0.5, 100), 6.0);
  EXPECT_NEAR(PenaltyRule::bic()(3, 0.5, 100), 3.0 * std::log(100.0), 1e-15);
  // HSC switches branch as sigma2 shrinks
  EXPECT_NEAR(PenaltyRule::hsc()(3, 0.5, 100), 3.0 * std::log(100.0), 1e-15);
  EXPECT_NEAR(PenaltyRule::hsc()(3, 1e-4, 100), 6.0 * std::log(1e4), 1e-12);
  const auto d = PenaltyRule::design(0.1, 2.5);
  EXPECT_EQ(d(4, 1.0, 10), 10.0);
  EXPECT_EQ(d.level(), 0.1);
  EXPECT_EQ(d.v(), 2.5);
  const auto pl = PenaltyRule::plugin("pal", [](int k, double, int) { return 7.0 * k; });
  EXPECT_EQ(pl(2, 1.0, 10), 14.0);
  EXPECT_EQ(pl.name(), "pal");
  EXPECT_THROW(PenaltyRule::design(0.0, 1.0), DomainError);
}

ResidualProfile random_profile(int n, int p, std::uint64_t seed) {
  Rng rng(seed);
  const auto x = gen_design(n, p, DesignModel::kGaussianUnitCols, rng);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y[i] = rng.normal();
  y += 2.0 * x.col(0) + x.col(1) - x.col(2);
  return residual_profile(x, y);
}

TEST(ItcSelect, ArgminOfCriterion) {
  constexpr int n = 40, p = 12;
  const auto prof = random_profile(n, p, 7);
  for (const auto& rule : {PenaltyRule::aic(), PenaltyRule::bic(), PenaltyRule::hsc()}) {
    const auto out = itc_select(prof, n, rule);
    int best = 1;
    double best_score = INFINITY;
    for (int k = 1; k <= p; ++k) {
      const double s2 = prof.sq_norms[k] / n;
      const double score = n * std::log(s2) + rule(k, s2, n);
      EXPECT_NEAR(out.trace[k - 1], score, 1e-9 * std::abs(score));
      if (score < best_score) {
        best_score = score;
        best = k;
      }
    }
    EXPECT_EQ(out.k_hat, best) << rule.name();
  }
}

TEST(ItcSelect, TiesGoToSmallerOrder) {
  const auto prof = random_profile(30, 8, 9);
  // h cancels n log sigma2_k, so every order scores 0
  const auto flat = PenaltyRule::plugin(
      "flat", [](int, double s2, int n) { return -n * std::log(s2); });
  EXPECT_EQ(itc_select(prof, 30, flat).k_hat, 1);
}

TEST(ItcSelect, DegenerateFitThrows) {
  ResidualProfile prof;
  prof.sq_norms = {4.0, 1.0, 0.0, 0.0};
  prof.ratios = {0.25, 0.0, 1.0};
  EXPECT_THROW(itc_select(prof, 10, PenaltyRule::aic()), DegenerateFitError);
}

TEST(ItcSelect, ArgminUnchangedByScaling) {
  Rng rng(11);
  const auto x = gen_design(30, 10, DesignModel::kGaussianUnitCols, rng);
  Eigen::VectorXd y(30);
  for (int i = 0; i < 30; ++i) y[i] = rng.normal();
  y += x.col(0) - x.col(1);
  for (const auto& rule : {PenaltyRule::aic(), PenaltyRule::bic()}) {
    EXPECT_EQ(itc_select(residual_profile(x, y), 30, rule).k_hat,
              itc_select(residual_profile(x, 37.0 * y), 30, rule).k_hat);
  }
}

TEST(DesignPenalty, LevelOneGivesZero) {
  EXPECT_EQ(calibrate_design_penalty(20, 10, 1.0, 10000, 1), 0.0);
}

TEST(DesignPenalty, StricterLevelNeedsLargerPenalty) {
  EXPECT_GT(calibrate_design_penalty(20, 10, 0.01, 10000, kDesignPinSeed),
            calibrate_design_penalty(20, 10, 0.1, 10000, kDesignPinSeed));
}

TEST(DesignPenalty, RegressionPin) {
  EXPECT_EQ(calibrate_design_penalty(20, 10, 0.1, 10000, kDesignPinSeed),
            kDesignPin20_10);
}

// The defining property holds on fresh noise, up to Monte Carlo error.
TEST(DesignPenalty, AchievesLevelOnFreshNoise) {
  constexpr int n = 20, p = 10, trials = 10000;
  const double v = calibrate_design_penalty(n, p, 0.1, trials, kDesignPinSeed);
  const auto rule = PenaltyRule::design(0.1, v);
  Rng rng(777);
  int over = 0;
  for (int t = 0; t < trials; ++t) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Identity(n, p);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = rng.normal();
    const auto prof = residual_profile(x, y);
    double best = n * std::log(prof.sq_norms[0] / n);
    bool beats = false;
    for (int k = 1; k <= p; ++k) {
      if (n * std::log(prof.sq_norms[k] / n) + rule(k, 0, n) < best) beats = true;
    }
    over += beats ? 1 : 0;
  }
  EXPECT_NEAR(over / static_cast<double>(trials), 0.1, 3.0 * std::sqrt(0.09 / trials) + 0.01);
}

TEST(DesignPenalty, Preconditions) {
  EXPECT_THROW(calibrate_design_penalty(20, 10, 0.1, 999, 1), DomainError);
  EXPECT_THROW(calibrate_design_penalty(20, 10, 0.0, 10000, 1), DomainError);
  EXPECT_THROW(calibrate_design_penalty(10, 10, 0.1, 10000, 1), DomainError);
}

}  // namespace
}  // namespace mos
