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

// Builtin experiment definitions. SNR axes are read off plotted figures,
// so the step is a choice; every regime documents its grid here.

#include <cmath>

#include "mos/experiments.hpp"

namespace mos {
namespace {

constexpr std::uint64_t kBuiltinSeed = 20260101;

std::vector<double> snr_axis(double lo, double hi, double step) {
  std::vector<double> v;
  for (double s = lo; s <= hi + 1e-9; s += step) v.push_back(s);
  return v;
}

// -10 dB to 30 dB in 5 dB steps.
const std::vector<double>& default_snr() {
  static const std::vector<double> axis = snr_axis(-10.0, 30.0, 5.0);
  return axis;
}

SelectorConfig rrt(double a) { return RrtSelector{AlphaRule::fixed(a)}; }
SelectorConfig rrt(AlphaRule::Kind k) { return RrtSelector{AlphaRule{k, 0.0}}; }

std::vector<SelectorConfig> comparison_selectors() {
  return {rrt(0.1),
          rrt(0.01),
          PenaltySelector{PenaltyRule::Kind::kAic},
          PenaltySelector{PenaltyRule::Kind::kBic},
          PenaltySelector{PenaltyRule::Kind::kHsc},
          DesignSelector{0.1},
          DesignSelector{0.01}};
}

std::vector<SelectorConfig> sweep_selectors() {
  using K = AlphaRule::Kind;
  return {rrt(0.1), rrt(0.01), rrt(K::kInvSqrtN),
          rrt(K::kInvN), rrt(K::kExpNegN), rrt(K::kExpNegNSq)};
}

ExperimentSpec snr_sweep(std::string name, int n, int p, int k0, CoefKind coef,
                         std::vector<SelectorConfig> selectors,
                         std::uint64_t seed,
                         const std::vector<double>& axis = default_snr()) {
  ExperimentSpec s;
  s.name = std::move(name);
  s.coef = coef;
  s.seed = seed;
  s.selectors = std::move(selectors);
  for (double snr : axis) s.grid.push_back({n, p, k0, snr});
  return s;
}

}  // namespace

std::vector<ExperimentSpec> builtin_regimes() {
  std::vector<ExperimentSpec> out;
  std::uint64_t seed = kBuiltinSeed;

  {
    ExperimentSpec s;
    s.name = "fig1";
    s.design = DesignModel::kGaussian1OverN;
    s.redraw_design = false;
    s.trials = 1000;
    s.seed = seed++;
    s.selectors = {rrt(0.1), rrt(0.01)};
    s.grid = {{30, 20, 5, 0.0}, {30, 20, 5, 20.0}};
    out.push_back(std::move(s));
  }

  {
    const std::vector<int> ns = {20, 50, 100, 200, 500, 1000, 2000, 5000, 10000};
    auto sweep = [&](std::string name, auto shape) {
      ExperimentSpec s;
      s.name = std::move(name);
      s.kind = ExperimentKind::kThresholdSweep;
      s.seed = seed++;
      s.selectors = sweep_selectors();
      for (int n : ns) s.grid.push_back(shape(n));
      out.push_back(std::move(s));
    };
    sweep("fig2a", [](int n) { return GridPoint{n, 10, 5, 0.0}; });
    sweep("fig2b", [](int n) {
      return GridPoint{n, static_cast<int>(0.9 * n), 5, 0.0};
    });
    sweep("fig2c", [](int n) {
      return GridPoint{n, static_cast<int>(0.9 * n), static_cast<int>(0.8 * n),
                       0.0};
    });
  }

  // finer axis: the P_O floor is read off this one
  out.push_back(snr_sweep("fig3a", 20, 10, 3, CoefKind::kDense,
                          {rrt(0.1), rrt(0.01)}, seed++,
                          snr_axis(-10.0, 30.0, 2.0)));

  {
    using K = AlphaRule::Kind;
    ExperimentSpec s;
    s.name = "fig3b-left";
    s.seed = seed++;
    s.selectors = {rrt(0.1), rrt(0.01), rrt(K::kInvSqrtN), rrt(K::kInvN)};
    for (int n : {100, 1000, 10000}) s.grid.push_back({n, 5, 3, -10.0});
    out.push_back(std::move(s));
  }
  {
    using K = AlphaRule::Kind;
    ExperimentSpec s;
    s.name = "fig3b-right";
    s.seed = seed++;
    s.selectors = {rrt(0.1), rrt(0.01), rrt(K::kInvSqrtN), rrt(K::kInvN)};
    // p = 0.3n, k0 = 0.1n, linear SNR = 0.1 k0
    for (int n : {50, 100, 200, 400}) {
      const int k0 = n / 10;
      s.grid.push_back({n, 3 * n / 10, k0, 10.0 * std::log10(0.1 * k0)});
    }
    out.push_back(std::move(s));
  }

  const char* tags[] = {"a", "b", "c", "d"};
  {
    const int pk[4][2] = {{5, 2}, {5, 4}, {9, 2}, {9, 4}};
    for (int i = 0; i < 4; ++i) {
      out.push_back(snr_sweep(std::string("fig4") + tags[i], 10, pk[i][0],
                              pk[i][1], CoefKind::kDense,
                              comparison_selectors(), seed++));
    }
  }
  {
    const int pk[4][2] = {{30, 10}, {30, 25}, {60, 10}, {60, 25}};
    for (int i = 0; i < 4; ++i) {
      out.push_back(snr_sweep(std::string("fig5") + tags[i], 100, pk[i][0],
                              pk[i][1], CoefKind::kSparse,
                              comparison_selectors(), seed++));
    }
  }
  {
    const double snr[4] = {-10.0, 0.0, -10.0, 0.0};
    const CoefKind coef[4] = {CoefKind::kDense, CoefKind::kDense,
                              CoefKind::kSparse, CoefKind::kSparse};
    for (int i = 0; i < 4; ++i) {
      ExperimentSpec s;
      s.name = std::string("fig6") + tags[i];
      s.coef = coef[i];
      s.seed = seed++;
      s.selectors = comparison_selectors();
      for (int n : {20, 50, 100, 200, 500, 1000}) {
        s.grid.push_back({n, 10, 5, snr[i]});
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace mos
