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

#include <benchmark/benchmark.h>

#include "mos/experiments.hpp"
#include "mos/linreg.hpp"
#include "mos/random.hpp"
#include "mos/selectors.hpp"
#include "mos/simulate.hpp"
#include "mos/specfun.hpp"

namespace {

void BM_BetaInvCdf(benchmark::State& state) {
  const mos::BetaParams p(0.5 * static_cast<double>(state.range(0)), 0.5);
  double q = 1e-4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mos::beta_inv_cdf(p, q));
    q = q < 0.5 ? q * 1.01 : 1e-4;
  }
}
BENCHMARK(BM_BetaInvCdf)->Arg(20)->Arg(200)->Arg(20000);

void BM_ResidualProfile(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  mos::Rng rng(1);
  const auto x = mos::gen_design(n, p, mos::DesignModel::kGaussianUnitCols, rng);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y[i] = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(mos::residual_profile(x, y));
  }
}
BENCHMARK(BM_ResidualProfile)->Args({30, 20})->Args({100, 60})->Args({400, 120});

void BM_ThresholdTable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mos::ThresholdTable::build(n, p, 0.1));
  }
}
BENCHMARK(BM_ThresholdTable)->Args({30, 20})->Args({1000, 300});

void BM_RunTrial(benchmark::State& state) {
  auto spec = *mos::find_regime("fig5d");
  spec.grid.resize(1);
  const mos::PreparedExperiment prep(spec);
  std::uint64_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(prep.run_trial(0, t++));
  }
}
BENCHMARK(BM_RunTrial);

}  // namespace

BENCHMARK_MAIN();
