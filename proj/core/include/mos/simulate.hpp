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

#ifndef MOS_SIMULATE_HPP_
#define MOS_SIMULATE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mos/linreg.hpp"
#include "mos/random.hpp"
#include "mos/specfun.hpp"

namespace mos {

enum class DesignModel {
  kGaussianUnitCols,  // N(0,1) entries, columns scaled to unit norm
  kGaussian1OverN,    // N(0,1/n) entries
  kOrthonormal,       // random orthonormal p-frame
};

enum class CoefKind {
  kDense,   // +-1 on 1..k0
  kSparse,  // +-1 on {1, 6, 11, ...} within 1..k0, plus k0
};

struct CoefModel {
  CoefKind kind = CoefKind::kDense;
  int k0 = 1;
};

// Exactly one of snr_db / sigma2 is set. snr_db maps per instance to
// sigma2 = ||X beta||^2 / (n 10^(snr_db/10)).
class NoiseSpec {
 public:
  static NoiseSpec snr(double snr_db);
  static NoiseSpec variance(double sigma2);  // sigma2 = 0 allowed: no noise

  bool has_snr() const noexcept { return snr_db_.has_value(); }
  double snr_db() const { return snr_db_.value(); }
  double sigma2_for(double signal_sq_norm, int n) const;

 private:
  std::optional<double> snr_db_;
  std::optional<double> sigma2_;
};

std::string_view to_string(DesignModel d) noexcept;
std::string_view to_string(CoefKind c) noexcept;
std::optional<DesignModel> parse_design_model(std::string_view s) noexcept;
std::optional<CoefKind> parse_coef_kind(std::string_view s) noexcept;

Eigen::MatrixXd gen_design(int n, int p, DesignModel model, Rng& rng);
Eigen::VectorXd gen_coef(int p, const CoefModel& coef, Rng& rng);

// Shared design of a fixed-design experiment (stream kDesign, kSharedTrial).
Eigen::MatrixXd gen_fixed_design(int n, int p, DesignModel model,
                                 std::uint64_t seed);

// Fresh X, beta signs and noise per trial; deterministic in (seed, trial).
RegressionProblem gen_problem(int n, int p, DesignModel design,
                              const CoefModel& coef, const NoiseSpec& noise,
                              std::uint64_t seed, std::uint64_t trial);

// Given X; only beta signs and noise are drawn.
RegressionProblem gen_problem(const Eigen::MatrixXd& design,
                              const CoefModel& coef, const NoiseSpec& noise,
                              std::uint64_t seed, std::uint64_t trial);

// Gamma(shape, 1), Marsaglia-Tsang; shape < 1 via the U^(1/shape) boost.
double sample_gamma(double shape, Rng& rng);

// Beta(a, b) as G_a / (G_a + G_b).
double sample_beta_rv(const BetaParams& p, Rng& rng);

// Chi-square with dof degrees of freedom and noncentrality lambda >= 0.
double sample_chi2(int dof, double noncentrality, Rng& rng);

// sup_x |F_N(x) - F(x)|. Samples need not be sorted.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

// Asymptotic one-sample critical value sqrt(-ln(level/2)/2) / sqrt(N).
double ks_critical_value(std::size_t n, double level);

}  // namespace mos

#endif  // MOS_SIMULATE_HPP_
