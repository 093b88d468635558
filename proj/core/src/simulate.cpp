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

#include "mos/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mos/error.hpp"

namespace mos {

NoiseSpec NoiseSpec::snr(double snr_db) {
  if (!std::isfinite(snr_db)) throw DomainError("snr_db must be finite");
  NoiseSpec s;
  s.snr_db_ = snr_db;
  return s;
}

NoiseSpec NoiseSpec::variance(double sigma2) {
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
    throw DomainError("sigma2 must be finite and >= 0");
  }
  NoiseSpec s;
  s.sigma2_ = sigma2;
  return s;
}

double NoiseSpec::sigma2_for(double signal_sq_norm, int n) const {
  if (sigma2_) return *sigma2_;
  return signal_sq_norm / (n * std::pow(10.0, *snr_db_ / 10.0));
}

std::string_view to_string(DesignModel d) noexcept {
  switch (d) {
    case DesignModel::kGaussianUnitCols:
      return "GAUSSIAN_UNIT_COLS";
    case DesignModel::kGaussian1OverN:
      return "GAUSSIAN_1_OVER_N";
    case DesignModel::kOrthonormal:
      return "ORTHONORMAL";
  }
  return "?";
}

std::string_view to_string(CoefKind c) noexcept {
  return c == CoefKind::kDense ? "DENSE" : "SPARSE";
}

std::optional<DesignModel> parse_design_model(std::string_view s) noexcept {
  for (auto d : {DesignModel::kGaussianUnitCols, DesignModel::kGaussian1OverN,
                 DesignModel::kOrthonormal}) {
    if (s == to_string(d)) return d;
  }
  return std::nullopt;
}

std::optional<CoefKind> parse_coef_kind(std::string_view s) noexcept {
  if (s == "DENSE") return CoefKind::kDense;
  if (s == "SPARSE") return CoefKind::kSparse;
  return std::nullopt;
}

Eigen::MatrixXd gen_design(int n, int p, DesignModel model, Rng& rng) {
  if (p < 1 || n <= p) throw DomainError("gen_design requires n > p >= 1");
  Eigen::MatrixXd x(n, p);
  // column-major fill order is part of the reproducibility contract
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < n; ++i) x(i, j) = rng.normal();
  }
  switch (model) {
    case DesignModel::kGaussianUnitCols:
      for (int j = 0; j < p; ++j) x.col(j) /= x.col(j).norm();
      break;
    case DesignModel::kGaussian1OverN:
      x /= std::sqrt(static_cast<double>(n));
      break;
    case DesignModel::kOrthonormal: {
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
      Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
      const Eigen::MatrixXd r = qr.matrixQR();
      for (int j = 0; j < p; ++j) {
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
      }
      x = std::move(q);
      break;
    }
  }
  return x;
}

Eigen::VectorXd gen_coef(int p, const CoefModel& coef, Rng& rng) {
  if (coef.k0 < 1 || coef.k0 > p) {
    throw DomainError("coefficient model needs 1 <= k0 <= p");
  }
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (int k = 1; k <= coef.k0; ++k) {
    const bool on = coef.kind == CoefKind::kDense || (k - 1) % 5 == 0 ||
                    k == coef.k0;
    if (on) beta[k - 1] = rng.sign();
  }
  return beta;
}

Eigen::MatrixXd gen_fixed_design(int n, int p, DesignModel model,
                                 std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0, kSharedTrial, Stream::kDesign));
  return gen_design(n, p, model, rng);
}

RegressionProblem gen_problem(int n, int p, DesignModel design,
                              const CoefModel& coef, const NoiseSpec& noise,
                              std::uint64_t seed, std::uint64_t trial) {
  Rng rng(derive_seed(seed, 0, trial, Stream::kDesign));
  return gen_problem(gen_design(n, p, design, rng), coef, noise, seed, trial);
}

RegressionProblem gen_problem(const Eigen::MatrixXd& design,
                              const CoefModel& coef, const NoiseSpec& noise,
                              std::uint64_t seed, std::uint64_t trial) {
  const int n = static_cast<int>(design.rows());
  const int p = static_cast<int>(design.cols());
  if (p < 1 || n <= p) throw DomainError("gen_problem requires n > p >= 1");

  Rng sign_rng(derive_seed(seed, 0, trial, Stream::kSigns));
  Eigen::VectorXd beta = gen_coef(p, coef, sign_rng);
  Eigen::VectorXd signal = design * beta;
  const double sigma2 = noise.sigma2_for(signal.squaredNorm(), n);
  const double sigma = std::sqrt(sigma2);

  Rng noise_rng(derive_seed(seed, 0, trial, Stream::kNoise));
  Eigen::VectorXd y = signal;
  if (sigma > 0.0) {
    for (int i = 0; i < n; ++i) y[i] += sigma * noise_rng.normal();
  }
  GroundTruth truth{std::move(beta), coef.k0, sigma2};
  return RegressionProblem(design, std::move(y), std::move(truth));
}

double sample_gamma(double shape, Rng& rng) {
  if (!(shape > 0.0)) throw DomainError("gamma shape must be > 0");
  if (shape < 1.0) {
    const double g = sample_gamma(shape + 1.0, rng);
    return g * std::pow(rng.uniform_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_beta_rv(const BetaParams& p, Rng& rng) {
  const double ga = sample_gamma(p.a(), rng);
  const double gb = sample_gamma(p.b(), rng);
  return ga / (ga + gb);
}

double sample_chi2(int dof, double noncentrality, Rng& rng) {
  if (dof < 1) throw DomainError("chi-square needs dof >= 1");
  if (!(noncentrality >= 0.0)) {
    throw DomainError("noncentrality must be >= 0");
  }
  if (noncentrality == 0.0) return 2.0 * sample_gamma(0.5 * dof, rng);
  const double z = rng.normal() + std::sqrt(noncentrality);
  double out = z * z;
  if (dof > 1) out += 2.0 * sample_gamma(0.5 * (dof - 1), rng);
  return out;
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("ks_statistic needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_critical_value(std::size_t n, double level) {
  if (n == 0 || !(level > 0.0 && level < 1.0)) {
    throw DomainError("ks_critical_value needs N >= 1 and level in (0,1)");
  }
  return std::sqrt(-std::log(0.5 * level) / 2.0) /
         std::sqrt(static_cast<double>(n));
}

}  // namespace mos
