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

#ifndef MOS_LINREG_HPP_
#define MOS_LINREG_HPP_

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace mos {

// Known generating parameters of a simulated problem.
struct GroundTruth {
  Eigen::VectorXd beta;
  int k0 = 0;
  double sigma2 = 0.0;
};

// y = X beta + w with X n x p, n > p >= 1. Immutable after construction.
class RegressionProblem {
 public:
  RegressionProblem(Eigen::MatrixXd design, Eigen::VectorXd observation,
                    std::optional<GroundTruth> truth = std::nullopt);

  const Eigen::MatrixXd& design() const noexcept { return design_; }
  const Eigen::VectorXd& observation() const noexcept { return observation_; }
  const std::optional<GroundTruth>& truth() const noexcept { return truth_; }

  int n() const noexcept { return static_cast<int>(design_.rows()); }
  int p() const noexcept { return static_cast<int>(design_.cols()); }

 private:
  Eigen::MatrixXd design_;
  Eigen::VectorXd observation_;
  std::optional<GroundTruth> truth_;
};

// Largest 1-based index with a nonzero entry; 0 for the zero vector.
int model_order(const Eigen::VectorXd& beta);

// Squared residual norms ||(I - P_k) y||^2 for k = 0..p and the adjacent
// ratios RR(k) = sq_norms[k] / sq_norms[k-1] for k = 1..p (stored 0-based,
// ratios[k-1] is RR(k)).
//
// Once a residual has collapsed to (numerically) zero, i.e.
// sq_norms[k-1] <= 1e-12 * ||y||^2, RR(k) is defined as 1.
struct ResidualProfile {
  std::vector<double> sq_norms;
  std::vector<double> ratios;

  int p() const noexcept { return static_cast<int>(ratios.size()); }
  double zero_floor() const noexcept;
};

inline constexpr double kZeroResidualRelTol = 1e-12;
inline constexpr double kRankRelTol = 1e-20;

// Nested residual norms by block classical Gram-Schmidt with one
// reorthogonalisation pass (CGS2), columns taken strictly in index order.
// O(n p^2).
// Throws RankDeficiencyError when column k has squared norm orthogonal to
// the previous span below 1e-20 * ||x_k||^2.
ResidualProfile residual_profile(const RegressionProblem& problem);
ResidualProfile residual_profile(const Eigen::MatrixXd& design,
                                 const Eigen::VectorXd& observation);

// RR(k), k = 1..p, with the zero-residual convention applied.
std::vector<double> residual_ratios(const ResidualProfile& profile);

// ||(I - P_k) y||^2 through the k x k normal equations. Shares no code with
// residual_profile; used as its test oracle. Throws SingularSystemError.
double projector_oracle(const Eigen::MatrixXd& design, int k,
                        const Eigen::VectorXd& observation);

}  // namespace mos

#endif  // MOS_LINREG_HPP_
