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

#include "mos/linreg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mos/error.hpp"

namespace mos {

RegressionProblem::RegressionProblem(Eigen::MatrixXd design,
                                     Eigen::VectorXd observation,
                                     std::optional<GroundTruth> truth)
    : design_(std::move(design)),
      observation_(std::move(observation)),
      truth_(std::move(truth)) {
  const auto n = design_.rows();
  const auto p = design_.cols();
  if (p < 1) throw DomainError("design must have at least one column");
  if (n <= p) {
    throw DomainError("requires n > p (got n=" + std::to_string(n) +
                      ", p=" + std::to_string(p) + ")");
  }
  if (observation_.size() != n) {
    throw DomainError("observation length " +
                      std::to_string(observation_.size()) +
                      " does not match design rows " + std::to_string(n));
  }
  if (truth_) {
    if (truth_->beta.size() != p) {
      throw DomainError("truth beta length does not match design columns");
    }
    const int k0 = model_order(truth_->beta);
    if (k0 < 1 || k0 != truth_->k0) {
      throw DomainError("truth k0 must equal the last nonzero index of beta");
    }
    if (!(truth_->sigma2 >= 0.0)) throw DomainError("truth sigma2 must be >= 0");
  }
}

int model_order(const Eigen::VectorXd& beta) {
  for (Eigen::Index i = beta.size(); i > 0; --i) {
    if (beta[i - 1] != 0.0) return static_cast<int>(i);
  }
  return 0;
}

double ResidualProfile::zero_floor() const noexcept {
  return sq_norms.empty() ? 0.0 : kZeroResidualRelTol * sq_norms.front();
}

ResidualProfile residual_profile(const RegressionProblem& problem) {
  return residual_profile(problem.design(), problem.observation());
}

ResidualProfile residual_profile(const Eigen::MatrixXd& design,
                                 const Eigen::VectorXd& observation) {
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  if (p < 1 || n <= p) {
    throw DomainError("requires n > p (got n=" + std::to_string(n) +
                      ", p=" + std::to_string(p) + ")");
  }
  if (observation.size() != n) {
    throw DomainError("observation length does not match design rows");
  }

  Eigen::MatrixXd q(n, p);
  Eigen::VectorXd r = observation;
  ResidualProfile out;
  out.sq_norms.resize(static_cast<std::size_t>(p) + 1);
  out.sq_norms[0] = r.squaredNorm();

  for (Eigen::Index j = 0; j < p; ++j) {
    Eigen::VectorXd v = design.col(j);
    const double col_sq = v.squaredNorm();
    // two projection sweeps; the second removes what cancellation left
    if (j > 0) {
      for (int pass = 0; pass < 2; ++pass) {
        const auto qj = q.leftCols(j);
        v.noalias() -= qj * (qj.transpose() * v);
      }
    }
    const double v_sq = v.squaredNorm();
    if (!(v_sq > kRankRelTol * col_sq)) {
      throw RankDeficiencyError(
          static_cast<int>(j + 1),
          "column " + std::to_string(j + 1) +
              " is numerically in the span of the preceding columns");
    }
    q.col(j) = v / std::sqrt(v_sq);
    r.noalias() -= q.col(j).dot(r) * q.col(j);
    // clamp keeps the profile monotone under rounding
    out.sq_norms[j + 1] = std::min(r.squaredNorm(), out.sq_norms[j]);
  }
  out.ratios = residual_ratios(out);
  return out;
}

std::vector<double> residual_ratios(const ResidualProfile& profile) {
  const std::size_t p = profile.sq_norms.empty() ? 0
                                                 : profile.sq_norms.size() - 1;
  const double floor = profile.zero_floor();
  std::vector<double> ratios(p);
  for (std::size_t k = 1; k <= p; ++k) {
    const double prev = profile.sq_norms[k - 1];
    if (prev <= floor) {
      ratios[k - 1] = 1.0;
    } else {
      ratios[k - 1] = std::clamp(profile.sq_norms[k] / prev, 0.0, 1.0);
    }
  }
  return ratios;
}

double projector_oracle(const Eigen::MatrixXd& design, int k,
                        const Eigen::VectorXd& observation) {
  if (k < 1 || k > design.cols()) {
    throw DomainError("projector_oracle: k out of range");
  }
  if (observation.size() != design.rows()) {
    throw DomainError("projector_oracle: dimension mismatch");
  }
  const Eigen::MatrixXd xk = design.leftCols(k);
  const Eigen::MatrixXd gram = xk.transpose() * xk;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw SingularSystemError("normal equations are not positive definite");
  }
  // crude reciprocal condition estimate from the Cholesky diagonal
  const Eigen::VectorXd d = llt.matrixL().toDenseMatrix().diagonal();
  const double ratio = d.minCoeff() / d.maxCoeff();
  if (!(ratio * ratio >= 1e-14)) {
    throw SingularSystemError("normal equations are numerically singular");
  }
  const Eigen::VectorXd coef = llt.solve(xk.transpose() * observation);
  const Eigen::VectorXd resid = observation - xk * coef;
  return resid.squaredNorm();
}

}  // namespace mos
