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

#ifndef MOS_SELECTORS_HPP_
#define MOS_SELECTORS_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mos/linreg.hpp"

namespace mos {

inline constexpr int kDefaultFallbackGrid = 100;

// Gamma_RRT^alpha(k) for k = 1..p (gamma[k-1]).
struct ThresholdTable {
  int n = 0;
  int p = 0;
  double alpha = 0.0;      // may underflow to 0 for tiny levels
  double log_alpha = 0.0;  // authoritative
  std::vector<double> gamma;

  static ThresholdTable build(int n, int p, double alpha);
  static ThresholdTable build_log(int n, int p, double log_alpha);
};

// Penalty h(k, sigma2_k) of an information criterion.
class PenaltyRule {
 public:
  enum class Kind { kAic, kBic, kHsc, kDesign, kPlugin };
  using Fn = std::function<double(int k, double sigma2_k, int n)>;

  static PenaltyRule aic();
  static PenaltyRule bic();
  static PenaltyRule hsc();
  // v is the calibrated per-order penalty (see calibrate_design_penalty).
  static PenaltyRule design(double level, double v);
  static PenaltyRule plugin(std::string name, Fn h);

  Kind kind() const noexcept { return kind_; }
  double level() const noexcept { return level_; }
  double v() const noexcept { return v_; }
  const std::string& name() const noexcept { return name_; }

  double operator()(int k, double sigma2_k, int n) const;

 private:
  PenaltyRule(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  Kind kind_;
  std::string name_;
  double level_ = 0.0;
  double v_ = 0.0;
  Fn fn_;
};

struct SelectionOutcome {
  int k_hat = 0;
  std::string criterion;
  double alpha_used = 0.0;      // RRT only
  double log_alpha_used = 0.0;  // RRT only
  bool fallback = false;        // RRT only
  // RRT: RR(k) - Gamma(k) at the level used. ITC: n log sigma2_k + h.
  std::vector<double> trace;
};

// k_hat = max{k : RR(k) <= Gamma(k)}. When that set is empty the level is
// raised to alpha_new and the rule is reapplied with fallback = true.
SelectionOutcome rrt_select(const std::vector<double>& ratios,
                            const ThresholdTable& table,
                            int fallback_grid_size = kDefaultFallbackGrid);

// Geometric grid of grid_size levels over (alpha, p]; the last point is p.
std::vector<double> fallback_grid_log(double log_alpha, int p, int grid_size);

// Smallest grid level in (alpha, p] with a nonempty selection set.
double alpha_new(const std::vector<double>& ratios, int n, int p, double alpha,
                 int grid_size = kDefaultFallbackGrid);
double alpha_new_log(const std::vector<double>& ratios, int n, int p,
                     double log_alpha, int grid_size = kDefaultFallbackGrid);

// argmin over k = 1..p of n log(sigma2_k) + h(k, sigma2_k),
// sigma2_k = sq_norms[k] / n. Ties go to the smaller k.
// Throws DegenerateFitError if some residual is numerically zero.
SelectionOutcome itc_select(const ResidualProfile& profile, int n,
                            const PenaltyRule& rule);

// Smallest v (to 0.01) for which, over `trials` noise-only draws, the
// fraction with min_k [n log sigma2_k + v k] < n log sigma2_0 is <= level.
// Requires 0 < level <= 1 and trials >= 10^4. Depends only on the arguments.
double calibrate_design_penalty(int n, int p, double level, int trials,
                                std::uint64_t seed);

}  // namespace mos

#endif  // MOS_SELECTORS_HPP_
