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

#ifndef MOS_SPECFUN_HPP_
#define MOS_SPECFUN_HPP_

// Gamma/Beta special functions and the residual-ratio thresholds built on
// the Beta quantile.
//
// The threshold for order k is the (alpha/p) lower quantile of
// Beta((n-k)/2, 1/2). For the small alpha/p values that matter in practice
// the quantile sits deep in the lower tail, so the CDF and its inverse are
// also provided in log form; this keeps thresholds for alpha = exp(-n) and
// smaller finite instead of underflowing to zero.

namespace mos {

// Shape pair of a Beta law. Construction validates a > 0 and b > 0.
class BetaParams {
 public:
  BetaParams(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

  // Law of the residual ratio for orders beyond the true one:
  // Beta((n-k)/2, 1/2).
  static BetaParams residual_ratio(int n, int k);

 private:
  double a_;
  double b_;
};

// Limits of log(alpha)/n and k0/n along a growing-n sequence.
struct AsymptoticRegime {
  double alpha_lim;  // in [-inf, 0]
  double k_lim;      // in [0, 1)

  AsymptoticRegime(double alpha_lim, double k_lim);

  // Limit of the order-k0 threshold as n grows: 1 when alpha_lim == 0,
  // exp(2 alpha_lim / (1 - k_lim)) for finite negative alpha_lim, 0 for
  // alpha_lim == -inf.
  double threshold_limit() const;
};

// ln Gamma(x) for x > 0. Lanczos approximation (g = 7, 9 terms), with the
// recurrence Gamma(x) = Gamma(x + 1) / x below 0.5.
double log_gamma(double x);

// ln B(a, b). For large shapes the Gamma ratio is formed from a Stirling
// difference so that ln B(a, 1/2) stays accurate when a is in the thousands.
double log_beta(const BetaParams& p);

// Regularised incomplete beta I_x(a, b).
double beta_cdf(const BetaParams& p, double x);

// ln I_x(a, b), accurate in the far lower tail.
double log_beta_cdf(const BetaParams& p, double x);

// Same as log_beta_cdf but taking ln x, so x may lie below the smallest
// positive double.
double log_beta_cdf_log_x(const BetaParams& p, double log_x);

// Quantile of Beta(a, b): x with beta_cdf(p, x) == q.
double beta_inv_cdf(const BetaParams& p, double q);

// Lower-tail quantile from ln q (ln q <= 0). Returns ln x.
double beta_inv_cdf_log(const BetaParams& p, double log_q);

// Gamma_RRT^alpha(k) = beta_inv_cdf(Beta((n-k)/2, 1/2), min(alpha/p, 1)).
// Requires 1 <= k <= p < n and alpha >= 0.
double rrt_threshold(int n, int p, int k, double alpha);

// Same threshold from ln alpha; usable for alpha far below DBL_MIN.
double rrt_threshold_log_alpha(int n, int p, int k, double log_alpha);

// Three-term small-z expansion of the Beta quantile
//   x = r + (b-1)/(a+1) r^2
//         + (b-1)(a^2+3ab-a+5b-4) / (2 (a+1)^2 (a+2)) r^3,
//   r = (a z B(a,b))^(1/a),
// evaluated at a = (n-k0)/2, b = 1/2, z = alpha/p and clamped to [0, 1].
double rrt_threshold_asymptotic(int n, int p, int k0, double alpha);
double rrt_threshold_asymptotic_log_alpha(int n, int p, int k0,
                                          double log_alpha);

}  // namespace mos

#endif  // MOS_SPECFUN_HPP_
