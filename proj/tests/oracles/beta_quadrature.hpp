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

#ifndef MOS_TESTS_ORACLES_BETA_QUADRATURE_HPP_
#define MOS_TESTS_ORACLES_BETA_QUADRATURE_HPP_

// Independent Beta integrals by adaptive Simpson quadrature. Shares no code
// with the library. Only meant for a >= 1, b >= 1/2.
//
// With t = 1 - u^2 the integrand t^(a-1) (1-t)^(b-1) dt becomes
// 2 (1-u^2)^(a-1) u^(2b-1) du, which is smooth for b = 1/2.

#include <cmath>
#include <functional>

namespace mos::oracle {

inline double simpson(const std::function<double(double)>& f, double a,
                      double b, double fa, double fm, double fb, double whole,
                      double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-16) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, b, fa, fm, fb, whole, tol, 60);
}

inline double beta_integrand_u(double a, double b, double u) {
  return 2.0 * std::pow(1.0 - u * u, a - 1.0) * std::pow(u, 2.0 * b - 1.0);
}

// B(a, b), split at a few points so the peak is resolved for larger a.
inline double beta_fn(double a, double b) {
  auto f = [=](double u) { return beta_integrand_u(a, b, u); };
  double s = 0.0;
  const double cuts[] = {0.0, 0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0};
  for (int i = 0; i + 1 < 8; ++i) s += integrate(f, cuts[i], cuts[i + 1]);
  return s;
}

// Incomplete integral over t in [0, x], i.e. u in [sqrt(1-x), 1].
inline double beta_cdf(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  auto f = [=](double u) { return beta_integrand_u(a, b, u); };
  const double u0 = std::sqrt(1.0 - x);
  double s = 0.0;
  const int pieces = 16;
  for (int i = 0; i < pieces; ++i) {
    const double lo = u0 + (1.0 - u0) * i / pieces;
    const double hi = u0 + (1.0 - u0) * (i + 1) / pieces;
    s += integrate(f, lo, hi);
  }
  return s / beta_fn(a, b);
}

// Quantile by plain bisection on the quadrature CDF.
inline double beta_inv_cdf(double a, double b, double q) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double m = 0.5 * (lo + hi);
    if (beta_cdf(a, b, m) < q) {
      lo = m;
    } else {
      hi = m;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace mos::oracle

#endif  // MOS_TESTS_ORACLES_BETA_QUADRATURE_HPP_
