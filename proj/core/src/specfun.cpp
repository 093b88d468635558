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

#include "mos/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "mos/error.hpp"

namespace mos {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Tail of the Stirling series: ln Gamma(x) - [(x-1/2) ln x - x + ln sqrt(2 pi)].
// Seven terms; truncation error below 1e-16 for x >= 10.
double stirling_correction(double x) {
  const double z = 1.0 / (x * x);
  return (1.0 / 12.0 +
          z * (-1.0 / 360.0 +
               z * (1.0 / 1260.0 +
                    z * (-1.0 / 1680.0 +
                         z * (1.0 / 1188.0 +
                              z * (-691.0 / 360360.0 + z * (1.0 / 156.0))))))) /
         x;
}

double lanczos_log_gamma(double x) {
  // x >= 0.5
  const double xm1 = x - 1.0;
  double sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    sum += kLanczos[i] / (xm1 + static_cast<double>(i));
  }
  const double t = xm1 + 7.5;
  return kHalfLog2Pi + (xm1 + 0.5) * std::log(t) - t + std::log(sum);
}

// ln Gamma(big) - ln Gamma(big + small) without cancellation; big >= 10.
double log_gamma_ratio(double big, double small) {
  const double sum = big + small;
  return -(big - 0.5) * std::log1p(small / big) - small * std::log(sum) +
         small + stirling_correction(big) - stirling_correction(sum);
}

// Modified Lentz evaluation of the continued fraction for I_x(a, b),
// convergent for x < (a + 1) / (a + b + 2).
double incomplete_beta_cf(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr int kMaxIter = 100000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double dm = static_cast<double>(m);
    const double m2 = 2.0 * dm;
    double aa = dm * (b - dm) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + dm) * (qab + dm) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) <= kEps) return h;
  }
  throw ConvergenceError("incomplete beta continued fraction did not converge for a=" +
                         std::to_string(a) + " b=" + std::to_string(b) +
                         " x=" + std::to_string(x));
}

// Natural-log CDF given both ln x and 1 - x, so the caller can supply
// whichever representation is exact.
double log_cdf_impl(double a, double b, double log_beta_ab, double log_x,
                    double x, double one_minus_x) {
  if (x <= 0.0 && log_x == -kInf) return -kInf;
  if (one_minus_x <= 0.0) return 0.0;
  const double log_front = a * log_x + b * std::log(one_minus_x) - log_beta_ab;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return log_front - std::log(a) + std::log(incomplete_beta_cf(a, b, x));
  }
  const double upper =
      std::exp(log_front - std::log(b)) * incomplete_beta_cf(b, a, one_minus_x);
  return std::log1p(-upper);
}

void check_order_domain(int n, int p, int k) {
  if (k < 1 || k > p || p >= n) {
    throw DomainError("residual-ratio threshold requires 1 <= k <= p < n (n=" +
                      std::to_string(n) + ", p=" + std::to_string(p) +
                      ", k=" + std::to_string(k) + ")");
  }
}

struct LowerSolution {
  double log_x;
  double residual;  // ln F(x) - ln q
};

// Solves ln I_{e^t}(a, b) = ln q for t <= 0 by safeguarded Newton on t.
// The bracket [lo, hi] always satisfies g(lo) < 0 <= g(hi).
double solve_lower_tail(const BetaParams& p, double log_q) {
  constexpr int kMaxIter = 200;
  constexpr double kResidualTol = 1e-14;
  const double a = p.a();
  const double b = p.b();
  const double lb = log_beta(p);
  const auto g = [&](double t) { return log_beta_cdf_log_x(p, t) - log_q; };

  // Leading term of the small-q expansion, x ~ (a q B(a,b))^(1/a).
  double t = (std::log(a) + log_q + lb) / a;
  t = std::min(t, -kEps);

  double hi = 0.0;
  double g_hi = -log_q;
  double lo = -kInf;
  double g_lo = -kInf;
  double gt = g(t);
  if (gt >= 0.0) {
    hi = t;
    g_hi = gt;
    double step = std::max(1.0, std::abs(t));
    for (int i = 0; i < 2000; ++i) {
      const double cand = t - step;
      const double gc = g(cand);
      if (gc < 0.0) {
        lo = cand;
        g_lo = gc;
        break;
      }
      hi = cand;
      g_hi = gc;
      step *= 2.0;
    }
    if (lo == -kInf) {
      throw ConvergenceError("beta quantile: lower bracket not found");
    }
    t = 0.5 * (lo + hi);
    gt = g(t);
  } else {
    lo = t;
    g_lo = gt;
  }

  double g_prev = kInf;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    if (std::abs(gt) <= kResidualTol) return t;
    const bool slow = std::abs(gt) > 0.5 * g_prev;
    g_prev = std::abs(gt);
    if (gt < 0.0) {
      lo = t;
      g_lo = gt;
    } else {
      hi = t;
      g_hi = gt;
    }
    const double x_lo = std::exp(lo);
    const double x_hi = std::exp(hi);
    const bool collapsed =
        (hi - lo) <= 4.0 * kEps * std::max(std::abs(lo), std::abs(hi)) ||
        (x_lo > 0.0 && std::nextafter(x_lo, 2.0) >= x_hi);
    if (collapsed) {
      // No representable x lies strictly between the bracket ends.
      return std::abs(g_lo) <= std::abs(g_hi) ? lo : hi;
    }
    // d/dt ln F(e^t) = x f(x) / F(x)
    const double log_f = gt + log_q;
    const double log_deriv =
        a * t + (b - 1.0) * std::log(-std::expm1(t)) - lb - log_f;
    const double step = gt / std::exp(log_deriv);
    // Newton step below working precision: residual is at its noise floor.
    if (std::abs(step) <= 2.0 * kEps * std::abs(t)) return t;
    double next = t - step;
    if (slow || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
    gt = g(t);
  }
  throw ConvergenceError("beta quantile: iteration cap reached for a=" +
                         std::to_string(a) + " b=" + std::to_string(b) +
                         " ln q=" + std::to_string(log_q));
}

double asymptotic_from_log_z(double a, double log_z) {
  constexpr double b = 0.5;
  const double lb = log_beta(BetaParams(a, b));
  const double log_r = (std::log(a) + log_z + lb) / a;
  const double r = std::exp(log_r);
  const double c2 = (b - 1.0) / (a + 1.0);
  const double c3 = (b - 1.0) * (a * a + 3.0 * a * b - a + 5.0 * b - 4.0) /
                    (2.0 * (a + 1.0) * (a + 1.0) * (a + 2.0));
  const double x = r + c2 * r * r + c3 * r * r * r;
  return std::clamp(x, 0.0, 1.0);
}

}  // namespace

BetaParams::BetaParams(double a, double b) : a_(a), b_(b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("Beta shape parameters must be positive and finite (a=" +
                      std::to_string(a) + ", b=" + std::to_string(b) + ")");
  }
}

BetaParams BetaParams::residual_ratio(int n, int k) {
  return BetaParams(0.5 * static_cast<double>(n - k), 0.5);
}

AsymptoticRegime::AsymptoticRegime(double alpha_lim_in, double k_lim_in)
    : alpha_lim(alpha_lim_in), k_lim(k_lim_in) {
  if (!(alpha_lim <= 0.0) || !(k_lim >= 0.0 && k_lim < 1.0)) {
    throw DomainError("asymptotic regime requires alpha_lim <= 0 and 0 <= k_lim < 1");
  }
}

double AsymptoticRegime::threshold_limit() const {
  if (alpha_lim == 0.0) return 1.0;
  if (alpha_lim == -kInf) return 0.0;
  return std::exp(2.0 * alpha_lim / (1.0 - k_lim));
}

double log_gamma(double x) {
  if (!(x > 0.0) || std::isinf(x)) {
    throw DomainError("log_gamma requires a positive finite argument, got " +
                      std::to_string(x));
  }
  if (x >= 10.0) {
    return (x - 0.5) * std::log(x) - x + kHalfLog2Pi + stirling_correction(x);
  }
  if (x < 0.5) return lanczos_log_gamma(x + 1.0) - std::log(x);
  return lanczos_log_gamma(x);
}

double log_beta(const BetaParams& p) {
  const double big = std::max(p.a(), p.b());
  const double small = std::min(p.a(), p.b());
  if (big >= 10.0) return log_gamma(small) + log_gamma_ratio(big, small);
  return log_gamma(p.a()) + log_gamma(p.b()) - log_gamma(p.a() + p.b());
}

double log_beta_cdf_log_x(const BetaParams& p, double log_x) {
  if (std::isnan(log_x) || log_x > 0.0) {
    throw DomainError("log_beta_cdf_log_x requires ln x <= 0");
  }
  if (log_x == -kInf) return -kInf;
  const double x = std::exp(log_x);
  const double one_minus_x = -std::expm1(log_x);
  return log_cdf_impl(p.a(), p.b(), log_beta(p), log_x, x, one_minus_x);
}

double log_beta_cdf(const BetaParams& p, double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("beta_cdf requires 0 <= x <= 1, got " + std::to_string(x));
  }
  if (x == 0.0) return -kInf;
  if (x == 1.0) return 0.0;
  return log_cdf_impl(p.a(), p.b(), log_beta(p), std::log(x), x, 1.0 - x);
}

double beta_cdf(const BetaParams& p, double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("beta_cdf requires 0 <= x <= 1, got " + std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double a = p.a();
  const double b = p.b();
  const double log_front =
      a * std::log(x) + b * std::log1p(-x) - log_beta(p);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front - std::log(a)) * incomplete_beta_cf(a, b, x);
  }
  return 1.0 -
         std::exp(log_front - std::log(b)) * incomplete_beta_cf(b, a, 1.0 - x);
}

double beta_inv_cdf_log(const BetaParams& p, double log_q) {
  if (std::isnan(log_q) || log_q > 0.0) {
    throw DomainError("beta_inv_cdf_log requires ln q <= 0");
  }
  if (log_q == -kInf) return -kInf;
  if (log_q > -std::log(2.0)) return std::log(beta_inv_cdf(p, std::exp(log_q)));
  return solve_lower_tail(p, log_q);
}

double beta_inv_cdf(const BetaParams& p, double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw DomainError("beta_inv_cdf requires 0 <= q <= 1, got " + std::to_string(q));
  }
  if (q == 0.0) return 0.0;
  if (q == 1.0) return 1.0;
  if (q <= 0.5) return std::exp(solve_lower_tail(p, std::log(q)));
  // Upper half: solve the mirrored lower-tail problem in y = 1 - x, which
  // keeps x near 1 resolved. Fall back to the direct form when x < 1/2.
  const BetaParams mirrored(p.b(), p.a());
  const double y = std::exp(solve_lower_tail(mirrored, std::log1p(-q)));
  if (y <= 0.5) return 1.0 - y;
  return std::exp(solve_lower_tail(p, std::log(q)));
}

double rrt_threshold(int n, int p, int k, double alpha) {
  check_order_domain(n, p, k);
  if (!(alpha >= 0.0)) {
    throw DomainError("rrt_threshold requires alpha >= 0");
  }
  const double q = alpha / static_cast<double>(p);
  if (q >= 1.0) return 1.0;
  return beta_inv_cdf(BetaParams::residual_ratio(n, k), q);
}

double rrt_threshold_log_alpha(int n, int p, int k, double log_alpha) {
  check_order_domain(n, p, k);
  if (std::isnan(log_alpha)) throw DomainError("rrt_threshold: ln alpha is NaN");
  const double log_q = log_alpha - std::log(static_cast<double>(p));
  if (log_q >= 0.0) return 1.0;
  return std::exp(beta_inv_cdf_log(BetaParams::residual_ratio(n, k), log_q));
}

double rrt_threshold_asymptotic(int n, int p, int k0, double alpha) {
  check_order_domain(n, p, k0);
  if (!(alpha >= 0.0)) {
    throw DomainError("rrt_threshold_asymptotic requires alpha >= 0");
  }
  if (alpha == 0.0) return 0.0;
  return rrt_threshold_asymptotic_log_alpha(n, p, k0, std::log(alpha));
}

double rrt_threshold_asymptotic_log_alpha(int n, int p, int k0,
                                          double log_alpha) {
  check_order_domain(n, p, k0);
  if (std::isnan(log_alpha)) throw DomainError("ln alpha is NaN");
  const double log_z = log_alpha - std::log(static_cast<double>(p));
  if (log_z >= 0.0) return 1.0;
  if (log_z == -kInf) return 0.0;
  return asymptotic_from_log_z(0.5 * static_cast<double>(n - k0), log_z);
}

}  // namespace mos
