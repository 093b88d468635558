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

#include "mos/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "mos/error.hpp"
#include "mos/random.hpp"
#include "mos/specfun.hpp"

namespace mos {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_dims(int n, int p) {
  if (p < 1 || n <= p) {
    throw DomainError("requires n > p >= 1 (got n=" + std::to_string(n) +
                      ", p=" + std::to_string(p) + ")");
  }
}

// Largest k with RR(k) <= Gamma^a(k), scanning from the top; 0 if none.
int largest_admissible(const std::vector<double>& ratios, int n, int p,
                       double log_a) {
  for (int k = p; k >= 1; --k) {
    if (ratios[k - 1] <= rrt_threshold_log_alpha(n, p, k, log_a)) return k;
  }
  return 0;
}

}  // namespace

ThresholdTable ThresholdTable::build(int n, int p, double alpha) {
  if (!(alpha >= 0.0)) throw DomainError("alpha must be >= 0");
  auto t = build_log(n, p, alpha == 0.0 ? kNegInf : std::log(alpha));
  t.alpha = alpha;  // keep the caller's value, not exp(log(alpha))
  return t;
}

ThresholdTable ThresholdTable::build_log(int n, int p, double log_alpha) {
  check_dims(n, p);
  if (std::isnan(log_alpha)) throw DomainError("log alpha is NaN");
  ThresholdTable t;
  t.n = n;
  t.p = p;
  t.log_alpha = log_alpha;
  t.alpha = std::exp(log_alpha);
  t.gamma.resize(static_cast<std::size_t>(p));
  for (int k = 1; k <= p; ++k) {
    t.gamma[k - 1] = rrt_threshold_log_alpha(n, p, k, log_alpha);
  }
  return t;
}

PenaltyRule PenaltyRule::aic() { return PenaltyRule(Kind::kAic, "aic"); }
PenaltyRule PenaltyRule::bic() { return PenaltyRule(Kind::kBic, "bic"); }
PenaltyRule PenaltyRule::hsc() { return PenaltyRule(Kind::kHsc, "hsc"); }

PenaltyRule PenaltyRule::design(double level, double v) {
  if (!(level > 0.0 && level <= 1.0)) {
    throw DomainError("design level must lie in (0, 1]");
  }
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError("design penalty v must be finite and >= 0");
  }
  PenaltyRule r(Kind::kDesign, "design");
  r.level_ = level;
  r.v_ = v;
  return r;
}

PenaltyRule PenaltyRule::plugin(std::string name, Fn h) {
  if (!h) throw DomainError("plugin penalty needs a callable");
  PenaltyRule r(Kind::kPlugin, std::move(name));
  r.fn_ = std::move(h);
  return r;
}

double PenaltyRule::operator()(int k, double sigma2_k, int n) const {
  const double kk = static_cast<double>(k);
  switch (kind_) {
    case Kind::kAic:
      return 2.0 * kk;
    case Kind::kBic:
      return kk * std::log(static_cast<double>(n));
    case Kind::kHsc:
      return std::max(kk * std::log(static_cast<double>(n)),
                      -2.0 * kk * std::log(sigma2_k));
    case Kind::kDesign:
      return v_ * kk;
    case Kind::kPlugin:
      return fn_(k, sigma2_k, n);
  }
  return 0.0;
}

std::vector<double> fallback_grid_log(double log_alpha, int p, int grid_size) {
  if (grid_size < 1) throw DomainError("fallback grid needs >= 1 point");
  const double log_p = std::log(static_cast<double>(p));
  std::vector<double> grid(static_cast<std::size_t>(grid_size));
  if (!(log_alpha < log_p)) {
    std::fill(grid.begin(), grid.end(), log_p);
    return grid;
  }
  // alpha = 0 has no geometric grid; start the span at DBL_MIN instead
  const double lo = std::isfinite(log_alpha)
                        ? log_alpha
                        : std::log(std::numeric_limits<double>::min());
  const double step = (log_p - lo) / grid_size;
  for (int i = 1; i < grid_size; ++i) grid[i - 1] = lo + step * i;
  grid.back() = log_p;
  return grid;
}

double alpha_new_log(const std::vector<double>& ratios, int n, int p,
                     double log_alpha, int grid_size) {
  check_dims(n, p);
  if (static_cast<int>(ratios.size()) != p) {
    throw DomainError("ratios length must equal p");
  }
  const auto grid = fallback_grid_log(log_alpha, p, grid_size);

  // RR(k) <= Gamma^a(k) iff a >= p * F_k(RR(k)); the smallest such a over k
  // gives the first candidate grid point directly.
  const double log_p = std::log(static_cast<double>(p));
  double log_a_star = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= p; ++k) {
    const double rr = ratios[k - 1];
    const double lf = rr >= 1.0 ? 0.0
                                : log_beta_cdf(BetaParams::residual_ratio(n, k),
                                               std::max(rr, 0.0));
    log_a_star = std::min(log_a_star, log_p + lf);
  }
  auto it = std::lower_bound(grid.begin(), grid.end(), log_a_star);
  if (it == grid.end()) --it;
  // the CDF and quantile routes can disagree in the last ulp; step up until
  // the threshold comparison itself is satisfied
  for (; it != grid.end(); ++it) {
    if (largest_admissible(ratios, n, p, *it) > 0) return *it;
  }
  return grid.back();
}

double alpha_new(const std::vector<double>& ratios, int n, int p, double alpha,
                 int grid_size) {
  if (!(alpha >= 0.0)) throw DomainError("alpha must be >= 0");
  return std::exp(alpha_new_log(ratios, n, p,
                                alpha == 0.0 ? kNegInf : std::log(alpha),
                                grid_size));
}

SelectionOutcome rrt_select(const std::vector<double>& ratios,
                            const ThresholdTable& table,
                            int fallback_grid_size) {
  const int p = table.p;
  if (static_cast<int>(ratios.size()) != p ||
      static_cast<int>(table.gamma.size()) != p) {
    throw DomainError("ratios length must equal table p");
  }
  SelectionOutcome out;
  out.criterion = "rrt";
  out.alpha_used = table.alpha;
  out.log_alpha_used = table.log_alpha;
  out.trace.resize(static_cast<std::size_t>(p));
  for (int k = p; k >= 1; --k) {
    out.trace[k - 1] = ratios[k - 1] - table.gamma[k - 1];
    if (out.k_hat == 0 && ratios[k - 1] <= table.gamma[k - 1]) out.k_hat = k;
  }
  if (out.k_hat > 0) return out;

  const double log_a =
      alpha_new_log(ratios, table.n, p, table.log_alpha, fallback_grid_size);
  out.fallback = true;
  out.log_alpha_used = log_a;
  out.alpha_used = std::exp(log_a);
  for (int k = 1; k <= p; ++k) {
    const double g = rrt_threshold_log_alpha(table.n, p, k, log_a);
    out.trace[k - 1] = ratios[k - 1] - g;
    if (ratios[k - 1] <= g) out.k_hat = k;
  }
  return out;
}

SelectionOutcome itc_select(const ResidualProfile& profile, int n,
                            const PenaltyRule& rule) {
  const int p = profile.p();
  if (static_cast<int>(profile.sq_norms.size()) != p + 1) {
    throw DomainError("profile needs p + 1 residual norms");
  }
  check_dims(n, p);
  const double floor = profile.zero_floor();
  for (int k = 0; k <= p; ++k) {
    if (profile.sq_norms[k] <= floor) {
      throw DegenerateFitError(
          k, "residual at order " + std::to_string(k) +
                 " is numerically zero; information criteria need log(sigma2)");
    }
  }
  SelectionOutcome out;
  out.criterion = rule.name();
  out.trace.resize(static_cast<std::size_t>(p));
  const double nd = static_cast<double>(n);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= p; ++k) {
    const double s2 = profile.sq_norms[k] / nd;
    const double score = nd * std::log(s2) + rule(k, s2, n);
    out.trace[k - 1] = score;
    if (score < best) {
      best = score;
      out.k_hat = k;
    }
  }
  if (out.k_hat == 0) out.k_hat = 1;  // all scores NaN
  return out;
}

double calibrate_design_penalty(int n, int p, double level, int trials,
                                std::uint64_t seed) {
  check_dims(n, p);
  if (!(level > 0.0 && level <= 1.0)) {
    throw DomainError("design level must lie in (0, 1]");
  }
  if (trials < 10000) throw DomainError("design calibration needs >= 10^4 trials");

  // Under y = w the residual norms have the law of tail sums of n i.i.d.
  // squared normals whatever the design, so X is never formed.
  const double nd = static_cast<double>(n);
  std::vector<double> crit(static_cast<std::size_t>(trials));
  std::vector<double> z2(static_cast<std::size_t>(n));
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, 0, static_cast<std::uint64_t>(t),
                        Stream::kCalibration));
    for (auto& v : z2) {
      const double z = rng.normal();
      v = z * z;
    }
    // tail[k] = sum_{i >= k} z2[i]
    double tail = 0.0;
    for (int i = n - 1; i >= p; --i) tail += z2[i];
    std::vector<double> sq(static_cast<std::size_t>(p) + 1);
    sq[p] = tail;
    for (int k = p - 1; k >= 0; --k) sq[k] = sq[k + 1] + z2[k];
    double v_max = kNegInf;
    for (int k = 1; k <= p; ++k) {
      v_max = std::max(v_max, nd * std::log(sq[0] / sq[k]) / k);
    }
    crit[t] = v_max;
  }
  std::sort(crit.begin(), crit.end());
  const double cap = level * trials;
  auto over_count = [&](double v) {
    return static_cast<double>(crit.end() -
                               std::upper_bound(crit.begin(), crit.end(), v));
  };
  if (over_count(0.0) <= cap) return 0.0;

  double lo = 0.0;
  double hi = 10.0 * std::log(nd);
  int doublings = 0;
  while (over_count(hi) > cap) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 60 || !std::isfinite(hi)) {
      throw BracketError("design calibration: upper bracket still overestimates");
    }
  }
  while (hi - lo > 1e-2) {
    const double mid = 0.5 * (lo + hi);
    if (over_count(mid) > cap) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace mos
