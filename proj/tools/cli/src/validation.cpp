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

#include "mos/cli/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mos/cli/commands.hpp"
#include "mos/cli/csv.hpp"
#include "mos/experiments.hpp"
#include "mos/linreg.hpp"
#include "mos/random.hpp"
#include "mos/simulate.hpp"
#include "mos/specfun.hpp"

namespace mos::cli {
namespace {

constexpr std::uint64_t kDefaultSeed = 20260101;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

double binom_sigma(double a, std::int64_t n) {
  return std::sqrt(a * (1.0 - a) / static_cast<double>(std::max<std::int64_t>(n, 1)));
}

class Context {
 public:
  explicit Context(const ValidationOptions& o)
      : opt_(o),
        trials_(o.level == ValidationLevel::kFull ? 10000 : 1000) {}

  int trials() const { return trials_; }
  bool full() const { return opt_.level == ValidationLevel::kFull; }
  std::uint64_t seed() const { return opt_.seed.value_or(kDefaultSeed); }

  ExperimentSpec regime(const std::string& name) const {
    auto r = find_regime(name);
    if (!r) throw std::logic_error("unknown builtin regime " + name);
    if (opt_.seed) r->seed = *opt_.seed;
    r->trials = trials_;
    return *r;
  }

  const MetricSummary& summary(const std::string& name) {
    auto it = cache_.find(name);
    if (it != cache_.end()) return it->second;
    const auto t0 = Clock::now();
    auto s = run_experiment(regime(name), opt_.workers);
    seconds_[name] = since(t0);
    return cache_.emplace(name, std::move(s)).first->second;
  }

  // Wall time of the first run of a regime.
  double seconds(const std::string& name) const { return seconds_.at(name); }

  int workers() const { return opt_.workers; }

 private:
  ValidationOptions opt_;
  int trials_;
  std::map<std::string, MetricSummary> cache_;
  std::map<std::string, double> seconds_;
};

const CellResult& cell(const MetricSummary& s, const GridPoint& pt,
                       const std::string& selector) {
  const CellResult* c = s.find(pt, selector);
  if (c == nullptr) {
    throw std::logic_error(s.name + ": no cell for " + selector);
  }
  return *c;
}

std::vector<GridPoint> points(const MetricSummary& s) {
  std::vector<GridPoint> out;
  for (const auto& c : s.cells) {
    if (out.empty() || out.back().n != c.point.n || out.back().p != c.point.p ||
        out.back().k0 != c.point.k0 || out.back().snr_db != c.point.snr_db) {
      out.push_back(c.point);
    }
  }
  return out;
}

// 1 - over_event frequency at the fixed fig1 design.
CriterionResult c1(Context& ctx) {
  CriterionResult r{1, "fixed-design no-overestimation probabilities", false, "", "", 0};
  const auto t0 = Clock::now();
  const auto& s = ctx.summary("fig1");
  struct Target {
    double snr, center, tol;
    const char* sel;
  };
  const Target targets[] = {{0, 0.935, 0.02, "rrt(0.1)"},
                            {0, 0.99, 0.01, "rrt(0.01)"},
                            {20, 0.941, 0.02, "rrt(0.1)"},
                            {20, 0.993, 0.01, "rrt(0.01)"}};
  bool ok = true;
  std::string obs, exp;
  for (const auto& t : targets) {
    const auto& pt = points(s);
    const auto at = std::find_if(pt.begin(), pt.end(), [&](const GridPoint& g) {
      return g.snr_db == t.snr;
    });
    const auto& c = cell(s, *at, t.sel);
    const double v = 1.0 - c.over_event_rate();
    ok = ok && std::abs(v - t.center) <= t.tol;
    obs += std::string(obs.empty() ? "" : ", ") + fmt(t.snr) + "dB " + t.sel +
           "=" + fmt(v);
    exp += std::string(exp.empty() ? "" : ", ") + fmt(t.center) + "+-" +
           fmt(t.tol);
  }
  r.seconds = since(t0);
  const double run = ctx.seconds("fig1");
  ok = ok && run < 60.0;
  r.passed = ok;
  r.observed = obs + ", " + fmt(run, 3) + "s";
  r.expected = exp + ", < 60s";
  return r;
}

// Over-event envelope on every RRT cell; alpha/p floor for fig3a at 20 dB+.
CriterionResult c2(Context& ctx) {
  CriterionResult r{2, "overestimation envelope and alpha/p floor", false, "", "", 0};
  const auto t0 = Clock::now();
  int checked = 0, bad = 0;
  std::string worst;
  double worst_excess = -1.0;
  for (const auto& spec : builtin_regimes()) {
    if (spec.kind != ExperimentKind::kMonteCarlo) continue;
    const auto& s = ctx.summary(spec.name);
    for (const auto& c : s.cells) {
      if (!c.is_rrt) continue;
      const double a = std::min(1.0, std::exp(c.log_alpha));
      const double bound = a + 3.0 * binom_sigma(a, c.counted());
      const double f = c.over_event_rate();
      ++checked;
      if (f > bound) ++bad;
      if (f - bound > worst_excess) {
        worst_excess = f - bound;
        worst = s.name + " n=" + std::to_string(c.point.n) + " snr=" +
                fmt(c.point.snr_db) + " " + c.selector + " freq=" + fmt(f) +
                " bound=" + fmt(bound);
      }
    }
  }
  int floor_checked = 0, floor_bad = 0;
  std::string floor_obs;
  const auto& f3 = ctx.summary("fig3a");
  for (const auto& c : f3.cells) {
    if (!c.is_rrt || c.point.snr_db < 20.0) continue;
    const double ap = std::exp(c.log_alpha) / c.point.p;
    const double lo = ap - 3.0 * binom_sigma(ap, c.counted());
    ++floor_checked;
    if (c.over_event_rate() < lo) {
      ++floor_bad;
      floor_obs += " " + fmt(c.point.snr_db) + "dB " + c.selector + "=" +
                   fmt(c.over_event_rate()) + "<" + fmt(lo);
    }
  }
  r.seconds = since(t0);
  r.passed = bad == 0 && floor_bad == 0 && checked > 0 && floor_checked > 0;
  r.observed = std::to_string(checked - bad) + "/" + std::to_string(checked) +
               " RRT cells within envelope (tightest: " + worst + "); " +
               std::to_string(floor_checked - floor_bad) + "/" +
               std::to_string(floor_checked) + " fig3a floor cells" + floor_obs;
  r.expected = "freq <= alpha + 3 sigma everywhere; freq >= alpha/p - 3 sigma at >= 20 dB";
  return r;
}

CriterionResult c3(Context& ctx) {
  CriterionResult r{3, "high-SNR behaviour of fig3a", false, "", "", 0};
  const auto t0 = Clock::now();
  const auto& s = ctx.summary("fig3a");
  bool ok = true;
  std::string obs;
  for (const auto& [sel, a] : {std::pair<const char*, double>{"rrt(0.1)", 0.1},
                               {"rrt(0.01)", 0.01}}) {
    const auto* c = s.find(GridPoint{20, 10, 3, 30.0}, sel);
    if (c == nullptr) throw std::logic_error("fig3a lacks the 30 dB point");
    ok = ok && c->p_over() <= a && c->p_under() <= 0.01;
    obs += std::string(sel) + " @30dB P_O=" + fmt(c->p_over()) +
           " P_U=" + fmt(c->p_under()) + "; ";
  }
  double lo = 1.0, hi = 0.0, hi_snr = 0.0;
  for (const auto& c : s.cells) {
    if (c.selector != "rrt(0.1)" || c.point.snr_db < 0.0) continue;
    lo = std::min(lo, c.p_over());
    if (c.p_over() > hi) {
      hi = c.p_over();
      hi_snr = c.point.snr_db;
    }
  }
  ok = ok && lo >= 0.01 && hi <= 0.1;
  obs += "rrt(0.1) P_O over SNR >= 0 dB in [" + fmt(lo) + ", " + fmt(hi) +
         "] (max at " + fmt(hi_snr) + " dB)";
  r.seconds = since(t0);
  r.passed = ok;
  r.observed = obs;
  r.expected = "P_O <= alpha, P_U <= 0.01 at 30 dB; rrt(0.1) P_O in [0.01, 0.1] for SNR >= 0 dB";
  return r;
}

CriterionResult c4(Context&) {
  CriterionResult r{4, "large-sample threshold limits", false, "", "", 0};
  const auto t0 = Clock::now();
  const double a1 = rrt_threshold(100000, 30000, 10000, 0.1);
  const double a2 = rrt_threshold_log_alpha(10000, 10, 5, -10000.0);
  const double a3 = rrt_threshold_log_alpha(1000, 10, 5, -1e6);
  const double ex = rrt_threshold(10000, 3000, 1000, 0.1);
  const double as = rrt_threshold_asymptotic(10000, 3000, 1000, 0.1);
  const double e2 = std::exp(-2.0);
  r.passed = a1 >= 0.99 && std::abs(a2 - e2) <= 1e-2 && a3 <= 1e-3 &&
             std::abs(ex - as) <= 1e-3;
  r.seconds = since(t0);
  r.observed = "A1=" + fmt(a1, 6) + " A2=" + fmt(a2, 6) + " A3=" + fmt(a3, 6) +
               " |exact-asym|=" + fmt(std::abs(ex - as), 3);
  r.expected = "A1 >= 0.99, |A2 - " + fmt(e2, 6) +
               "| <= 1e-2, A3 <= 1e-3, |exact-asym| <= 1e-3";
  return r;
}

CriterionResult c5(Context& ctx) {
  CriterionResult r{5, "large-sample consistency (fig3b-left)", false, "", "", 0};
  const auto t0 = Clock::now();
  const auto& s = ctx.summary("fig3b-left");
  const double secs = ctx.seconds("fig3b-left");
  const auto pts = points(s);
  bool ok = true;
  std::string obs = "rrt(1/sqrt(n)) PCS:";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& c = cell(s, pts[i], "rrt(1/sqrt(n))");
    obs += " n=" + std::to_string(pts[i].n) + ":" + fmt(c.pcs());
    if (i > 0) {
      const auto& prev = cell(s, pts[i - 1], "rrt(1/sqrt(n))");
      if (c.pcs() < prev.pcs() - (prev.ci_halfwidth() + c.ci_halfwidth())) {
        ok = false;
      }
    }
  }
  const auto& last = cell(s, pts.back(), "rrt(1/sqrt(n))");
  const auto& fixed = cell(s, pts.back(), "rrt(0.1)");
  ok = ok && pts.back().n == 10000 && last.pcs() >= 0.99 &&
       fixed.pcs() >= 1.0 - 0.1;
  const double limit = ctx.full() ? 600.0 : 60.0;
  ok = ok && secs < limit;
  r.seconds = since(t0);
  r.passed = ok;
  r.observed = obs + "; rrt(0.1) PCS at n=" + std::to_string(pts.back().n) +
               ": " + fmt(fixed.pcs()) + "; " + fmt(secs, 3) + "s";
  r.expected = "PCS(1/sqrt(n)) >= 0.99 at n=10000 and nondecreasing within CI; "
               "rrt(0.1) PCS >= 0.9; < " + fmt(limit, 3) + "s";
  return r;
}

CriterionResult c6(Context& ctx) {
  CriterionResult r{6, "residual ratio laws", false, "", "", 0};
  const auto t0 = Clock::now();
  constexpr int n = 30, p = 20, k0 = 5, samples = 10000;
  const auto base = ctx.regime("fig1");
  const Eigen::MatrixXd x = gen_fixed_design(n, p, base.design, ctx.seed());

  std::vector<std::vector<double>> rr(p);
  for (auto& v : rr) v.reserve(samples);
  Eigen::VectorXd y(n);
  for (int t = 0; t < samples; ++t) {
    Rng rng(derive_seed(ctx.seed(), 0, static_cast<std::uint64_t>(t),
                        Stream::kNoise));
    for (int i = 0; i < n; ++i) y[i] = rng.normal();
    const auto prof = residual_profile(x, y);
    for (int k = 0; k < p; ++k) rr[k].push_back(prof.ratios[k]);
  }
  const double crit = ks_critical_value(samples, 0.01);
  int ks_pass = 0;
  double worst = 0.0;
  int worst_k = 0;
  for (int k = 1; k <= p; ++k) {
    const BetaParams law = BetaParams::residual_ratio(n, k);
    const double d = ks_statistic(rr[k - 1], [&](double v) {
      return beta_cdf(law, std::clamp(v, 0.0, 1.0));
    });
    if (d < crit) ++ks_pass;
    if (d > worst) {
      worst = d;
      worst_k = k;
    }
  }

  // RR(k0) medians under signal at 0 and 20 dB, same X.
  auto median_rr = [&](double snr) {
    std::vector<double> v;
    v.reserve(samples);
    for (int t = 0; t < samples; ++t) {
      const auto prob =
          gen_problem(x, CoefModel{CoefKind::kDense, k0}, NoiseSpec::snr(snr),
                      ctx.seed(), static_cast<std::uint64_t>(t));
      v.push_back(residual_profile(prob).ratios[k0 - 1]);
    }
    std::nth_element(v.begin(), v.begin() + samples / 2, v.end());
    return v[samples / 2];
  };
  const double m0 = median_rr(0.0);
  const double m20 = median_rr(20.0);

  r.passed = ks_pass == p && m20 < m0;
  r.seconds = since(t0);
  r.observed = std::to_string(ks_pass) + "/" + std::to_string(p) +
               " KS tests pass (max D=" + fmt(worst) + " at k=" +
               std::to_string(worst_k) + "); median RR(5) 0dB=" + fmt(m0) +
               " 20dB=" + fmt(m20);
  r.expected = "every D < " + fmt(crit) + " (level 0.01, N=10000); median at 20dB < median at 0dB";
  return r;
}

CriterionResult c7(Context& ctx) {
  CriterionResult r{7, "oracle equivalence and quantile identities", false, "", "", 0};
  const auto t0 = Clock::now();
  constexpr int n = 50, p = 30;
  double worst_lin = 0.0;
  Rng rng(derive_seed(ctx.seed(), 0, 7, Stream::kDesign));
  for (int inst = 0; inst < 100; ++inst) {
    Eigen::MatrixXd x(n, p);
    Eigen::VectorXd y(n);
    for (int j = 0; j < p; ++j) {
      for (int i = 0; i < n; ++i) x(i, j) = rng.normal();
    }
    for (int i = 0; i < n; ++i) y[i] = rng.normal();
    const auto prof = residual_profile(x, y);
    for (int k = 1; k <= p; ++k) {
      const double o = projector_oracle(x, k, y);
      worst_lin = std::max(worst_lin, std::abs(prof.sq_norms[k] - o) / o);
    }
  }

  double worst_rt = 0.0;
  int grid = 0;
  for (int ia = 1; ia <= 40; ++ia) {
    const BetaParams law(0.5 * ia, 0.5);
    for (int j = 1; j <= 25; ++j) {
      const double q = j / 26.0;
      worst_rt = std::max(worst_rt,
                          std::abs(beta_cdf(law, beta_inv_cdf(law, q)) - q));
      ++grid;
    }
  }

  const double pi = std::acos(-1.0);
  double worst_id = 0.0;
  for (int j = 1; j <= 99; ++j) {
    const double q = j / 100.0;
    const double arcsine = std::pow(std::sin(pi * q / 2.0), 2);
    worst_id = std::max(worst_id,
                        std::abs(beta_inv_cdf(BetaParams(0.5, 0.5), q) - arcsine));
    const double a1 = 1.0 - (1.0 - q) * (1.0 - q);
    worst_id = std::max(worst_id,
                        std::abs(beta_inv_cdf(BetaParams(1.0, 0.5), q) - a1));
  }
  for (double a : {0.5, 1.0, 2.5, 7.0, 30.0, 400.0}) {
    worst_id = std::max(worst_id,
                        std::abs(beta_inv_cdf(BetaParams(a, a), 0.5) - 0.5));
    worst_id = std::max(worst_id,
                        std::abs(beta_cdf(BetaParams(a, a), 0.5) - 0.5));
  }

  r.passed = worst_lin <= 1e-8 && worst_rt <= 1e-12 && worst_id <= 1e-12;
  r.seconds = since(t0);
  r.observed = "linreg rel err " + fmt(worst_lin, 3) + "; round trip " +
               fmt(worst_rt, 3) + " over " + std::to_string(grid) +
               " points; identities " + fmt(worst_id, 3);
  r.expected = "<= 1e-8; <= 1e-12; <= 1e-12";
  return r;
}

CriterionResult c8(Context& ctx) {
  CriterionResult r{8, "relative performance against AIC/BIC/HSC", false, "", "", 0};
  const auto t0 = Clock::now();
  bool ok = true;
  std::string obs;
  {
    const auto& s = ctx.summary("fig4d");
    double min_margin = 1.0;
    for (const auto& pt : points(s)) {
      if (pt.snr_db < 0.0) continue;
      const double rrt = cell(s, pt, "rrt(0.1)").pcs();
      const double best = std::max(cell(s, pt, "aic").pcs(), cell(s, pt, "bic").pcs());
      min_margin = std::min(min_margin, rrt - best);
    }
    ok = ok && min_margin >= 0.05;
    obs = "fig4d min margin over AIC/BIC " + fmt(min_margin);
  }
  for (const char* name : {"fig5a", "fig5b", "fig5c", "fig5d"}) {
    const auto& s = ctx.summary(name);
    int bad = 0, total = 0;
    double worst = 1.0;
    double worst_snr = 0.0;
    for (const auto& pt : points(s)) {
      const auto& rc = cell(s, pt, "rrt(0.1)");
      const double best = std::max({cell(s, pt, "aic").pcs(), cell(s, pt, "bic").pcs(),
                                    cell(s, pt, "hsc").pcs()});
      const double slack = rc.pcs() - (best - rc.ci_halfwidth());
      ++total;
      if (slack < 0.0) ++bad;
      if (slack < worst) {
        worst = slack;
        worst_snr = pt.snr_db;
      }
    }
    ok = ok && bad == 0;
    obs += std::string("; ") + name + " " + std::to_string(total - bad) + "/" +
           std::to_string(total) + " points (worst " + fmt(worst) + " at " +
           fmt(worst_snr) + " dB)";
  }
  r.seconds = since(t0);
  r.passed = ok;
  r.observed = obs;
  r.expected = "fig4d margin >= 0.05 at SNR >= 0 dB; fig5 rrt(0.1) >= max(AIC,BIC,HSC) - CI everywhere";
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CriterionResult c9(Context& ctx) {
  CriterionResult r{9, "deterministic experiment output", false, "", "", 0};
  const auto t0 = Clock::now();
  const auto dir = std::filesystem::temp_directory_path() /
                   ("mos-validate-" + std::to_string(Clock::now().time_since_epoch().count()));
  std::filesystem::create_directories(dir);
  std::vector<std::string> bodies;
  std::string codes;
  int run_id = 0;
  for (int w : {1, 4, 1}) {
    ExperimentArgs a;
    a.regime = "fig3a";
    a.seed = 7;
    a.workers = w;
    if (!ctx.full()) a.trials = ctx.trials();
    const auto path = dir / ("run" + std::to_string(run_id++) + ".csv");
    a.out = path.string();
    std::ostringstream sink;
    const int code = cmd_experiment(a, sink, sink);
    codes += std::to_string(code);
    bodies.push_back(code == kExitOk ? slurp(path) : std::string());
  }
  std::filesystem::remove_all(dir);
  const bool same = !bodies[0].empty() && bodies[0] == bodies[1] &&
                    bodies[0] == bodies[2];
  r.passed = same && codes == "000";
  r.seconds = since(t0);
  r.observed = std::string(same ? "identical" : "different") + " CSV (" +
               std::to_string(bodies[0].size()) +
               " bytes) for workers 1/4/1, exit codes " + codes;
  r.expected = "identical bytes, exit 0";
  return r;
}

}  // namespace

std::vector<CriterionResult> run_validation(const ValidationOptions& options,
                                            std::ostream* progress) {
  Context ctx(options);
  const std::function<CriterionResult(Context&)> criteria[kCriterionCount] = {
      c1, c2, c3, c4, c5, c6, c7, c8, c9};
  std::vector<CriterionResult> out;
  for (int i = 0; i < kCriterionCount; ++i) {
    CriterionResult r;
    try {
      r = criteria[i](ctx);
    } catch (const std::exception& e) {
      r.id = i + 1;
      r.title = "criterion " + std::to_string(i + 1);
      r.passed = false;
      r.observed = std::string("exception: ") + e.what();
      r.expected = "no exception";
    }
    if (progress != nullptr) *progress << format_result(r) << std::endl;
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << " C" << r.id << ' ' << r.title
     << " | observed: " << r.observed << " | expected: " << r.expected << " | "
     << fmt(r.seconds, 3) << 's';
  return os.str();
}

}  // namespace mos::cli
