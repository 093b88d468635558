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

#include "mos/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "mos/error.hpp"
#include "mos/specfun.hpp"

namespace mos {
namespace {

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_number(std::string_view s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
  return v;
}

double ratio(std::int64_t a, std::int64_t b) {
  return b > 0 ? static_cast<double>(a) / static_cast<double>(b) : 0.0;
}

// Trials per scheduling unit.
constexpr std::uint64_t kChunk = 250;

}  // namespace

// ---- alpha rules and selector labels -------------------------------------

AlphaRule AlphaRule::fixed(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("alpha must be finite and > 0");
  }
  return AlphaRule{Kind::kFixed, alpha};
}

double AlphaRule::log_alpha(int n) const {
  const double nd = static_cast<double>(n);
  switch (kind) {
    case Kind::kFixed:
      return std::log(value);
    case Kind::kInvSqrtN:
      return -0.5 * std::log(nd);
    case Kind::kInvN:
      return -std::log(nd);
    case Kind::kInvLogN:
      return -std::log(std::log(nd));
    case Kind::kExpNegN:
      return -nd;
    case Kind::kExpNegNSq:
      return -nd * nd;
  }
  return 0.0;
}

std::string AlphaRule::label() const {
  switch (kind) {
    case Kind::kFixed:
      return shortest(value);
    case Kind::kInvSqrtN:
      return "1/sqrt(n)";
    case Kind::kInvN:
      return "1/n";
    case Kind::kInvLogN:
      return "1/log(n)";
    case Kind::kExpNegN:
      return "exp(-n)";
    case Kind::kExpNegNSq:
      return "exp(-n^2)";
  }
  return "?";
}

ThresholdTable AlphaRule::table(int n, int p) const {
  if (kind == Kind::kFixed) return ThresholdTable::build(n, p, value);
  return ThresholdTable::build_log(n, p, log_alpha(n));
}

std::optional<AlphaRule> AlphaRule::parse(std::string_view s) {
  for (auto k : {Kind::kInvSqrtN, Kind::kInvN, Kind::kInvLogN, Kind::kExpNegN,
                 Kind::kExpNegNSq}) {
    AlphaRule r{k, 0.0};
    if (s == r.label()) return r;
  }
  auto v = parse_number(s);
  if (!v || !(*v > 0.0) || !std::isfinite(*v)) return std::nullopt;
  return AlphaRule{Kind::kFixed, *v};
}

std::string selector_label(const SelectorConfig& s) {
  if (auto* r = std::get_if<RrtSelector>(&s)) {
    return "rrt(" + r->alpha.label() + ")";
  }
  if (auto* d = std::get_if<DesignSelector>(&s)) {
    return "design(" + shortest(d->level) + ")";
  }
  switch (std::get<PenaltySelector>(s).kind) {
    case PenaltyRule::Kind::kAic:
      return "aic";
    case PenaltyRule::Kind::kBic:
      return "bic";
    case PenaltyRule::Kind::kHsc:
      return "hsc";
    default:
      return "?";
  }
}

std::optional<SelectorConfig> parse_selector(std::string_view s) {
  if (s == "aic") return PenaltySelector{PenaltyRule::Kind::kAic};
  if (s == "bic") return PenaltySelector{PenaltyRule::Kind::kBic};
  if (s == "hsc") return PenaltySelector{PenaltyRule::Kind::kHsc};
  if (s == "rrt") return RrtSelector{AlphaRule::fixed(0.1)};

  auto arg_of = [&](std::string_view head) -> std::optional<std::string_view> {
    if (s.substr(0, head.size()) != head) return std::nullopt;
    std::string_view rest = s.substr(head.size());
    if (!rest.empty() && rest.front() == ':') return rest.substr(1);
    if (rest.size() >= 2 && rest.front() == '(' && rest.back() == ')') {
      return rest.substr(1, rest.size() - 2);
    }
    return std::nullopt;
  };
  if (auto a = arg_of("rrt")) {
    auto rule = AlphaRule::parse(*a);
    if (!rule) return std::nullopt;
    return RrtSelector{*rule};
  }
  if (auto a = arg_of("design")) {
    auto v = parse_number(*a);
    if (!v || !(*v > 0.0 && *v <= 1.0)) return std::nullopt;
    return DesignSelector{*v};
  }
  return std::nullopt;
}

// ---- spec ------------------------------------------------------------------

void ExperimentSpec::validate() const {
  if (name.empty()) throw DomainError("name: must be nonempty");
  if (grid.empty()) throw DomainError("grid: needs at least one point");
  if (kind == ExperimentKind::kMonteCarlo && trials < 1) {
    throw DomainError("trials: must be >= 1");
  }
  if (selectors.empty()) throw DomainError("selectors: needs at least one");
  for (const auto& g : grid) {
    if (!(g.n > g.p && g.p >= g.k0 && g.k0 >= 1)) {
      throw DomainError("grid: point (n=" + std::to_string(g.n) +
                        ", p=" + std::to_string(g.p) +
                        ", k0=" + std::to_string(g.k0) +
                        ") violates n > p >= k0 >= 1");
    }
    if (!std::isfinite(g.snr_db)) throw DomainError("snr_db: must be finite");
  }
  if (sigma2 && !(*sigma2 >= 0.0 && std::isfinite(*sigma2))) {
    throw DomainError("sigma2: must be finite and >= 0");
  }
  for (const auto& s : selectors) {
    if (kind == ExperimentKind::kThresholdSweep &&
        !std::holds_alternative<RrtSelector>(s)) {
      throw DomainError("selectors: threshold sweeps accept rrt entries only");
    }
    if (auto* r = std::get_if<RrtSelector>(&s); r && r->grid < 1) {
      throw DomainError("selectors: rrt fallback grid must be >= 1");
    }
    if (auto* d = std::get_if<DesignSelector>(&s);
        d && d->calibration_trials < 10000) {
      throw DomainError("selectors: design calibration needs >= 10^4 trials");
    }
  }
}

// ---- metrics ---------------------------------------------------------------

std::pair<double, double> wilson_interval(std::int64_t k, std::int64_t n) {
  if (n <= 0) return {0.0, 1.0};
  const double nd = static_cast<double>(n);
  const double ph = static_cast<double>(k) / nd;
  const double z2 = kWilsonZ * kWilsonZ;
  const double denom = 1.0 + z2 / nd;
  const double centre = (ph + z2 / (2.0 * nd)) / denom;
  const double half =
      kWilsonZ / denom * std::sqrt(ph * (1.0 - ph) / nd + z2 / (4.0 * nd * nd));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double CellResult::pcs() const noexcept { return ratio(correct, counted()); }
double CellResult::p_over() const noexcept { return ratio(over, counted()); }
double CellResult::p_under() const noexcept { return ratio(under, counted()); }
double CellResult::fallback_rate() const noexcept {
  return ratio(fallback, counted());
}
double CellResult::over_event_rate() const noexcept {
  return ratio(over_event, counted());
}
double CellResult::ci_halfwidth() const noexcept {
  auto [lo, hi] = wilson_interval(correct, counted());
  return 0.5 * (hi - lo);
}

const CellResult* MetricSummary::find(const GridPoint& pt,
                                      std::string_view selector) const {
  for (const auto& c : cells) {
    if (c.point.n == pt.n && c.point.p == pt.p && c.point.k0 == pt.k0 &&
        c.point.snr_db == pt.snr_db && c.selector == selector) {
      return &c;
    }
  }
  return nullptr;
}

// ---- prepared experiment -----------------------------------------------------

std::uint64_t point_seed(std::uint64_t seed, std::size_t point) noexcept {
  return derive_seed(seed, point, 0, Stream::kPoint);
}

PreparedExperiment::PreparedExperiment(ExperimentSpec spec)
    : spec_(std::move(spec)) {
  spec_.validate();
  std::map<std::tuple<int, int, double, int>, double> v_cache;
  std::map<std::pair<int, int>, Eigen::MatrixXd> design_cache;
  points_.resize(spec_.grid.size());
  for (std::size_t i = 0; i < spec_.grid.size(); ++i) {
    const GridPoint& g = spec_.grid[i];
    Point& pt = points_[i];
    pt.seed = point_seed(spec_.seed, i);
    if (!spec_.redraw_design) {
      // one matrix per (n, p), shared across the SNR axis
      auto key = std::make_pair(g.n, g.p);
      auto it = design_cache.find(key);
      if (it == design_cache.end()) {
        it = design_cache
                 .emplace(key, gen_fixed_design(g.n, g.p, spec_.design,
                                                spec_.seed))
                 .first;
      }
      pt.fixed_design = it->second;
    }
    for (const auto& sel : spec_.selectors) {
      ThresholdTable table;
      PenaltyRule rule = PenaltyRule::aic();
      if (auto* r = std::get_if<RrtSelector>(&sel)) {
        table = r->alpha.table(g.n, g.p);
      } else if (auto* d = std::get_if<DesignSelector>(&sel)) {
        auto key = std::make_tuple(g.n, g.p, d->level, d->calibration_trials);
        auto it = v_cache.find(key);
        if (it == v_cache.end()) {
          const double v = calibrate_design_penalty(
              g.n, g.p, d->level, d->calibration_trials, spec_.seed);
          it = v_cache.emplace(key, v).first;
        }
        rule = PenaltyRule::design(d->level, it->second);
      } else {
        switch (std::get<PenaltySelector>(sel).kind) {
          case PenaltyRule::Kind::kBic:
            rule = PenaltyRule::bic();
            break;
          case PenaltyRule::Kind::kHsc:
            rule = PenaltyRule::hsc();
            break;
          default:
            break;
        }
      }
      pt.tables.push_back(std::move(table));
      pt.rules.push_back(std::move(rule));
    }
  }
}

const ThresholdTable& PreparedExperiment::table(std::size_t point,
                                                std::size_t selector) const {
  return points_.at(point).tables.at(selector);
}

double PreparedExperiment::design_v(std::size_t point,
                                    std::size_t selector) const {
  return points_.at(point).rules.at(selector).v();
}

RegressionProblem PreparedExperiment::problem(std::size_t point,
                                              std::uint64_t trial) const {
  const GridPoint& g = spec_.grid.at(point);
  const Point& pt = points_.at(point);
  const CoefModel coef{spec_.coef, g.k0};
  const NoiseSpec noise = spec_.sigma2 ? NoiseSpec::variance(*spec_.sigma2)
                                       : NoiseSpec::snr(g.snr_db);
  if (pt.fixed_design) {
    return gen_problem(*pt.fixed_design, coef, noise, pt.seed, trial);
  }
  return gen_problem(g.n, g.p, spec_.design, coef, noise, pt.seed, trial);
}

std::vector<TrialOutcome> PreparedExperiment::run_trial(
    std::size_t point, std::uint64_t trial) const {
  const GridPoint& g = spec_.grid.at(point);
  const Point& pt = points_[point];
  const RegressionProblem prob = problem(point, trial);
  const ResidualProfile profile = residual_profile(prob);

  std::vector<TrialOutcome> out(spec_.selectors.size());
  for (std::size_t s = 0; s < spec_.selectors.size(); ++s) {
    TrialOutcome& o = out[s];
    o.k0 = g.k0;
    if (auto* r = std::get_if<RrtSelector>(&spec_.selectors[s])) {
      const ThresholdTable& table = pt.tables[s];
      const SelectionOutcome sel = rrt_select(profile.ratios, table, r->grid);
      o.k_hat = sel.k_hat;
      o.fallback = sel.fallback;
      for (int k = g.k0 + 1; k <= g.p; ++k) {
        if (profile.ratios[k - 1] < table.gamma[k - 1]) {
          o.over_event = true;
          break;
        }
      }
    } else {
      try {
        o.k_hat = itc_select(profile, g.n, pt.rules[s]).k_hat;
      } catch (const DegenerateFitError&) {
        o.excluded = true;
      }
    }
  }
  return out;
}

// ---- runner ------------------------------------------------------------------

MetricSummary run_experiment(const ExperimentSpec& spec, int workers) {
  return run_experiment(PreparedExperiment(spec), workers);
}

MetricSummary run_experiment(const PreparedExperiment& prepared, int workers) {
  const ExperimentSpec& spec = prepared.spec();
  if (spec.kind != ExperimentKind::kMonteCarlo) {
    throw DomainError("run_experiment: " + spec.name +
                      " is a threshold sweep; use run_threshold_sweep");
  }
  const std::size_t n_sel = spec.selectors.size();
  const std::uint64_t trials = static_cast<std::uint64_t>(spec.trials);
  const std::uint64_t chunks_per_point = (trials + kChunk - 1) / kChunk;
  const std::size_t n_units = spec.grid.size() * chunks_per_point;

  // partial counts per work unit, reduced afterwards in unit order
  std::vector<std::vector<CellResult>> partial(n_units);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto work = [&] {
    for (;;) {
      const std::size_t u = next.fetch_add(1);
      if (u >= n_units) return;
      try {
        const std::size_t point = u / chunks_per_point;
        const std::uint64_t first = (u % chunks_per_point) * kChunk;
        const std::uint64_t last = std::min(trials, first + kChunk);
        std::vector<CellResult> acc(n_sel);
        for (std::uint64_t t = first; t < last; ++t) {
          const auto outcomes = prepared.run_trial(point, t);
          for (std::size_t s = 0; s < n_sel; ++s) {
            const TrialOutcome& o = outcomes[s];
            CellResult& c = acc[s];
            ++c.trials;
            if (o.excluded) {
              ++c.excluded;
              continue;
            }
            if (o.k_hat == o.k0) {
              ++c.correct;
            } else if (o.k_hat > o.k0) {
              ++c.over;
            } else {
              ++c.under;
            }
            c.fallback += o.fallback ? 1 : 0;
            c.over_event += o.over_event ? 1 : 0;
          }
        }
        partial[u] = std::move(acc);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(n_units);
        return;
      }
    }
  };

  if (workers <= 0) {
    workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(workers), n_units));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  MetricSummary summary;
  summary.name = spec.name;
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    for (std::size_t s = 0; s < n_sel; ++s) {
      CellResult c;
      c.point = spec.grid[i];
      c.selector = selector_label(spec.selectors[s]);
      if (std::holds_alternative<RrtSelector>(spec.selectors[s])) {
        c.is_rrt = true;
        c.log_alpha = prepared.table(i, s).log_alpha;
      } else if (std::holds_alternative<DesignSelector>(spec.selectors[s])) {
        c.design_v = prepared.design_v(i, s);
      }
      for (std::uint64_t ch = 0; ch < chunks_per_point; ++ch) {
        const CellResult& part = partial[i * chunks_per_point + ch][s];
        c.trials += part.trials;
        c.correct += part.correct;
        c.over += part.over;
        c.under += part.under;
        c.excluded += part.excluded;
        c.fallback += part.fallback;
        c.over_event += part.over_event;
      }
      summary.cells.push_back(std::move(c));
    }
  }
  return summary;
}

std::vector<ThresholdRow> run_threshold_sweep(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<ThresholdRow> rows;
  for (const auto& g : spec.grid) {
    for (const auto& sel : spec.selectors) {
      const auto& r = std::get<RrtSelector>(sel);
      const double la = r.alpha.log_alpha(g.n);
      ThresholdRow row;
      row.n = g.n;
      row.p = g.p;
      row.k0 = g.k0;
      row.selector = selector_label(sel);
      row.gamma_exact = rrt_threshold_log_alpha(g.n, g.p, g.k0, la);
      row.gamma_asymptotic =
          rrt_threshold_asymptotic_log_alpha(g.n, g.p, g.k0, la);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::optional<ExperimentSpec> find_regime(std::string_view name) {
  for (auto& r : builtin_regimes()) {
    if (r.name == name) return r;
  }
  return std::nullopt;
}

}  // namespace mos
