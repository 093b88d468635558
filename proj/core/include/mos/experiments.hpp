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

#ifndef MOS_EXPERIMENTS_HPP_
#define MOS_EXPERIMENTS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mos/selectors.hpp"
#include "mos/simulate.hpp"

namespace mos {

// RRT level, possibly a function of n.
struct AlphaRule {
  enum class Kind { kFixed, kInvSqrtN, kInvN, kInvLogN, kExpNegN, kExpNegNSq };
  Kind kind = Kind::kFixed;
  double value = 0.1;  // kFixed only

  static AlphaRule fixed(double alpha);
  double log_alpha(int n) const;
  // "0.1", "1/sqrt(n)", "1/n", "1/log(n)", "exp(-n)", "exp(-n^2)"
  std::string label() const;
  static std::optional<AlphaRule> parse(std::string_view s);

  // Thresholds at this level; fixed levels keep their exact value.
  ThresholdTable table(int n, int p) const;
};

struct RrtSelector {
  AlphaRule alpha;
  int grid = kDefaultFallbackGrid;
};

// AIC, BIC or HSC.
struct PenaltySelector {
  PenaltyRule::Kind kind = PenaltyRule::Kind::kAic;
};

struct DesignSelector {
  double level = 0.1;
  int calibration_trials = 10000;
};

using SelectorConfig = std::variant<RrtSelector, PenaltySelector, DesignSelector>;

// "rrt(0.1)", "rrt(1/sqrt(n))", "aic", "bic", "hsc", "design(0.1)".
std::string selector_label(const SelectorConfig& s);
// Accepts the labels above plus the short forms "rrt" (alpha 0.1),
// "rrt:<alpha>" and "design:<level>".
std::optional<SelectorConfig> parse_selector(std::string_view s);

struct GridPoint {
  int n = 0;
  int p = 0;
  int k0 = 0;
  double snr_db = 0.0;
};

enum class ExperimentKind {
  kMonteCarlo,
  kThresholdSweep,  // tabulates Gamma(k0) only; no trials
};

struct ExperimentSpec {
  std::string name;
  ExperimentKind kind = ExperimentKind::kMonteCarlo;
  std::vector<GridPoint> grid;
  DesignModel design = DesignModel::kGaussianUnitCols;
  CoefKind coef = CoefKind::kDense;
  bool redraw_design = true;
  int trials = 10000;
  std::uint64_t seed = 0;
  std::vector<SelectorConfig> selectors;
  // Replaces the SNR mapping with a fixed noise variance (0 = noiseless).
  std::optional<double> sigma2;

  // Throws DomainError naming the offending field.
  void validate() const;
};

// 95% Wilson score interval for k successes in n trials.
std::pair<double, double> wilson_interval(std::int64_t k, std::int64_t n);
inline constexpr double kWilsonZ = 1.959963984540054;

struct CellResult {
  GridPoint point;
  std::string selector;
  bool is_rrt = false;
  double log_alpha = 0.0;  // RRT: level at this n
  double design_v = 0.0;   // Design: calibrated penalty
  std::int64_t trials = 0;
  std::int64_t correct = 0;
  std::int64_t over = 0;
  std::int64_t under = 0;
  std::int64_t excluded = 0;    // degenerate ITC fits
  std::int64_t fallback = 0;    // RRT fallback invocations
  std::int64_t over_event = 0;  // RRT: some k > k0 with RR(k) < Gamma(k)

  std::int64_t counted() const noexcept { return trials - excluded; }
  double pcs() const noexcept;
  double p_over() const noexcept;
  double p_under() const noexcept;
  double ci_halfwidth() const noexcept;  // of pcs
  double fallback_rate() const noexcept;
  double over_event_rate() const noexcept;
};

struct MetricSummary {
  std::string name;
  // point-major, selector-minor
  std::vector<CellResult> cells;

  const CellResult* find(const GridPoint& pt, std::string_view selector) const;
};

struct TrialOutcome {
  int k_hat = 0;
  int k0 = 0;
  bool excluded = false;
  bool fallback = false;
  bool over_event = false;
};

// Per-point state computed once: thresholds, calibrated penalties, and the
// shared design matrix when it is not redrawn.
class PreparedExperiment {
 public:
  explicit PreparedExperiment(ExperimentSpec spec);

  const ExperimentSpec& spec() const noexcept { return spec_; }

  // Every selector sees the same (X, y). Deterministic in
  // (spec.seed, point, trial).
  std::vector<TrialOutcome> run_trial(std::size_t point,
                                      std::uint64_t trial) const;

  // Regenerates the problem run_trial would use.
  RegressionProblem problem(std::size_t point, std::uint64_t trial) const;

  const ThresholdTable& table(std::size_t point, std::size_t selector) const;
  double design_v(std::size_t point, std::size_t selector) const;

 private:
  struct Point {
    std::uint64_t seed = 0;
    std::optional<Eigen::MatrixXd> fixed_design;
    std::vector<ThresholdTable> tables;  // per selector (RRT entries only)
    std::vector<PenaltyRule> rules;      // per selector (ITC entries only)
  };

  ExperimentSpec spec_;
  std::vector<Point> points_;
};

// Seed of grid point `point`.
std::uint64_t point_seed(std::uint64_t seed, std::size_t point) noexcept;

// Runs spec.trials trials at each grid point with `workers` threads
// (0 = hardware concurrency). Results do not depend on `workers`.
MetricSummary run_experiment(const ExperimentSpec& spec, int workers = 1);
MetricSummary run_experiment(const PreparedExperiment& prepared,
                             int workers = 1);

struct ThresholdRow {
  int n = 0;
  int p = 0;
  int k0 = 0;
  std::string selector;
  double gamma_exact = 0.0;
  double gamma_asymptotic = 0.0;
};

// Gamma(k0) and its small-z expansion at each point for each RRT selector.
std::vector<ThresholdRow> run_threshold_sweep(const ExperimentSpec& spec);

// fig1, fig2a-c, fig3a, fig3b-left/right, fig4a-d, fig5a-d, fig6a-d.
std::vector<ExperimentSpec> builtin_regimes();
std::optional<ExperimentSpec> find_regime(std::string_view name);

}  // namespace mos

#endif  // MOS_EXPERIMENTS_HPP_
