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

#include "mos/cli/commands.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "mos/cli/config.hpp"
#include "mos/cli/csv.hpp"
#include "mos/cli/svg.hpp"
#include "mos/cli/validation.hpp"
#include "mos/error.hpp"
#include "mos/experiments.hpp"
#include "mos/linreg.hpp"
#include "mos/selectors.hpp"
#include "mos/specfun.hpp"

namespace mos::cli {
namespace {

constexpr int kDesignTrials = 10000;

bool write_file(const std::string& path, const std::string& body,
                std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot write " << path << '\n';
    return false;
  }
  f << body;
  return static_cast<bool>(f);
}

}  // namespace

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("MOS_SEED");
  if (v == nullptr || *v == '\0') return std::nullopt;
  std::uint64_t s = 0;
  const char* end = v + std::char_traits<char>::length(v);
  auto res = std::from_chars(v, end, s);
  if (res.ec != std::errc() || res.ptr != end) {
    throw std::invalid_argument(std::string("MOS_SEED='") + v +
                                "' is not an unsigned integer");
  }
  return s;
}

int cmd_estimate(const EstimateArgs& args, std::ostream& out,
                 std::ostream& err) {
  Eigen::MatrixXd x, ym;
  try {
    x = read_matrix_csv_file(args.x_path);
    ym = read_matrix_csv_file(args.y_path);
  } catch (const CsvError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  if (ym.cols() != 1) {
    err << "error: " << args.y_path << ": expected a single column, got "
        << ym.cols() << '\n';
    return kExitBadInput;
  }
  if (ym.rows() != x.rows()) {
    err << "error: " << args.y_path << " has " << ym.rows() << " rows but "
        << args.x_path << " has " << x.rows() << '\n';
    return kExitBadInput;
  }
  const int n = static_cast<int>(x.rows());
  const int p = static_cast<int>(x.cols());
  if (n <= p) {
    err << "error: estimation requires n > p (got n=" << n << ", p=" << p
        << ")\n";
    return kExitNumerical;
  }
  if (!(args.alpha > 0.0)) {
    err << "error: --alpha must be > 0\n";
    return kExitBadInput;
  }

  std::vector<SelectorConfig> selectors;
  for (const auto& c : args.criteria) {
    auto s = c == "rrt" ? std::optional<SelectorConfig>(
                              RrtSelector{AlphaRule::fixed(args.alpha)})
                        : parse_selector(c);
    if (!s) {
      err << "error: --criteria: unknown criterion '" << c << "'\n";
      return kExitBadInput;
    }
    selectors.push_back(*s);
  }

  ResidualProfile profile;
  try {
    profile = residual_profile(x, ym.col(0));
  } catch (const RankDeficiencyError& e) {
    err << "error: " << args.x_path << ": " << e.what() << '\n';
    return kExitNumerical;
  }

  std::uint64_t seed = 0;
  try {
    if (args.seed) {
      seed = *args.seed;
    } else if (auto s = env_seed()) {
      seed = *s;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }

  std::vector<SelectionOutcome> rrt_runs;
  std::vector<std::string> rrt_labels;
  out << "criterion,k_hat,alpha_used,fallback\n";
  for (const auto& sel : selectors) {
    const std::string label = selector_label(sel);
    if (auto* r = std::get_if<RrtSelector>(&sel)) {
      const auto table = r->alpha.table(n, p);
      auto res = rrt_select(profile.ratios, table, r->grid);
      out << label << ',' << res.k_hat << ',' << format_double(res.alpha_used)
          << ',' << (res.fallback ? "true" : "false") << '\n';
      rrt_runs.push_back(std::move(res));
      rrt_labels.push_back(label);
      continue;
    }
    PenaltyRule rule = PenaltyRule::aic();
    if (auto* d = std::get_if<DesignSelector>(&sel)) {
      rule = PenaltyRule::design(
          d->level, calibrate_design_penalty(n, p, d->level, kDesignTrials, seed));
    } else if (std::get<PenaltySelector>(sel).kind == PenaltyRule::Kind::kBic) {
      rule = PenaltyRule::bic();
    } else if (std::get<PenaltySelector>(sel).kind == PenaltyRule::Kind::kHsc) {
      rule = PenaltyRule::hsc();
    }
    try {
      const auto res = itc_select(profile, n, rule);
      out << label << ',' << res.k_hat << ",,\n";
    } catch (const DegenerateFitError& e) {
      out << label << ",,,\n";
      err << "warning: " << label << ": " << e.what() << '\n';
    }
  }
  for (std::size_t i = 0; i < rrt_runs.size(); ++i) {
    const auto& res = rrt_runs[i];
    out << '\n' << "# " << rrt_labels[i] << " trace\n";
    out << "k,rr,gamma\n";
    for (int k = 1; k <= p; ++k) {
      out << k << ',' << format_double(profile.ratios[k - 1]) << ','
          << format_double(
                 rrt_threshold_log_alpha(n, p, k, res.log_alpha_used))
          << '\n';
    }
  }
  return kExitOk;
}

int cmd_thresholds(const ThresholdsArgs& args, std::ostream& out,
                   std::ostream& err) {
  if (args.p < 1 || args.n <= args.p) {
    err << "error: thresholds require n > p >= 1 (got n=" << args.n
        << ", p=" << args.p << ")\n";
    return kExitBadInput;
  }
  if (!(args.alpha >= 0.0) || !std::isfinite(args.alpha)) {
    err << "error: --alpha must be finite and >= 0\n";
    return kExitBadInput;
  }
  out << "k,gamma_exact,gamma_asymptotic\n";
  for (int k = 1; k <= args.p; ++k) {
    out << k << ',' << format_double(rrt_threshold(args.n, args.p, k, args.alpha))
        << ','
        << format_double(
               rrt_threshold_asymptotic(args.n, args.p, k, args.alpha))
        << '\n';
  }
  return kExitOk;
}

int cmd_experiment(const ExperimentArgs& args, std::ostream& out,
                   std::ostream& err) {
  if (args.regime.has_value() == args.config.has_value()) {
    err << "error: give exactly one of --regime or --config\n";
    return kExitBadInput;
  }
  RunConfig cfg;
  try {
    if (args.regime) {
      auto r = find_regime(*args.regime);
      if (!r) {
        err << "error: --regime: unknown regime '" << *args.regime << "'\n";
        return kExitBadInput;
      }
      cfg.spec = *r;
      if (auto s = env_seed()) cfg.spec.seed = *s;
    } else {
      cfg = load_run_config(*args.config);
      // an explicit seed in the file wins over the environment
      if (!cfg.seed_set) {
        if (auto s = env_seed()) cfg.spec.seed = *s;
      }
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  ExperimentSpec& spec = cfg.spec;
  if (args.seed) spec.seed = *args.seed;
  if (args.trials) {
    if (*args.trials < 1) {
      err << "error: --trials must be >= 1\n";
      return kExitBadInput;
    }
    spec.trials = *args.trials;
  }
  const std::optional<std::string> out_path =
      args.out ? args.out
               : (cfg.out ? std::optional<std::string>(cfg.out->string())
                          : std::nullopt);
  const std::optional<std::string> svg_path =
      args.svg ? args.svg
               : (cfg.svg ? std::optional<std::string>(cfg.svg->string())
                          : std::nullopt);
  if (!out_path) {
    err << "error: --out is required (or set 'out' in the config)\n";
    return kExitBadInput;
  }
  int workers = args.workers.value_or(cfg.workers.value_or(0));
  if (workers < 0) {
    err << "error: --workers must be >= 0\n";
    return kExitBadInput;
  }
  Metric metric = Metric::kPcs;
  if (args.svg_metric == "p_over") {
    metric = Metric::kPOver;
  } else if (args.svg_metric == "p_under") {
    metric = Metric::kPUnder;
  } else if (args.svg_metric != "pcs") {
    err << "error: --svg-metric must be pcs, p_over or p_under\n";
    return kExitBadInput;
  }

  try {
    spec.validate();
    if (spec.kind == ExperimentKind::kThresholdSweep) {
      const auto rows = run_threshold_sweep(spec);
      if (!write_file(*out_path, threshold_sweep_csv(rows), err)) {
        return kExitBadInput;
      }
      if (svg_path &&
          !write_file(*svg_path, render_svg(threshold_plot(spec.name, rows)),
                      err)) {
        return kExitBadInput;
      }
      out << spec.name << ": wrote " << rows.size() << " rows to "
          << *out_path << '\n';
      return kExitOk;
    }
    const MetricSummary summary = run_experiment(spec, workers);
    if (!write_file(*out_path, experiment_csv(summary, !spec.sigma2), err)) {
      return kExitBadInput;
    }
    if (svg_path && !write_file(*svg_path,
                                render_svg(experiment_plot(summary, metric)),
                                err)) {
      return kExitBadInput;
    }
    out << spec.name << ": wrote " << summary.cells.size() << " rows to "
        << *out_path << '\n';
    if (spec.name == "fig1") {
      for (const auto& c : summary.cells) {
        out << "  snr_db=" << format_double(c.point.snr_db) << ' '
            << c.selector << ": P(RR(k) > threshold for all k > k0) = "
            << format_double(1.0 - c.over_event_rate()) << " over "
            << c.counted() << " draws\n";
      }
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const RankDeficiencyError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_validate(const ValidateArgs& args, std::ostream& out,
                 std::ostream& err) {
  ValidationOptions opt;
  if (args.level == "quick") {
    opt.level = ValidationLevel::kQuick;
  } else if (args.level == "full") {
    opt.level = ValidationLevel::kFull;
  } else {
    err << "error: --level must be quick or full\n";
    return kExitBadInput;
  }
  try {
    opt.seed = args.seed ? args.seed : env_seed();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  opt.workers = args.workers.value_or(0);
  const auto results = run_validation(opt, &out);
  int passed = 0;
  for (const auto& r : results) passed += r.passed ? 1 : 0;
  out << passed << "/" << results.size() << " criteria passed\n";
  return passed == static_cast<int>(results.size()) ? kExitOk : kExitFailure;
}

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Model order selection by residual ratio thresholding", "mos"};
  app.require_subcommand(1);

  EstimateArgs est;
  std::string criteria = "rrt";
  std::optional<std::uint64_t> est_seed;
  auto* c_est = app.add_subcommand("estimate", "Select the model order of y ~ X");
  c_est->add_option("--X", est.x_path, "Design matrix CSV (n rows, p columns)")
      ->required();
  c_est->add_option("--y", est.y_path, "Observation CSV (n rows, 1 column)")
      ->required();
  c_est->add_option("--alpha", est.alpha, "RRT level")->capture_default_str();
  c_est->add_option("--criteria", criteria,
                    "Comma list: rrt, rrt:<alpha>, aic, bic, hsc, design:<level>")
      ->capture_default_str();
  c_est->add_option("--seed", est_seed, "Seed for Design calibration");

  ThresholdsArgs thr;
  auto* c_thr = app.add_subcommand("thresholds", "Tabulate RRT thresholds");
  c_thr->add_option("--n", thr.n, "Sample count")->required();
  c_thr->add_option("--p", thr.p, "Maximum order")->required();
  c_thr->add_option("--alpha", thr.alpha, "RRT level")->required();

  ExperimentArgs exp;
  auto* c_exp = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  c_exp->add_option("--regime", exp.regime, "Builtin regime name");
  c_exp->add_option("--config", exp.config, "YAML experiment config");
  c_exp->add_option("--out", exp.out, "Output CSV path");
  c_exp->add_option("--svg", exp.svg, "Optional SVG plot path");
  c_exp->add_option("--svg-metric", exp.svg_metric, "pcs, p_over or p_under")
      ->capture_default_str();
  c_exp->add_option("--workers", exp.workers, "Worker threads (0 = all cores)");
  c_exp->add_option("--seed", exp.seed, "Experiment seed");
  c_exp->add_option("--trials", exp.trials, "Override the trial count");

  ValidateArgs val;
  auto* c_val = app.add_subcommand("validate", "Run the acceptance criteria");
  c_val->add_option("--level", val.level, "quick or full")->capture_default_str();
  c_val->add_option("--seed", val.seed, "Seed override");
  c_val->add_option("--workers", val.workers, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }

  if (c_est->parsed()) {
    est.criteria.clear();
    std::size_t start = 0;
    for (;;) {
      const auto pos = criteria.find(',', start);
      std::string item = criteria.substr(start, pos - start);
      if (!item.empty()) est.criteria.push_back(item);
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    est.seed = est_seed;
    return cmd_estimate(est, out, err);
  }
  if (c_thr->parsed()) return cmd_thresholds(thr, out, err);
  if (c_exp->parsed()) return cmd_experiment(exp, out, err);
  return cmd_validate(val, out, err);
}

}  // namespace mos::cli
