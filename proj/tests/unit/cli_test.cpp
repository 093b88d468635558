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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mos/cli/commands.hpp"
#include "mos/cli/config.hpp"
#include "mos/cli/csv.hpp"
#include "mos/cli/svg.hpp"
#include "mos/cli/validation.hpp"
#include "mos/experiments.hpp"
#include "mos/simulate.hpp"
#include "mos/specfun.hpp"

namespace mos::cli {
namespace {

namespace fs = std::filesystem;

const std::string kData = MOS_TEST_DATA_DIR;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("mos-cli-test-" + std::to_string(::testing::UnitTest::GetInstance()
                                                   ->random_seed()) +
             "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& s) const { return path_ / s; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& body) {
  std::ofstream(p, std::ios::binary) << body;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

int run_args(std::vector<std::string> args, std::string* out_s = nullptr,
             std::string* err_s = nullptr) {
  args.insert(args.begin(), "mos");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_s) *out_s = out.str();
  if (err_s) *err_s = err.str();
  return code;
}

TEST(Csv, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5e-7}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(1.0), "1");
}

TEST(Csv, ReadsMatrixAndSkipsBlankLines) {
  std::istringstream in("1,2\n\n3, 4\n");
  const auto m = read_matrix_csv(in, "m.csv");
  ASSERT_EQ(m.rows(), 2);
  ASSERT_EQ(m.cols(), 2);
  EXPECT_EQ(m(1, 1), 4.0);
}

TEST(Csv, ErrorsNameRowAndColumn) {
  try {
    read_matrix_csv_file(kData + "/malformed_X.csv");
    FAIL();
  } catch (const CsvError& e) {
    EXPECT_EQ(e.row(), 3);
    EXPECT_EQ(e.column(), 2);
    EXPECT_NE(std::string(e.what()).find("row 3, column 2"), std::string::npos);
  }
  std::istringstream ragged("1,2\n3\n");
  try {
    read_matrix_csv(ragged, "r.csv");
    FAIL();
  } catch (const CsvError& e) {
    EXPECT_EQ(e.row(), 2);
  }
  std::istringstream nan("1,nan\n");
  EXPECT_THROW(read_matrix_csv(nan, "n.csv"), CsvError);
}

TEST(Config, MissingTrialsNamesField) {
  try {
    parse_run_config("n: 20\np: 10\nk0: 3\nsnr_db: 0\nselectors: [aic]\n", ".");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "trials");
    EXPECT_NE(std::string(e.what()).find("'trials'"), std::string::npos);
  }
}

TEST(Config, RejectsUnknownAndBadValues) {
  EXPECT_THROW(parse_run_config("regime: fig3a\nbogus: 1\n", "."), ConfigError);
  EXPECT_THROW(parse_run_config("regime: nope\n", "."), ConfigError);
  try {
    parse_run_config("regime: fig3a\nselectors: [rrt(0.1), pal]\n", ".");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "selectors");
  }
  try {
    parse_run_config("trials: 10\nn: 10\np: 10\nk0: 3\nsnr_db: 0\nselectors: [aic]\n", ".");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "grid");
  }
}

TEST(Config, InlineSpecGridAndPaths) {
  const auto cfg = parse_run_config(
      "name: demo\ntrials: 50\nseed: 4\nn: [20, 40]\np: 10\nk0: 3\n"
      "snr_db: [0, 10, 20]\ndesign: ORTHONORMAL\ncoef: SPARSE\n"
      "selectors: [rrt(0.1), 'rrt(1/n)', bic]\nworkers: 2\nout: res/out.csv\n",
      "/base");
  EXPECT_EQ(cfg.spec.name, "demo");
  EXPECT_EQ(cfg.spec.trials, 50);
  EXPECT_EQ(cfg.spec.seed, 4u);
  EXPECT_TRUE(cfg.seed_set);
  ASSERT_EQ(cfg.spec.grid.size(), 6u);
  EXPECT_EQ(cfg.spec.grid[1].snr_db, 10.0);
  EXPECT_EQ(cfg.spec.grid[3].n, 40);
  EXPECT_EQ(cfg.spec.design, DesignModel::kOrthonormal);
  EXPECT_EQ(cfg.spec.coef, CoefKind::kSparse);
  EXPECT_EQ(cfg.spec.selectors.size(), 3u);
  EXPECT_EQ(cfg.workers, 2);
  EXPECT_EQ(*cfg.out, fs::path("/base/res/out.csv"));
}

TEST(Config, RegimeBaseWithOverrides) {
  const auto cfg = parse_run_config("regime: fig3a\ntrials: 77\n", ".");
  EXPECT_EQ(cfg.spec.name, "fig3a");
  EXPECT_EQ(cfg.spec.trials, 77);
  EXPECT_EQ(cfg.spec.grid.size(), find_regime("fig3a")->grid.size());
  EXPECT_FALSE(cfg.seed_set);
}

TEST(Estimate, NoiselessFixtureFindsTrueOrder) {
  std::string out;
  const int code = run_args({"estimate", "--X", kData + "/noiseless_k3_X.csv", "--y",
                             kData + "/noiseless_k3_y.csv"},
                            &out);
  EXPECT_EQ(code, kExitOk);
  const auto ls = lines(out);
  ASSERT_GE(ls.size(), 2u);
  EXPECT_EQ(ls[0], "criterion,k_hat,alpha_used,fallback");
  EXPECT_EQ(ls[1], "rrt(0.1),3,0.1,false");
}

TEST(Estimate, WideInputIsNumericalError) {
  std::string err;
  const int code = run_args({"estimate", "--X", kData + "/wide_X.csv", "--y",
                             kData + "/wide_y.csv"},
                            nullptr, &err);
  EXPECT_EQ(code, kExitNumerical);
  EXPECT_NE(err.find("requires n > p"), std::string::npos) << err;
}

TEST(Estimate, MalformedCsvIsBadInput) {
  std::string err;
  EXPECT_EQ(run_args({"estimate", "--X", kData + "/malformed_X.csv", "--y",
                      kData + "/noiseless_k3_y.csv"},
                     nullptr, &err),
            kExitBadInput);
  EXPECT_NE(err.find("row 3, column 2"), std::string::npos) << err;
}

TEST(Estimate, RankDeficientIsNumericalError) {
  std::string err;
  EXPECT_EQ(run_args({"estimate", "--X", kData + "/rank_deficient_X.csv", "--y",
                      kData + "/noiseless_k3_y.csv"},
                     nullptr, &err),
            kExitNumerical);
  EXPECT_NE(err.find("column 4"), std::string::npos) << err;
}

TEST(Estimate, ItcCriteriaAndUnknownCriterion) {
  std::string out, err;
  EXPECT_EQ(run_args({"estimate", "--X", kData + "/noiseless_k3_X.csv", "--y",
                      kData + "/noiseless_k3_y.csv", "--criteria", "aic"},
                     &out, &err),
            kExitOk);
  EXPECT_NE(err.find("warning"), std::string::npos);  // exact fit: log(0)
  EXPECT_EQ(run_args({"estimate", "--X", kData + "/noiseless_k3_X.csv", "--y",
                      kData + "/noiseless_k3_y.csv", "--criteria", "pal"}),
            kExitBadInput);
}

// A fig1 draw at 20 dB written with shortest round-trip rendering: every
// printed value equals the library's.
TEST(Estimate, TraceMatchesLibraryBitForBit) {
  TempDir dir;
  const auto x = gen_fixed_design(30, 20, DesignModel::kGaussian1OverN, 2026);
  const auto prob = gen_problem(x, CoefModel{CoefKind::kDense, 5},
                                NoiseSpec::snr(20.0), 2026, 3);
  std::ostringstream xs, ys;
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 20; ++j) xs << (j ? "," : "") << format_double(x(i, j));
    xs << '\n';
    ys << format_double(prob.observation()[i]) << '\n';
  }
  write(dir / "X.csv", xs.str());
  write(dir / "y.csv", ys.str());
  std::string out;
  ASSERT_EQ(run_args({"estimate", "--X", (dir / "X.csv").string(), "--y",
                      (dir / "y.csv").string(), "--alpha", "0.01", "--criteria",
                      "rrt,bic,hsc"},
                     &out),
            kExitOk);
  const auto prof = residual_profile(prob);
  const auto table = ThresholdTable::build(30, 20, 0.01);
  const auto sel = rrt_select(prof.ratios, table);
  const auto ls = lines(out);
  EXPECT_EQ(ls[1], "rrt(0.01)," + std::to_string(sel.k_hat) + "," +
                       format_double(sel.alpha_used) + "," +
                       (sel.fallback ? "true" : "false"));
  EXPECT_EQ(ls[2], "bic," + std::to_string(itc_select(prof, 30, PenaltyRule::bic()).k_hat) + ",,");
  std::size_t at = 0;
  while (at < ls.size() && ls[at] != "# rrt(0.01) trace") ++at;
  ASSERT_LT(at + 21, ls.size() + 1);
  EXPECT_EQ(ls[at + 1], "k,rr,gamma");
  for (int k = 1; k <= 20; ++k) {
    EXPECT_EQ(ls[at + 1 + k], std::to_string(k) + "," + format_double(prof.ratios[k - 1]) +
                                  "," + format_double(rrt_threshold_log_alpha(
                                            30, 20, k, sel.log_alpha_used)));
  }
}

TEST(Thresholds, HeaderAndValues) {
  std::string out;
  ASSERT_EQ(run_args({"thresholds", "--n", "30", "--p", "20", "--alpha", "0.1"}, &out),
            kExitOk);
  const auto ls = lines(out);
  ASSERT_EQ(ls.size(), 21u);
  EXPECT_EQ(ls[0], "k,gamma_exact,gamma_asymptotic");
  for (int k = 1; k <= 20; ++k) {
    EXPECT_EQ(ls[k], std::to_string(k) + "," + format_double(rrt_threshold(30, 20, k, 0.1)) +
                         "," + format_double(rrt_threshold_asymptotic(30, 20, k, 0.1)));
  }
}

TEST(Thresholds, FullLevelGivesOnes) {
  std::string out;
  ASSERT_EQ(run_args({"thresholds", "--n", "30", "--p", "20", "--alpha", "20"}, &out),
            kExitOk);
  const auto ls = lines(out);
  for (int k = 1; k <= 20; ++k) {
    EXPECT_EQ(ls[k].substr(0, ls[k].find(',', ls[k].find(',') + 1)),
              std::to_string(k) + ",1");
  }
}

TEST(Thresholds, DomainViolations) {
  EXPECT_EQ(run_args({"thresholds", "--n", "10", "--p", "10", "--alpha", "0.1"}),
            kExitBadInput);
  EXPECT_EQ(run_args({"thresholds", "--n", "10", "--p", "5", "--alpha", "-1"}),
            kExitBadInput);
  EXPECT_EQ(run_args({"thresholds", "--n", "10"}), kExitBadInput);
}

TEST(Experiment, ConfigMissingTrialsIsBadInput) {
  TempDir dir;
  write(dir / "c.yaml", "n: 20\np: 10\nk0: 3\nsnr_db: 0\nselectors: [aic]\n");
  std::string err;
  EXPECT_EQ(run_args({"experiment", "--config", (dir / "c.yaml").string(), "--out",
                      (dir / "o.csv").string()},
                     nullptr, &err),
            kExitBadInput);
  EXPECT_NE(err.find("trials"), std::string::npos) << err;
}

TEST(Experiment, ArgumentErrors) {
  EXPECT_EQ(run_args({"experiment", "--out", "x.csv"}), kExitBadInput);
  EXPECT_EQ(run_args({"experiment", "--regime", "nope", "--out", "x.csv"}), kExitBadInput);
  EXPECT_EQ(run_args({"experiment", "--regime", "fig3a"}), kExitBadInput);
  EXPECT_EQ(run_args({"bogus"}), kExitBadInput);
}

const char* kSmallConfig =
    "name: small\ntrials: 400\nseed: 3\nn: 20\np: 8\nk0: 3\nsnr_db: [0, 20]\n"
    "selectors: [rrt(0.1), aic, hsc]\nout: small.csv\nsvg: small.svg\n";

TEST(Experiment, WorkerCountDoesNotChangeBytes) {
  TempDir dir;
  write(dir / "c.yaml", kSmallConfig);
  ASSERT_EQ(run_args({"experiment", "--config", (dir / "c.yaml").string(), "--workers", "1",
                      "--out", (dir / "a.csv").string()}),
            kExitOk);
  ASSERT_EQ(run_args({"experiment", "--config", (dir / "c.yaml").string(), "--workers", "8",
                      "--out", (dir / "b.csv").string()}),
            kExitOk);
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
}

TEST(Experiment, CsvReparsesToSummary) {
  TempDir dir;
  write(dir / "c.yaml", kSmallConfig);
  ASSERT_EQ(run_args({"experiment", "--config", (dir / "c.yaml").string()}), kExitOk);
  EXPECT_TRUE(fs::exists(dir / "small.svg"));
  std::ifstream in(dir / "small.csv");
  const auto rows = parse_experiment_csv(in);
  const auto summary = run_experiment(load_run_config(dir / "c.yaml").spec, 1);
  ASSERT_EQ(rows.size(), summary.cells.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& c = summary.cells[i];
    EXPECT_EQ(rows[i].n, c.point.n);
    EXPECT_EQ(rows[i].selector, c.selector);
    EXPECT_EQ(rows[i].snr_db, format_double(c.point.snr_db));
    EXPECT_EQ(rows[i].pcs, c.pcs());
    EXPECT_EQ(rows[i].p_over, c.p_over());
    EXPECT_EQ(rows[i].p_under, c.p_under());
    EXPECT_EQ(rows[i].ci, c.ci_halfwidth());
    EXPECT_EQ(rows[i].fallback_rate,
              c.is_rrt ? format_double(c.fallback_rate()) : std::string());
  }
  const std::string svg = slurp(dir / "small.svg");
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("rrt(0.1)"), std::string::npos);
}

TEST(Experiment, SeedPrecedence) {
  TempDir dir;
  write(dir / "c.yaml",
        "trials: 300\nn: 20\np: 8\nk0: 3\nsnr_db: 0\nselectors: [rrt(0.1)]\n");
  auto go = [&](const std::string& out, std::vector<std::string> extra) {
    std::vector<std::string> a = {"experiment", "--config", (dir / "c.yaml").string(),
                                  "--out", (dir / out).string()};
    a.insert(a.end(), extra.begin(), extra.end());
    EXPECT_EQ(run_args(a), kExitOk);
    return slurp(dir / out);
  };
  const auto flag5 = go("f5.csv", {"--seed", "5"});
  ::setenv("MOS_SEED", "5", 1);
  const auto env5 = go("e5.csv", {});
  const auto env_then_flag = go("e5f6.csv", {"--seed", "6"});
  ::unsetenv("MOS_SEED");
  const auto flag6 = go("f6.csv", {"--seed", "6"});
  EXPECT_EQ(flag5, env5);
  EXPECT_EQ(env_then_flag, flag6);
  EXPECT_NE(flag5, flag6);

  // an explicit seed in the file wins over the environment
  write(dir / "s.yaml",
        "trials: 300\nseed: 6\nn: 20\np: 8\nk0: 3\nsnr_db: 0\nselectors: [rrt(0.1)]\n");
  ::setenv("MOS_SEED", "5", 1);
  EXPECT_EQ(run_args({"experiment", "--config", (dir / "s.yaml").string(), "--out",
                      (dir / "s.csv").string()}),
            kExitOk);
  ::setenv("MOS_SEED", "x5", 1);
  EXPECT_EQ(run_args({"experiment", "--regime", "fig1", "--out", (dir / "bad.csv").string()}),
            kExitBadInput);
  ::unsetenv("MOS_SEED");
  EXPECT_EQ(slurp(dir / "s.csv"), flag6);
}

TEST(Experiment, ThresholdSweepRegime) {
  TempDir dir;
  std::string out;
  ASSERT_EQ(run_args({"experiment", "--regime", "fig2a", "--out", (dir / "t.csv").string(),
                      "--svg", (dir / "t.svg").string()},
                     &out),
            kExitOk);
  const auto ls = lines(slurp(dir / "t.csv"));
  EXPECT_EQ(ls[0], std::string(kThresholdHeader));
  EXPECT_EQ(ls.size(), 1 + find_regime("fig2a")->grid.size() *
                               find_regime("fig2a")->selectors.size());
}

TEST(Experiment, Fig1ReportsNoOverestimationProbabilities) {
  TempDir dir;
  std::string out;
  ASSERT_EQ(run_args({"experiment", "--regime", "fig1", "--out", (dir / "f.csv").string()},
                     &out),
            kExitOk);
  EXPECT_NE(out.find("rrt(0.1): P(RR(k) > threshold for all k > k0) = "), std::string::npos)
      << out;
  EXPECT_NE(out.find("rrt(0.01): P(RR(k) > threshold for all k > k0) = "), std::string::npos);
}

TEST(Svg, RendersAxesAndLegend) {
  LinePlot plot;
  plot.title = "t";
  plot.x_label = "SNR (dB)";
  plot.y_label = "PCS";
  plot.series = {{"a", {{0, 0.1}, {1, 0.5}, {2, 0.9}}}, {"b", {{0, 0.2}, {1, 0.2}, {2, 0.3}}}};
  const auto svg = render_svg(plot);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("SNR (dB)"), std::string::npos);
  EXPECT_NE(svg.find(">a<"), std::string::npos);
  EXPECT_NE(svg.find(">b<"), std::string::npos);
}

TEST(Validate, FormatAndBadLevel) {
  CriterionResult r{3, "title", true, "obs", "exp", 1.5};
  EXPECT_EQ(format_result(r), "PASS C3 title | observed: obs | expected: exp | 1.5s");
  r.passed = false;
  EXPECT_EQ(format_result(r).rfind("FAIL C3", 0), 0u);
  EXPECT_EQ(run_args({"validate", "--level", "medium"}), kExitBadInput);
}

}  // namespace
}  // namespace mos::cli
