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

#ifndef MOS_CLI_CSV_HPP_
#define MOS_CLI_CSV_HPP_

#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mos/experiments.hpp"

namespace mos::cli {

// Malformed numeric CSV. row/column are 1-based; 0 when not applicable.
class CsvError : public std::runtime_error {
 public:
  CsvError(int row, int column, const std::string& what)
      : std::runtime_error(what), row_(row), column_(column) {}
  int row() const noexcept { return row_; }
  int column() const noexcept { return column_; }

 private:
  int row_;
  int column_;
};

// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

// Dense numeric matrix, one row per line, comma separated. Blank lines are
// skipped; every row must have the same number of fields.
Eigen::MatrixXd read_matrix_csv(std::istream& in, std::string_view source);
Eigen::MatrixXd read_matrix_csv_file(const std::string& path);

inline constexpr std::string_view kExperimentHeader =
    "n,p,k0,snr_db,selector,pcs,p_over,p_under,ci,fallback_rate";
inline constexpr std::string_view kThresholdHeader =
    "n,p,k0,selector,gamma_exact,gamma_asymptotic";

// One row per (grid point, selector). fallback_rate is empty for ITC rows
// and snr_db is empty when a fixed noise variance replaced the SNR axis.
std::string experiment_csv(const MetricSummary& summary, bool snr_axis = true);
std::string threshold_sweep_csv(const std::vector<ThresholdRow>& rows);

struct ExperimentCsvRow {
  int n = 0;
  int p = 0;
  int k0 = 0;
  std::string snr_db;
  std::string selector;
  double pcs = 0.0;
  double p_over = 0.0;
  double p_under = 0.0;
  double ci = 0.0;
  std::string fallback_rate;
};

std::vector<ExperimentCsvRow> parse_experiment_csv(std::istream& in);

}  // namespace mos::cli

#endif  // MOS_CLI_CSV_HPP_
