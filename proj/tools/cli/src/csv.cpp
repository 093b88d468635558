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

#include "mos/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mos::cli {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
bool parse(std::string_view s, T& v) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Eigen::MatrixXd read_matrix_csv(std::istream& in, std::string_view source) {
  const std::string src(source);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto fields = split(body);
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0.0;
      if (!parse(fields[c], v) || !std::isfinite(v)) {
        throw CsvError(line_no, static_cast<int>(c + 1),
                       src + ": row " + std::to_string(line_no) + ", column " +
                           std::to_string(c + 1) + ": '" +
                           std::string(fields[c]) + "' is not a finite number");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw CsvError(line_no, static_cast<int>(row.size()),
                     src + ": row " + std::to_string(line_no) + " has " +
                         std::to_string(row.size()) + " columns, expected " +
                         std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw CsvError(0, 0, src + ": no data rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return m;
}

Eigen::MatrixXd read_matrix_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError(0, 0, path + ": cannot open");
  return read_matrix_csv(in, path);
}

std::string experiment_csv(const MetricSummary& summary, bool snr_axis) {
  std::ostringstream os;
  os << kExperimentHeader << '\n';
  for (const auto& c : summary.cells) {
    os << c.point.n << ',' << c.point.p << ',' << c.point.k0 << ','
       << (snr_axis ? format_double(c.point.snr_db) : std::string()) << ','
       << c.selector << ',' << format_double(c.pcs()) << ','
       << format_double(c.p_over()) << ',' << format_double(c.p_under())
       << ',' << format_double(c.ci_halfwidth()) << ','
       << (c.is_rrt ? format_double(c.fallback_rate()) : std::string())
       << '\n';
  }
  return os.str();
}

std::string threshold_sweep_csv(const std::vector<ThresholdRow>& rows) {
  std::ostringstream os;
  os << kThresholdHeader << '\n';
  for (const auto& r : rows) {
    os << r.n << ',' << r.p << ',' << r.k0 << ',' << r.selector << ','
       << format_double(r.gamma_exact) << ','
       << format_double(r.gamma_asymptotic) << '\n';
  }
  return os.str();
}

std::vector<ExperimentCsvRow> parse_experiment_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kExperimentHeader) {
    throw CsvError(1, 0, "experiment CSV: unexpected header");
  }
  std::vector<ExperimentCsvRow> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split(line);
    if (f.size() != 10) {
      throw CsvError(line_no, 0,
                     "experiment CSV: row " + std::to_string(line_no) +
                         " needs 10 fields");
    }
    ExperimentCsvRow r;
    bool ok = parse(f[0], r.n) && parse(f[1], r.p) && parse(f[2], r.k0) &&
              parse(f[5], r.pcs) && parse(f[6], r.p_over) &&
              parse(f[7], r.p_under) && parse(f[8], r.ci);
    if (!ok) {
      throw CsvError(line_no, 0,
                     "experiment CSV: row " + std::to_string(line_no) +
                         " has a malformed number");
    }
    r.snr_db = std::string(f[3]);
    r.selector = std::string(f[4]);
    r.fallback_rate = std::string(f[9]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace mos::cli
