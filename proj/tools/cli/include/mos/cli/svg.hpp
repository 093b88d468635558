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

#ifndef MOS_CLI_SVG_HPP_
#define MOS_CLI_SVG_HPP_

#include <string>
#include <utility>
#include <vector>

#include "mos/experiments.hpp"

namespace mos::cli {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  std::vector<Series> series;
};

// Unstyled polylines, axes with tick labels, and a legend.
std::string render_svg(const LinePlot& plot);

enum class Metric { kPcs, kPOver, kPUnder };

// One polyline per selector against SNR, or against n when SNR is constant.
LinePlot experiment_plot(const MetricSummary& summary, Metric metric);
// Gamma(k0) against n, one polyline per level.
LinePlot threshold_plot(const std::string& name,
                        const std::vector<ThresholdRow>& rows);

}  // namespace mos::cli

#endif  // MOS_CLI_SVG_HPP_
