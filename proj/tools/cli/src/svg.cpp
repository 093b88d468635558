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

#include "mos/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace mos::cli {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 170.0;  // legend column
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string render_svg(const LinePlot& plot) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  auto tx = [&](double x) { return plot.log_x ? std::log10(x) : x; };
  for (const auto& s : plot.series) {
    for (auto [x, y] : s.points) {
      x0 = std::min(x0, tx(x));
      x1 = std::max(x1, tx(x));
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!std::isfinite(x0)) x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (x1 == x0) x1 = x0 + 1.0;
  y0 = std::min(y0, 0.0);
  y1 = std::max(y1, 1.0);

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (tx(x) - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\">\n";
  os << "<text x=\"" << num(kLeft) << "\" y=\"20\">" << esc(plot.title)
     << "</text>\n";
  os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + ph)
     << "\" x2=\"" << num(kLeft + pw) << "\" y2=\"" << num(kTop + ph)
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\""
     << num(kLeft) << "\" y2=\"" << num(kTop + ph) << "\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double yv = y0 + (y1 - y0) * i / 4.0;
    os << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(yv) + 4)
       << "\" text-anchor=\"end\">" << tick(yv) << "</text>\n";
    const double xt = x0 + (x1 - x0) * i / 4.0;
    const double xv = plot.log_x ? std::pow(10.0, xt) : xt;
    os << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(kTop + ph + 18)
       << "\" text-anchor=\"middle\">" << tick(xv) << "</text>\n";
  }
  os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 8)
     << "\" text-anchor=\"middle\">" << esc(plot.x_label) << "</text>\n";
  os << "<text x=\"14\" y=\"" << num(kTop + ph / 2)
     << "\" transform=\"rotate(-90 14 " << num(kTop + ph / 2)
     << ")\" text-anchor=\"middle\">" << esc(plot.y_label) << "</text>\n";

  static const char* kColours[] = {"black", "red",    "blue",  "green",
                                   "orange", "purple", "brown", "gray"};
  for (std::size_t i = 0; i < plot.series.size(); ++i) {
    const auto& s = plot.series[i];
    const char* colour = kColours[i % 8];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" points=\"";
    for (std::size_t j = 0; j < s.points.size(); ++j) {
      if (j) os << ' ';
      os << num(px(s.points[j].first)) << ',' << num(py(s.points[j].second));
    }
    os << "\"/>\n";
    const double ly = kTop + 16.0 * static_cast<double>(i);
    const double lx = kWidth - kRight + 10;
    os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\""
       << num(lx + 20) << "\" y2=\"" << num(ly) << "\" stroke=\"" << colour
       << "\"/>\n";
    os << "<text x=\"" << num(lx + 26) << "\" y=\"" << num(ly + 4) << "\">"
       << esc(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

LinePlot experiment_plot(const MetricSummary& summary, Metric metric) {
  std::set<double> snrs;
  std::set<int> ns;
  for (const auto& c : summary.cells) {
    snrs.insert(c.point.snr_db);
    ns.insert(c.point.n);
  }
  const bool by_snr = snrs.size() > 1 || ns.size() == 1;
  LinePlot plot;
  plot.title = summary.name;
  plot.x_label = by_snr ? "SNR (dB)" : "n";
  plot.log_x = !by_snr && *ns.rbegin() >= 10 * *ns.begin();
  plot.y_label = metric == Metric::kPcs     ? "PCS"
                 : metric == Metric::kPOver ? "P_O"
                                            : "P_U";
  std::vector<std::string> order;
  std::map<std::string, Series> by_sel;
  for (const auto& c : summary.cells) {
    if (!by_sel.count(c.selector)) {
      order.push_back(c.selector);
      by_sel[c.selector].label = c.selector;
    }
    const double y = metric == Metric::kPcs     ? c.pcs()
                     : metric == Metric::kPOver ? c.p_over()
                                                : c.p_under();
    by_sel[c.selector].points.emplace_back(
        by_snr ? c.point.snr_db : static_cast<double>(c.point.n), y);
  }
  for (const auto& s : order) plot.series.push_back(std::move(by_sel[s]));
  return plot;
}

LinePlot threshold_plot(const std::string& name,
                        const std::vector<ThresholdRow>& rows) {
  LinePlot plot;
  plot.title = name;
  plot.x_label = "n";
  plot.y_label = "threshold at k0";
  plot.log_x = true;
  std::vector<std::string> order;
  std::map<std::string, Series> by_sel;
  for (const auto& r : rows) {
    if (!by_sel.count(r.selector)) {
      order.push_back(r.selector);
      by_sel[r.selector].label = r.selector;
    }
    by_sel[r.selector].points.emplace_back(static_cast<double>(r.n),
                                           r.gamma_exact);
  }
  for (const auto& s : order) plot.series.push_back(std::move(by_sel[s]));
  return plot;
}

}  // namespace mos::cli
