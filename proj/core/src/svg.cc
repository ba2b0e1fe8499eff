// Copyright 2026 The dpcompress Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpc/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "dpc/error.h"

namespace dpc {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                               "#ff7f0e", "#9467bd", "#8c564b"};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string Escape(const std::string& s) {
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

}  // namespace

std::string RenderLineChartSvg(std::span<const ChartSeries> series,
                               const ChartOptions& options) {
  std::vector<std::vector<std::pair<double, double>>> pts(series.size());
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -x_min;
  double y_min = x_min;
  double y_max = -x_min;
  for (size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    const size_t m = std::min(ser.x.size(), ser.y.size());
    for (size_t i = 0; i < m; ++i) {
      double y = ser.y[i];
      if (options.log10_y) {
        if (!(y > 0.0)) continue;
        y = std::log10(y);
      }
      if (!std::isfinite(y) || !std::isfinite(ser.x[i])) continue;
      pts[s].emplace_back(ser.x[i], y);
      x_min = std::min(x_min, ser.x[i]);
      x_max = std::max(x_max, ser.x[i]);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (!std::isfinite(x_min)) {
    x_min = 0.0;
    x_max = 1.0;
    y_min = 0.0;
    y_max = 1.0;
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) {
    return kTop + plot_h - (y - y_min) / (y_max - y_min) * plot_h;
  };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" "
    << "font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\">"
    << Escape(options.title) << "</text>\n";
  o << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
    << kLeft + plot_w << "\" y2=\"" << kTop + plot_h
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
    << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";
  const std::string y_prefix = options.log10_y ? "1e" : "";
  o << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 4
    << "\" text-anchor=\"end\">" << y_prefix << Num(y_max) << "</text>\n";
  o << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + plot_h
    << "\" text-anchor=\"end\">" << y_prefix << Num(y_min) << "</text>\n";
  o << "<text x=\"" << kLeft << "\" y=\"" << kTop + plot_h + 16
    << "\" text-anchor=\"middle\">" << Num(x_min) << "</text>\n";
  o << "<text x=\"" << kLeft + plot_w << "\" y=\"" << kTop + plot_h + 16
    << "\" text-anchor=\"middle\">" << Num(x_max) << "</text>\n";
  o << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
    << "\" text-anchor=\"middle\">" << Escape(options.x_label) << "</text>\n";
  o << "<text x=\"16\" y=\"" << kTop + plot_h / 2
    << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << kTop + plot_h / 2 << ")\">"
    << Escape(options.log10_y ? "log10 " + options.y_label : options.y_label)
    << "</text>\n";

  for (size_t s = 0; s < pts.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    o << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < pts[s].size(); ++i) {
      if (i) o << ' ';
      o << Num(px(pts[s][i].first)) << ',' << Num(py(pts[s][i].second));
    }
    o << "\"/>\n";
    o << "<text x=\"" << kLeft + plot_w - 4 << "\" y=\""
      << kTop + 14 + 14 * static_cast<double>(s)
      << "\" text-anchor=\"end\" fill=\"" << color << "\">"
      << Escape(series[s].label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void WriteLineChartSvg(const std::filesystem::path& path,
                       std::span<const ChartSeries> series,
                       const ChartOptions& options) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << RenderLineChartSvg(series, options);
}

}  // namespace dpc
