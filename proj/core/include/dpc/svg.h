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

#ifndef DPC_SVG_H_
#define DPC_SVG_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace dpc {

struct ChartSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log10_y = false;  // nonpositive y values are dropped
};

// Minimal polyline chart: axes, tick labels at the data extremes, one
// polyline per series. Output is deterministic for identical input.
std::string RenderLineChartSvg(std::span<const ChartSeries> series,
                               const ChartOptions& options);

void WriteLineChartSvg(const std::filesystem::path& path,
                       std::span<const ChartSeries> series,
                       const ChartOptions& options);

}  // namespace dpc

#endif  // DPC_SVG_H_
