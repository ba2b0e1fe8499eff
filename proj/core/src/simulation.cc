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

#include "dpc/simulation.h"

#include <type_traits>

#include "dpc/error.h"

namespace dpc {

Algorithm AlgorithmOf(const AlgorithmConfig& cfg) {
  return std::holds_alternative<PgtcConfig>(cfg) ? Algorithm::kPgtc
                                                 : Algorithm::kPpdc;
}

int64_t IterationsOf(const AlgorithmConfig& cfg) {
  return std::visit([](const auto& c) { return c.iterations; }, cfg);
}

const CompressorSpec& CompressorOf(const AlgorithmConfig& cfg) {
  return std::visit(
      [](const auto& c) -> const CompressorSpec& { return c.compressor; }, cfg);
}

RunResult RunAlgorithm(const AlgorithmConfig& cfg,
                       std::span<const LocalObjective> objectives,
                       const Topology& topology, const Matrix& x0,
                       const StreamFactory& rng, bool store_iterates) {
  TraceRecorder sink(objectives, store_iterates);
  Matrix final_x = std::visit(
      [&](const auto& c) -> Matrix {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, PgtcConfig>) {
          return PgtcRun(c, objectives, topology, x0, rng, sink).x;
        } else {
          return PpdcRun(c, objectives, topology, x0, rng, sink).x;
        }
      },
      cfg);
  return {sink.Take(), std::move(final_x)};
}

Vector ReferencePoint(const AlgorithmConfig& cfg,
                      std::span<const LocalObjective> objectives,
                      const Topology& topology, const Matrix& x0,
                      const StreamFactory& rng, int64_t horizon,
                      int64_t k_ref) {
  if (k_ref < 10 * horizon) {
    throw Error::ConfigInvalid(
        "reference.iterations",
        "reference run must be at least 10x the experiment horizon");
  }
  BitMeter meter;
  return std::visit(
      [&](const auto& c) -> Vector {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, PgtcConfig>) {
          PgtcState s = PgtcInit(c, objectives, topology, x0);
          for (int64_t k = 0; k < k_ref; ++k) {
            PgtcStep(s, c, objectives, topology.mixing, rng, meter);
          }
          return Stack(s.x);
        } else {
          PpdcState s = PpdcInit(c, objectives, topology, x0);
          for (int64_t k = 0; k < k_ref; ++k) {
            PpdcStep(s, c, objectives, topology.laplacian, rng, meter);
          }
          return Stack(s.x);
        }
      },
      cfg);
}

}  // namespace dpc
