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

#ifndef DPC_SIMULATION_H_
#define DPC_SIMULATION_H_

#include <cstdint>
#include <span>
#include <variant>

#include "dpc/metrics.h"
#include "dpc/objectives.h"
#include "dpc/pgtc.h"
#include "dpc/ppdc.h"
#include "dpc/rng.h"
#include "dpc/topology.h"

namespace dpc {

using AlgorithmConfig = std::variant<PgtcConfig, PpdcConfig>;

Algorithm AlgorithmOf(const AlgorithmConfig& cfg);
int64_t IterationsOf(const AlgorithmConfig& cfg);
const CompressorSpec& CompressorOf(const AlgorithmConfig& cfg);

struct RunResult {
  Trace trace;
  Matrix final_x;
};

// Dispatches to PgtcRun / PpdcRun with a fresh recorder.
RunResult RunAlgorithm(const AlgorithmConfig& cfg,
                       std::span<const LocalObjective> objectives,
                       const Topology& topology, const Matrix& x0,
                       const StreamFactory& rng, bool store_iterates);

// Stand-in for the convergence point x_inf: the stacked iterate after k_ref
// rounds of the same algorithm and seed, with the noise schedules continued.
// The first `horizon` rounds coincide with the experiment run. Throws
// kConfigInvalid unless k_ref >= 10 * horizon.
Vector ReferencePoint(const AlgorithmConfig& cfg,
                      std::span<const LocalObjective> objectives,
                      const Topology& topology, const Matrix& x0,
                      const StreamFactory& rng, int64_t horizon,
                      int64_t k_ref);

}  // namespace dpc

#endif  // DPC_SIMULATION_H_
