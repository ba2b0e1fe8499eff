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

#ifndef DPC_PGTC_H_
#define DPC_PGTC_H_

#include <cstdint>
#include <span>

#include "dpc/compressors.h"
#include "dpc/metrics.h"
#include "dpc/noise.h"
#include "dpc/objectives.h"
#include "dpc/rng.h"
#include "dpc/topology.h"

namespace dpc {

// Differentially private gradient tracking with compressed broadcasts.
// With the identity compressor this is the uncompressed DiaDSP baseline.
struct PgtcConfig {
  double eta = 0.1;
  double gamma = 0.2;
  double alpha_x = 0.5;
  double alpha_y = 0.5;
  CompressorSpec compressor;
  NoiseSchedule noise_x;
  NoiseSchedule noise_y;
  int64_t iterations = 100;

  // eta > 0, gamma in (0, 1], alpha_x/alpha_y in (0, 1/r), K >= 1.
  void Validate(int d) const;
};

// All agents' state for one synchronous round. Rows are agents.
struct PgtcState {
  Matrix x;
  Matrix y;
  Matrix xc;
  Matrix yc;
  Matrix grad;             // grad f_i(x_i,k), cached
  Vector noise_y_cumsum;   // (1/n) sum_{t<k} sum_i xi_{y_i,t}
  int64_t k = 0;

  // What was broadcast in the most recent round; empty before the first.
  Matrix xa;
  Matrix ya;
  Matrix xhat;
  Matrix yhat;
};

PgtcState PgtcInit(const PgtcConfig& cfg,
                   std::span<const LocalObjective> objectives,
                   const Topology& topology, const Matrix& x0);

// One synchronous round. Throws NonFiniteState on divergence.
void PgtcStep(PgtcState& state, const PgtcConfig& cfg,
              std::span<const LocalObjective> objectives, const MixingMatrix& w,
              const StreamFactory& rng, BitMeter& meter);

// ||mean(y) - mean(grad) - noise_y_cumsum||_inf
double TrackingResidual(const PgtcState& state);

// K rounds; the sink receives the k = 0 snapshot and one row per round.
PgtcState PgtcRun(const PgtcConfig& cfg,
                  std::span<const LocalObjective> objectives,
                  const Topology& topology, const Matrix& x0,
                  const StreamFactory& rng, TraceRecorder& sink);

}  // namespace dpc

#endif  // DPC_PGTC_H_
