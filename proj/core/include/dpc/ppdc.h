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

#ifndef DPC_PPDC_H_
#define DPC_PPDC_H_

#include <cstdint>
#include <span>

#include "dpc/compressors.h"
#include "dpc/metrics.h"
#include "dpc/noise.h"
#include "dpc/objectives.h"
#include "dpc/rng.h"
#include "dpc/topology.h"

namespace dpc {

// Differentially private primal-dual method with one compressed broadcast per
// agent per round.
struct PpdcConfig {
  double eta = 0.015;
  double gamma = 45.0;
  double omega = 5.0;
  double alpha_x = 0.2;
  CompressorSpec compressor;
  NoiseSchedule noise_x;
  // Masks the dual variable. Disabling it is an ablation: the run carries no
  // privacy guarantee.
  NoiseSchedule noise_v;
  int64_t iterations = 100;

  void Validate(int d) const;
};

struct PpdcState {
  Matrix x;
  Matrix v;
  Matrix xc;
  Matrix grad;            // grad f_i(x_i,k), cached
  Vector noise_v_cumsum;  // sum_{t<k} (1/n) sum_i xi_{v_i,t}
  int64_t k = 0;

  Matrix xa;    // x + xi_x of the most recent round
  Matrix xhat;  // decoded broadcasts of the most recent round
};

PpdcState PpdcInit(const PpdcConfig& cfg,
                   std::span<const LocalObjective> objectives,
                   const Topology& topology, const Matrix& x0);

void PpdcStep(PpdcState& state, const PpdcConfig& cfg,
              std::span<const LocalObjective> objectives,
              const LaplacianMatrix& l, const StreamFactory& rng,
              BitMeter& meter);

// ||mean(v) - noise_v_cumsum||_inf
double DualAverageResidual(const PpdcState& state);

PpdcState PpdcRun(const PpdcConfig& cfg,
                  std::span<const LocalObjective> objectives,
                  const Topology& topology, const Matrix& x0,
                  const StreamFactory& rng, TraceRecorder& sink);

}  // namespace dpc

#endif  // DPC_PPDC_H_
