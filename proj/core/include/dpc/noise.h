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

#ifndef DPC_NOISE_H_
#define DPC_NOISE_H_

#include <cstdint>

#include "dpc/rng.h"
#include "dpc/topology.h"

namespace dpc {

// Laplace scale family theta_k = s * q^k for one noised variable.
struct NoiseSchedule {
  double s = 0.0;
  double q = 0.5;
  bool enabled = false;

  // Returns s * q^k, or 0 when disabled.
  double ScaleAt(int64_t k) const;
  // Throws kConfigInvalid (field relative to the schedule) on s < 0 or
  // q outside (0, 1).
  void Validate() const;
  // True when the schedule actually masks anything.
  bool active() const { return enabled && s > 0.0; }
};

// d i.i.d. Lap(theta) draws by inverse CDF; theta == 0 gives zeros and
// consumes no randomness.
Vector SampleLaplace(double theta, int d, Stream& rng);

double LaplaceCdf(double x, double theta);

}  // namespace dpc

#endif  // DPC_NOISE_H_
