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

#ifndef DPC_PRIVACY_H_
#define DPC_PRIVACY_H_

#include <cstdint>
#include <optional>

#include "dpc/metrics.h"

namespace dpc {

// Inputs to the per-agent epsilon budgets. s_second is the y-noise scale for
// PGTC and the v-noise scale for PPDC. All agents share s and q.
struct PrivacyParams {
  int d = 1;
  double M = 1.0;  // gradient bound
  int64_t K = 1;   // iteration horizon
  double eta = 1.0;
  double q = 0.5;
  double s_x = 1.0;
  double s_second = 1.0;
  std::optional<double> omega;  // PPDC only
};

// sum_{k=0}^{K} q^{-k}, evaluated in closed form.
double InverseGeometricSum(double q, int64_t K);

// 4 sqrt(d) M sum_{k=0}^{K} (sqrt(eta)/(s_x q^k) + 1/(s_y q^k)).
// Returns nullopt ("no privacy guarantee") when either scale is zero.
// Throws kConfigInvalid on invalid parameters.
std::optional<double> EpsilonPgtc(const PrivacyParams& p);

// 2 sqrt(d) M sum_{k=0}^{K} (sqrt(eta)/(s_x q^k) + 2/(omega s_v q^k)).
std::optional<double> EpsilonPpdc(const PrivacyParams& p);

std::optional<double> Epsilon(Algorithm algorithm, const PrivacyParams& p);

struct NoiseScales {
  double s_x = 0.0;
  double s_second = 0.0;
};

// Scales at which the x-term spends split * target and the second term the
// rest. The scale fields of p are ignored.
NoiseScales ScalesForEpsilon(Algorithm algorithm, double target,
                             const PrivacyParams& p, double split);

}  // namespace dpc

#endif  // DPC_PRIVACY_H_
