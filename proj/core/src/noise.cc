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

#include "dpc/noise.h"

#include <cmath>

#include "dpc/error.h"

namespace dpc {

double NoiseSchedule::ScaleAt(int64_t k) const {
  if (!enabled) return 0.0;
  return s * std::pow(q, static_cast<double>(k));
}

void NoiseSchedule::Validate() const {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw Error::ConfigInvalid("s", "must be finite and >= 0");
  }
  if (!(q > 0.0 && q < 1.0)) {
    throw Error::ConfigInvalid("q", "must lie in (0, 1)");
  }
}

Vector SampleLaplace(double theta, int d, Stream& rng) {
  Vector out = Vector::Zero(d);
  if (theta <= 0.0) return out;
  for (int s = 0; s < d; ++s) {
    double u = 0.0;
    do {
      u = rng.Uniform() - 0.5;  // U[-1/2, 1/2)
    } while (u == -0.5);
    const double sign = u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
    out(s) = -theta * sign * std::log1p(-2.0 * std::abs(u));
  }
  return out;
}

double LaplaceCdf(double x, double theta) {
  if (x < 0.0) return 0.5 * std::exp(x / theta);
  return 1.0 - 0.5 * std::exp(-x / theta);
}

}  // namespace dpc
