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

// Shared fixtures for the unit tests.

#ifndef DPC_TESTS_TEST_UTIL_H_
#define DPC_TESTS_TEST_UTIL_H_

#include <cstdint>

#include "dpc/noise.h"
#include "dpc/rng.h"
#include "dpc/topology.h"

namespace dpc::testing {

// Uniform [0,1] start, one kInit stream per agent.
inline Matrix UniformStart(int n, int d, uint64_t seed) {
  StreamFactory f(seed);
  Matrix x(n, d);
  for (int i = 0; i < n; ++i) {
    Stream s = f.Make(static_cast<uint64_t>(i), StreamTag::kInit, 0);
    for (int t = 0; t < d; ++t) x(i, t) = s.Uniform();
  }
  return x;
}

inline NoiseSchedule Noise(double s, double q) { return {s, q, true}; }
inline NoiseSchedule NoNoise() { return {0.0, 0.5, false}; }

}  // namespace dpc::testing

#endif  // DPC_TESTS_TEST_UTIL_H_
