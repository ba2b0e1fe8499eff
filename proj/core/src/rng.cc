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

#include "dpc/rng.h"

#include <cmath>
#include <numbers>

namespace dpc {
namespace {

constexpr uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;
constexpr uint64_t kHashSeed = 0x6A09E667F3BCC909ULL;

}  // namespace

uint64_t Mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

uint64_t StableHash(std::initializer_list<uint64_t> words) {
  uint64_t h = kHashSeed;
  uint64_t position = 0;
  for (uint64_t w : words) {
    ++position;
    h = Mix64(h ^ Mix64(w + position * kGoldenGamma));
  }
  return Mix64(h + position);
}

uint64_t Stream::NextU64() {
  ++counter_;
  return Mix64(origin_ + counter_ * kGoldenGamma);
}

double Stream::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double Stream::Normal() {
  // 1 - u lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

Stream MakeStream(uint64_t master_seed, const StreamKey& key) {
  return Stream(StableHash({master_seed, key.run_id, key.agent_id,
                            static_cast<uint64_t>(key.tag), key.round}));
}

}  // namespace dpc
