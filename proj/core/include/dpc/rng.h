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

#ifndef DPC_RNG_H_
#define DPC_RNG_H_

#include <cstdint>
#include <initializer_list>

namespace dpc {

// Which stochastic quantity a stream feeds. Values are part of the stable
// hash and must never be renumbered.
enum class StreamTag : uint8_t {
  kNoiseX = 0,
  kNoiseY = 1,
  kNoiseV = 2,
  kCompress = 3,
  kData = 4,
  kInit = 5,
};

struct StreamKey {
  uint64_t run_id = 0;
  uint64_t agent_id = 0;
  StreamTag tag = StreamTag::kData;
  uint64_t round = 0;
};

// SplitMix64 finalizer; bijective on 64-bit words.
uint64_t Mix64(uint64_t x);

// Order-sensitive stable hash of a word sequence. Used for stream keys and
// sweep child seeds; its output is part of the replay contract.
uint64_t StableHash(std::initializer_list<uint64_t> words);

// Counter-based generator: draw i is Mix64(origin + (i + 1) * golden gamma).
// Two streams never share state, so draw order across agents or sweep cells
// cannot change any value.
class Stream {
 public:
  explicit Stream(uint64_t origin) : origin_(origin) {}

  uint64_t NextU64();
  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform();
  // Standard normal via Box-Muller; consumes two draws per call.
  double Normal();

  uint64_t draws() const { return counter_; }

 private:
  uint64_t origin_;
  uint64_t counter_ = 0;
};

Stream MakeStream(uint64_t master_seed, const StreamKey& key);

// Binds a master seed and run id so engines can request per-agent,
// per-round streams without threading both values everywhere.
class StreamFactory {
 public:
  explicit StreamFactory(uint64_t master_seed, uint64_t run_id = 0)
      : master_seed_(master_seed), run_id_(run_id) {}

  Stream Make(uint64_t agent_id, StreamTag tag, uint64_t round) const {
    return MakeStream(master_seed_, {run_id_, agent_id, tag, round});
  }

  uint64_t master_seed() const { return master_seed_; }
  uint64_t run_id() const { return run_id_; }

 private:
  uint64_t master_seed_;
  uint64_t run_id_;
};

}  // namespace dpc

#endif  // DPC_RNG_H_
