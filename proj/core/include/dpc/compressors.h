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

#ifndef DPC_COMPRESSORS_H_
#define DPC_COMPRESSORS_H_

#include <cstdint>
#include <string_view>

#include "dpc/rng.h"
#include "dpc/topology.h"

namespace dpc {

enum class CompressorKind { kIdentity, kTopK, kBBit, kNormSign };

std::string_view CompressorKindName(CompressorKind kind);

// A compression operator C together with the constants (r, phi) it is
// claimed to satisfy:  E||C(x)/r - x||^2 <= (1 - phi) ||x||^2.
struct CompressorSpec {
  CompressorKind kind = CompressorKind::kIdentity;
  int k = 0;  // TopK only
  int b = 0;  // BBit only
  double r = 1.0;
  double phi = 1.0;

  // Factories fill in the default (r, phi) for dimension d.
  static CompressorSpec Identity();
  static CompressorSpec TopK(int k, int d);
  static CompressorSpec BBit(int b, int d);
  static CompressorSpec NormSign(int d);

  // Throws kSpecDimensionMismatch when k > d, kConfigInvalid for other
  // parameter violations.
  void Validate(int d) const;

  bool is_identity() const { return kind == CompressorKind::kIdentity; }
};

struct CompressedMessage {
  Vector vector;  // decoded C(x)
  uint64_t bit_cost = 0;
};

// xi = 1 + min(d / 4^(b-1), sqrt(d) / 2^(b-1)).
double BBitScale(int b, int d);

CompressedMessage Compress(const CompressorSpec& spec, const Vector& x,
                           Stream& rng);

// The b-bit quantizer with an explicit dither vector u in [0, 1)^d.
Vector BBitQuantize(const Vector& x, int b, const Vector& dither);

// Payload bits a real transport would need for one message.
uint64_t BitCost(const CompressorSpec& spec, int d);

struct ContractionReport {
  double empirical_ratio = 0.0;  // mean ||C(x)/r - x||^2 / ||x||^2
  double bound = 0.0;            // (1 - phi)(1 + 3/sqrt(trials))
  bool passes = false;
  double r0 = 0.0;               // 2r^2(1 - phi) + 2(1 - r)^2
  double r0_ratio = 0.0;         // mean ||C(x) - x||^2 / ||x||^2
  double r0_bound = 0.0;         // r0 (1 + 3/sqrt(trials))
  bool r0_passes = false;
  int trials = 0;
};

// Monte-Carlo check of the contraction constants over standard Gaussian
// vectors. Requires trials >= 1000.
ContractionReport ValidateContraction(const CompressorSpec& spec, int d,
                                      int trials, Stream& rng);

}  // namespace dpc

#endif  // DPC_COMPRESSORS_H_
