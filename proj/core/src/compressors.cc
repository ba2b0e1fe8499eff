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

#include "dpc/compressors.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "dpc/error.h"

namespace dpc {
namespace {

constexpr int kMaxBits = 32;

double Sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

Vector TopKCompress(const Vector& x, int k) {
  std::vector<int> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  // Larger magnitude first; equal magnitudes keep the lower index.
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&x](int a, int b) {
                      const double ma = std::abs(x(a));
                      const double mb = std::abs(x(b));
                      return ma > mb || (ma == mb && a < b);
                    });
  Vector out = Vector::Zero(x.size());
  for (int s = 0; s < k; ++s) out(order[s]) = x(order[s]);
  return out;
}

Vector NormSignCompress(const Vector& x) {
  const double half_inf = x.cwiseAbs().maxCoeff() / 2.0;
  return x.unaryExpr([half_inf](double v) { return half_inf * Sign(v); });
}

uint64_t CeilLog2(uint64_t d) {
  return d <= 1 ? 0 : static_cast<uint64_t>(std::bit_width(d - 1));
}

}  // namespace

std::string_view CompressorKindName(CompressorKind kind) {
  switch (kind) {
    case CompressorKind::kIdentity:
      return "identity";
    case CompressorKind::kTopK:
      return "topk";
    case CompressorKind::kBBit:
      return "bbit";
    case CompressorKind::kNormSign:
      return "normsign";
  }
  return "unknown";
}

CompressorSpec CompressorSpec::Identity() { return {}; }

CompressorSpec CompressorSpec::TopK(int k, int d) {
  return {CompressorKind::kTopK, k, 0, 1.0,
          static_cast<double>(k) / static_cast<double>(d)};
}

CompressorSpec CompressorSpec::BBit(int b, int d) {
  return {CompressorKind::kBBit, 0, b, 1.0, 1.0 / BBitScale(b, d)};
}

CompressorSpec CompressorSpec::NormSign(int d) {
  return {CompressorKind::kNormSign, 0, 0, 1.0,
          1.0 / (4.0 * static_cast<double>(d))};
}

void CompressorSpec::Validate(int d) const {
  if (d < 1) {
    throw Error(ErrorCode::kSpecDimensionMismatch, "dimension must be >= 1");
  }
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw Error::ConfigInvalid("compressor.r", "must be positive");
  }
  if (!(phi > 0.0 && phi <= 1.0)) {
    throw Error::ConfigInvalid("compressor.phi", "must lie in (0, 1]");
  }
  switch (kind) {
    case CompressorKind::kIdentity:
      if (r != 1.0 || phi != 1.0) {
        throw Error::ConfigInvalid("compressor",
                                   "identity requires r = 1 and phi = 1");
      }
      break;
    case CompressorKind::kTopK:
      if (k < 1) throw Error::ConfigInvalid("compressor.k", "must be >= 1");
      if (k > d) {
        throw Error(ErrorCode::kSpecDimensionMismatch,
                    "top-k with k=" + std::to_string(k) + " exceeds d=" +
                        std::to_string(d));
      }
      break;
    case CompressorKind::kBBit:
      if (b < 1 || b > kMaxBits) {
        throw Error::ConfigInvalid("compressor.b",
                                   "must lie in [1, " +
                                       std::to_string(kMaxBits) + "]");
      }
      break;
    case CompressorKind::kNormSign:
      break;
  }
}

double BBitScale(int b, int d) {
  const double levels = std::ldexp(1.0, b - 1);  // 2^(b-1)
  const double dd = static_cast<double>(d);
  return 1.0 + std::min(dd / (levels * levels), std::sqrt(dd) / levels);
}

Vector BBitQuantize(const Vector& x, int b, const Vector& dither) {
  if (dither.size() != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "dither length != x length");
  }
  const double norm = x.norm();
  if (norm == 0.0) return Vector::Zero(x.size());
  const double levels = std::ldexp(1.0, b - 1);
  const double scale =
      norm / BBitScale(b, static_cast<int>(x.size())) / levels;
  Vector out(x.size());
  for (Eigen::Index s = 0; s < x.size(); ++s) {
    const double level = std::floor(levels * std::abs(x(s)) / norm + dither(s));
    out(s) = scale * Sign(x(s)) * level;
  }
  return out;
}

CompressedMessage Compress(const CompressorSpec& spec, const Vector& x,
                           Stream& rng) {
  const int d = static_cast<int>(x.size());
  spec.Validate(d);
  CompressedMessage msg;
  msg.bit_cost = BitCost(spec, d);
  switch (spec.kind) {
    case CompressorKind::kIdentity:
      msg.vector = x;
      break;
    case CompressorKind::kTopK:
      msg.vector = TopKCompress(x, spec.k);
      break;
    case CompressorKind::kBBit: {
      Vector u(d);
      for (int s = 0; s < d; ++s) u(s) = rng.Uniform();
      msg.vector = BBitQuantize(x, spec.b, u);
      break;
    }
    case CompressorKind::kNormSign:
      msg.vector = NormSignCompress(x);
      break;
  }
  return msg;
}

uint64_t BitCost(const CompressorSpec& spec, int d) {
  const auto dd = static_cast<uint64_t>(d);
  switch (spec.kind) {
    case CompressorKind::kIdentity:
      return 64 * dd;
    case CompressorKind::kTopK:
      // Index/value pairs, or a dense vector once that is cheaper.
      return std::min(static_cast<uint64_t>(spec.k) * (64 + CeilLog2(dd)),
                      64 * dd);
    case CompressorKind::kBBit:
      return 64 + dd * static_cast<uint64_t>(spec.b);
    case CompressorKind::kNormSign:
      return 64 + dd;
  }
  return 64 * dd;
}

ContractionReport ValidateContraction(const CompressorSpec& spec, int d,
                                      int trials, Stream& rng) {
  if (trials < 1000) {
    throw Error::ConfigInvalid("trials", "contraction check needs >= 1000");
  }
  spec.Validate(d);
  double ratio_sum = 0.0;
  double r0_sum = 0.0;
  Vector x(d);
  for (int t = 0; t < trials; ++t) {
    double sq = 0.0;
    do {
      for (int s = 0; s < d; ++s) x(s) = rng.Normal();
      sq = x.squaredNorm();
    } while (sq == 0.0);
    const Vector c = Compress(spec, x, rng).vector;
    ratio_sum += (c / spec.r - x).squaredNorm() / sq;
    r0_sum += (c - x).squaredNorm() / sq;
  }
  ContractionReport rep;
  rep.trials = trials;
  const double slack = 1.0 + 3.0 / std::sqrt(static_cast<double>(trials));
  rep.empirical_ratio = ratio_sum / trials;
  rep.bound = (1.0 - spec.phi) * slack;
  rep.passes = rep.empirical_ratio <= rep.bound;
  rep.r0 = 2.0 * spec.r * spec.r * (1.0 - spec.phi) +
           2.0 * (1.0 - spec.r) * (1.0 - spec.r);
  rep.r0_ratio = r0_sum / trials;
  rep.r0_bound = rep.r0 * slack;
  rep.r0_passes = rep.r0_ratio <= rep.r0_bound;
  return rep;
}

}  // namespace dpc
