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

#include "dpc/privacy.h"

#include <cmath>

#include "dpc/error.h"

namespace dpc {
namespace {

void ValidateCommon(const PrivacyParams& p, bool needs_omega) {
  if (p.d < 1) throw Error::ConfigInvalid("privacy.d", "must be >= 1");
  if (!(p.M >= 0.0) || !std::isfinite(p.M)) {
    throw Error::ConfigInvalid("privacy.M", "must be finite and >= 0");
  }
  if (p.K < 0) throw Error::ConfigInvalid("privacy.K", "must be >= 0");
  if (!(p.eta > 0.0)) throw Error::ConfigInvalid("privacy.eta", "must be > 0");
  if (!(p.q > 0.0 && p.q < 1.0)) {
    throw Error::ConfigInvalid("privacy.q", "must lie in (0, 1)");
  }
  if (needs_omega && !(p.omega && *p.omega > 0.0)) {
    throw Error::ConfigInvalid("privacy.omega", "PPDC needs omega > 0");
  }
}

void ValidateScales(const PrivacyParams& p) {
  if (!(p.s_x >= 0.0) || !(p.s_second >= 0.0)) {
    throw Error::ConfigInvalid("privacy.s", "noise scales must be >= 0");
  }
}

// Coefficients (a, b) such that epsilon = a / s_x + b / s_second.
std::pair<double, double> Coefficients(Algorithm algorithm,
                                       const PrivacyParams& p) {
  const double g = InverseGeometricSum(p.q, p.K);
  const double root_d = std::sqrt(static_cast<double>(p.d));
  if (algorithm == Algorithm::kPgtc) {
    const double c = 4.0 * root_d * p.M * g;
    return {c * std::sqrt(p.eta), c};
  }
  const double c = 2.0 * root_d * p.M * g;
  return {c * std::sqrt(p.eta), c * 2.0 / *p.omega};
}

}  // namespace

double InverseGeometricSum(double q, int64_t K) {
  // (r^{K+1} - 1) / (r - 1) with r = 1/q, written with expm1 so q near 1
  // loses no precision.
  const double log_r = -std::log(q);
  return std::expm1(static_cast<double>(K + 1) * log_r) / std::expm1(log_r);
}

std::optional<double> EpsilonPgtc(const PrivacyParams& p) {
  return Epsilon(Algorithm::kPgtc, p);
}

std::optional<double> EpsilonPpdc(const PrivacyParams& p) {
  return Epsilon(Algorithm::kPpdc, p);
}

std::optional<double> Epsilon(Algorithm algorithm, const PrivacyParams& p) {
  ValidateCommon(p, algorithm == Algorithm::kPpdc);
  ValidateScales(p);
  if (p.s_x == 0.0 || p.s_second == 0.0) return std::nullopt;
  const auto [a, b] = Coefficients(algorithm, p);
  return a / p.s_x + b / p.s_second;
}

NoiseScales ScalesForEpsilon(Algorithm algorithm, double target,
                             const PrivacyParams& p, double split) {
  ValidateCommon(p, algorithm == Algorithm::kPpdc);
  if (!(target > 0.0) || !std::isfinite(target)) {
    throw Error::ConfigInvalid("target_epsilon", "must be finite and > 0");
  }
  if (!(split > 0.0 && split < 1.0)) {
    throw Error::ConfigInvalid("split", "must lie in (0, 1)");
  }
  const auto [a, b] = Coefficients(algorithm, p);
  return {a / (split * target), b / ((1.0 - split) * target)};
}

}  // namespace dpc
