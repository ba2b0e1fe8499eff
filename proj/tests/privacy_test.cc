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
#include <limits>

#include "dpc/error.h"
#include "dpc/rng.h"
#include "gtest/gtest.h"

namespace dpc {
namespace {

// Term-by-term evaluation of the budget sums with compensated summation.
double DirectEpsilon(Algorithm alg, const PrivacyParams& p) {
  double sum = 0.0, carry = 0.0;
  for (int64_t k = 0; k <= p.K; ++k) {
    const double qk = std::pow(p.q, static_cast<double>(k));
    const double term =
        alg == Algorithm::kPgtc
            ? std::sqrt(p.eta) / (p.s_x * qk) + 1.0 / (p.s_second * qk)
            : std::sqrt(p.eta) / (p.s_x * qk) + 2.0 / (*p.omega * p.s_second * qk);
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  const double lead = alg == Algorithm::kPgtc ? 4.0 : 2.0;
  return lead * std::sqrt(static_cast<double>(p.d)) * p.M * sum;
}

PrivacyParams Unit() {
  PrivacyParams p;
  p.d = 1;
  p.M = 1.0;
  p.K = 1;
  p.eta = 1.0;
  p.q = 0.5;
  p.s_x = 1.0;
  p.s_second = 1.0;
  p.omega = 2.0;
  return p;
}

PrivacyParams RandomParams(Stream& s) {
  PrivacyParams p;
  p.d = 1 + static_cast<int>(s.Uniform() * 50);
  p.M = 0.1 + 10.0 * s.Uniform();
  p.K = static_cast<int64_t>(s.Uniform() * 200);
  p.eta = 0.001 + s.Uniform();
  p.q = 0.5 + 0.49 * s.Uniform();
  p.s_x = 0.01 + 100.0 * s.Uniform();
  p.s_second = 0.01 + 100.0 * s.Uniform();
  p.omega = 0.5 + 20.0 * s.Uniform();
  return p;
}

TEST(EpsilonTest, UnitExamples) {
  EXPECT_DOUBLE_EQ(*EpsilonPgtc(Unit()), 24.0);
  EXPECT_DOUBLE_EQ(*EpsilonPpdc(Unit()), 12.0);
}

TEST(EpsilonTest, SingleTerm) {
  PrivacyParams p = Unit();
  p.K = 0;
  p.d = 4;
  p.eta = 0.25;
  p.s_x = 2.0;
  p.s_second = 5.0;
  EXPECT_DOUBLE_EQ(*EpsilonPgtc(p), 4.0 * 2.0 * (0.5 / 2.0 + 1.0 / 5.0));
}

TEST(EpsilonTest, DoublingScalesHalves) {
  Stream s = MakeStream(1, {});
  for (int t = 0; t < 20; ++t) {
    PrivacyParams p = RandomParams(s);
    PrivacyParams p2 = p;
    p2.s_x *= 2.0;
    p2.s_second *= 2.0;
    EXPECT_NEAR(*EpsilonPgtc(p2), 0.5 * *EpsilonPgtc(p), 1e-12 * *EpsilonPgtc(p));
    EXPECT_NEAR(*EpsilonPpdc(p2), 0.5 * *EpsilonPpdc(p), 1e-12 * *EpsilonPpdc(p));
  }
}

TEST(EpsilonTest, MatchesDirectSummation) {
  Stream s = MakeStream(2, {});
  for (int t = 0; t < 100; ++t) {
    const PrivacyParams p = RandomParams(s);
    for (Algorithm alg : {Algorithm::kPgtc, Algorithm::kPpdc}) {
      const double want = DirectEpsilon(alg, p);
      EXPECT_NEAR(*Epsilon(alg, p), want, 1e-12 * want);
    }
  }
}

TEST(EpsilonTest, LongHorizonClosedForm) {
  PrivacyParams p = Unit();
  for (double q : {0.97, 0.99, 0.999}) {
    p.q = q;
    p.K = 10000;
    const double want = DirectEpsilon(Algorithm::kPgtc, p);
    EXPECT_NEAR(*EpsilonPgtc(p), want, 1e-12 * want) << q;
  }
}

TEST(EpsilonTest, LargeOmegaDropsDualTerm) {
  PrivacyParams p = Unit();
  p.omega = 1e300;
  EXPECT_NEAR(*EpsilonPpdc(p), 2.0 * (1.0 + 2.0), 1e-12);
}

TEST(EpsilonTest, PpdcBelowPgtcWhenOmegaAboveOne) {
  Stream s = MakeStream(3, {});
  for (int t = 0; t < 100; ++t) {
    PrivacyParams p = RandomParams(s);
    p.omega = 1.0 + 10.0 * s.Uniform() + 1e-9;
    EXPECT_LT(*EpsilonPpdc(p), *EpsilonPgtc(p));
  }
}

TEST(EpsilonTest, Monotonicity) {
  Stream s = MakeStream(4, {});
  for (int t = 0; t < 50; ++t) {
    const PrivacyParams p = RandomParams(s);
    for (Algorithm alg : {Algorithm::kPgtc, Algorithm::kPpdc}) {
      const double e = *Epsilon(alg, p);
      PrivacyParams u = p;
      u.K += 1;
      EXPECT_GT(*Epsilon(alg, u), e);
      u = p;
      u.M *= 1.5;
      EXPECT_GT(*Epsilon(alg, u), e);
      u = p;
      u.d += 1;
      EXPECT_GT(*Epsilon(alg, u), e);
      u = p;
      u.eta *= 1.5;
      EXPECT_GT(*Epsilon(alg, u), e);
      u = p;
      u.s_x *= 1.5;
      EXPECT_LT(*Epsilon(alg, u), e);
      u = p;
      u.s_second *= 1.5;
      EXPECT_LT(*Epsilon(alg, u), e);
      if (alg == Algorithm::kPpdc) {
        u = p;
        *u.omega *= 1.5;
        EXPECT_LT(*Epsilon(alg, u), e);
      }
    }
  }
}

TEST(EpsilonTest, DisabledNoiseHasNoGuarantee) {
  PrivacyParams p = Unit();
  p.s_x = 0.0;
  EXPECT_FALSE(EpsilonPgtc(p).has_value());
  p = Unit();
  p.s_second = 0.0;
  EXPECT_FALSE(EpsilonPpdc(p).has_value());
}

TEST(EpsilonTest, InvalidParams) {
  PrivacyParams p = Unit();
  p.q = 1.0;
  EXPECT_THROW(EpsilonPgtc(p), Error);
  p = Unit();
  p.omega.reset();
  EXPECT_THROW(EpsilonPpdc(p), Error);
}

TEST(ScalesForEpsilonTest, RoundTrip) {
  Stream s = MakeStream(5, {});
  for (int t = 0; t < 100; ++t) {
    const PrivacyParams p = RandomParams(s);
    const double target = std::exp(10.0 * s.Uniform() - 3.0);
    const double split = 0.05 + 0.9 * s.Uniform();
    for (Algorithm alg : {Algorithm::kPgtc, Algorithm::kPpdc}) {
      const NoiseScales sc = ScalesForEpsilon(alg, target, p, split);
      PrivacyParams back = p;
      back.s_x = sc.s_x;
      back.s_second = sc.s_second;
      EXPECT_NEAR(*Epsilon(alg, back), target, 1e-12 * target);
    }
  }
}

TEST(ScalesForEpsilonTest, SymmetricSplitRatio) {
  PrivacyParams p = Unit();
  p.eta = 0.09;
  NoiseScales a = ScalesForEpsilon(Algorithm::kPgtc, 3.0, p, 0.5);
  EXPECT_NEAR(a.s_x / a.s_second, 0.3, 1e-15);
  p.omega = 5.0;
  NoiseScales b = ScalesForEpsilon(Algorithm::kPpdc, 3.0, p, 0.5);
  EXPECT_NEAR(b.s_x / b.s_second, 0.3 * 5.0 / 2.0, 1e-14);
}

TEST(ScalesForEpsilonTest, TinyTargetGivesLargeFiniteScales) {
  const NoiseScales sc = ScalesForEpsilon(Algorithm::kPgtc, 1e-9, Unit(), 0.5);
  EXPECT_TRUE(std::isfinite(sc.s_x));
  EXPECT_GT(sc.s_x, 1e9);
  EXPECT_THROW(ScalesForEpsilon(Algorithm::kPgtc,
                                std::numeric_limits<double>::infinity(), Unit(),
                                0.5),
               Error);
  EXPECT_THROW(ScalesForEpsilon(Algorithm::kPgtc, 1.0, Unit(), 1.0), Error);
}

TEST(InverseGeometricSumTest, SmallCases) {
  EXPECT_DOUBLE_EQ(InverseGeometricSum(0.5, 0), 1.0);
  EXPECT_DOUBLE_EQ(InverseGeometricSum(0.5, 1), 3.0);
  EXPECT_NEAR(InverseGeometricSum(0.1, 3), 1111.0, 1e-9);
}

}  // namespace
}  // namespace dpc
