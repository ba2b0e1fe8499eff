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

#include <cmath>

#include "dpc/error.h"
#include "gtest/gtest.h"

namespace dpc {
namespace {

Vector Vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Vector RandomGaussian(int d, Stream& s) {
  Vector x(d);
  for (int i = 0; i < d; ++i) x(i) = s.Normal();
  return x;
}

TEST(TopKTest, KeepsLargestMagnitudes) {
  Stream s = MakeStream(1, {});
  const Vector out =
      Compress(CompressorSpec::TopK(2, 4), Vec({3, -5, 1, 0}), s).vector;
  EXPECT_EQ(out, Vec({3, -5, 0, 0}));
}

TEST(TopKTest, TiesGoToLowerIndex) {
  Stream s = MakeStream(1, {});
  EXPECT_EQ(Compress(CompressorSpec::TopK(1, 3), Vec({1, -1, 1}), s).vector,
            Vec({1, 0, 0}));
  EXPECT_EQ(Compress(CompressorSpec::TopK(2, 4), Vec({0, 2, -2, 2}), s).vector,
            Vec({0, 2, -2, 0}));
}

TEST(TopKTest, SupportAndExactValues) {
  Stream s = MakeStream(2, {});
  const CompressorSpec spec = CompressorSpec::TopK(3, 10);
  for (int t = 0; t < 200; ++t) {
    const Vector x = RandomGaussian(10, s);
    const Vector c = Compress(spec, x, s).vector;
    int nnz = 0;
    for (int i = 0; i < 10; ++i) {
      if (c(i) != 0.0) {
        ++nnz;
        EXPECT_EQ(c(i), x(i));
      }
    }
    EXPECT_LE(nnz, 3);
  }
}

TEST(TopKTest, KAboveDimensionRejected) {
  CompressorSpec spec = CompressorSpec::TopK(2, 10);
  spec.k = 11;
  try {
    spec.Validate(10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSpecDimensionMismatch);
  }
}

TEST(NormSignTest, Example) {
  Stream s = MakeStream(1, {});
  EXPECT_EQ(Compress(CompressorSpec::NormSign(2), Vec({1, -2}), s).vector,
            Vec({1, -1}));
}

TEST(NormSignTest, MagnitudesAndZeros) {
  Stream s = MakeStream(3, {});
  for (int t = 0; t < 100; ++t) {
    Vector x = RandomGaussian(8, s);
    x(t % 8) = 0.0;
    const double half = x.cwiseAbs().maxCoeff() / 2.0;
    const Vector c = Compress(CompressorSpec::NormSign(8), x, s).vector;
    for (int i = 0; i < 8; ++i) {
      if (x(i) == 0.0) {
        EXPECT_EQ(c(i), 0.0);
      } else {
        EXPECT_EQ(std::abs(c(i)), half);
        EXPECT_GT(c(i) * x(i), 0.0);
      }
    }
  }
}

TEST(BBitTest, HandExampleWithFrozenDither) {
  // d = 2, b = 2: xi = 1 + min(2/4, sqrt(2)/2) = 1.5, ||x|| = 5,
  // floor(2 * [0.6, 0.8]) = [1, 1], output (5/1.5) * 0.5 * [1, 1].
  const Vector out = BBitQuantize(Vec({3, 4}), 2, Vec({0, 0}));
  EXPECT_NEAR(out(0), 5.0 / 3.0, 1e-15);
  EXPECT_NEAR(out(1), 5.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(BBitScale(2, 2), 1.5);
}

TEST(BBitTest, ScaleFormula) {
  EXPECT_DOUBLE_EQ(BBitScale(2, 10), 1.0 + std::sqrt(10.0) / 2.0);
  EXPECT_DOUBLE_EQ(BBitScale(1, 10), 1.0 + std::sqrt(10.0));
  EXPECT_DOUBLE_EQ(BBitScale(4, 10), 1.0 + 10.0 / 64.0);
}

TEST(BBitTest, ZeroInputGivesZero) {
  Stream s = MakeStream(1, {});
  EXPECT_EQ(Compress(CompressorSpec::BBit(2, 5), Vector::Zero(5), s).vector,
            Vector::Zero(5));
}

// Direct evaluation of the quantizer formula with the same dither draws.
TEST(BBitTest, MatchesFormulaOracle) {
  const int d = 10;
  const int b = 3;
  Stream xs = MakeStream(4, {});
  for (int t = 0; t < 50; ++t) {
    Vector x = RandomGaussian(d, xs);
    x(t % d) = 0.0;
    Stream s1 = MakeStream(9, {0, 0, StreamTag::kCompress, uint64_t(t)});
    Stream s2 = s1;
    const Vector got = Compress(CompressorSpec::BBit(b, d), x, s1).vector;
    const double norm = x.norm();
    const double xi =
        1.0 + std::min(d / std::pow(4.0, b - 1), std::sqrt(double(d)) /
                                                     std::pow(2.0, b - 1));
    const double levels = std::pow(2.0, b - 1);
    for (int i = 0; i < d; ++i) {
      const double u = s2.Uniform();
      const double sign = (x(i) > 0) - (x(i) < 0);
      const double want = norm / xi * sign / levels *
                          std::floor(levels * std::abs(x(i)) / norm + u);
      EXPECT_NEAR(got(i), want, 1e-14 * norm);
      if (x(i) == 0.0) EXPECT_EQ(got(i), 0.0);
      if (got(i) != 0.0) EXPECT_GT(got(i) * x(i), 0.0);
    }
  }
}

TEST(BitCostTest, Accounting) {
  EXPECT_EQ(BitCost(CompressorSpec::Identity(), 10), 640u);
  EXPECT_EQ(BitCost(CompressorSpec::TopK(2, 10), 10), 136u);
  EXPECT_EQ(BitCost(CompressorSpec::NormSign(10), 10), 74u);
  EXPECT_EQ(BitCost(CompressorSpec::BBit(2, 10), 10), 84u);
  EXPECT_EQ(BitCost(CompressorSpec::TopK(1, 1), 1), 64u);
  // Index overhead never makes TopK dearer than the dense vector.
  EXPECT_EQ(BitCost(CompressorSpec::TopK(10, 10), 10), 640u);
}

TEST(CompressorSpecTest, Defaults) {
  const CompressorSpec topk = CompressorSpec::TopK(2, 10);
  EXPECT_DOUBLE_EQ(topk.r, 1.0);
  EXPECT_DOUBLE_EQ(topk.phi, 0.2);
  const CompressorSpec ns = CompressorSpec::NormSign(10);
  EXPECT_DOUBLE_EQ(ns.r, 1.0);
  EXPECT_DOUBLE_EQ(ns.phi, 1.0 / 40.0);
  const CompressorSpec bb = CompressorSpec::BBit(2, 10);
  EXPECT_DOUBLE_EQ(bb.r, 1.0);
  EXPECT_DOUBLE_EQ(bb.phi, 1.0 / BBitScale(2, 10));
}

TEST(CompressorSpecTest, IdentityMustBeExact) {
  CompressorSpec spec = CompressorSpec::Identity();
  spec.phi = 0.5;
  EXPECT_THROW(spec.Validate(3), Error);
}

TEST(ContractionTest, IdentityAndFullTopKAreExact) {
  Stream s = MakeStream(1, {});
  ContractionReport id =
      ValidateContraction(CompressorSpec::Identity(), 7, 1000, s);
  EXPECT_EQ(id.empirical_ratio, 0.0);
  EXPECT_TRUE(id.passes);
  ContractionReport full =
      ValidateContraction(CompressorSpec::TopK(7, 7), 7, 1000, s);
  EXPECT_EQ(full.empirical_ratio, 0.0);
  EXPECT_TRUE(full.passes);
}

TEST(ContractionTest, DefaultsPass) {
  Stream s = MakeStream(11, {});
  for (const CompressorSpec& spec :
       {CompressorSpec::TopK(2, 10), CompressorSpec::NormSign(10),
        CompressorSpec::BBit(2, 10)}) {
    ContractionReport rep = ValidateContraction(spec, 10, 4000, s);
    EXPECT_TRUE(rep.passes) << CompressorKindName(spec.kind) << " ratio "
                            << rep.empirical_ratio << " bound " << rep.bound;
    EXPECT_TRUE(rep.r0_passes) << CompressorKindName(spec.kind);
  }
}

TEST(ContractionTest, TopKRatioBelowOneMinusKOverD) {
  Stream s = MakeStream(12, {});
  ContractionReport rep =
      ValidateContraction(CompressorSpec::TopK(2, 10), 10, 10000, s);
  EXPECT_LE(rep.empirical_ratio, 0.8);
}

TEST(ContractionTest, BBitDefaultsHoldAcrossWidths) {
  Stream s = MakeStream(13, {});
  for (int b = 1; b <= 8; ++b) {
    ContractionReport rep =
        ValidateContraction(CompressorSpec::BBit(b, 10), 10, 2000, s);
    EXPECT_TRUE(rep.passes && rep.r0_passes) << "b=" << b;
  }
}

TEST(ContractionTest, OverclaimedPhiFails) {
  Stream s = MakeStream(14, {});
  CompressorSpec spec = CompressorSpec::TopK(2, 10);
  spec.phi = 0.9;
  EXPECT_FALSE(ValidateContraction(spec, 10, 2000, s).passes);
}

TEST(ContractionTest, R0Formula) {
  Stream s = MakeStream(15, {});
  CompressorSpec spec = CompressorSpec::NormSign(10);
  ContractionReport rep = ValidateContraction(spec, 10, 1000, s);
  const double r = spec.r, phi = spec.phi;
  EXPECT_DOUBLE_EQ(rep.r0, 2 * r * r * (1 - phi) + 2 * (1 - r) * (1 - r));
}

}  // namespace
}  // namespace dpc
