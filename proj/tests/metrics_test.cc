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

#include "dpc/metrics.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "dpc/error.h"
#include "dpc/simulation.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpc {
namespace {

using ::dpc::testing::Noise;
using ::dpc::testing::UniformStart;

Trace TraceOfScalars(std::initializer_list<double> xs) {
  Trace t;
  t.n = 1;
  t.d = 1;
  int64_t k = 0;
  for (double x : xs) {
    TraceRow row;
    row.k = k++;
    t.rows.push_back(row);
    t.iterates.push_back(Vector::Constant(1, x));
  }
  return t;
}

TEST(ResidualSeriesTest, RunningMinimum) {
  // Squared distances to 0: 4, 1, 9.
  const auto r = ResidualSeries(TraceOfScalars({2, 1, 3}), Vector::Zero(1));
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0], 4.0);
  EXPECT_EQ(r[1], 1.0);
  EXPECT_EQ(r[2], 1.0);
}

TEST(ResidualSeriesTest, ZeroAtReference) {
  const auto r = ResidualSeries(TraceOfScalars({5, 5, 5}), Vector::Constant(1, 5));
  for (double v : r) EXPECT_EQ(v, 0.0);
}

TEST(ResidualSeriesTest, Errors) {
  try {
    ResidualSeries(TraceOfScalars({1}), Vector::Zero(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  Trace empty;
  EXPECT_THROW(FinalAccuracy(empty), Error);
}

class RunMetricsTest : public ::testing::Test {
 protected:
  RunMetricsTest()
      : topo_(Topology::FromGraph(SixAgentGraph())),
        rng_(5),
        quad_(BuildObjectives({ObjectiveKind::kQuadratic, 10}, 6, rng_)),
        x0_(UniformStart(6, 10, 5)) {}
  Topology topo_;
  StreamFactory rng_;
  std::vector<LocalObjective> quad_;
  Matrix x0_;
};

TEST_F(RunMetricsTest, ResidualNonIncreasingOnNoisyRun) {
  PgtcConfig cfg;
  cfg.compressor = CompressorSpec::NormSign(10);
  cfg.noise_x = Noise(0.5, 0.95);
  cfg.noise_y = Noise(0.5, 0.95);
  cfg.iterations = 300;
  RunResult r = RunAlgorithm(cfg, quad_, topo_, x0_, rng_, true);
  const auto R = ResidualSeries(r.trace, Vector::Zero(60));
  for (size_t k = 1; k < R.size(); ++k) ASSERT_LE(R[k], R[k - 1]);
  for (const TraceRow& row : r.trace.rows) ASSERT_GE(row.consensus_err, 0.0);
}

TEST_F(RunMetricsTest, BitAccounting) {
  PgtcConfig g;
  g.iterations = 1;
  RunResult a = RunAlgorithm(g, quad_, topo_, x0_, rng_, false);
  auto bits = CumBits(a.trace);
  ASSERT_EQ(bits.size(), 1u);
  EXPECT_EQ(bits[0], 7680u);

  PpdcConfig p;
  p.compressor = CompressorSpec::TopK(2, 10);
  p.iterations = 1;
  EXPECT_EQ(CumBits(RunAlgorithm(p, quad_, topo_, x0_, rng_, false).trace)[0],
            816u);

  Trace zero;
  zero.rows.resize(1);
  EXPECT_TRUE(CumBits(zero).empty());
}

TEST_F(RunMetricsTest, PpdcUsesHalfThePgtcBits) {
  for (const CompressorSpec& spec :
       {CompressorSpec::Identity(), CompressorSpec::TopK(2, 10),
        CompressorSpec::BBit(2, 10), CompressorSpec::NormSign(10)}) {
    PgtcConfig g;
    g.compressor = spec;
    g.iterations = 25;
    PpdcConfig p;
    p.compressor = spec;
    p.iterations = 25;
    const auto gb = CumBits(RunAlgorithm(g, quad_, topo_, x0_, rng_, false).trace);
    const auto pb = CumBits(RunAlgorithm(p, quad_, topo_, x0_, rng_, false).trace);
    ASSERT_EQ(gb.size(), pb.size());
    for (size_t k = 0; k < gb.size(); ++k) {
      ASSERT_EQ(gb[k], 2 * pb[k]);
      if (k > 0) ASSERT_GT(gb[k], gb[k - 1]);
    }
  }
}

TEST_F(RunMetricsTest, FrozenRunAccuracyIsInitialGradient) {
  PgtcConfig cfg;
  cfg.iterations = 3;
  PgtcState s = PgtcInit(cfg, quad_, topo_, x0_);
  cfg.eta = 0.0;
  cfg.gamma = 0.0;
  TraceRecorder rec(quad_, false);
  rec.Begin(Algorithm::kPgtc, 6, 10, 2, 640);
  rec.Record(0, s.x, 0.0, 0, 0.0, 0.0);
  BitMeter meter;
  for (int k = 1; k <= 3; ++k) {
    PgtcStep(s, cfg, quad_, topo_.mixing, rng_, meter);
    rec.Record(k, s.x, TrackingResidual(s), meter.bits(), 0.0, 0.0);
  }
  const Vector xbar = x0_.colwise().mean().transpose();
  EXPECT_EQ(FinalAccuracy(rec.trace()), GlobalGradient(quad_, xbar).norm());
}

TEST_F(RunMetricsTest, NoiseFreeAccuracyAndReference) {
  PgtcConfig cfg;
  cfg.iterations = 1000;
  RunResult r = RunAlgorithm(cfg, quad_, topo_, x0_, rng_, false);
  EXPECT_LE(FinalAccuracy(r.trace), 1e-8);

  Vector opt = Vector::Zero(10);
  for (const auto& f : quad_) opt += f.anchor();
  opt /= 6.0;
  const Vector x_inf = ReferencePoint(cfg, quad_, topo_, x0_, rng_, 100, 1000);
  for (int i = 0; i < 6; ++i) {
    EXPECT_LT((x_inf.segment(i * 10, 10) - opt).cwiseAbs().maxCoeff(), 1e-10);
  }
  EXPECT_EQ(x_inf, ReferencePoint(cfg, quad_, topo_, x0_, rng_, 100, 1000));
  try {
    ReferencePoint(cfg, quad_, topo_, x0_, rng_, 100, 999);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigInvalid);
    EXPECT_EQ(e.field(), "reference.iterations");
  }
}

TEST_F(RunMetricsTest, CsvSchema) {
  PpdcConfig cfg;
  cfg.iterations = 4;
  RunResult r = RunAlgorithm(cfg, quad_, topo_, x0_, rng_, true);
  std::ostringstream plain;
  WriteTraceCsv(r.trace, plain);
  std::istringstream in(plain.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kTraceCsvHeader);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(line.back(), ',');  // R_k blank without a reference
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
  }
  EXPECT_EQ(rows, 5);

  AttachResiduals(r.trace, Vector::Zero(60));
  std::ostringstream with_r;
  WriteTraceCsv(r.trace, with_r);
  const std::string text = with_r.str();
  const size_t last = text.rfind('\n', text.size() - 2);
  const std::string last_row = text.substr(last + 1, text.size() - last - 2);
  EXPECT_EQ(last_row.rfind("4,", 0), 0u);
  EXPECT_NE(last_row.back(), ',');
}

TEST(FormatDoubleTest, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) {
    EXPECT_EQ(std::stod(FormatDouble(v)), v);
  }
}

}  // namespace
}  // namespace dpc
