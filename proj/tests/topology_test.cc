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

#include "dpc/topology.h"

#include <vector>

#include "dpc/error.h"
#include "gtest/gtest.h"

namespace dpc {
namespace {

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return ErrorCode::kIo;
}

TEST(GraphTest, SmallestConnectedGraph) {
  const std::vector<Edge> e = {{0, 1}};
  Graph g = Graph::Build(2, e);
  EXPECT_EQ(g.size(), 2);
  EXPECT_TRUE(g.HasEdge(1, 0));
}

TEST(GraphTest, SixAgentGraphDegrees) {
  Graph g = SixAgentGraph();
  EXPECT_EQ(g.size(), 6);
  EXPECT_EQ(g.edges().size(), 8u);
  const int expected[] = {3, 3, 2, 3, 3, 2};
  for (int i = 0; i < 6; ++i) EXPECT_EQ(g.degree(i), expected[i]) << i;
}

TEST(GraphTest, RejectsBadInput) {
  const std::vector<Edge> isolated = {{0, 1}};
  EXPECT_EQ(CodeOf([&] { Graph::Build(3, isolated); }),
            ErrorCode::kDisconnectedGraph);
  const std::vector<Edge> loop = {{0, 0}, {0, 1}};
  EXPECT_EQ(CodeOf([&] { Graph::Build(2, loop); }), ErrorCode::kInvalidEdge);
  const std::vector<Edge> dup = {{0, 1}, {1, 0}};
  EXPECT_EQ(CodeOf([&] { Graph::Build(2, dup); }), ErrorCode::kInvalidEdge);
  const std::vector<Edge> range = {{0, 2}};
  EXPECT_EQ(CodeOf([&] { Graph::Build(2, range); }), ErrorCode::kInvalidEdge);
}

TEST(MetropolisTest, PathOfTwo) {
  const std::vector<Edge> e = {{0, 1}};
  MixingMatrix w = MetropolisWeights(Graph::Build(2, e));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) EXPECT_DOUBLE_EQ(w(i, j), 0.5);
  }
}

TEST(MetropolisTest, Triangle) {
  const std::vector<Edge> e = {{0, 1}, {1, 2}, {0, 2}};
  MixingMatrix w = MetropolisWeights(Graph::Build(3, e));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(w(i, j), 1.0 / 3.0, 1e-15);
  }
}

TEST(MetropolisTest, SixAgentEntries) {
  Graph g = SixAgentGraph();
  MixingMatrix w = MetropolisWeights(g);
  // deg 2 and deg 3 endpoints: 1 / (1 + 3).
  EXPECT_DOUBLE_EQ(w(2, 3), 0.25);
  EXPECT_DOUBLE_EQ(w(0, 2), 0.0);
  // Agent 2 has neighbours 1 and 3 (both degree 3).
  EXPECT_DOUBLE_EQ(w(2, 2), 0.5);
  const Matrix& m = w.weights();
  EXPECT_LT((m - m.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  for (int i = 0; i < 6; ++i) {
    EXPECT_NEAR(m.row(i).sum(), 1.0, 1e-12);
    EXPECT_NEAR(m.col(i).sum(), 1.0, 1e-12);
    for (int j = 0; j < 6; ++j) {
      if (i != j) EXPECT_EQ(m(i, j) > 0.0, g.HasEdge(i, j));
    }
  }
}

TEST(MixingMatrixTest, RejectsNonStochastic) {
  Matrix m(2, 2);
  m << 0.6, 0.5, 0.5, 0.5;
  EXPECT_EQ(CodeOf([&] { MixingMatrix::FromDense(m); }),
            ErrorCode::kInvalidMatrix);
  m << 0.5, 0.4, 0.6, 0.5;
  EXPECT_EQ(CodeOf([&] { MixingMatrix::FromDense(m); }),
            ErrorCode::kInvalidMatrix);
}

TEST(LaplacianTest, PathOfTwo) {
  const std::vector<Edge> e = {{0, 1}};
  Graph g = Graph::Build(2, e);
  LaplacianMatrix l = Laplacian(g, MetropolisWeights(g));
  EXPECT_DOUBLE_EQ(l(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(l(0, 1), -0.5);
  EXPECT_DOUBLE_EQ(l(1, 0), -0.5);
  EXPECT_DOUBLE_EQ(l(1, 1), 0.5);
}

TEST(LaplacianTest, TriangleEigenvalues) {
  const std::vector<Edge> e = {{0, 1}, {1, 2}, {0, 2}};
  Graph g = Graph::Build(3, e);
  MixingMatrix w = MetropolisWeights(g);
  LaplacianMatrix l = Laplacian(g, w);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l.matrix());
  EXPECT_NEAR(es.eigenvalues()(0), 0.0, 1e-14);
  EXPECT_NEAR(es.eigenvalues()(1), 1.0, 1e-14);
  EXPECT_NEAR(es.eigenvalues()(2), 1.0, 1e-14);
}

TEST(LaplacianTest, AnnihilatesConsensus) {
  Graph g = SixAgentGraph();
  LaplacianMatrix l = Laplacian(g, MetropolisWeights(g));
  for (double c : {1.0, -3.5, 1e6}) {
    const Vector v = l.matrix() * Vector::Constant(6, c);
    EXPECT_LT(v.cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, std::abs(c)));
  }
  // Metropolis rows sum to one, so L = I - W.
  const Matrix diff =
      l.matrix() - (Matrix::Identity(6, 6) - MetropolisWeights(g).weights());
  EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SpectralSummaryTest, CompleteAveraging) {
  Matrix m = Matrix::Constant(4, 4, 0.25);
  MixingMatrix w = MixingMatrix::FromDense(m);
  SpectralSummary s = ComputeSpectralSummary(w, LaplacianFromWeights(w));
  EXPECT_NEAR(s.rho_w, 0.0, 1e-14);
  EXPECT_NEAR(s.rho, 1.0, 1e-14);
}

TEST(SpectralSummaryTest, SixAgentRegression) {
  Topology t = Topology::FromGraph(SixAgentGraph());
  EXPECT_NEAR(t.spectrum.rho_w, 0.6403882032022078, 1e-12);
  EXPECT_GT(t.spectrum.rho_w, 0.0);
  EXPECT_LT(t.spectrum.rho_w, 1.0);
  EXPECT_EQ(t.spectrum.laplacian_zero_eigenvalues, 1);
  EXPECT_NEAR(t.spectrum.lambda_max_l, 1.39039, 1e-5);
  EXPECT_NEAR(t.spectrum.lambda_min_pos_l, 0.359612, 1e-6);
}

// rho_w < 1 iff connected. Build accepts only connected graphs, so the
// disconnected direction goes through a block-diagonal W.
TEST(SpectralSummaryTest, DisconnectedHasUnitRho) {
  Matrix m = Matrix::Zero(4, 4);
  m.block(0, 0, 2, 2).setConstant(0.5);
  m.block(2, 2, 2, 2).setConstant(0.5);
  MixingMatrix w = MixingMatrix::FromDense(m);
  SpectralSummary s = ComputeSpectralSummary(w, LaplacianFromWeights(w));
  EXPECT_NEAR(s.rho_w, 1.0, 1e-12);
  EXPECT_EQ(s.laplacian_zero_eigenvalues, 2);

  const std::vector<Edge> path = {{0, 1}, {1, 2}, {2, 3}};
  Topology t = Topology::FromGraph(Graph::Build(4, path));
  EXPECT_LT(t.spectrum.rho_w, 1.0);
}

}  // namespace
}  // namespace dpc
