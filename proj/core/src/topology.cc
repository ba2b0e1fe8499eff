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

#include <algorithm>
#include <cmath>
#include <string>

#include "dpc/error.h"

namespace dpc {
namespace {

std::string EdgeString(const Edge& e) {
  return "(" + std::to_string(e.first) + ", " + std::to_string(e.second) + ")";
}

// Eigenvalues of L below this are treated as zero.
constexpr double kZeroEigenvalue = 1e-10;

}  // namespace

Graph Graph::Build(int n, std::span<const Edge> edges) {
  if (n < 2) {
    throw Error(ErrorCode::kInvalidEdge,
                "graph needs at least 2 agents, got " + std::to_string(n));
  }
  Graph g;
  g.n_ = n;
  g.adjacency_.resize(n);
  for (const Edge& raw : edges) {
    const auto [a, b] = raw;
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw Error(ErrorCode::kInvalidEdge,
                  "edge " + EdgeString(raw) + " out of range for n=" +
                      std::to_string(n));
    }
    if (a == b) {
      throw Error(ErrorCode::kInvalidEdge, "self-loop " + EdgeString(raw));
    }
    g.edges_.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  if (auto dup = std::adjacent_find(g.edges_.begin(), g.edges_.end());
      dup != g.edges_.end()) {
    throw Error(ErrorCode::kInvalidEdge, "duplicate edge " + EdgeString(*dup));
  }
  for (const auto& [a, b] : g.edges_) {
    g.adjacency_[a].push_back(b);
    g.adjacency_[b].push_back(a);
  }
  for (auto& nbrs : g.adjacency_) std::sort(nbrs.begin(), nbrs.end());

  std::vector<bool> seen(n, false);
  std::vector<int> frontier{0};
  seen[0] = true;
  int reached = 1;
  while (!frontier.empty()) {
    const int v = frontier.back();
    frontier.pop_back();
    for (int u : g.adjacency_[v]) {
      if (!seen[u]) {
        seen[u] = true;
        ++reached;
        frontier.push_back(u);
      }
    }
  }
  if (reached != n) {
    throw Error(ErrorCode::kDisconnectedGraph,
                std::to_string(n - reached) + " of " + std::to_string(n) +
                    " agents unreachable from agent 0");
  }
  return g;
}

bool Graph::HasEdge(int i, int j) const {
  const auto& nbrs = adjacency_[i];
  return std::binary_search(nbrs.begin(), nbrs.end(), j);
}

Graph SixAgentGraph() {
  const Edge edges[] = {{0, 1}, {0, 3}, {0, 5}, {1, 2},
                        {1, 4}, {2, 3}, {3, 4}, {4, 5}};
  return Graph::Build(6, edges);
}

MixingMatrix MixingMatrix::FromDense(Matrix w) {
  const auto n = w.rows();
  if (n < 1 || w.cols() != n) {
    throw Error(ErrorCode::kInvalidMatrix, "mixing matrix must be square");
  }
  if (!w.allFinite() || (w.array() < 0.0).any()) {
    throw Error(ErrorCode::kInvalidMatrix,
                "mixing matrix entries must be finite and nonnegative");
  }
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > kStochasticTolerance) {
    throw Error(ErrorCode::kInvalidMatrix, "mixing matrix is not symmetric");
  }
  const double row_dev = (w.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double col_dev = (w.colwise().sum().array() - 1.0).abs().maxCoeff();
  if (row_dev > kStochasticTolerance || col_dev > kStochasticTolerance) {
    throw Error(ErrorCode::kInvalidMatrix,
                "mixing matrix is not doubly stochastic");
  }
  return MixingMatrix(std::move(w));
}

MixingMatrix MetropolisWeights(const Graph& g) {
  const int n = g.size();
  Matrix w = Matrix::Zero(n, n);
  for (const auto& [i, j] : g.edges()) {
    const double wij = 1.0 / (1.0 + std::max(g.degree(i), g.degree(j)));
    w(i, j) = wij;
    w(j, i) = wij;
  }
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j : g.neighbors(i)) off += w(i, j);
    w(i, i) = 1.0 - off;
  }
  return MixingMatrix::FromDense(std::move(w));
}

LaplacianMatrix LaplacianFromWeights(const MixingMatrix& w) {
  const int n = w.size();
  Matrix l = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double degree = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i || w(i, j) == 0.0) continue;
      l(i, j) = -w(i, j);
      degree += w(i, j);
    }
    l(i, i) = degree;
  }
  return LaplacianMatrix(std::move(l));
}

LaplacianMatrix Laplacian(const Graph& g, const MixingMatrix& w) {
  if (w.size() != g.size()) {
    throw Error(ErrorCode::kInvalidMatrix, "mixing matrix size != graph size");
  }
  for (int i = 0; i < g.size(); ++i) {
    for (int j = 0; j < g.size(); ++j) {
      if (i == j) continue;
      if ((w(i, j) > 0.0) != g.HasEdge(i, j)) {
        throw Error(ErrorCode::kInvalidMatrix,
                    "mixing weight (" + std::to_string(i) + ", " +
                        std::to_string(j) + ") does not match the edge set");
      }
    }
  }
  return LaplacianFromWeights(w);
}

SpectralSummary ComputeSpectralSummary(const MixingMatrix& w,
                                       const LaplacianMatrix& l) {
  const int n = w.size();
  const Matrix centered =
      w.weights() - Matrix::Constant(n, n, 1.0 / static_cast<double>(n));

  Eigen::SelfAdjointEigenSolver<Matrix> w_solver(centered,
                                                 Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> l_solver(l.matrix(),
                                                 Eigen::EigenvaluesOnly);
  if (w_solver.info() != Eigen::Success || l_solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kEigenSolverFailure,
                "symmetric eigen-solver did not converge");
  }

  SpectralSummary s;
  s.rho_w = w_solver.eigenvalues().cwiseAbs().maxCoeff();
  s.rho = 1.0 - s.rho_w;
  const Vector& lam = l_solver.eigenvalues();  // ascending
  s.lambda_max_l = lam(lam.size() - 1);
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (std::abs(lam(i)) <= kZeroEigenvalue) {
      ++s.laplacian_zero_eigenvalues;
    } else if (lam(i) > 0.0 && s.lambda_min_pos_l == 0.0) {
      s.lambda_min_pos_l = lam(i);
    }
  }
  return s;
}

Topology Topology::FromGraph(Graph g) {
  MixingMatrix w = MetropolisWeights(g);
  LaplacianMatrix l = Laplacian(g, w);
  SpectralSummary s = ComputeSpectralSummary(w, l);
  return Topology{std::move(g), std::move(w), std::move(l), s};
}

}  // namespace dpc
