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

#ifndef DPC_TOPOLOGY_H_
#define DPC_TOPOLOGY_H_

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dpc {

// Dense row-major storage used for every n x n and n x d quantity.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

using Edge = std::pair<int, int>;

// Validated, connected, undirected simple graph. Edges are stored with
// i < j, sorted.
class Graph {
 public:
  // Throws kInvalidEdge (self-loop, out of range, duplicate) or
  // kDisconnectedGraph.
  static Graph Build(int n, std::span<const Edge> edges);

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int i) const { return adjacency_[i]; }
  int degree(int i) const { return static_cast<int>(adjacency_[i].size()); }
  bool HasEdge(int i, int j) const;

 private:
  Graph() = default;

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

// The six-agent benchmark network (0-indexed).
Graph SixAgentGraph();

inline constexpr double kStochasticTolerance = 1e-12;

// Symmetric, nonnegative, doubly stochastic weights.
class MixingMatrix {
 public:
  // Validates the invariants; throws kInvalidMatrix.
  static MixingMatrix FromDense(Matrix w);

  const Matrix& weights() const { return w_; }
  int size() const { return static_cast<int>(w_.rows()); }
  double operator()(int i, int j) const { return w_(i, j); }

 private:
  explicit MixingMatrix(Matrix w) : w_(std::move(w)) {}
  Matrix w_;
};

// L = D - W with D the off-diagonal row sums of W. Rows sum to zero.
class LaplacianMatrix {
 public:
  const Matrix& matrix() const { return l_; }
  int size() const { return static_cast<int>(l_.rows()); }
  double operator()(int i, int j) const { return l_(i, j); }

 private:
  friend LaplacianMatrix LaplacianFromWeights(const MixingMatrix& w);
  explicit LaplacianMatrix(Matrix l) : l_(std::move(l)) {}
  Matrix l_;
};

struct SpectralSummary {
  double rho_w = 0.0;  // spectral radius of W - 11^T/n
  double rho = 1.0;    // 1 - rho_w
  double lambda_max_l = 0.0;
  double lambda_min_pos_l = 0.0;  // 0 when L has no positive eigenvalue
  int laplacian_zero_eigenvalues = 0;
};

// w_ij = 1 / (1 + max(deg_i, deg_j)) on edges; the diagonal takes the rest.
MixingMatrix MetropolisWeights(const Graph& g);

// Throws kInvalidMatrix when w's sparsity pattern does not match g.
LaplacianMatrix Laplacian(const Graph& g, const MixingMatrix& w);
LaplacianMatrix LaplacianFromWeights(const MixingMatrix& w);

// Throws kEigenSolverFailure if the symmetric eigen-solver does not converge.
SpectralSummary ComputeSpectralSummary(const MixingMatrix& w,
                                       const LaplacianMatrix& l);

// Everything the engines need about the network, built once.
struct Topology {
  Graph graph;
  MixingMatrix mixing;
  LaplacianMatrix laplacian;
  SpectralSummary spectrum;

  static Topology FromGraph(Graph g);
  int size() const { return graph.size(); }
};

}  // namespace dpc

#endif  // DPC_TOPOLOGY_H_
