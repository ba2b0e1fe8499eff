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

#include "dpc/ppdc.h"

#include <string>

#include "dpc/error.h"

namespace dpc {
namespace {

// Row i is sum_j L_ij xhat_j, evaluated as sum_{j != i} w_ij (xhat_i - xhat_j)
// so the terms cancel pairwise when summed over agents.
Matrix ApplyLaplacian(const LaplacianMatrix& l, const Matrix& v) {
  const int n = l.size();
  Matrix out = Matrix::Zero(n, v.cols());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i || l(i, j) == 0.0) continue;
      out.row(i) += -l(i, j) * (v.row(i) - v.row(j));
    }
  }
  return out;
}

}  // namespace

void PpdcConfig::Validate(int d) const {
  compressor.Validate(d);
  if (!(eta > 0.0)) throw Error::ConfigInvalid("gains.eta", "must be > 0");
  if (!(gamma > 0.0)) throw Error::ConfigInvalid("gains.gamma", "must be > 0");
  if (!(omega > 0.0)) throw Error::ConfigInvalid("gains.omega", "must be > 0");
  if (!(alpha_x > 0.0 && alpha_x < 1.0 / compressor.r)) {
    throw Error::ConfigInvalid("gains.alpha_x", "must lie in (0, 1/r)");
  }
  try {
    noise_x.Validate();
  } catch (const Error& e) {
    throw Error::ConfigInvalid("noise.x." + e.field(), e.what());
  }
  try {
    noise_v.Validate();
  } catch (const Error& e) {
    throw Error::ConfigInvalid("noise.v." + e.field(), e.what());
  }
  if (iterations < 1) throw Error::ConfigInvalid("iterations", "must be >= 1");
}

PpdcState PpdcInit(const PpdcConfig& cfg,
                   std::span<const LocalObjective> objectives,
                   const Topology& topology, const Matrix& x0) {
  const int n = topology.size();
  const int d = static_cast<int>(x0.cols());
  if (static_cast<int>(objectives.size()) != n || x0.rows() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "need one objective and one initial row per agent");
  }
  cfg.Validate(d);

  PpdcState s;
  s.x = x0;
  s.v = Matrix::Zero(n, d);
  s.xc = Matrix::Zero(n, d);
  s.grad.resize(n, d);
  for (int i = 0; i < n; ++i) {
    if (objectives[i].dim() != d) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "objective dimension does not match x0");
    }
    s.grad.row(i) = objectives[i].Gradient(x0.row(i).transpose()).transpose();
  }
  s.noise_v_cumsum = Vector::Zero(d);
  return s;
}

void PpdcStep(PpdcState& s, const PpdcConfig& cfg,
              std::span<const LocalObjective> objectives,
              const LaplacianMatrix& l, const StreamFactory& rng,
              BitMeter& meter) {
  const int n = static_cast<int>(s.x.rows());
  const int d = static_cast<int>(s.x.cols());
  const double theta_x = cfg.noise_x.ScaleAt(s.k);
  const double theta_v = cfg.noise_v.ScaleAt(s.k);
  const auto round = static_cast<uint64_t>(s.k);

  Matrix xi_v(n, d);
  s.xa.resize(n, d);
  for (int i = 0; i < n; ++i) {
    Stream sx = rng.Make(i, StreamTag::kNoiseX, round);
    Stream sv = rng.Make(i, StreamTag::kNoiseV, round);
    s.xa.row(i) = s.x.row(i) + SampleLaplace(theta_x, d, sx).transpose();
    xi_v.row(i) = SampleLaplace(theta_v, d, sv).transpose();
  }

  s.xhat.resize(n, d);
  for (int i = 0; i < n; ++i) {
    Stream sc = rng.Make(i, StreamTag::kCompress, round);
    const Vector dx = (s.xa.row(i) - s.xc.row(i)).transpose();
    CompressedMessage mx = Compress(cfg.compressor, dx, sc);
    meter.Record(mx.bit_cost);
    if (cfg.compressor.is_identity()) {
      s.xhat.row(i) = s.xa.row(i);
    } else {
      s.xhat.row(i) = s.xc.row(i) + mx.vector.transpose();
    }
  }

  const Matrix lap = ApplyLaplacian(l, s.xhat);
  Matrix x_next =
      s.xa - cfg.eta * (cfg.gamma * lap + cfg.omega * s.v + s.grad);
  Matrix v_next = s.v + xi_v + cfg.eta * cfg.omega * lap;

  if (!x_next.allFinite() || !v_next.allFinite()) {
    throw Error::NonFiniteState(s.k, "PPDC iterate is not finite");
  }

  Matrix grad_next(n, d);
  for (int i = 0; i < n; ++i) {
    grad_next.row(i) =
        objectives[i].Gradient(x_next.row(i).transpose()).transpose();
  }

  s.xc = (1.0 - cfg.alpha_x) * s.xc + cfg.alpha_x * s.xhat;
  s.x = std::move(x_next);
  s.v = std::move(v_next);
  s.grad = std::move(grad_next);
  s.noise_v_cumsum += xi_v.colwise().sum().transpose() / static_cast<double>(n);
  ++s.k;
}

double DualAverageResidual(const PpdcState& s) {
  return (s.v.colwise().mean().transpose() - s.noise_v_cumsum)
      .cwiseAbs()
      .maxCoeff();
}

PpdcState PpdcRun(const PpdcConfig& cfg,
                  std::span<const LocalObjective> objectives,
                  const Topology& topology, const Matrix& x0,
                  const StreamFactory& rng, TraceRecorder& sink) {
  PpdcState s = PpdcInit(cfg, objectives, topology, x0);
  const int d = static_cast<int>(x0.cols());
  BitMeter meter;
  sink.Begin(Algorithm::kPpdc, topology.size(), d, 1,
             BitCost(cfg.compressor, d));
  sink.Record(0, s.x, DualAverageResidual(s), 0, cfg.noise_x.ScaleAt(0),
              cfg.noise_v.ScaleAt(0));
  for (int64_t k = 0; k < cfg.iterations; ++k) {
    PpdcStep(s, cfg, objectives, topology.laplacian, rng, meter);
    sink.Record(s.k, s.x, DualAverageResidual(s), meter.bits(),
                cfg.noise_x.ScaleAt(s.k), cfg.noise_v.ScaleAt(s.k));
  }
  return s;
}

}  // namespace dpc
