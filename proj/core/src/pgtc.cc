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

#include "dpc/pgtc.h"

#include <string>

#include "dpc/error.h"

namespace dpc {
namespace {

void CheckShapes(std::span<const LocalObjective> objectives, int n,
                 const Matrix& x0) {
  if (static_cast<int>(objectives.size()) != n || x0.rows() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "need one objective and one initial row per agent");
  }
  for (const auto& f : objectives) {
    if (f.dim() != x0.cols()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "objective dimension does not match x0");
    }
  }
}

// Row i of the result is sum_j w_ij (v_j - v_i).
Matrix MixDifferences(const MixingMatrix& w, const Matrix& v) {
  const int n = w.size();
  Matrix out = Matrix::Zero(n, v.cols());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i || w(i, j) == 0.0) continue;
      out.row(i) += w(i, j) * (v.row(j) - v.row(i));
    }
  }
  return out;
}

}  // namespace

void PgtcConfig::Validate(int d) const {
  compressor.Validate(d);
  if (!(eta > 0.0)) throw Error::ConfigInvalid("gains.eta", "must be > 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw Error::ConfigInvalid("gains.gamma", "must lie in (0, 1]");
  }
  const double upper = 1.0 / compressor.r;
  if (!(alpha_x > 0.0 && alpha_x < upper)) {
    throw Error::ConfigInvalid("gains.alpha_x", "must lie in (0, 1/r)");
  }
  if (!(alpha_y > 0.0 && alpha_y < upper)) {
    throw Error::ConfigInvalid("gains.alpha_y", "must lie in (0, 1/r)");
  }
  try {
    noise_x.Validate();
  } catch (const Error& e) {
    throw Error::ConfigInvalid("noise.x." + e.field(), e.what());
  }
  try {
    noise_y.Validate();
  } catch (const Error& e) {
    throw Error::ConfigInvalid("noise.y." + e.field(), e.what());
  }
  if (iterations < 1) throw Error::ConfigInvalid("iterations", "must be >= 1");
}

PgtcState PgtcInit(const PgtcConfig& cfg,
                   std::span<const LocalObjective> objectives,
                   const Topology& topology, const Matrix& x0) {
  const int n = topology.size();
  const int d = static_cast<int>(x0.cols());
  CheckShapes(objectives, n, x0);
  cfg.Validate(d);

  PgtcState s;
  s.x = x0;
  s.grad.resize(n, d);
  for (int i = 0; i < n; ++i) {
    s.grad.row(i) = objectives[i].Gradient(x0.row(i).transpose()).transpose();
  }
  s.y = s.grad;
  s.xc = Matrix::Zero(n, d);
  s.yc = Matrix::Zero(n, d);
  s.noise_y_cumsum = Vector::Zero(d);
  s.k = 0;
  return s;
}

void PgtcStep(PgtcState& s, const PgtcConfig& cfg,
              std::span<const LocalObjective> objectives, const MixingMatrix& w,
              const StreamFactory& rng, BitMeter& meter) {
  const int n = static_cast<int>(s.x.rows());
  const int d = static_cast<int>(s.x.cols());
  const double theta_x = cfg.noise_x.ScaleAt(s.k);
  const double theta_y = cfg.noise_y.ScaleAt(s.k);
  const auto round = static_cast<uint64_t>(s.k);

  Matrix xi_y(n, d);
  s.xa.resize(n, d);
  s.ya.resize(n, d);
  for (int i = 0; i < n; ++i) {
    Stream sx = rng.Make(i, StreamTag::kNoiseX, round);
    Stream sy = rng.Make(i, StreamTag::kNoiseY, round);
    s.xa.row(i) = s.x.row(i) + SampleLaplace(theta_x, d, sx).transpose();
    xi_y.row(i) = SampleLaplace(theta_y, d, sy).transpose();
  }
  s.ya = s.y + xi_y;

  // Each sender compresses once; every receiver decodes the same vector.
  s.xhat.resize(n, d);
  s.yhat.resize(n, d);
  for (int i = 0; i < n; ++i) {
    Stream sc = rng.Make(i, StreamTag::kCompress, round);
    const Vector dx = (s.xa.row(i) - s.xc.row(i)).transpose();
    const Vector dy = (s.ya.row(i) - s.yc.row(i)).transpose();
    CompressedMessage mx = Compress(cfg.compressor, dx, sc);
    CompressedMessage my = Compress(cfg.compressor, dy, sc);
    meter.Record(mx.bit_cost);
    meter.Record(my.bit_cost);
    if (cfg.compressor.is_identity()) {
      // xc + (xa - xc) is xa up to rounding; decode it exactly.
      s.xhat.row(i) = s.xa.row(i);
      s.yhat.row(i) = s.ya.row(i);
    } else {
      s.xhat.row(i) = s.xc.row(i) + mx.vector.transpose();
      s.yhat.row(i) = s.yc.row(i) + my.vector.transpose();
    }
  }

  Matrix x_next = s.xa + cfg.gamma * MixDifferences(w, s.xhat) - cfg.eta * s.y;
  Matrix grad_next(n, d);
  for (int i = 0; i < n; ++i) {
    grad_next.row(i) =
        objectives[i].Gradient(x_next.row(i).transpose()).transpose();
  }
  Matrix y_next =
      s.ya + cfg.gamma * MixDifferences(w, s.yhat) + grad_next - s.grad;

  if (!x_next.allFinite() || !y_next.allFinite()) {
    throw Error::NonFiniteState(s.k, "PGTC iterate is not finite");
  }

  s.xc = (1.0 - cfg.alpha_x) * s.xc + cfg.alpha_x * s.xhat;
  s.yc = (1.0 - cfg.alpha_y) * s.yc + cfg.alpha_y * s.yhat;
  s.x = std::move(x_next);
  s.y = std::move(y_next);
  s.grad = std::move(grad_next);
  s.noise_y_cumsum += xi_y.colwise().sum().transpose() / static_cast<double>(n);
  ++s.k;
}

double TrackingResidual(const PgtcState& s) {
  const Vector gap = s.y.colwise().mean().transpose() -
                     s.grad.colwise().mean().transpose() - s.noise_y_cumsum;
  return gap.cwiseAbs().maxCoeff();
}

PgtcState PgtcRun(const PgtcConfig& cfg,
                  std::span<const LocalObjective> objectives,
                  const Topology& topology, const Matrix& x0,
                  const StreamFactory& rng, TraceRecorder& sink) {
  PgtcState s = PgtcInit(cfg, objectives, topology, x0);
  const int d = static_cast<int>(x0.cols());
  BitMeter meter;
  sink.Begin(Algorithm::kPgtc, topology.size(), d, 2,
             BitCost(cfg.compressor, d));
  sink.Record(0, s.x, TrackingResidual(s), 0, cfg.noise_x.ScaleAt(0),
              cfg.noise_y.ScaleAt(0));
  for (int64_t k = 0; k < cfg.iterations; ++k) {
    PgtcStep(s, cfg, objectives, topology.mixing, rng, meter);
    sink.Record(s.k, s.x, TrackingResidual(s), meter.bits(),
                cfg.noise_x.ScaleAt(s.k), cfg.noise_y.ScaleAt(s.k));
  }
  return s;
}

}  // namespace dpc
