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

#include "dpc/objectives.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpc/error.h"

namespace dpc {
namespace {

void CheckDim(const Vector& x, int d, const char* what) {
  if (x.size() != d) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": expected dimension " +
                    std::to_string(d) + ", got " + std::to_string(x.size()));
  }
}

// log(1 + exp(t)) without overflow.
double Softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

// 1 / (1 + exp(-t)) without overflow.
double Logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string_view ObjectiveKindName(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kLogistic:
      return "logistic";
    case ObjectiveKind::kSinCos:
      return "sincos";
    case ObjectiveKind::kQuadratic:
      return "quadratic";
  }
  return "unknown";
}

Dataset GenerateDataset(int m, int d, Stream& rng) {
  if (m < 1 || d < 1) {
    throw Error::ConfigInvalid("objective", "dataset needs m >= 1 and d >= 1");
  }
  Dataset ds{Matrix(m, d), Vector(m)};
  for (int j = 0; j < m; ++j) {
    for (int s = 0; s < d; ++s) ds.features(j, s) = rng.Normal();
  }
  for (int j = 0; j < m; ++j) {
    ds.labels(j) = (rng.NextU64() >> 63) ? 1.0 : -1.0;
  }
  return ds;
}

ValueGrad LogisticValueGrad(const Dataset& ds, double lambda, double alpha,
                            const Vector& x) {
  CheckDim(x, ds.dim(), "logistic");
  const int m = ds.size();
  const Vector margins =
      (ds.features * x).cwiseProduct(ds.labels);  // u_j x.v_j
  ValueGrad out{0.0, Vector::Zero(x.size())};
  Vector weights(m);
  for (int j = 0; j < m; ++j) {
    out.value += Softplus(-margins(j));
    weights(j) = -ds.labels(j) * Logistic(-margins(j));
  }
  out.value /= m;
  out.gradient = ds.features.transpose() * weights / static_cast<double>(m);
  if (lambda != 0.0) {
    for (Eigen::Index s = 0; s < x.size(); ++s) {
      const double ax2 = alpha * x(s) * x(s);
      const double denom = 1.0 + ax2;
      out.value += lambda * ax2 / denom;
      out.gradient(s) += 2.0 * lambda * alpha * x(s) / (denom * denom);
    }
  }
  return out;
}

ValueGrad SinCosValueGrad(double m_i, const Vector& x) {
  const Eigen::ArrayXd a = x.array();
  const Eigen::ArrayXd sn = a.sin();
  const Eigen::ArrayXd cs = a.cos();
  ValueGrad out;
  out.value = (a * a).sum() + 3.0 * (sn * sn).sum() + m_i * (a * cs).sum();
  out.gradient = (2.0 * a + 6.0 * sn * cs + m_i * (cs - a * sn)).matrix();
  return out;
}

ValueGrad QuadraticValueGrad(const Vector& anchor, const Vector& x) {
  CheckDim(x, static_cast<int>(anchor.size()), "quadratic");
  Vector diff = x - anchor;
  return {0.5 * diff.squaredNorm(), std::move(diff)};
}

Vector FiniteDiffGrad(const std::function<double(const Vector&)>& f,
                      const Vector& x, double h) {
  if (!(h > 0.0)) throw Error::ConfigInvalid("h", "step must be positive");
  Vector g(x.size());
  Vector probe = x;
  for (Eigen::Index s = 0; s < x.size(); ++s) {
    probe(s) = x(s) + h;
    const double up = f(probe);
    probe(s) = x(s) - h;
    const double down = f(probe);
    probe(s) = x(s);
    g(s) = (up - down) / (2.0 * h);
  }
  return g;
}

LocalObjective LocalObjective::Logistic(Dataset ds, double lambda,
                                        double alpha) {
  const int d = ds.dim();
  return LocalObjective(LogisticTerm{std::move(ds), lambda, alpha}, d);
}

LocalObjective LocalObjective::SinCos(double m_i, int d) {
  return LocalObjective(SinCosTerm{m_i}, d);
}

LocalObjective LocalObjective::Quadratic(Vector anchor) {
  const int d = static_cast<int>(anchor.size());
  return LocalObjective(QuadraticTerm{std::move(anchor)}, d);
}

ObjectiveKind LocalObjective::kind() const {
  return std::visit(
      Overloaded{
          [](const LogisticTerm&) { return ObjectiveKind::kLogistic; },
          [](const SinCosTerm&) { return ObjectiveKind::kSinCos; },
          [](const QuadraticTerm&) { return ObjectiveKind::kQuadratic; }},
      term_);
}

ValueGrad LocalObjective::Evaluate(const Vector& x) const {
  CheckDim(x, dim_, "objective");
  return std::visit(
      Overloaded{[&x](const LogisticTerm& t) {
                   return LogisticValueGrad(t.data, t.lambda, t.alpha, x);
                 },
                 [&x](const SinCosTerm& t) { return SinCosValueGrad(t.m, x); },
                 [&x](const QuadraticTerm& t) {
                   return QuadraticValueGrad(t.anchor, x);
                 }},
      term_);
}

Vector LocalObjective::Gradient(const Vector& x) const {
  return Evaluate(x).gradient;
}

const Vector& LocalObjective::anchor() const {
  if (const auto* q = std::get_if<QuadraticTerm>(&term_)) return q->anchor;
  throw Error(ErrorCode::kConfigInvalid, "anchor() on a non-quadratic objective");
}

std::vector<double> DrawZeroSumCoefficients(int n, const StreamFactory& rng) {
  for (uint64_t attempt = 0;; ++attempt) {
    Stream s = rng.Make(0, StreamTag::kData, attempt);
    std::vector<double> m(n);
    double sum = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      m[i] = 2.0 * s.Uniform() - 1.0;
      sum += m[i];
    }
    m[n - 1] = -sum;
    if (std::none_of(m.begin(), m.end(), [](double v) { return v == 0.0; })) {
      return m;
    }
  }
}

std::vector<LocalObjective> BuildObjectives(const ObjectiveConfig& cfg, int n,
                                            const StreamFactory& rng) {
  if (cfg.d < 1) throw Error::ConfigInvalid("objective.d", "must be >= 1");
  std::vector<LocalObjective> out;
  out.reserve(n);
  switch (cfg.kind) {
    case ObjectiveKind::kLogistic:
      if (cfg.m < 1) throw Error::ConfigInvalid("objective.m", "must be >= 1");
      for (int i = 0; i < n; ++i) {
        Stream s = rng.Make(i, StreamTag::kData, 0);
        out.push_back(LocalObjective::Logistic(GenerateDataset(cfg.m, cfg.d, s),
                                               cfg.lambda, cfg.alpha));
      }
      break;
    case ObjectiveKind::kSinCos: {
      // Stream rounds are attempt indices here, agent 0 owns the draw.
      const std::vector<double> m = DrawZeroSumCoefficients(n, rng);
      for (int i = 0; i < n; ++i) {
        out.push_back(LocalObjective::SinCos(m[i], cfg.d));
      }
      break;
    }
    case ObjectiveKind::kQuadratic:
      for (int i = 0; i < n; ++i) {
        Stream s = rng.Make(i, StreamTag::kData, 0);
        Vector a(cfg.d);
        for (int t = 0; t < cfg.d; ++t) a(t) = s.Normal();
        out.push_back(LocalObjective::Quadratic(std::move(a)));
      }
      break;
  }
  return out;
}

Vector GlobalGradient(std::span<const LocalObjective> fs, const Vector& x) {
  Vector g = Vector::Zero(x.size());
  for (const auto& f : fs) g += f.Gradient(x);
  return g / static_cast<double>(fs.size());
}

double GlobalValue(std::span<const LocalObjective> fs, const Vector& x) {
  double v = 0.0;
  for (const auto& f : fs) v += f.Value(x);
  return v / static_cast<double>(fs.size());
}

double EstimateGradBound(std::span<const LocalObjective> fs, double radius,
                         int trials, Stream& rng) {
  if (trials < 1) throw Error::ConfigInvalid("trials", "must be >= 1");
  if (!(radius >= 0.0)) throw Error::ConfigInvalid("radius", "must be >= 0");
  if (fs.empty()) return 0.0;
  const int d = fs.front().dim();
  double best = 0.0;
  Vector x(d);
  for (int t = 0; t < trials; ++t) {
    const bool corner = (t % 2) == 1;
    for (int s = 0; s < d; ++s) {
      x(s) = corner ? ((rng.NextU64() >> 63) ? radius : -radius)
                    : radius * (2.0 * rng.Uniform() - 1.0);
    }
    for (const auto& f : fs) best = std::max(best, f.Gradient(x).norm());
  }
  return 1.1 * best;
}

}  // namespace dpc
