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

#ifndef DPC_OBJECTIVES_H_
#define DPC_OBJECTIVES_H_

#include <functional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "dpc/rng.h"
#include "dpc/topology.h"

namespace dpc {

enum class ObjectiveKind { kLogistic, kSinCos, kQuadratic };

std::string_view ObjectiveKindName(ObjectiveKind kind);

// Binary classification samples: one feature row per sample, labels +-1.
struct Dataset {
  Matrix features;
  Vector labels;

  int size() const { return static_cast<int>(features.rows()); }
  int dim() const { return static_cast<int>(features.cols()); }
};

// Features i.i.d. N(0, 1), labels uniform on {-1, +1}.
Dataset GenerateDataset(int m, int d, Stream& rng);

struct ValueGrad {
  double value = 0.0;
  Vector gradient;
};

// (1/m) sum_j log(1 + exp(-u_j x.v_j)) + sum_s lambda alpha x_s^2 / (1 + alpha x_s^2)
ValueGrad LogisticValueGrad(const Dataset& ds, double lambda, double alpha,
                            const Vector& x);
// x.x + 3 sin(x).sin(x) + m_i x.cos(x), element-wise trig.
ValueGrad SinCosValueGrad(double m_i, const Vector& x);
// 0.5 ||x - a||^2
ValueGrad QuadraticValueGrad(const Vector& anchor, const Vector& x);

// Central differences, one coordinate at a time.
Vector FiniteDiffGrad(const std::function<double(const Vector&)>& f,
                      const Vector& x, double h);

// One agent's private cost f_i. Immutable; all methods are thread-safe.
class LocalObjective {
 public:
  static LocalObjective Logistic(Dataset ds, double lambda, double alpha);
  static LocalObjective SinCos(double m_i, int d);
  static LocalObjective Quadratic(Vector anchor);

  ObjectiveKind kind() const;
  int dim() const { return dim_; }

  ValueGrad Evaluate(const Vector& x) const;
  double Value(const Vector& x) const { return Evaluate(x).value; }
  Vector Gradient(const Vector& x) const;

  // Minimizer of 0.5||x - a||^2; only meaningful for kQuadratic.
  const Vector& anchor() const;

 private:
  struct LogisticTerm {
    Dataset data;
    double lambda;
    double alpha;
  };
  struct SinCosTerm {
    double m;
  };
  struct QuadraticTerm {
    Vector anchor;
  };

  LocalObjective(std::variant<LogisticTerm, SinCosTerm, QuadraticTerm> term,
                 int dim)
      : term_(std::move(term)), dim_(dim) {}

  std::variant<LogisticTerm, SinCosTerm, QuadraticTerm> term_;
  int dim_;
};

struct ObjectiveConfig {
  ObjectiveKind kind = ObjectiveKind::kQuadratic;
  int d = 10;
  int m = 200;  // samples per agent, logistic only
  double lambda = 0.001;
  double alpha = 1.0;
};

// n nonzero coefficients summing to zero: n-1 uniform draws on (-1, 1), the
// last one the negated sum; redrawn until all are nonzero.
std::vector<double> DrawZeroSumCoefficients(int n, const StreamFactory& rng);

// Per-agent objectives. Every agent's data comes from its own kData stream,
// so the problem instance depends only on the master seed.
std::vector<LocalObjective> BuildObjectives(const ObjectiveConfig& cfg, int n,
                                            const StreamFactory& rng);

// Gradient of f = (1/n) sum_i f_i at a common point.
Vector GlobalGradient(std::span<const LocalObjective> fs, const Vector& x);
double GlobalValue(std::span<const LocalObjective> fs, const Vector& x);

// Empirical stand-in for the global gradient bound M: the largest ||grad f_i||
// over sampled points of [-radius, radius]^d (half interior, half corners),
// inflated by 1.1. Only valid on that box.
double EstimateGradBound(std::span<const LocalObjective> fs, double radius,
                         int trials, Stream& rng);

}  // namespace dpc

#endif  // DPC_OBJECTIVES_H_
