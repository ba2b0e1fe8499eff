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

#ifndef DPC_METRICS_H_
#define DPC_METRICS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dpc/objectives.h"
#include "dpc/topology.h"

namespace dpc {

enum class Algorithm { kPgtc, kPpdc };

std::string_view AlgorithmName(Algorithm a);

// Counts transmitted messages and payload bits.
class BitMeter {
 public:
  void Record(uint64_t bits) {
    bits_ += bits;
    ++messages_;
  }
  uint64_t bits() const { return bits_; }
  uint64_t messages() const { return messages_; }

 private:
  uint64_t bits_ = 0;
  uint64_t messages_ = 0;
};

struct TraceRow {
  int64_t k = 0;
  double consensus_err = 0.0;   // ||x_k - 1 (x) xbar_k||^2
  double grad_norm_mean = 0.0;  // ||grad f(xbar_k)||
  Vector mean_iterate;          // xbar_k
  // Tracking identity (PGTC) or dual-average identity (PPDC) residual,
  // infinity norm.
  double identity_residual = 0.0;
  uint64_t cum_bits = 0;
  double theta_x = 0.0;
  double theta_second = 0.0;
  std::optional<double> residual;  // R_k, when a reference point is known
};

struct Trace {
  Algorithm algorithm = Algorithm::kPgtc;
  int n = 0;
  int d = 0;
  int messages_per_agent_per_round = 0;
  uint64_t bits_per_message = 0;
  std::vector<TraceRow> rows;
  // Stacked iterates x_k in R^{nd}, one per row; empty unless requested.
  std::vector<Vector> iterates;
};

// Flattens an n x d agent matrix into the stacked vector [x_1; ...; x_n].
Vector Stack(const Matrix& x);

// The metric sink engines write to once per round (plus the k = 0 snapshot).
class TraceRecorder {
 public:
  TraceRecorder(std::span<const LocalObjective> objectives, bool store_iterates)
      : objectives_(objectives), store_iterates_(store_iterates) {}

  void Begin(Algorithm algorithm, int n, int d, int messages_per_agent,
             uint64_t bits_per_message);
  void Record(int64_t k, const Matrix& x, double identity_residual,
              uint64_t cum_bits, double theta_x, double theta_second);

  const Trace& trace() const { return trace_; }
  Trace Take() { return std::move(trace_); }

 private:
  std::span<const LocalObjective> objectives_;
  bool store_iterates_;
  Trace trace_;
};

// R_k = min_{t <= k} ||x_t - x_inf||^2 over stacked iterates. Throws
// kDimensionMismatch if x_inf is not n*d long and kEmptyTrace when iterates
// were not stored.
std::vector<double> ResidualSeries(const Trace& trace, const Vector& x_inf);

// Fills each row's residual from ResidualSeries.
void AttachResiduals(Trace& trace, const Vector& x_inf);

// ||grad f(xbar_K)|| at the last row. Throws kEmptyTrace.
double FinalAccuracy(const Trace& trace);

// Cumulative bits after each executed round (no entry for the k = 0 row).
std::vector<uint64_t> CumBits(const Trace& trace);

// 17 significant digits, the replay format for every float we emit.
std::string FormatDouble(double v);

inline constexpr std::string_view kTraceCsvHeader =
    "k,consensus_err,grad_norm_mean,tracking_or_dual_residual,cum_bits,"
    "theta_x,theta_second,R_k";

void WriteTraceCsv(const Trace& trace, std::ostream& out);

}  // namespace dpc

#endif  // DPC_METRICS_H_
