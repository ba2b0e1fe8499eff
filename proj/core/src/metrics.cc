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
#include <cstdio>

#include "dpc/error.h"

namespace dpc {

std::string_view AlgorithmName(Algorithm a) {
  return a == Algorithm::kPgtc ? "pgtc" : "ppdc";
}

Vector Stack(const Matrix& x) {
  return Eigen::Map<const Vector>(x.data(), x.size());
}

void TraceRecorder::Begin(Algorithm algorithm, int n, int d,
                          int messages_per_agent, uint64_t bits_per_message) {
  trace_ = Trace{};
  trace_.algorithm = algorithm;
  trace_.n = n;
  trace_.d = d;
  trace_.messages_per_agent_per_round = messages_per_agent;
  trace_.bits_per_message = bits_per_message;
}

void TraceRecorder::Record(int64_t k, const Matrix& x,
                           double identity_residual, uint64_t cum_bits,
                           double theta_x, double theta_second) {
  TraceRow row;
  row.k = k;
  row.mean_iterate = x.colwise().mean().transpose();
  row.consensus_err =
      (x.rowwise() - row.mean_iterate.transpose()).squaredNorm();
  row.grad_norm_mean = GlobalGradient(objectives_, row.mean_iterate).norm();
  row.identity_residual = identity_residual;
  row.cum_bits = cum_bits;
  row.theta_x = theta_x;
  row.theta_second = theta_second;
  trace_.rows.push_back(std::move(row));
  if (store_iterates_) trace_.iterates.push_back(Stack(x));
}

std::vector<double> ResidualSeries(const Trace& trace, const Vector& x_inf) {
  if (x_inf.size() != static_cast<Eigen::Index>(trace.n) * trace.d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "reference point must have n*d entries");
  }
  if (trace.iterates.size() != trace.rows.size()) {
    throw Error(ErrorCode::kEmptyTrace,
                "residuals need a trace recorded with stored iterates");
  }
  std::vector<double> r;
  r.reserve(trace.iterates.size());
  double best = 0.0;
  for (const Vector& x : trace.iterates) {
    const double dist = (x - x_inf).squaredNorm();
    best = r.empty() ? dist : std::min(best, dist);
    r.push_back(best);
  }
  return r;
}

void AttachResiduals(Trace& trace, const Vector& x_inf) {
  const std::vector<double> r = ResidualSeries(trace, x_inf);
  for (size_t i = 0; i < r.size(); ++i) trace.rows[i].residual = r[i];
}

double FinalAccuracy(const Trace& trace) {
  if (trace.rows.empty()) throw Error(ErrorCode::kEmptyTrace, "empty trace");
  return trace.rows.back().grad_norm_mean;
}

std::vector<uint64_t> CumBits(const Trace& trace) {
  std::vector<uint64_t> bits;
  for (size_t i = 1; i < trace.rows.size(); ++i) {
    bits.push_back(trace.rows[i].cum_bits);
  }
  return bits;
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void WriteTraceCsv(const Trace& trace, std::ostream& out) {
  out << kTraceCsvHeader << '\n';
  for (const TraceRow& row : trace.rows) {
    out << row.k << ',' << FormatDouble(row.consensus_err) << ','
        << FormatDouble(row.grad_norm_mean) << ','
        << FormatDouble(row.identity_residual) << ',' << row.cum_bits << ','
        << FormatDouble(row.theta_x) << ',' << FormatDouble(row.theta_second)
        << ',';
    if (row.residual) out << FormatDouble(*row.residual);
    out << '\n';
  }
}

}  // namespace dpc
