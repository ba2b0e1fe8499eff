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

#ifndef DPC_ERROR_H_
#define DPC_ERROR_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dpc {

enum class ErrorCode {
  kInvalidEdge,
  kDisconnectedGraph,
  kInvalidMatrix,
  kEigenSolverFailure,
  kSpecDimensionMismatch,
  kDimensionMismatch,
  kConfigInvalid,
  kNonFiniteState,
  kEmptyTrace,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library. Config errors carry the JSON-style
// path of the offending field; divergence errors carry the round index.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }
  const std::string& field() const { return field_; }
  std::optional<int64_t> round() const { return round_; }

  static Error ConfigInvalid(std::string field, const std::string& why);
  static Error NonFiniteState(int64_t round, const std::string& what);

 private:
  ErrorCode code_;
  std::string field_;
  std::optional<int64_t> round_;
};

}  // namespace dpc

#endif  // DPC_ERROR_H_
