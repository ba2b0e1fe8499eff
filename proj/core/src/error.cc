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

#include "dpc/error.h"

#include <utility>

namespace dpc {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidEdge:
      return "InvalidEdge";
    case ErrorCode::kDisconnectedGraph:
      return "DisconnectedGraph";
    case ErrorCode::kInvalidMatrix:
      return "InvalidMatrix";
    case ErrorCode::kEigenSolverFailure:
      return "EigenSolverFailure";
    case ErrorCode::kSpecDimensionMismatch:
      return "SpecDimensionMismatch";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kConfigInvalid:
      return "ConfigInvalid";
    case ErrorCode::kNonFiniteState:
      return "NonFiniteState";
    case ErrorCode::kEmptyTrace:
      return "EmptyTrace";
    case ErrorCode::kIo:
      return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

Error Error::ConfigInvalid(std::string field, const std::string& why) {
  Error e(ErrorCode::kConfigInvalid, field + ": " + why);
  e.field_ = std::move(field);
  return e;
}

Error Error::NonFiniteState(int64_t round, const std::string& what) {
  Error e(ErrorCode::kNonFiniteState,
          "round " + std::to_string(round) + ": " + what);
  e.round_ = round;
  return e;
}

}  // namespace dpc
