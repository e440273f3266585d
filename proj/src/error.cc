// Copyright 2026 The BLKP Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "blkp/error.h"

namespace blkp {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig:
      return "invalid-config";
    case ErrorCode::kMalformedDocument:
      return "malformed-document";
    case ErrorCode::kLengthMismatch:
      return "length-mismatch";
    case ErrorCode::kNonPositive:
      return "non-positive";
    case ErrorCode::kCapacityOutOfRange:
      return "capacity-out-of-range";
    case ErrorCode::kOverflowRisk:
      return "overflow-risk";
    case ErrorCode::kInfeasibleLeader:
      return "infeasible-leader";
    case ErrorCode::kShapeMismatch:
      return "shape-mismatch";
    case ErrorCode::kVersionMismatch:
      return "version-mismatch";
    case ErrorCode::kCorruptCheckpoint:
      return "corrupt-checkpoint";
    case ErrorCode::kDimensionMismatch:
      return "dimension-mismatch";
    case ErrorCode::kMissingLabels:
      return "missing-labels";
    case ErrorCode::kDivergence:
      return "divergence";
    case ErrorCode::kMissingExactValue:
      return "missing-exact-value";
    case ErrorCode::kIo:
      return "io";
  }
  return "unknown";
}

}  // namespace blkp
