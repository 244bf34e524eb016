/* Copyright 2026 The maskinfo Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "maskinfo/error.h"

namespace maskinfo {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnclosedRing: return "UnclosedRing";
    case ErrorCode::kUnbalancedParen: return "UnbalancedParen";
    case ErrorCode::kUnknownToken: return "UnknownToken";
    case ErrorCode::kMultiFragment: return "MultiFragment";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kDisconnectedMotif: return "DisconnectedMotif";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNonFiniteScore: return "NonFiniteScore";
    case ErrorCode::kOutOfRangeIndex: return "OutOfRangeIndex";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kEmptyCounts: return "EmptyCounts";
    case ErrorCode::kEmptySupport: return "EmptySupport";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kIOFailure: return "IOFailure";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace maskinfo
