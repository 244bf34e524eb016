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

#ifndef MASKINFO_ERROR_H_
#define MASKINFO_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace maskinfo {

enum class ErrorCode {
  kUnclosedRing,
  kUnbalancedParen,
  kUnknownToken,
  kMultiFragment,
  kEmptyInput,
  kDisconnectedMotif,
  kShapeMismatch,
  kNonFiniteScore,
  kOutOfRangeIndex,
  kDimMismatch,
  kEmptyCounts,
  kEmptySupport,
  kMissingColumn,
  kIOFailure,
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every recoverable failure in the toolkit is reported through this type.
// The CLI maps InvalidArgument to exit code 1 and everything else to 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace maskinfo

#endif  // MASKINFO_ERROR_H_
