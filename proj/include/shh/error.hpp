//  Copyright 2026 The shh Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shh {

enum class ErrorCode {
  kDuplicateIndex,
  kIndexOutOfRange,
  kEmpty,
  kDimensionMismatch,
  kInvalidParams,
  kInvalidArgument,
  kRaggedRow,
  kEmptyFile,
  kIngestInconsistency,
  kIo,
  kSupportTooLarge,
  kOverflow,
  kNoClassColumn,
  kTooManyClasses,
  kBudgetTooSmall,
  kCapExceeded,
  kBadSnapshot,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateIndex: return "DuplicateIndex";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kEmpty: return "Empty";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kRaggedRow: return "RaggedRow";
    case ErrorCode::kEmptyFile: return "EmptyFile";
    case ErrorCode::kIngestInconsistency: return "IngestInconsistency";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kSupportTooLarge: return "SupportTooLarge";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kNoClassColumn: return "NoClassColumn";
    case ErrorCode::kTooManyClasses: return "TooManyClasses";
    case ErrorCode::kBudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::kCapExceeded: return "CapExceeded";
    case ErrorCode::kBadSnapshot: return "BadSnapshot";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (notably the CLI) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for errors caused by bad user input rather than by the data or
  /// the environment.
  bool is_config_error() const noexcept {
    switch (code_) {
      case ErrorCode::kDuplicateIndex:
      case ErrorCode::kIndexOutOfRange:
      case ErrorCode::kEmpty:
      case ErrorCode::kInvalidParams:
      case ErrorCode::kInvalidArgument:
      case ErrorCode::kNoClassColumn:
      case ErrorCode::kBudgetTooSmall:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorCode code_;
};

}  // namespace shh
