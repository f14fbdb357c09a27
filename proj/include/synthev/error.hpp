/* Copyright 2026 The synthev Authors. All Rights Reserved.

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
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace synthev {

// Failure categories. The CLI maps these onto process exit codes and the
// Turing service onto HTTP status codes.
enum class ErrorKind {
  kIo,                   // missing or unreadable file
  kFormat,               // file present but malformed
  kValidation,           // argument or precondition violated
  kInsufficientSamples,  // too few rows/observations for the estimator
  kRange,                // sample size outside the supported range
  kDegenerate,           // zero variance, zero marginal, ...
  kNumeric,              // non-PSD covariance, non-finite evaluation
  kContract,             // user-supplied callable broke its contract
  kNotFound,
  kConflict,
  kSequence,
  kState,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return "io";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kInsufficientSamples: return "insufficient_samples";
    case ErrorKind::kRange: return "range";
    case ErrorKind::kDegenerate: return "degenerate";
    case ErrorKind::kNumeric: return "numeric";
    case ErrorKind::kContract: return "contract";
    case ErrorKind::kNotFound: return "not_found";
    case ErrorKind::kConflict: return "conflict";
    case ErrorKind::kSequence: return "sequence";
    case ErrorKind::kState: return "state";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorKind::kValidation, message);
}

}  // namespace synthev
