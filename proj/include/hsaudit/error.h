/* Copyright 2026 The hsaudit Authors. All Rights Reserved.

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

#ifndef HSAUDIT_ERROR_H_
#define HSAUDIT_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace hsaudit {

// Every failure raised by the toolkit carries one of these codes so that
// callers (and the CLI exit-status mapping) can branch on the kind of
// failure without parsing messages.
enum class ErrorCode {
  // corpus
  kMissingColumn,
  kDuplicateCaseId,
  kUnknownLabel,
  kMalformedRow,
  kNoTemplates,
  // adapters
  kBackendUnavailable,
  kQuotaExceeded,
  kMalformedResponse,
  kIncompleteCache,
  // bias
  kMissingScore,
  kMissingIdentity,
  kUnknownIdentity,
  // emotion
  kParseFailure,
  kNoPolarityForNone,
  kUnknownCaseId,
  kMissingPrediction,
  // scm
  kUnsupportedIdentity,
  kNonFiniteLogit,
  kMissingHypothesis,
  // analysis
  kTooFewPoints,
  kTooFewClusters,
  kDegenerateVariance,
  // report / cli
  kIoFailure,
  kConfigInvalid,
  kStageDependencyMissing,
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const { return code_; }
  // The message without the code prefix.
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace hsaudit

#endif  // HSAUDIT_ERROR_H_
