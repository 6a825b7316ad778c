/*
 * Copyright 2026 The vprex Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef VPREX_ERROR_H_
#define VPREX_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace vprex {

enum class ErrorCode {
  kMalformedJson,
  kSchemaViolation,
  kUnknownXpathId,
  kEmptyDataset,
  kLabelOutOfRange,
  kDimensionMismatch,
  kUnsupportedVersion,
  kMalformedModel,
  kSchemaMismatch,
  kEmptyValidation,
  kInsufficientPages,
  kDomainMismatch,
  kEmptyHoldout,
  kTooFewDomains,
  kBadConfig,
  kDuplicateKey,
  kIo,
  kDomainLeakage,
  kAddressInUse,
  kNotFound,
};

std::string_view ErrorCodeName(ErrorCode code);

// All recoverable failures in the library are reported as vprex::Error.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vprex

#endif  // VPREX_ERROR_H_
