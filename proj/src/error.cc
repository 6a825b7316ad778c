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

#include "vprex/error.h"

namespace vprex {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedJson: return "MalformedJson";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kUnknownXpathId: return "UnknownXpathId";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kLabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kMalformedModel: return "MalformedModel";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kEmptyValidation: return "EmptyValidation";
    case ErrorCode::kInsufficientPages: return "InsufficientPages";
    case ErrorCode::kDomainMismatch: return "DomainMismatch";
    case ErrorCode::kEmptyHoldout: return "EmptyHoldout";
    case ErrorCode::kTooFewDomains: return "TooFewDomains";
    case ErrorCode::kBadConfig: return "BadConfig";
    case ErrorCode::kDuplicateKey: return "DuplicateKey";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kDomainLeakage: return "DomainLeakage";
    case ErrorCode::kAddressInUse: return "AddressInUse";
    case ErrorCode::kNotFound: return "NotFound";
  }
  return "Unknown";
}

}  // namespace vprex
