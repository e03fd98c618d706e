/*
 * Copyright 2026 The spkhe Authors.
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

#include "spkhe/error.h"

namespace spkhe {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage: return "E_USAGE";
    case ErrorCode::kParameter: return "E_PARAMETER";
    case ErrorCode::kRange: return "E_RANGE";
    case ErrorCode::kKeyMismatch: return "E_KEY_MISMATCH";
    case ErrorCode::kArithmetic: return "E_ARITHMETIC";
    case ErrorCode::kGeneration: return "E_GENERATION";
    case ErrorCode::kMagnitude: return "E_MAGNITUDE";
    case ErrorCode::kDomain: return "E_DOMAIN";
    case ErrorCode::kOverflow: return "E_OVERFLOW";
    case ErrorCode::kPrecisionOverflow: return "E_PRECISION_OVERFLOW";
    case ErrorCode::kShape: return "E_SHAPE";
    case ErrorCode::kNormalization: return "E_NORMALIZATION";
    case ErrorCode::kConditioning: return "E_CONDITIONING";
    case ErrorCode::kEstimation: return "E_ESTIMATION";
    case ErrorCode::kLookup: return "E_LOOKUP";
    case ErrorCode::kConfiguration: return "E_CONFIGURATION";
    case ErrorCode::kInput: return "E_INPUT";
    case ErrorCode::kFit: return "E_FIT";
    case ErrorCode::kFormat: return "E_FORMAT";
    case ErrorCode::kIo: return "E_IO";
  }
  return "E_UNKNOWN";
}

int ExitStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage:
      return 1;
    case ErrorCode::kParameter:
    case ErrorCode::kKeyMismatch:
    case ErrorCode::kArithmetic:
    case ErrorCode::kGeneration:
    case ErrorCode::kConfiguration:
      return 3;
    default:
      return 2;
  }
}

}  // namespace spkhe
