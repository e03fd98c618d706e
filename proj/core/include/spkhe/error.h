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

#ifndef SPKHE_ERROR_H_
#define SPKHE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace spkhe {

// Failure kinds raised by the library. Every public operation reports
// failures by throwing spkhe::Error carrying one of these codes.
enum class ErrorCode {
  kUsage,
  kParameter,
  kRange,
  kKeyMismatch,
  kArithmetic,
  kGeneration,
  kMagnitude,
  kDomain,
  kOverflow,
  kPrecisionOverflow,
  kShape,
  kNormalization,
  kConditioning,
  kEstimation,
  kLookup,
  kConfiguration,
  kInput,
  kFit,
  kFormat,
  kIo,
};

// Stable machine-readable identifier, e.g. "E_SHAPE".
std::string_view ErrorCodeName(ErrorCode code);

// Process exit status for a failure: 1 usage, 2 data, 3 crypto.
int ExitStatusFor(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spkhe

#endif  // SPKHE_ERROR_H_
