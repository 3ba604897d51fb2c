/*
 * Copyright 2026 The citykpi Authors.
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

#ifndef CITYKPI_ERROR_HPP_
#define CITYKPI_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace citykpi {

// Every recoverable failure in the library is reported as a citykpi::Error
// carrying one of these codes. The service maps codes onto HTTP statuses and
// the CLI maps them onto exit codes.
enum class ErrorCode {
  kInvalidArgument,
  kMalformedInput,
  kEmptyResult,
  kMissingTarget,
  kBadFraction,
  kWidthMismatch,
  kLengthMismatch,
  kNonFinite,
  kSingleClass,
  kEmptyMatrix,
  kZeroWeights,
  kTooFewRows,
  kTooFewValues,
  kSeriesTooShort,
  kNotFound,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace citykpi

#endif  // CITYKPI_ERROR_HPP_
