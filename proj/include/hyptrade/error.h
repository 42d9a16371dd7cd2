// Copyright 2026 The hyptrade Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HYPTRADE_ERROR_H_
#define HYPTRADE_ERROR_H_

#include <stdexcept>
#include <string>

namespace hyptrade {

// Failure categories. The CLI maps each one onto a fixed process exit code.
enum class ErrorCode {
  kInvalidInput,      // malformed values, shapes or files
  kAlphabetMismatch,  // operands live on different alphabets
  kSupport,           // a zero where full support is required
  kNumerical,         // a result outside its mathematically valid range
  kSizeCap,           // enumeration or storage cap exceeded
  kInfeasible,        // constraint geometry admits no policy
  kIo,                // unreadable or unwritable path
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hyptrade

#endif  // HYPTRADE_ERROR_H_
