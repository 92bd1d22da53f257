/*
 * Copyright 2026 The PPDT Level-Site Authors.
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

#ifndef PPDT_ERRORS_HPP_
#define PPDT_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ppdt {

enum class ErrorCode {
  kParameter,
  kRange,
  kType,
  kProtocol,
  kEncoding,
  kDecode,
  kIo,
  kNetwork,
};

std::string_view ErrorCodeName(ErrorCode code);

// Base of every error the library throws. The code is what callers branch on;
// the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParameter:
      return "parameter";
    case ErrorCode::kRange:
      return "range";
    case ErrorCode::kType:
      return "type";
    case ErrorCode::kProtocol:
      return "protocol";
    case ErrorCode::kEncoding:
      return "encoding";
    case ErrorCode::kDecode:
      return "decode";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kNetwork:
      return "network";
  }
  return "unknown";
}

}  // namespace ppdt

#endif  // PPDT_ERRORS_HPP_
