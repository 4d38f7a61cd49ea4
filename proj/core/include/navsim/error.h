// Copyright 2026 The Navsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NAVSIM_ERROR_H_
#define NAVSIM_ERROR_H_

#include <stdexcept>
#include <string>

namespace navsim {

enum class ErrorCode {
  kParse,
  kInvariantViolation,
  kInvalidArgument,
  kNotFound,
  kUnreachable,
  kTooLarge,
  kFailedPrecondition,
};

// All library failures surface as NavError; `code()` distinguishes them.
class NavError : public std::runtime_error {
 public:
  NavError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace navsim

#endif  // NAVSIM_ERROR_H_
