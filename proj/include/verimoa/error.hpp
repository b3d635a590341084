// Copyright 2026 The verimoa Authors.
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace verimoa {

enum class ErrorCode {
  MissingFile,
  MalformedIndex,
  DuplicateProblemId,
  SchemaError,
  InvariantViolation,
  DuplicateId,
  EmptyWindow,
  BackendExhausted,
  AuthError,
  TranscriptMiss,
  SimulatorUnavailable,
  WorkspaceError,
  PipelineFailure,
  DomainError,
  CorruptTrace,
  IoError,
  UsageError,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above; the
// CLI prints them as `error_code: message`.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace verimoa
