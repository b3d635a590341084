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

#include "verimoa/error.hpp"

namespace verimoa {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::MalformedIndex: return "MalformedIndex";
    case ErrorCode::DuplicateProblemId: return "DuplicateProblemId";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::BackendExhausted: return "BackendExhausted";
    case ErrorCode::AuthError: return "AuthError";
    case ErrorCode::TranscriptMiss: return "TranscriptMiss";
    case ErrorCode::SimulatorUnavailable: return "SimulatorUnavailable";
    case ErrorCode::WorkspaceError: return "WorkspaceError";
    case ErrorCode::PipelineFailure: return "PipelineFailure";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::CorruptTrace: return "CorruptTrace";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

}  // namespace verimoa
