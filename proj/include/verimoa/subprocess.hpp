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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace verimoa {

struct CommandResult {
  int exit_code = -1;
  bool timed_out = false;
  // The command could not be started (exec failure or exit status 127).
  bool not_found = false;
  std::string output;  // stdout and stderr interleaved
  std::int64_t duration_ms = 0;
};

struct CommandOptions {
  std::filesystem::path working_dir;
  std::chrono::milliseconds timeout{10000};
  // Environment variables removed before exec.
  std::vector<std::string> scrub_env = {"VERIMOA_API_KEY", "OPENAI_API_KEY"};
  std::size_t max_output_bytes = 1 << 22;
};

// Runs `command` through /bin/sh -c in its own process group. On timeout
// the whole group is killed.
CommandResult run_command(const std::string& command, const CommandOptions& options);

// True when the first word of `command` names an executable, either as a
// path or through PATH.
bool command_available(const std::string& command);

}  // namespace verimoa
