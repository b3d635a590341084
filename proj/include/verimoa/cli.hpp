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

#include <filesystem>
#include <ostream>

namespace verimoa::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUserError = 1;
inline constexpr int kEnvironmentError = 2;
inline constexpr int kPipelineFailure = 3;

// Entry point of the `verimoa` binary.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// VERIMOA_STUBSIM, else verimoa-stubsim next to the running executable,
// else the path baked in at build time.
std::filesystem::path stub_binary_path();

}  // namespace verimoa::cli
