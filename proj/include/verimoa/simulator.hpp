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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "verimoa/problem.hpp"
#include "verimoa/util.hpp"

namespace verimoa {

inline constexpr std::size_t kMaxLogBytes = 64 * 1024;
inline constexpr std::size_t kLogTailBytes = 8 * 1024;

// Caps `log` at kMaxLogBytes, always keeping the final kLogTailBytes.
std::string truncate_log(std::string_view log);

struct SimulatorConfig {
  // Placeholders: {sources} (space-separated, quoted), {out}.
  std::string compile_cmd = "iverilog -g2012 -o {out} {sources}";
  // Placeholder: {out}.
  std::string run_cmd = "vvp -n {out}";
  std::string pass_marker = "ALL_TESTS_PASSED";
  std::filesystem::path workspace_root;  // empty: system temp dir
  std::int64_t timeout_ms = 10000;
  std::size_t max_parallel = 0;  // 0: hardware concurrency
  bool keep_workspaces = false;
};

// Throws SchemaError when a template lacks a required placeholder.
void validate(const SimulatorConfig& config);

// Command templates that drive the bundled stub simulator binary.
SimulatorConfig stub_simulator_config(const std::filesystem::path& stub_binary);

enum class SimPhase { Compile, Run };

struct SimVerdict {
  SimPhase phase = SimPhase::Compile;
  bool passed = false;
  std::string log;
  std::int64_t duration_ms = 0;
  bool timed_out = false;
};

// Handle used by the quality evaluator. Implementations must be safe to
// call concurrently.
class Simulator {
 public:
  virtual ~Simulator() = default;

  // Compiles the candidate alone.
  virtual SimVerdict syntax_test(std::string_view candidate, const DesignProblem& problem) = 0;

  // Compiles candidate + support files + testbench and runs the result.
  virtual SimVerdict function_test(std::string_view candidate, const DesignProblem& problem) = 0;
};

// Runs external commands in a fresh workspace directory per invocation.
class ProcessSimulator final : public Simulator {
 public:
  explicit ProcessSimulator(SimulatorConfig config);

  SimVerdict syntax_test(std::string_view candidate, const DesignProblem& problem) override;
  SimVerdict function_test(std::string_view candidate, const DesignProblem& problem) override;

  // Throws SimulatorUnavailable unless both command binaries resolve.
  void check_available() const;

  const SimulatorConfig& config() const { return config_; }

 private:
  struct Workspace;

  SimVerdict compile_and_maybe_run(std::string_view candidate, const DesignProblem& problem,
                                   bool with_testbench);

  SimulatorConfig config_;
  std::unique_ptr<Semaphore> slots_;
};

}  // namespace verimoa
