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

#include "verimoa/simulator.hpp"

#include <stdlib.h>

#include <fstream>
#include <thread>

#include "verimoa/error.hpp"
#include "verimoa/subprocess.hpp"

namespace verimoa {

namespace fs = std::filesystem;

std::string truncate_log(std::string_view log) {
  if (log.size() <= kMaxLogBytes) return std::string(log);
  const std::string marker =
      "\n...[truncated " + std::to_string(log.size() - (kMaxLogBytes - 128)) + " bytes]...\n";
  const std::size_t head = kMaxLogBytes - kLogTailBytes - marker.size();
  std::string out(log.substr(0, head));
  out += marker;
  out += log.substr(log.size() - kLogTailBytes);
  return out;
}

void validate(const SimulatorConfig& c) {
  if (c.compile_cmd.find("{sources}") == std::string::npos || c.compile_cmd.find("{out}") == std::string::npos)
    fail(ErrorCode::SchemaError, "simulator.compile_cmd must contain {sources} and {out}");
  if (c.run_cmd.find("{out}") == std::string::npos)
    fail(ErrorCode::SchemaError, "simulator.run_cmd must contain {out}");
  if (c.pass_marker.empty()) fail(ErrorCode::SchemaError, "simulator.pass_marker must be non-empty");
  if (c.timeout_ms < 1) fail(ErrorCode::SchemaError, "simulator.timeout_ms must be >= 1");
}

SimulatorConfig stub_simulator_config(const fs::path& stub_binary) {
  SimulatorConfig c;
  const auto bin = shell_quote(stub_binary.string());
  c.compile_cmd = bin + " compile -o {out} {sources}";
  c.run_cmd = bin + " run {out}";
  c.pass_marker = "ALL_TESTS_PASSED";
  return c;
}

struct ProcessSimulator::Workspace {
  fs::path dir;
  bool keep = false;

  explicit Workspace(const fs::path& root) {
    std::error_code ec;
    fs::create_directories(root, ec);
    std::string pattern = (root / "ws-XXXXXX").string();
    if (::mkdtemp(pattern.data()) == nullptr)
      fail(ErrorCode::WorkspaceError, "cannot create workspace under " + root.string());
    dir = pattern;
  }
  ~Workspace() {
    if (keep) return;
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  fs::path write(const std::string& name, std::string_view text) const {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) fail(ErrorCode::WorkspaceError, "cannot write " + path.string());
    return path;
  }
};

ProcessSimulator::ProcessSimulator(SimulatorConfig config) : config_(std::move(config)) {
  validate(config_);
  if (config_.workspace_root.empty()) config_.workspace_root = fs::temp_directory_path() / "verimoa-ws";
  std::size_t permits = config_.max_parallel;
  if (permits == 0) permits = std::max(1u, std::thread::hardware_concurrency());
  slots_ = std::make_unique<Semaphore>(permits);
}

void ProcessSimulator::check_available() const {
  for (const auto* cmd : {&config_.compile_cmd, &config_.run_cmd}) {
    if (!command_available(*cmd))
      fail(ErrorCode::SimulatorUnavailable, "simulator command not found: " + *cmd);
  }
}

SimVerdict ProcessSimulator::syntax_test(std::string_view candidate, const DesignProblem& problem) {
  return compile_and_maybe_run(candidate, problem, false);
}

SimVerdict ProcessSimulator::function_test(std::string_view candidate, const DesignProblem& problem) {
  return compile_and_maybe_run(candidate, problem, true);
}

SimVerdict ProcessSimulator::compile_and_maybe_run(std::string_view candidate, const DesignProblem& problem,
                                                   bool with_testbench) {
  SemaphoreGuard slot(*slots_);
  Workspace ws(config_.workspace_root);

  std::string sources = shell_quote(ws.write("candidate.v", candidate).string());
  if (with_testbench) {
    for (const auto& support : problem.support_files)
      sources += " " + shell_quote(ws.write(fs::path(support.name).filename().string(), support.source).string());
    sources += " " + shell_quote(ws.write("testbench.v", problem.testbench_source).string());
  }
  const auto image = shell_quote((ws.dir / "sim.out").string());

  CommandOptions opts;
  opts.working_dir = ws.dir;
  const auto timeout_ms = problem.timeout_ms > 0 ? problem.timeout_ms : config_.timeout_ms;
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  opts.timeout = std::chrono::milliseconds(timeout_ms);

  const auto compile_cmd =
      replace_all(replace_all(config_.compile_cmd, "{sources}", sources), "{out}", image);
  const auto compiled = run_command(compile_cmd, opts);
  if (compiled.not_found && !command_available(compile_cmd))
    fail(ErrorCode::SimulatorUnavailable, "cannot execute: " + compile_cmd);

  SimVerdict verdict;
  verdict.phase = SimPhase::Compile;
  verdict.duration_ms = compiled.duration_ms;
  verdict.timed_out = compiled.timed_out;
  verdict.log = truncate_log(compiled.output);
  verdict.passed = !compiled.timed_out && compiled.exit_code == 0;
  if (!with_testbench || !verdict.passed) {
    ws.keep = config_.keep_workspaces && !verdict.passed;
    return verdict;
  }

  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
  opts.timeout = std::max(std::chrono::milliseconds(1), left);
  const auto run_cmd = replace_all(config_.run_cmd, "{out}", image);
  const auto ran = run_command(run_cmd, opts);
  if (ran.not_found && !command_available(run_cmd))
    fail(ErrorCode::SimulatorUnavailable, "cannot execute: " + run_cmd);

  const auto& marker = problem.pass_marker ? *problem.pass_marker : config_.pass_marker;
  verdict.phase = SimPhase::Run;
  verdict.duration_ms += ran.duration_ms;
  verdict.timed_out = ran.timed_out;
  verdict.log = truncate_log(compiled.output + ran.output);
  verdict.passed = !ran.timed_out && ran.exit_code == 0 && ran.output.find(marker) != std::string::npos;
  ws.keep = config_.keep_workspaces && !verdict.passed;
  return verdict;
}

}  // namespace verimoa
