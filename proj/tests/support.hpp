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
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

#include "verimoa/error.hpp"
#include "verimoa/problem.hpp"
#include "verimoa/simulator.hpp"

namespace verimoa::testing {

inline std::filesystem::path data_dir() { return VERIMOA_TEST_DATA_DIR; }
inline std::filesystem::path stubsim() { return VERIMOA_TEST_STUBSIM; }
inline std::filesystem::path templates_dir() { return VERIMOA_TEST_TEMPLATES_DIR; }

// Fresh directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "verimoa-test-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// In-process stand-in with the stub's magic-substring rules, for tests
// that need thousands of evaluations.
class FakeSimulator final : public Simulator {
 public:
  SimVerdict syntax_test(std::string_view candidate, const DesignProblem&) override {
    ++syntax_calls;
    SimVerdict v;
    v.phase = SimPhase::Compile;
    v.passed = candidate.find("SYNTAXERR") == std::string_view::npos &&
               candidate.find("module") != std::string_view::npos;
    v.log = v.passed ? "" : "candidate.v:1: syntax error\n";
    return v;
  }
  SimVerdict function_test(std::string_view candidate, const DesignProblem&) override {
    ++function_calls;
    SimVerdict v;
    v.phase = SimPhase::Run;
    v.passed = candidate.find("FUNCFAIL") == std::string_view::npos;
    v.log = v.passed ? "ALL_TESTS_PASSED\n" : "MISMATCH at t=40\n";
    return v;
  }
  std::atomic<int> syntax_calls{0};
  std::atomic<int> function_calls{0};
};

// Code of the verimoa::Error thrown by fn; empty when nothing is thrown.
inline std::optional<ErrorCode> code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline DesignProblem tiny_problem(std::string id = "tiny") {
  DesignProblem p;
  p.id = std::move(id);
  p.description = "A 2-input AND gate named top_module with inputs a, b and output y.";
  p.testbench_source = "module tb; endmodule\n";
  p.top_module = "top_module";
  return p;
}

}  // namespace verimoa::testing
