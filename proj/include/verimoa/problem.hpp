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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace verimoa {

// One benchmark task: the natural-language spec, the golden testbench and
// the module under test. The simulator is bound at run time.
struct DesignProblem {
  std::string id;
  std::string description;
  std::string testbench_source;
  std::string top_module;
  std::int64_t timeout_ms = 10000;
  // Optional per-problem override of the simulator's pass marker.
  std::optional<std::string> pass_marker;
  // Extra `*.v` sources compiled between the candidate and the testbench.
  struct SupportFile {
    std::string name;
    std::string source;
    bool operator==(const SupportFile&) const = default;
  };
  std::vector<SupportFile> support_files;

  bool operator==(const DesignProblem&) const = default;
};

struct Benchmark {
  std::string name;
  std::vector<DesignProblem> problems;

  bool operator==(const Benchmark&) const = default;
};

// Validates field invariants; throws SchemaError.
void validate(const DesignProblem& problem);

// Reads `problem.json`, `spec.md` and `testbench.v` from one problem
// directory.
DesignProblem load_problem(const std::filesystem::path& dir);

// Reads `benchmark.json` under `root` and every problem it lists.
// Throws MissingFile, MalformedIndex or DuplicateProblemId.
Benchmark load_benchmark(const std::filesystem::path& root);

// Inverse of load_benchmark. Existing files under `root` are overwritten.
void save_benchmark(const Benchmark& benchmark, const std::filesystem::path& root);

}  // namespace verimoa
