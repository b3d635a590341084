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

#include "verimoa/problem.hpp"

#include <set>

#include <json.hpp>

#include "verimoa/error.hpp"
#include "verimoa/util.hpp"

namespace verimoa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json parse_index(const fs::path& path) {
  if (!fs::exists(path)) fail(ErrorCode::MissingFile, "missing " + path.string());
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    fail(ErrorCode::MalformedIndex, path.string() + ": " + e.what());
  }
}

std::string required_string(const json& doc, const char* field, const fs::path& path) {
  if (!doc.contains(field) || !doc[field].is_string())
    fail(ErrorCode::MalformedIndex, path.string() + ": field '" + field + "' must be a string");
  return doc[field].get<std::string>();
}

std::string read_required(const fs::path& path, const std::string& problem_id) {
  if (!fs::is_regular_file(path))
    fail(ErrorCode::MissingFile,
         "problem '" + problem_id + "' is missing " + path.filename().string() + " (" +
             path.string() + ")");
  return read_file(path);
}

}  // namespace

void validate(const DesignProblem& problem) {
  if (problem.id.empty()) fail(ErrorCode::SchemaError, "problem id must be non-empty");
  if (problem.description.empty())
    fail(ErrorCode::SchemaError, "problem '" + problem.id + "' has an empty description");
  if (problem.testbench_source.empty())
    fail(ErrorCode::SchemaError, "problem '" + problem.id + "' has an empty testbench");
  if (problem.timeout_ms < 1)
    fail(ErrorCode::SchemaError, "problem '" + problem.id + "': timeout_ms must be >= 1");
  if (problem.pass_marker && problem.pass_marker->empty())
    fail(ErrorCode::SchemaError, "problem '" + problem.id + "': pass_marker must be non-empty");
}

DesignProblem load_problem(const fs::path& dir) {
  const auto index_path = dir / "problem.json";
  const json doc = parse_index(index_path);
  if (!doc.is_object()) fail(ErrorCode::MalformedIndex, index_path.string() + ": not an object");

  DesignProblem p;
  p.id = required_string(doc, "id", index_path);
  p.top_module = required_string(doc, "top_module", index_path);
  if (!doc.contains("timeout_ms") || !doc["timeout_ms"].is_number_integer())
    fail(ErrorCode::MalformedIndex, index_path.string() + ": field 'timeout_ms' must be an integer");
  p.timeout_ms = doc["timeout_ms"].get<std::int64_t>();
  if (doc.contains("pass_marker")) {
    if (!doc["pass_marker"].is_string())
      fail(ErrorCode::MalformedIndex, index_path.string() + ": field 'pass_marker' must be a string");
    p.pass_marker = doc["pass_marker"].get<std::string>();
  }
  if (doc.contains("support_files")) {
    if (!doc["support_files"].is_array())
      fail(ErrorCode::MalformedIndex, index_path.string() + ": field 'support_files' must be an array");
    for (const auto& name : doc["support_files"]) {
      if (!name.is_string())
        fail(ErrorCode::MalformedIndex, index_path.string() + ": support_files entries must be strings");
      const auto file = name.get<std::string>();
      p.support_files.push_back({file, read_required(dir / file, p.id)});
    }
  }
  p.description = read_required(dir / "spec.md", p.id);
  p.testbench_source = read_required(dir / "testbench.v", p.id);
  try {
    validate(p);
  } catch (const Error& e) {
    fail(ErrorCode::MalformedIndex, index_path.string() + ": " + e.what());
  }
  return p;
}

Benchmark load_benchmark(const fs::path& root) {
  if (!fs::is_directory(root)) fail(ErrorCode::MissingFile, "benchmark root not found: " + root.string());
  const auto index_path = root / "benchmark.json";
  const json doc = parse_index(index_path);
  if (!doc.is_object()) fail(ErrorCode::MalformedIndex, index_path.string() + ": not an object");

  Benchmark bench;
  bench.name = required_string(doc, "name", index_path);
  if (!doc.contains("problems") || !doc["problems"].is_array())
    fail(ErrorCode::MalformedIndex, index_path.string() + ": field 'problems' must be an array");
  if (doc["problems"].empty())
    fail(ErrorCode::MalformedIndex, index_path.string() + ": field 'problems' must be non-empty");

  std::set<std::string> seen;
  for (const auto& entry : doc["problems"]) {
    if (!entry.is_string())
      fail(ErrorCode::MalformedIndex, index_path.string() + ": field 'problems' must hold strings");
    const auto id = entry.get<std::string>();
    if (!seen.insert(id).second) fail(ErrorCode::DuplicateProblemId, "duplicate problem id '" + id + "'");
    const auto dir = root / id;
    if (!fs::is_directory(dir)) fail(ErrorCode::MissingFile, "problem '" + id + "' directory missing");
    auto problem = load_problem(dir);
    if (problem.id != id)
      fail(ErrorCode::MalformedIndex,
           (dir / "problem.json").string() + ": field 'id' is '" + problem.id + "', expected '" + id + "'");
    bench.problems.push_back(std::move(problem));
  }
  return bench;
}

void save_benchmark(const Benchmark& benchmark, const fs::path& root) {
  json index = {{"name", benchmark.name}, {"problems", json::array()}};
  for (const auto& p : benchmark.problems) {
    index["problems"].push_back(p.id);
    const auto dir = root / p.id;
    json meta = {{"id", p.id}, {"top_module", p.top_module}, {"timeout_ms", p.timeout_ms}};
    if (p.pass_marker) meta["pass_marker"] = *p.pass_marker;
    if (!p.support_files.empty()) {
      meta["support_files"] = json::array();
      for (const auto& f : p.support_files) {
        meta["support_files"].push_back(f.name);
        write_file_atomic(dir / f.name, f.source);
      }
    }
    write_file_atomic(dir / "problem.json", meta.dump(2) + "\n");
    write_file_atomic(dir / "spec.md", p.description);
    write_file_atomic(dir / "testbench.v", p.testbench_source);
  }
  write_file_atomic(root / "benchmark.json", index.dump(2) + "\n");
}

}  // namespace verimoa
