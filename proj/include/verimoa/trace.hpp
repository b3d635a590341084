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
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

namespace verimoa {

// Append-only JSONL log of one trial. Each record is flushed as written so
// an interrupted run leaves an analyzable prefix.
class TraceWriter {
 public:
  explicit TraceWriter(const std::filesystem::path& path);
  void write(const nlohmann::json& record);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mutex_;
  std::ofstream out_;
};

struct TraceRecord {
  std::size_t line = 0;
  nlohmann::json data;
};

// Reads a trace file. Throws CorruptTrace naming file and line.
std::vector<TraceRecord> read_trace(const std::filesystem::path& path);

}  // namespace verimoa
