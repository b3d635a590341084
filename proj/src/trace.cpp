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

#include "verimoa/trace.hpp"

#include "verimoa/error.hpp"

namespace verimoa {

namespace fs = std::filesystem;

TraceWriter::TraceWriter(const fs::path& path) : path_(path) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) fail(ErrorCode::IoError, "cannot open trace " + path.string());
}

void TraceWriter::write(const nlohmann::json& record) {
  const auto line = record.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
  std::lock_guard lock(mutex_);
  out_ << line << '\n';
  out_.flush();
  if (!out_) fail(ErrorCode::IoError, "write failed: " + path_.string());
}

std::vector<TraceRecord> read_trace(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::MissingFile, "trace not found: " + path.string());
  std::vector<TraceRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto rec = nlohmann::json::parse(line);
      if (!rec.is_object() || !rec.contains("type") || !rec["type"].is_string())
        fail(ErrorCode::CorruptTrace, path.string() + ":" + std::to_string(lineno) + ": record without type");
      records.push_back({lineno, std::move(rec)});
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::CorruptTrace, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace verimoa
