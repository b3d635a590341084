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
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "verimoa/error.hpp"
#include "verimoa/util.hpp"

namespace verimoa {

struct GenerationRequest {
  std::string system_prompt;
  std::string user_prompt;
  double temperature = 0.8;
  double top_p = 0.95;
  int max_tokens = 4096;
  // problem/trial/candidate provenance, unique per call within a run
  std::string request_tag;
  std::optional<std::uint64_t> seed;
};

struct TokenUsage {
  std::int64_t prompt = 0;
  std::int64_t completion = 0;
};

struct GenerationResponse {
  std::string text;
  std::string backend_id;
  std::int64_t latency_ms = 0;
  std::optional<TokenUsage> token_usage;
};

// Throws InvariantViolation for out-of-range sampling parameters.
void validate(const GenerationRequest& request);

// Stable replay key: SHA-256 over the system prompt, user prompt,
// temperature and top_p.
std::string request_key(const GenerationRequest& request);

nlohmann::json to_json(const GenerationRequest& request);

class Backend {
 public:
  virtual ~Backend() = default;

  // Exactly one response per call. Throws BackendExhausted, AuthError or
  // TranscriptMiss.
  virtual GenerationResponse generate(const GenerationRequest& request) = 0;
};

// Returns the last fenced block whose info string matches `language_hint`,
// else the last fenced block, else the whole text trimmed.
std::string extract_code_block(std::string_view response_text, std::string_view language_hint);

// Append-only JSONL log of {key, request_tag, request, response_text}.
class Transcript {
 public:
  explicit Transcript(const std::filesystem::path& path);

  void append(const GenerationRequest& request, const std::string& response_text);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::ofstream out_;
  std::size_t count_ = 0;
};

// Records every successful call into a transcript.
class RecordingBackend final : public Backend {
 public:
  RecordingBackend(std::shared_ptr<Backend> inner, std::shared_ptr<Transcript> transcript)
      : inner_(std::move(inner)), transcript_(std::move(transcript)) {}

  GenerationResponse generate(const GenerationRequest& request) override;

 private:
  std::shared_ptr<Backend> inner_;
  std::shared_ptr<Transcript> transcript_;
};

// Bounds the number of in-flight requests.
class ThrottledBackend final : public Backend {
 public:
  ThrottledBackend(std::shared_ptr<Backend> inner, std::size_t limit)
      : inner_(std::move(inner)), slots_(limit) {}

  GenerationResponse generate(const GenerationRequest& request) override;

 private:
  std::shared_ptr<Backend> inner_;
  Semaphore slots_;
};

// Serves recorded responses by request key. Repeated keys are resolved by
// preferring an unused entry with the same request_tag, then the first
// unused entry in file order.
class ReplayBackend final : public Backend {
 public:
  explicit ReplayBackend(const std::filesystem::path& transcript_path);

  struct Entry {
    std::string key;
    std::string request_tag;
    std::string response_text;
  };
  explicit ReplayBackend(std::vector<Entry> entries);

  GenerationResponse generate(const GenerationRequest& request) override;

 private:
  struct Slot {
    Entry entry;
    bool used = false;
  };
  std::mutex mutex_;
  std::map<std::string, std::vector<Slot>> by_key_;
};

// Rule-driven mock. Each rule matches on a request_tag regex (search) and
// optionally a prompt substring; the first matching rule answers. A rule's
// response list advances per (rule, request_tag) and its last response
// repeats once exhausted.
class ScriptedBackend final : public Backend {
 public:
  struct Rule {
    std::string tag_pattern = ".*";
    std::optional<std::string> prompt_contains;
    std::vector<std::string> responses;
    // "first_reference": answer with the code of the first HDL reference in
    // the prompt.
    std::optional<std::string> echo;
    std::optional<ErrorCode> error;
  };

  explicit ScriptedBackend(std::vector<Rule> rules);

  // One rule matching everything, answering `responses` in order.
  static std::shared_ptr<ScriptedBackend> sequence(std::vector<std::string> responses);

  // JSONL, one rule per line: {"tag", "prompt_contains", "response" |
  // "responses", "echo", "error"}.
  static std::shared_ptr<ScriptedBackend> from_file(const std::filesystem::path& path);

  GenerationResponse generate(const GenerationRequest& request) override;

  std::size_t call_count() const;

 private:
  struct Compiled {
    Rule rule;
    std::regex tag;
  };
  std::vector<Compiled> rules_;
  mutable std::mutex mutex_;
  std::map<std::pair<std::size_t, std::string>, std::size_t> cursor_;
  std::size_t calls_ = 0;
};

}  // namespace verimoa
