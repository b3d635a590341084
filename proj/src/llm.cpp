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

#include "verimoa/llm.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <sstream>

#include "verimoa/templates.hpp"

namespace verimoa {

using nlohmann::json;

void validate(const GenerationRequest& r) {
  if (!(r.temperature >= 0)) fail(ErrorCode::InvariantViolation, "temperature must be >= 0");
  if (!(r.top_p > 0 && r.top_p <= 1)) fail(ErrorCode::InvariantViolation, "top_p must be in (0, 1]");
  if (r.max_tokens < 1) fail(ErrorCode::InvariantViolation, "max_tokens must be >= 1");
}

std::string request_key(const GenerationRequest& r) {
  // Length-prefixed fields so no two requests share a preimage.
  std::ostringstream pre;
  pre.precision(17);
  pre << r.system_prompt.size() << ':' << r.system_prompt << '|' << r.user_prompt.size() << ':' << r.user_prompt
      << '|' << r.temperature << '|' << r.top_p;
  return sha256_hex(pre.str());
}

json to_json(const GenerationRequest& r) {
  json out = {{"system_prompt", r.system_prompt},
              {"user_prompt", r.user_prompt},
              {"temperature", r.temperature},
              {"top_p", r.top_p},
              {"max_tokens", r.max_tokens}};
  if (r.seed) out["seed"] = *r.seed;
  return out;
}

namespace {

std::string canonical_language(std::string_view info) {
  std::string word;
  for (char c : info) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '{' || c == ',') break;
    word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (word == "v" || word == "sv" || word == "systemverilog" || word == "verilog") return "verilog";
  if (word == "c++" || word == "cxx" || word == "cc" || word == "cpp" || word == "hpp") return "cpp";
  if (word == "py" || word == "python" || word == "python3") return "python";
  return word;
}

struct Fenced {
  std::string language;
  std::string body;
};

std::vector<Fenced> fenced_blocks(std::string_view text) {
  std::vector<Fenced> blocks;
  std::size_t pos = 0;
  while (true) {
    const auto open = text.find("```", pos);
    if (open == std::string_view::npos) break;
    const auto info_end = text.find('\n', open + 3);
    if (info_end == std::string_view::npos) break;
    const auto info = text.substr(open + 3, info_end - open - 3);
    const auto close = text.find("```", info_end + 1);
    const auto body_end = close == std::string_view::npos ? text.size() : close;
    blocks.push_back({canonical_language(info), trim(text.substr(info_end + 1, body_end - info_end - 1))});
    if (close == std::string_view::npos) break;
    pos = close + 3;
  }
  return blocks;
}

}  // namespace

std::string extract_code_block(std::string_view text, std::string_view hint) {
  const auto blocks = fenced_blocks(text);
  if (blocks.empty()) return trim(text);
  const auto want = canonical_language(hint);
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it)
    if (!want.empty() && it->language == want) return it->body;
  return blocks.back().body;
}

Transcript::Transcript(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::binary | std::ios::app);
  if (!out_) fail(ErrorCode::IoError, "cannot open transcript " + path.string());
}

void Transcript::append(const GenerationRequest& request, const std::string& response_text) {
  json line = {{"key", request_key(request)},
               {"request_tag", request.request_tag},
               {"request", to_json(request)},
               {"response_text", response_text}};
  const auto text = line.dump(-1, ' ', false, json::error_handler_t::replace);
  std::lock_guard lock(mutex_);
  out_ << text << '\n';
  out_.flush();
  ++count_;
}

std::size_t Transcript::size() const {
  std::lock_guard lock(mutex_);
  return count_;
}

GenerationResponse RecordingBackend::generate(const GenerationRequest& request) {
  auto response = inner_->generate(request);
  transcript_->append(request, response.text);
  return response;
}

GenerationResponse ThrottledBackend::generate(const GenerationRequest& request) {
  SemaphoreGuard guard(slots_);
  return inner_->generate(request);
}

ReplayBackend::ReplayBackend(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::MissingFile, "cannot open transcript " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      const auto doc = json::parse(line);
      Entry e{doc.at("key").get<std::string>(), doc.value("request_tag", std::string()),
              doc.at("response_text").get<std::string>()};
      by_key_[e.key].push_back({std::move(e)});
    } catch (const json::exception& ex) {
      fail(ErrorCode::CorruptTrace, path.string() + ":" + std::to_string(lineno) + ": " + ex.what());
    }
  }
}

ReplayBackend::ReplayBackend(std::vector<Entry> entries) {
  for (auto& e : entries) by_key_[e.key].push_back({std::move(e)});
}

GenerationResponse ReplayBackend::generate(const GenerationRequest& request) {
  const auto key = request_key(request);
  std::lock_guard lock(mutex_);
  auto it = by_key_.find(key);
  if (it == by_key_.end())
    fail(ErrorCode::TranscriptMiss, "no recorded response for request '" + request.request_tag + "'");
  auto& slots = it->second;
  Slot* pick = nullptr;
  for (auto& s : slots)
    if (!s.used && s.entry.request_tag == request.request_tag) {
      pick = &s;
      break;
    }
  if (!pick)
    for (auto& s : slots)
      if (!s.used) {
        pick = &s;
        break;
      }
  if (!pick) {
    for (auto& s : slots)
      if (s.entry.request_tag == request.request_tag) pick = &s;
    if (!pick) pick = &slots.front();
  }
  pick->used = true;
  return {pick->entry.response_text, "replay", 0, std::nullopt};
}

ScriptedBackend::ScriptedBackend(std::vector<Rule> rules) {
  for (auto& r : rules) {
    std::regex re;
    try {
      re = std::regex(r.tag_pattern, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      fail(ErrorCode::SchemaError, "bad tag pattern '" + r.tag_pattern + "': " + e.what());
    }
    if (r.responses.empty() && !r.echo && !r.error)
      fail(ErrorCode::SchemaError, "scripted rule '" + r.tag_pattern + "' has no response, echo or error");
    if (r.echo && *r.echo != "first_reference")
      fail(ErrorCode::SchemaError, "unknown echo mode '" + *r.echo + "'");
    rules_.push_back({std::move(r), std::move(re)});
  }
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::sequence(std::vector<std::string> responses) {
  Rule r;
  r.responses = std::move(responses);
  return std::make_shared<ScriptedBackend>(std::vector<Rule>{std::move(r)});
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::MissingFile, "cannot open script " + path.string());
  std::vector<Rule> rules;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto where = path.string() + ":" + std::to_string(lineno);
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(ErrorCode::SchemaError, where + ": " + e.what());
    }
    if (!doc.is_object()) fail(ErrorCode::SchemaError, where + ": expected an object");
    Rule r;
    try {
      r.tag_pattern = doc.value("tag", std::string(".*"));
      if (doc.contains("prompt_contains")) r.prompt_contains = doc["prompt_contains"].get<std::string>();
      if (doc.contains("response")) r.responses.push_back(doc["response"].get<std::string>());
      if (doc.contains("responses")) {
        for (const auto& s : doc["responses"]) r.responses.push_back(s.get<std::string>());
      }
      if (doc.contains("echo")) r.echo = doc["echo"].get<std::string>();
      if (doc.contains("error")) {
        const auto name = doc["error"].get<std::string>();
        if (name == "BackendExhausted") r.error = ErrorCode::BackendExhausted;
        else if (name == "AuthError") r.error = ErrorCode::AuthError;
        else if (name == "TranscriptMiss") r.error = ErrorCode::TranscriptMiss;
        else fail(ErrorCode::SchemaError, where + ": unsupported error '" + name + "'");
      }
    } catch (const json::exception& e) {
      fail(ErrorCode::SchemaError, where + ": " + e.what());
    }
    rules.push_back(std::move(r));
  }
  return std::make_shared<ScriptedBackend>(std::move(rules));
}

GenerationResponse ScriptedBackend::generate(const GenerationRequest& request) {
  std::lock_guard lock(mutex_);
  ++calls_;
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const auto& [rule, re] = rules_[i];
    if (!std::regex_search(request.request_tag, re)) continue;
    if (rule.prompt_contains && request.user_prompt.find(*rule.prompt_contains) == std::string::npos) continue;
    if (rule.error) fail(*rule.error, "scripted failure for '" + request.request_tag + "'");
    if (rule.echo) {
      const auto at = request.user_prompt.find(prompts::kHdlRefMarker);
      if (at == std::string::npos)
        fail(ErrorCode::TranscriptMiss, "echo rule found no reference in '" + request.request_tag + "'");
      const auto blocks = std::string_view(request.user_prompt).substr(at);
      const auto open = blocks.find("```");
      const auto body = open == std::string_view::npos ? blocks : blocks.substr(open);
      const auto close = body.find("```", 3);
      return {std::string(body.substr(0, close == std::string_view::npos ? body.size() : close + 3)), "scripted",
              0, std::nullopt};
    }
    auto& cursor = cursor_[{i, request.request_tag}];
    const auto& text = rule.responses[std::min(cursor, rule.responses.size() - 1)];
    ++cursor;
    return {text, "scripted", 0, std::nullopt};
  }
  fail(ErrorCode::TranscriptMiss, "no scripted rule matches '" + request.request_tag + "'");
}

std::size_t ScriptedBackend::call_count() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

}  // namespace verimoa
