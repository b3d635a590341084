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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "verimoa/http_backend.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include <json.hpp>

namespace verimoa {

using nlohmann::json;

HttpBackend::HttpBackend(HttpBackendConfig config, std::string api_key)
    : config_(std::move(config)), api_key_(std::move(api_key)) {
  const auto scheme_end = config_.endpoint.find("://");
  if (scheme_end == std::string::npos)
    fail(ErrorCode::SchemaError, "backend.endpoint must start with http:// or https://");
  const auto path_start = config_.endpoint.find('/', scheme_end + 3);
  origin_ = config_.endpoint.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : config_.endpoint.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

std::shared_ptr<HttpBackend> HttpBackend::from_environment(const HttpBackendConfig& config) {
  const char* key = std::getenv("VERIMOA_API_KEY");
  return std::make_shared<HttpBackend>(config, key ? key : "");
}

std::string HttpBackend::request_body(const GenerationRequest& r) const {
  json messages = json::array();
  if (!r.system_prompt.empty()) messages.push_back({{"role", "system"}, {"content", r.system_prompt}});
  messages.push_back({{"role", "user"}, {"content", r.user_prompt}});
  json body = {{"model", config_.model},
               {"messages", messages},
               {"temperature", r.temperature},
               {"top_p", r.top_p},
               {"max_tokens", r.max_tokens}};
  if (r.seed) body["seed"] = *r.seed;
  return body.dump(-1, ' ', false, json::error_handler_t::replace);
}

GenerationResponse HttpBackend::generate(const GenerationRequest& request) {
  validate(request);
  const auto body = request_body(request);
  httplib::Client client(origin_);
  const auto timeout = std::chrono::milliseconds(config_.request_timeout_ms);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout).count() + 1, 0);
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout).count() + 1, 0);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  std::string last_error;
  for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
    if (attempt > 0) {
      const auto delay = config_.backoff_ms * (std::int64_t{1} << std::min(attempt - 1, 16));
      std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }
    const auto start = std::chrono::steady_clock::now();
    auto res = client.Post(path_prefix_ + "/chat/completions", headers, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403)
      fail(ErrorCode::AuthError, "endpoint rejected credentials (HTTP " + std::to_string(res->status) + ")");
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      fail(ErrorCode::BackendExhausted, "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 512));
    try {
      const auto doc = json::parse(res->body);
      const auto& choice = doc.at("choices").at(0);
      const auto& content = choice.at("message").at("content");
      GenerationResponse out;
      out.text = content.is_null() ? std::string() : content.get<std::string>();
      out.backend_id = "http:" + config_.model;
      out.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
      if (doc.contains("usage") && doc["usage"].is_object()) {
        out.token_usage = TokenUsage{doc["usage"].value("prompt_tokens", std::int64_t{0}),
                                     doc["usage"].value("completion_tokens", std::int64_t{0})};
      }
      return out;
    } catch (const json::exception& e) {
      last_error = std::string("malformed response: ") + e.what();
    }
  }
  fail(ErrorCode::BackendExhausted,
       std::to_string(config_.max_attempts) + " attempts failed for '" + request.request_tag + "': " + last_error);
}

}  // namespace verimoa
