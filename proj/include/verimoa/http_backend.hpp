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

#include <memory>
#include <string>

#include "verimoa/config.hpp"
#include "verimoa/llm.hpp"

namespace verimoa {

// OpenAI-compatible chat-completion client. Transient failures (transport
// errors, 429, 5xx, unparseable bodies) are retried with exponential
// backoff; 401/403 raise AuthError immediately.
class HttpBackend final : public Backend {
 public:
  // `api_key` empty: no Authorization header is sent.
  HttpBackend(HttpBackendConfig config, std::string api_key);

  // Reads the key from VERIMOA_API_KEY.
  static std::shared_ptr<HttpBackend> from_environment(const HttpBackendConfig& config);

  GenerationResponse generate(const GenerationRequest& request) override;

  // Request body for one call (exposed for tests).
  std::string request_body(const GenerationRequest& request) const;

 private:
  HttpBackendConfig config_;
  std::string api_key_;
  std::string origin_;  // scheme://host[:port]
  std::string path_prefix_;
};

}  // namespace verimoa
