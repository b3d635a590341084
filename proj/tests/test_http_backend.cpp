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
#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "support.hpp"
#include "verimoa/http_backend.hpp"

namespace verimoa {
namespace {

using nlohmann::json;
using testing::code_of;

// Local chat-completions endpoint; `handler` decides each reply.
class FakeEndpoint {
 public:
  explicit FakeEndpoint(std::function<void(const httplib::Request&, httplib::Response&, int)> handler)
      : handler_(std::move(handler)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& rq, httplib::Response& rs) {
      const int n = hits++;
      last_body = rq.body;
      last_auth = rq.get_header_value("Authorization");
      handler_(rq, rs, n);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeEndpoint() {
    server_.stop();
    thread_.join();
  }

  HttpBackendConfig config() const {
    HttpBackendConfig c;
    c.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/v1/";
    c.model = "test-model";
    c.max_attempts = 3;
    c.backoff_ms = 1;
    c.request_timeout_ms = 5000;
    return c;
  }

  std::atomic<int> hits{0};
  std::string last_body;
  std::string last_auth;

 private:
  std::function<void(const httplib::Request&, httplib::Response&, int)> handler_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

void ok(httplib::Response& rs, const std::string& text) {
  json body = {{"choices", {{{"message", {{"role", "assistant"}, {"content", text}}}}}},
               {"usage", {{"prompt_tokens", 11}, {"completion_tokens", 5}}}};
  rs.set_content(body.dump(), "application/json");
}

GenerationRequest request() {
  GenerationRequest r;
  r.system_prompt = "sys";
  r.user_prompt = "write a mux";
  r.temperature = 0.2;
  r.top_p = 0.9;
  r.max_tokens = 64;
  r.seed = 99;
  r.request_tag = "p/t0/L1/S1/Base/direct/r0";
  return r;
}

TEST(HttpBackend, Success) {
  FakeEndpoint ep([](const auto&, auto& rs, int) { ok(rs, "```verilog\nmodule m; endmodule\n```"); });
  HttpBackend b(ep.config(), "sekrit");
  const auto res = b.generate(request());
  EXPECT_EQ(res.text, "```verilog\nmodule m; endmodule\n```");
  EXPECT_EQ(res.backend_id, "http:test-model");
  ASSERT_TRUE(res.token_usage);
  EXPECT_EQ(res.token_usage->prompt, 11);
  EXPECT_EQ(res.token_usage->completion, 5);
  EXPECT_EQ(ep.hits, 1);
  EXPECT_EQ(ep.last_auth, "Bearer sekrit");
  const auto body = json::parse(ep.last_body);
  EXPECT_EQ(body["model"], "test-model");
  EXPECT_EQ(body["messages"].size(), 2u);
  EXPECT_EQ(body["messages"][1]["content"], "write a mux");
  EXPECT_DOUBLE_EQ(body["temperature"].get<double>(), 0.2);
  EXPECT_EQ(body["max_tokens"], 64);
  EXPECT_EQ(body["seed"], 99);
}

TEST(HttpBackend, NoKeyNoHeader) {
  FakeEndpoint ep([](const auto&, auto& rs, int) { ok(rs, "x"); });
  HttpBackend b(ep.config(), "");
  b.generate(request());
  EXPECT_EQ(ep.last_auth, "");
}

TEST(HttpBackend, RetriesRateLimitThenSucceeds) {
  FakeEndpoint ep([](const auto&, auto& rs, int n) {
    if (n == 0) {
      rs.status = 429;
      return;
    }
    ok(rs, "second time");
  });
  HttpBackend b(ep.config(), "");
  EXPECT_EQ(b.generate(request()).text, "second time");
  EXPECT_EQ(ep.hits, 2);
}

TEST(HttpBackend, AuthFailureIsImmediate) {
  for (int status : {401, 403}) {
    FakeEndpoint ep([status](const auto&, auto& rs, int) { rs.status = status; });
    HttpBackend b(ep.config(), "bad");
    EXPECT_EQ(code_of([&] { b.generate(request()); }), ErrorCode::AuthError);
    EXPECT_EQ(ep.hits, 1);
  }
}

TEST(HttpBackend, ServerErrorsExhaustAttempts) {
  FakeEndpoint ep([](const auto&, auto& rs, int) { rs.status = 503; });
  HttpBackend b(ep.config(), "");
  EXPECT_EQ(code_of([&] { b.generate(request()); }), ErrorCode::BackendExhausted);
  EXPECT_EQ(ep.hits, 3);
}

TEST(HttpBackend, MalformedBodyIsRetriedThenExhausted) {
  FakeEndpoint ep([](const auto&, auto& rs, int) { rs.set_content("{\"choices\": []}", "application/json"); });
  HttpBackend b(ep.config(), "");
  EXPECT_EQ(code_of([&] { b.generate(request()); }), ErrorCode::BackendExhausted);
  EXPECT_EQ(ep.hits, 3);
}

TEST(HttpBackend, UnreachableEndpoint) {
  HttpBackendConfig c;
  c.endpoint = "http://127.0.0.1:1/v1";
  c.max_attempts = 2;
  c.backoff_ms = 1;
  c.request_timeout_ms = 1000;
  HttpBackend b(c, "");
  EXPECT_EQ(code_of([&] { b.generate(request()); }), ErrorCode::BackendExhausted);
}

TEST(HttpBackend, RejectsBadEndpointAndRequest) {
  HttpBackendConfig c;
  c.endpoint = "localhost:8080";
  EXPECT_EQ(code_of([&] { HttpBackend(c, ""); }), ErrorCode::SchemaError);
  FakeEndpoint ep([](const auto&, auto& rs, int) { ok(rs, "x"); });
  HttpBackend b(ep.config(), "");
  auto r = request();
  r.max_tokens = 0;
  EXPECT_EQ(code_of([&] { b.generate(r); }), ErrorCode::InvariantViolation);
  EXPECT_EQ(ep.hits, 0);
}

TEST(HttpBackend, RequestBodyOmitsEmptySystemAndSeed) {
  HttpBackendConfig c;
  HttpBackend b(c, "");
  auto r = request();
  r.system_prompt.clear();
  r.seed.reset();
  const auto body = json::parse(b.request_body(r));
  EXPECT_EQ(body["messages"].size(), 1u);
  EXPECT_FALSE(body.contains("seed"));
}

}  // namespace
}  // namespace verimoa
