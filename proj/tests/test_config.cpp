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

#include <gtest/gtest.h>

#include "support.hpp"
#include "verimoa/config.hpp"
#include "verimoa/error.hpp"
#include "verimoa/util.hpp"

namespace verimoa {
namespace {

using nlohmann::json;

ErrorCode code_of(const json& doc) {
  try {
    config_from_json(doc);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted: " << doc.dump();
  return ErrorCode::UsageError;
}

TEST(Config, EmptyObjectGivesDefaults) {
  const auto c = config_from_json(json::object());
  EXPECT_EQ(c.proposer_layers, 4);
  EXPECT_EQ(c.layer_width, 6);
  EXPECT_EQ(c.trials, 10);
  EXPECT_DOUBLE_EQ(c.sampling.temperature, 0.8);
  EXPECT_DOUBLE_EQ(c.sampling.top_p, 0.95);
  EXPECT_EQ(c.top_n_hdl, 3);
  EXPECT_EQ(c.top_k_intermediate, 2);
  EXPECT_EQ(c.mixture, (std::vector<AgentPath>{AgentPath::Base, AgentPath::Base, AgentPath::Cpp, AgentPath::Cpp,
                                               AgentPath::Py, AgentPath::Py}));
  EXPECT_EQ(c.max_tokens, 4096);
  EXPECT_FALSE(c.enable_sim_refinement);
  EXPECT_EQ(c.max_sim_refine_rounds, 1);
  EXPECT_EQ(c.max_stage1_refine_rounds, 1);
  EXPECT_TRUE(c.in_loop_functional_test);
}

TEST(Config, MixtureLengthMismatch) {
  EXPECT_EQ(code_of({{"layer_width", 6}, {"mixture", {"Base", "Base", "Cpp", "Cpp", "Py"}}}),
            ErrorCode::InvariantViolation);
}

TEST(Config, ExplicitValuesPreserved) {
  const auto c = config_from_json({{"top_n_hdl", 3}, {"top_k_intermediate", 5}, {"random_seed", 99}});
  EXPECT_EQ(c.top_n_hdl, 3);
  EXPECT_EQ(c.top_k_intermediate, 5);
  EXPECT_EQ(c.random_seed, 99u);
}

TEST(Config, DefaultMixtureFollowsWidth) {
  EXPECT_EQ(default_mixture(1), std::vector<AgentPath>{AgentPath::Base});
  EXPECT_EQ(default_mixture(3), (std::vector<AgentPath>{AgentPath::Base, AgentPath::Cpp, AgentPath::Py}));
  const auto m8 = default_mixture(8);
  EXPECT_EQ(std::count(m8.begin(), m8.end(), AgentPath::Base), 3);
  EXPECT_EQ(std::count(m8.begin(), m8.end(), AgentPath::Cpp), 3);
  EXPECT_EQ(std::count(m8.begin(), m8.end(), AgentPath::Py), 2);
  const auto c = config_from_json({{"layer_width", 4}});
  EXPECT_EQ(c.mixture.size(), 4u);
}

TEST(Config, SchemaErrors) {
  EXPECT_EQ(code_of({{"layer_widht", 6}}), ErrorCode::SchemaError);
  EXPECT_EQ(code_of({{"trials", "ten"}}), ErrorCode::SchemaError);
  EXPECT_EQ(code_of({{"trials", 2.5}}), ErrorCode::SchemaError);
  EXPECT_EQ(code_of({{"sampling", {{"temp", 0.5}}}}), ErrorCode::SchemaError);
  EXPECT_EQ(code_of({{"mixture", {"Base", "Verilog", "Py", "Py", "Py", "Py"}}}), ErrorCode::SchemaError);
  EXPECT_EQ(code_of({{"mixture", {"Aggregator", "Base", "Py", "Py", "Py", "Py"}}}), ErrorCode::SchemaError);
  EXPECT_EQ(code_of(json::array()), ErrorCode::SchemaError);
  EXPECT_EQ(code_of({{"random_seed", -1}}), ErrorCode::SchemaError);
}

TEST(Config, SchemaErrorNamesField) {
  try {
    config_from_json({{"sampling", {{"top_p", "high"}}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("sampling.top_p"), std::string::npos);
  }
}

TEST(Config, InvariantViolations) {
  EXPECT_EQ(code_of({{"proposer_layers", 0}}), ErrorCode::InvariantViolation);
  EXPECT_EQ(code_of({{"top_n_hdl", 0}}), ErrorCode::InvariantViolation);
  EXPECT_EQ(code_of({{"trials", 0}}), ErrorCode::InvariantViolation);
  EXPECT_EQ(code_of({{"sampling", {{"top_p", 0.0}}}}), ErrorCode::InvariantViolation);
  EXPECT_EQ(code_of({{"sampling", {{"temperature", -0.1}}}}), ErrorCode::InvariantViolation);
  EXPECT_EQ(code_of({{"max_sim_refine_rounds", -1}}), ErrorCode::InvariantViolation);
  // functional-fail floor must stay above the syntax-fail ceiling
  EXPECT_EQ(code_of({{"score_constants", {{"cap_severe", 0.45}}}}), ErrorCode::InvariantViolation);
  EXPECT_EQ(code_of({{"score_constants", {{"q_base", 1.2}}}}), ErrorCode::InvariantViolation);
  EXPECT_EQ(code_of({{"checkers", {{"cpp", {{"check_cmd", "g++ -fsyntax-only"}}}}}}), ErrorCode::InvariantViolation);
  EXPECT_EQ(code_of({{"simulator", {{"compile_cmd", "iverilog"}}}}), ErrorCode::InvariantViolation);
}

TEST(Config, JsonRoundTripAndPurity) {
  json doc = {{"proposer_layers", 2},
              {"layer_width", 3},
              {"mixture", {"Py", "Base", "Cpp"}},
              {"trials", 4},
              {"sampling", {{"temperature", 0.2}, {"top_p", 0.5}}},
              {"enable_sim_refinement", true},
              {"max_sim_refine_rounds", 2},
              {"score_constants", {{"rule_weights", {{"severe.multi_driven", 0.1}}}}},
              {"random_seed", 123456789012345ULL},
              {"simulator", {{"compile_cmd", "x -o {out} {sources}"}, {"run_cmd", "y {out}"}, {"timeout_ms", 50}}},
              {"checkers", {{"py", {{"check_cmd", "python3 -m py_compile {source}"}}}}},
              {"backend", {{"model", "m"}, {"max_attempts", 5}}}};
  const auto a = config_from_json(doc);
  const auto b = config_from_json(doc);
  EXPECT_EQ(a, b);
  EXPECT_EQ(config_from_json(to_json(a)), a);
  EXPECT_DOUBLE_EQ(a.score_constants.weight("severe.multi_driven"), 0.1);
  EXPECT_DOUBLE_EQ(a.score_constants.weight("severe.comb_feedback"), 0.15);
}

TEST(Config, LoadFromFile) {
  const auto c = load_config(testing::data_dir() / "configs" / "toy.json");
  EXPECT_EQ(c.proposer_layers, 3);
  testing::TempDir dir;
  write_file_atomic(dir / "bad.json", "{ nope");
  try {
    load_config(dir / "bad.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SchemaError);
  }
}

}  // namespace
}  // namespace verimoa
