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
#include <string_view>
#include <vector>

#include <json.hpp>

#include "verimoa/quality.hpp"
#include "verimoa/simulator.hpp"

namespace verimoa {

enum class AgentPath { Base, Cpp, Py, Aggregator };

std::string_view to_string(AgentPath path);
std::optional<AgentPath> parse_agent_path(std::string_view text);

struct SamplingParams {
  double temperature = 0.8;
  double top_p = 0.95;

  bool operator==(const SamplingParams&) const = default;
};

struct CheckerConfig {
  // Placeholder: {source}. Empty disables the stage-1 check.
  std::string check_cmd;
  std::int64_t timeout_ms = 10000;

  bool operator==(const CheckerConfig&) const = default;
};

struct HttpBackendConfig {
  std::string endpoint = "https://api.openai.com/v1";
  std::string model = "gpt-4o-mini";
  int max_attempts = 3;
  std::int64_t backoff_ms = 500;
  std::int64_t request_timeout_ms = 120000;

  bool operator==(const HttpBackendConfig&) const = default;
};

struct RunConfig {
  int proposer_layers = 4;
  int layer_width = 6;
  std::vector<AgentPath> mixture = {AgentPath::Base, AgentPath::Base, AgentPath::Cpp,
                                    AgentPath::Cpp,  AgentPath::Py,   AgentPath::Py};
  int top_n_hdl = 3;
  int top_k_intermediate = 2;
  int trials = 10;
  SamplingParams sampling;
  bool enable_sim_refinement = false;
  int max_sim_refine_rounds = 1;
  int max_stage1_refine_rounds = 1;
  ScoreConstants score_constants;
  std::uint64_t random_seed = 0;

  int max_tokens = 4096;
  // Run the golden testbench inside the generation loop.
  bool in_loop_functional_test = true;
  // In-flight generation requests per backend.
  int backend_concurrency = 6;
  std::optional<std::filesystem::path> templates_dir;
  std::optional<SimulatorConfig> simulator;
  std::optional<CheckerConfig> cpp_checker;
  std::optional<CheckerConfig> py_checker;
  HttpBackendConfig http;

  bool operator==(const RunConfig&) const;
};

// Default mixture for a layer of `width` agents: slot j gets the
// floor(3j/width)-th of [Base, Cpp, Py].
std::vector<AgentPath> default_mixture(int width);

// Throws InvariantViolation.
void validate(const RunConfig& config);

// Parses a config document, applying defaults for absent fields. Unknown
// keys and wrongly typed values raise SchemaError.
RunConfig config_from_json(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& config);

}  // namespace verimoa
