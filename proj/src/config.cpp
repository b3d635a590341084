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

#include "verimoa/config.hpp"

#include <set>

#include "verimoa/error.hpp"
#include "verimoa/util.hpp"

namespace verimoa {

using nlohmann::json;

std::string_view to_string(AgentPath path) {
  switch (path) {
    case AgentPath::Base: return "Base";
    case AgentPath::Cpp: return "Cpp";
    case AgentPath::Py: return "Py";
    case AgentPath::Aggregator: return "Aggregator";
  }
  return "Base";
}

std::optional<AgentPath> parse_agent_path(std::string_view text) {
  if (text == "Base") return AgentPath::Base;
  if (text == "Cpp") return AgentPath::Cpp;
  if (text == "Py") return AgentPath::Py;
  if (text == "Aggregator") return AgentPath::Aggregator;
  return std::nullopt;
}

std::vector<AgentPath> default_mixture(int width) {
  static constexpr AgentPath kOrder[] = {AgentPath::Base, AgentPath::Cpp, AgentPath::Py};
  std::vector<AgentPath> out;
  for (int j = 0; j < width; ++j) out.push_back(kOrder[(3 * j) / width]);
  return out;
}

bool RunConfig::operator==(const RunConfig& o) const {
  auto sim_eq = [](const std::optional<SimulatorConfig>& a, const std::optional<SimulatorConfig>& b) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    return a->compile_cmd == b->compile_cmd && a->run_cmd == b->run_cmd && a->pass_marker == b->pass_marker &&
           a->workspace_root == b->workspace_root && a->timeout_ms == b->timeout_ms &&
           a->max_parallel == b->max_parallel && a->keep_workspaces == b->keep_workspaces;
  };
  return proposer_layers == o.proposer_layers && layer_width == o.layer_width && mixture == o.mixture &&
         top_n_hdl == o.top_n_hdl && top_k_intermediate == o.top_k_intermediate && trials == o.trials &&
         sampling == o.sampling && enable_sim_refinement == o.enable_sim_refinement &&
         max_sim_refine_rounds == o.max_sim_refine_rounds &&
         max_stage1_refine_rounds == o.max_stage1_refine_rounds && score_constants == o.score_constants &&
         random_seed == o.random_seed && max_tokens == o.max_tokens &&
         in_loop_functional_test == o.in_loop_functional_test && backend_concurrency == o.backend_concurrency &&
         templates_dir == o.templates_dir && sim_eq(simulator, o.simulator) && cpp_checker == o.cpp_checker &&
         py_checker == o.py_checker && http == o.http;
}

void validate(const RunConfig& c) {
  auto bad = [](const std::string& why) { fail(ErrorCode::InvariantViolation, why); };
  if (c.proposer_layers < 1) bad("proposer_layers must be >= 1");
  if (c.layer_width < 1) bad("layer_width must be >= 1");
  if (static_cast<int>(c.mixture.size()) != c.layer_width)
    bad("mixture has " + std::to_string(c.mixture.size()) + " entries but layer_width is " +
        std::to_string(c.layer_width));
  for (auto p : c.mixture)
    if (p == AgentPath::Aggregator) bad("mixture entries must be Base, Cpp or Py");
  if (c.top_n_hdl < 1) bad("top_n_hdl must be >= 1");
  if (c.top_k_intermediate < 1) bad("top_k_intermediate must be >= 1");
  if (c.trials < 1) bad("trials must be >= 1");
  if (!(c.sampling.temperature >= 0)) bad("sampling.temperature must be >= 0");
  if (!(c.sampling.top_p > 0 && c.sampling.top_p <= 1)) bad("sampling.top_p must be in (0, 1]");
  if (c.max_sim_refine_rounds < 0) bad("max_sim_refine_rounds must be >= 0");
  if (c.max_stage1_refine_rounds < 0) bad("max_stage1_refine_rounds must be >= 0");
  if (c.max_tokens < 1) bad("max_tokens must be >= 1");
  if (c.backend_concurrency < 1) bad("backend_concurrency must be >= 1");
  if (c.http.max_attempts < 1) bad("backend.max_attempts must be >= 1");
  validate(c.score_constants);
  if (c.simulator) {
    try {
      validate(*c.simulator);
    } catch (const Error& e) {
      bad(e.what());
    }
  }
  for (const auto* checker : {&c.cpp_checker, &c.py_checker}) {
    if (*checker && !(*checker)->check_cmd.empty() &&
        (*checker)->check_cmd.find("{source}") == std::string::npos)
      bad("checker check_cmd must contain {source}");
  }
}

namespace {

// Typed field access that reports the dotted path of any mismatch.
class Reader {
 public:
  Reader(const json& doc, std::string prefix) : doc_(doc), prefix_(std::move(prefix)) {
    if (!doc_.is_object()) fail(ErrorCode::SchemaError, name("") + ": expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> known(keys.begin(), keys.end());
    for (const auto& [key, _] : doc_.items())
      if (!known.contains(key)) fail(ErrorCode::SchemaError, name(key) + ": unknown field");
  }

  template <typename T>
  void get(const char* key, T& out) const {
    if (!doc_.contains(key)) return;
    const auto& v = doc_.at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(ErrorCode::SchemaError, name(key) + ": expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) fail(ErrorCode::SchemaError, name(key) + ": expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)
          fail(ErrorCode::SchemaError, name(key) + ": expected a non-negative integer");
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) fail(ErrorCode::SchemaError, name(key) + ": expected a number");
    } else {
      if (!v.is_string()) fail(ErrorCode::SchemaError, name(key) + ": expected a string");
    }
    out = v.get<T>();
  }

  const json* child(const char* key) const { return doc_.contains(key) ? &doc_.at(key) : nullptr; }
  std::string name(const std::string& key) const {
    if (prefix_.empty()) return key.empty() ? "config" : key;
    return key.empty() ? prefix_ : prefix_ + "." + key;
  }

 private:
  const json& doc_;
  std::string prefix_;
};

}  // namespace

RunConfig config_from_json(const json& doc) {
  RunConfig c;
  Reader r(doc, "");
  r.allow({"proposer_layers", "layer_width", "mixture", "top_n_hdl", "top_k_intermediate", "trials", "sampling",
           "enable_sim_refinement", "max_sim_refine_rounds", "max_stage1_refine_rounds", "score_constants",
           "random_seed", "max_tokens", "in_loop_functional_test", "backend_concurrency", "templates_dir",
           "simulator", "checkers", "backend"});
  r.get("proposer_layers", c.proposer_layers);
  r.get("layer_width", c.layer_width);
  if (const auto* m = r.child("mixture")) {
    if (!m->is_array()) fail(ErrorCode::SchemaError, "mixture: expected an array");
    c.mixture.clear();
    for (const auto& e : *m) {
      const auto path = e.is_string() ? parse_agent_path(e.get<std::string>()) : std::nullopt;
      if (!path || *path == AgentPath::Aggregator)
        fail(ErrorCode::SchemaError, "mixture: entries must be one of Base, Cpp, Py");
      c.mixture.push_back(*path);
    }
  } else {
    c.mixture = default_mixture(std::max(c.layer_width, 0));
  }
  r.get("top_n_hdl", c.top_n_hdl);
  r.get("top_k_intermediate", c.top_k_intermediate);
  r.get("trials", c.trials);
  if (const auto* s = r.child("sampling")) {
    Reader sr(*s, "sampling");
    sr.allow({"temperature", "top_p"});
    sr.get("temperature", c.sampling.temperature);
    sr.get("top_p", c.sampling.top_p);
  }
  r.get("enable_sim_refinement", c.enable_sim_refinement);
  r.get("max_sim_refine_rounds", c.max_sim_refine_rounds);
  r.get("max_stage1_refine_rounds", c.max_stage1_refine_rounds);
  if (const auto* s = r.child("score_constants")) {
    Reader sr(*s, "score_constants");
    sr.allow({"q_perfect", "q_base", "cap_severe", "cap_moderate", "cap_minor", "cap_structure", "cap_logic",
              "cap_format", "fallback_scale", "long_source_tokens", "rule_weights"});
    auto& k = c.score_constants;
    sr.get("q_perfect", k.q_perfect);
    sr.get("q_base", k.q_base);
    sr.get("cap_severe", k.cap_severe);
    sr.get("cap_moderate", k.cap_moderate);
    sr.get("cap_minor", k.cap_minor);
    sr.get("cap_structure", k.cap_structure);
    sr.get("cap_logic", k.cap_logic);
    sr.get("cap_format", k.cap_format);
    sr.get("fallback_scale", k.fallback_scale);
    sr.get("long_source_tokens", k.long_source_tokens);
    if (const auto* w = sr.child("rule_weights")) {
      if (!w->is_object()) fail(ErrorCode::SchemaError, "score_constants.rule_weights: expected an object");
      for (const auto& [id, v] : w->items()) {
        if (!v.is_number()) fail(ErrorCode::SchemaError, "score_constants.rule_weights." + id + ": expected a number");
        k.rule_weights[id] = v.get<double>();
      }
    }
  }
  r.get("random_seed", c.random_seed);
  r.get("max_tokens", c.max_tokens);
  r.get("in_loop_functional_test", c.in_loop_functional_test);
  r.get("backend_concurrency", c.backend_concurrency);
  if (doc.contains("templates_dir")) {
    std::string dir;
    r.get("templates_dir", dir);
    c.templates_dir = dir;
  }
  if (const auto* s = r.child("simulator")) {
    Reader sr(*s, "simulator");
    sr.allow({"compile_cmd", "run_cmd", "pass_marker", "workspace_root", "timeout_ms", "max_parallel"});
    SimulatorConfig sim;
    sr.get("compile_cmd", sim.compile_cmd);
    sr.get("run_cmd", sim.run_cmd);
    sr.get("pass_marker", sim.pass_marker);
    std::string root;
    sr.get("workspace_root", root);
    sim.workspace_root = root;
    sr.get("timeout_ms", sim.timeout_ms);
    sr.get("max_parallel", sim.max_parallel);
    c.simulator = sim;
  }
  if (const auto* s = r.child("checkers")) {
    Reader sr(*s, "checkers");
    sr.allow({"cpp", "py"});
    auto read_checker = [&](const char* key, std::optional<CheckerConfig>& out) {
      const auto* node = sr.child(key);
      if (!node) return;
      Reader cr(*node, std::string("checkers.") + key);
      cr.allow({"check_cmd", "timeout_ms"});
      CheckerConfig cc;
      cr.get("check_cmd", cc.check_cmd);
      cr.get("timeout_ms", cc.timeout_ms);
      out = cc;
    };
    read_checker("cpp", c.cpp_checker);
    read_checker("py", c.py_checker);
  }
  if (const auto* s = r.child("backend")) {
    Reader sr(*s, "backend");
    sr.allow({"endpoint", "model", "max_attempts", "backoff_ms", "request_timeout_ms"});
    sr.get("endpoint", c.http.endpoint);
    sr.get("model", c.http.model);
    sr.get("max_attempts", c.http.max_attempts);
    sr.get("backoff_ms", c.http.backoff_ms);
    sr.get("request_timeout_ms", c.http.request_timeout_ms);
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  const auto text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::SchemaError, path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

json to_json(const RunConfig& c) {
  json mixture = json::array();
  for (auto p : c.mixture) mixture.push_back(to_string(p));
  const auto& k = c.score_constants;
  json out = {
      {"proposer_layers", c.proposer_layers},
      {"layer_width", c.layer_width},
      {"mixture", mixture},
      {"top_n_hdl", c.top_n_hdl},
      {"top_k_intermediate", c.top_k_intermediate},
      {"trials", c.trials},
      {"sampling", {{"temperature", c.sampling.temperature}, {"top_p", c.sampling.top_p}}},
      {"enable_sim_refinement", c.enable_sim_refinement},
      {"max_sim_refine_rounds", c.max_sim_refine_rounds},
      {"max_stage1_refine_rounds", c.max_stage1_refine_rounds},
      {"score_constants",
       {{"q_perfect", k.q_perfect},
        {"q_base", k.q_base},
        {"cap_severe", k.cap_severe},
        {"cap_moderate", k.cap_moderate},
        {"cap_minor", k.cap_minor},
        {"cap_structure", k.cap_structure},
        {"cap_logic", k.cap_logic},
        {"cap_format", k.cap_format},
        {"fallback_scale", k.fallback_scale},
        {"long_source_tokens", k.long_source_tokens},
        {"rule_weights", k.rule_weights}}},
      {"random_seed", c.random_seed},
      {"max_tokens", c.max_tokens},
      {"in_loop_functional_test", c.in_loop_functional_test},
      {"backend_concurrency", c.backend_concurrency},
      {"backend",
       {{"endpoint", c.http.endpoint},
        {"model", c.http.model},
        {"max_attempts", c.http.max_attempts},
        {"backoff_ms", c.http.backoff_ms},
        {"request_timeout_ms", c.http.request_timeout_ms}}},
  };
  if (c.templates_dir) out["templates_dir"] = c.templates_dir->string();
  if (c.simulator) {
    const auto& s = *c.simulator;
    out["simulator"] = {{"compile_cmd", s.compile_cmd},   {"run_cmd", s.run_cmd},
                        {"pass_marker", s.pass_marker},   {"workspace_root", s.workspace_root.string()},
                        {"timeout_ms", s.timeout_ms},     {"max_parallel", s.max_parallel}};
  }
  json checkers = json::object();
  if (c.cpp_checker) checkers["cpp"] = {{"check_cmd", c.cpp_checker->check_cmd}, {"timeout_ms", c.cpp_checker->timeout_ms}};
  if (c.py_checker) checkers["py"] = {{"check_cmd", c.py_checker->check_cmd}, {"timeout_ms", c.py_checker->timeout_ms}};
  if (!checkers.empty()) out["checkers"] = checkers;
  return out;
}

}  // namespace verimoa
