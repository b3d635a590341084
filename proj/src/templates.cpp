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

#include "verimoa/templates.hpp"

#include <iomanip>
#include <sstream>

#include "verimoa/error.hpp"
#include "verimoa/util.hpp"

namespace verimoa::prompts {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kBaseSystem =
    "You are an expert RTL designer. You write correct, synthesizable Verilog-2005 that follows the\n"
    "specification exactly, including port names and widths.\n";

constexpr std::string_view kCppSystem =
    "You are an expert hardware engineer. You first model hardware behaviour as a cycle-accurate C++\n"
    "program with explicit bit-level state, then translate that model into synthesizable Verilog.\n";

constexpr std::string_view kPySystem =
    "You are an expert hardware engineer. You first model hardware behaviour as a clear Python\n"
    "reference model, then translate that model into synthesizable Verilog.\n";

constexpr std::string_view kAggregatorSystem =
    "You are a senior RTL designer. You are given several candidate implementations of one\n"
    "specification, ranked by measured quality, and you produce the single best Verilog module.\n";

constexpr std::string_view kDirectTemplate =
    "Design specification:\n"
    "{description}\n"
    "{references}\n"
    "Write a synthesizable Verilog module that implements the specification. Reply with the complete\n"
    "module in a single ```verilog code block.\n";

constexpr std::string_view kSimRefineTemplate =
    "Design specification:\n"
    "{description}\n"
    "\n"
    "Your current implementation:\n"
    "```verilog\n"
    "{candidate}\n"
    "```\n"
    "\n"
    "Simulating it against the testbench failed with this log (tail):\n"
    "```\n"
    "{feedback}\n"
    "```\n"
    "\n"
    "Fix the implementation. Reply with the complete corrected module in a single ```verilog code block.\n";

constexpr std::string_view kStage1Template =
    "Design specification:\n"
    "{description}\n"
    "{references}\n"
    "Write a {language} program that models the behaviour of this hardware precisely: one function or\n"
    "method per clock edge or combinational evaluation, explicit bit widths, and the same port names.\n"
    "Reply with the program in a single ```{language} code block.\n";

constexpr std::string_view kStage1RefineTemplate =
    "Design specification:\n"
    "{description}\n"
    "\n"
    "Your {language} model:\n"
    "```{language}\n"
    "{intermediate}\n"
    "```\n"
    "\n"
    "The syntax checker reported:\n"
    "```\n"
    "{feedback}\n"
    "```\n"
    "\n"
    "Fix the model. Reply with the corrected program in a single ```{language} code block.\n";

constexpr std::string_view kStage2Template =
    "Design specification:\n"
    "{description}\n"
    "\n"
    "A {language} model of this design:\n"
    "```{language}\n"
    "{intermediate}\n"
    "```\n"
    "{references}\n"
    "Translate the model into a synthesizable Verilog module that meets the specification. Reply with the\n"
    "complete module in a single ```verilog code block.\n";

constexpr std::string_view kAggregateTemplate =
    "Design specification:\n"
    "{description}\n"
    "{references}\n"
    "Synthesize the best possible implementation from the candidates above: keep what the\n"
    "highest-quality candidates get right and repair what they get wrong. Reply with the complete module\n"
    "in a single ```verilog code block.\n";

std::string fence_language(IntermediateLanguage lang) { return lang == IntermediateLanguage::Cpp ? "cpp" : "python"; }

std::string format_score(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << v;
  return out.str();
}

}  // namespace

std::string render(std::string_view tmpl, const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(tmpl.size() + 256);
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const auto close = tmpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        const auto it = vars.find(std::string(tmpl.substr(i + 1, close - i - 1)));
        if (it != vars.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

std::string format_hdl_references(std::span<const HdlCacheEntry> refs) {
  if (refs.empty()) return "";
  std::string out = "\nReference implementations from earlier layers, highest quality first:\n\n";
  for (const auto& r : refs) {
    out += std::string(kHdlRefMarker) + to_string(r.id) + "]] quality=" + format_score(r.score.value) + "\n";
    out += "```verilog\n" + r.source + "\n```\n\n";
  }
  return out;
}

std::string format_intermediate_references(std::span<const IntermediateCacheEntry> refs) {
  if (refs.empty()) return "";
  std::string out = "\nReference models from earlier layers, highest quality first:\n\n";
  for (const auto& r : refs) {
    const auto lang = fence_language(r.language);
    out += std::string(kIntRefMarker) + to_string(r.id) + "]] quality=" + format_score(r.score) + "\n";
    out += "```" + lang + "\n" + r.source + "\n```\n\n";
  }
  return out;
}

std::string_view directory_for(AgentPath path) {
  switch (path) {
    case AgentPath::Base: return "base";
    case AgentPath::Cpp: return "cpp";
    case AgentPath::Py: return "py";
    case AgentPath::Aggregator: return "aggregator";
  }
  return "base";
}

const std::vector<std::string_view>& required_templates(AgentPath path) {
  static const std::vector<std::string_view> kBase = {kSystem, kDirect, kSimRefine};
  static const std::vector<std::string_view> kTwoStage = {kSystem, kStage1, kStage1Refine, kStage2, kSimRefine};
  static const std::vector<std::string_view> kAgg = {kSystem, kAggregate, kSimRefine};
  switch (path) {
    case AgentPath::Base: return kBase;
    case AgentPath::Cpp:
    case AgentPath::Py: return kTwoStage;
    case AgentPath::Aggregator: return kAgg;
  }
  return kBase;
}

const std::vector<std::string_view>& required_placeholders(std::string_view name) {
  static const std::vector<std::string_view> kNone;
  static const std::vector<std::string_view> kDirectP = {"{description}", "{references}"};
  static const std::vector<std::string_view> kSimP = {"{description}", "{candidate}", "{feedback}"};
  static const std::vector<std::string_view> kStage1P = {"{description}", "{references}"};
  static const std::vector<std::string_view> kStage1RP = {"{description}", "{intermediate}", "{feedback}"};
  static const std::vector<std::string_view> kStage2P = {"{description}", "{intermediate}", "{references}"};
  if (name == kDirect || name == kAggregate) return kDirectP;
  if (name == kSimRefine) return kSimP;
  if (name == kStage1) return kStage1P;
  if (name == kStage1Refine) return kStage1RP;
  if (name == kStage2) return kStage2P;
  return kNone;
}

PromptLibrary::PromptLibrary() {
  auto& base = templates_[AgentPath::Base];
  base.emplace(kSystem, kBaseSystem);
  base.emplace(kDirect, kDirectTemplate);
  base.emplace(kSimRefine, kSimRefineTemplate);
  for (auto path : {AgentPath::Cpp, AgentPath::Py}) {
    auto& t = templates_[path];
    t.emplace(kSystem, path == AgentPath::Cpp ? kCppSystem : kPySystem);
    t.emplace(kStage1, kStage1Template);
    t.emplace(kStage1Refine, kStage1RefineTemplate);
    t.emplace(kStage2, kStage2Template);
    t.emplace(kSimRefine, kSimRefineTemplate);
  }
  auto& agg = templates_[AgentPath::Aggregator];
  agg.emplace(kSystem, kAggregatorSystem);
  agg.emplace(kAggregate, kAggregateTemplate);
  agg.emplace(kSimRefine, kSimRefineTemplate);
}

PromptLibrary PromptLibrary::load(const fs::path& root) {
  if (!fs::is_directory(root)) fail(ErrorCode::MissingFile, "templates directory not found: " + root.string());
  PromptLibrary lib;
  for (auto& [path, named] : lib.templates_) {
    for (auto& [name, text] : named) {
      const auto file = root / directory_for(path) / (name + ".txt");
      if (!fs::is_regular_file(file)) continue;
      auto loaded = read_file(file);
      for (auto placeholder : required_placeholders(name))
        if (loaded.find(placeholder) == std::string::npos)
          fail(ErrorCode::SchemaError, file.string() + ": missing placeholder " + std::string(placeholder));
      text = std::move(loaded);
    }
  }
  return lib;
}

const std::string& PromptLibrary::get(AgentPath path, std::string_view name) const {
  const auto& named = templates_.at(path);
  const auto it = named.find(name);
  if (it == named.end())
    fail(ErrorCode::SchemaError, "no template '" + std::string(name) + "' for " + std::string(to_string(path)));
  return it->second;
}

void PromptLibrary::save(const fs::path& root) const {
  for (const auto& [path, named] : templates_)
    for (const auto& [name, text] : named) write_file_atomic(root / directory_for(path) / (name + ".txt"), text);
}

}  // namespace verimoa::prompts
