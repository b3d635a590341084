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

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "verimoa/cache.hpp"
#include "verimoa/config.hpp"

namespace verimoa::prompts {

// Markers opening each formatted reference; prompt audits scan for them.
inline constexpr std::string_view kHdlRefMarker = "[[hdl:";
inline constexpr std::string_view kIntRefMarker = "[[int:";

// Template names.
inline constexpr std::string_view kSystem = "system";
inline constexpr std::string_view kDirect = "direct";
inline constexpr std::string_view kSimRefine = "sim_refine";
inline constexpr std::string_view kStage1 = "stage1";
inline constexpr std::string_view kStage1Refine = "stage1_refine";
inline constexpr std::string_view kStage2 = "stage2";
inline constexpr std::string_view kAggregate = "aggregate";

// Substitutes `{name}` for every key of `vars` in one pass; other braces
// (Verilog concatenations, C++ blocks) pass through untouched.
std::string render(std::string_view tmpl, const std::map<std::string, std::string>& vars);

// Empty string for an empty list, else a header plus one fenced block per
// entry, in the order given.
std::string format_hdl_references(std::span<const HdlCacheEntry> refs);
std::string format_intermediate_references(std::span<const IntermediateCacheEntry> refs);

// Directory name under a templates root: base, cpp, py, aggregator.
std::string_view directory_for(AgentPath path);

// Template names each agent kind must carry.
const std::vector<std::string_view>& required_templates(AgentPath path);

// Placeholders a given template must contain.
const std::vector<std::string_view>& required_placeholders(std::string_view template_name);

class PromptLibrary {
 public:
  // Built-in defaults.
  PromptLibrary();

  // Defaults overridden by any `<root>/<kind>/<name>.txt` present. Throws
  // SchemaError when an override lacks a required placeholder.
  static PromptLibrary load(const std::filesystem::path& root);

  const std::string& get(AgentPath path, std::string_view name) const;

  // Writes every template as `<root>/<kind>/<name>.txt`.
  void save(const std::filesystem::path& root) const;

 private:
  std::map<AgentPath, std::map<std::string, std::string, std::less<>>> templates_;
};

}  // namespace verimoa::prompts
