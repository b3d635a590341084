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

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace verimoa::verilog {

enum class TokenKind {
  Keyword,
  Identifier,
  SystemIdentifier,  // $display, $finish, ...
  Number,
  String,
  Comment,
  Directive,  // `timescale, `define, ...
  Operator,
  Unknown,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t line = 1;

  bool operator==(const Token&) const = default;
};

// Total lexer: never fails. Invalid UTF-8 is replaced before lexing, and
// anything outside the Verilog character set becomes an Unknown token.
std::vector<Token> tokenize(std::string_view source);

bool is_keyword(std::string_view word);

enum class Sensitivity { Combinational, EdgeTriggered, Unknown };

std::string_view to_string(Sensitivity s);

struct AlwaysBlockFacts {
  Sensitivity sensitivity = Sensitivity::Unknown;
  bool uses_blocking = false;
  bool uses_nonblocking = false;
  // A top-level `if` without a final `else` assigning a signal that was not
  // assigned unconditionally earlier in the block. Only set for
  // combinational blocks.
  bool has_incomplete_conditional = false;
  // Sensitivity list or an if-condition names something like rst/reset.
  bool references_reset = false;
  std::set<std::string> assigned_signals;
  std::set<std::string> read_signals;

  bool operator==(const AlwaysBlockFacts&) const = default;
};

struct StructuralFacts {
  bool has_module_decl = false;
  bool has_endmodule = false;
  std::optional<std::string> module_name;
  std::size_t port_count = 0;
  std::size_t ports_missing_direction = 0;
  std::vector<AlwaysBlockFacts> always_blocks;
  std::size_t assign_count = 0;
  std::size_t case_count = 0;
  std::size_t case_without_default = 0;
  std::size_t if_count = 0;
  std::size_t begin_count = 0;
  std::size_t end_count = 0;
  bool begin_end_balanced = true;
  // Signal -> number of distinct driving contexts (one `assign` statement
  // or one always block each).
  std::map<std::string, std::size_t> driven_signals;
  // At least one edge-triggered block exists and every one of them
  // references a reset.
  bool has_reset_in_sequential = false;
  // Code tokens only; comments excluded.
  std::size_t token_count = 0;

  bool operator==(const StructuralFacts&) const = default;
};

StructuralFacts extract_facts(std::string_view source);

nlohmann::json to_json(const StructuralFacts& facts);

}  // namespace verimoa::verilog
