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

#include <random>

#include "support.hpp"
#include "verimoa/util.hpp"
#include "verimoa/verilog.hpp"

namespace verimoa::verilog {
namespace {

std::vector<std::pair<TokenKind, std::string>> kinds(std::string_view src) {
  std::vector<std::pair<TokenKind, std::string>> out;
  for (const auto& t : tokenize(src)) out.emplace_back(t.kind, t.text);
  return out;
}

TEST(Tokenize, ModuleSkeleton) {
  using K = TokenKind;
  EXPECT_EQ(kinds("module m; endmodule"),
            (std::vector<std::pair<K, std::string>>{
                {K::Keyword, "module"}, {K::Identifier, "m"}, {K::Operator, ";"}, {K::Keyword, "endmodule"}}));
}

TEST(Tokenize, CommentThenFiveCodeTokens) {
  const auto toks = tokenize("// c\nassign y=x;");
  ASSERT_EQ(toks.size(), 6u);
  EXPECT_EQ(toks[0].kind, TokenKind::Comment);
  EXPECT_EQ(toks[1].text, "assign");
  EXPECT_EQ(toks[1].line, 2u);
  EXPECT_EQ(toks[3].text, "=");
  EXPECT_EQ(toks[5].text, ";");
}

TEST(Tokenize, Empty) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Tokenize, LiteralsAndOperators) {
  const auto toks = tokenize("`timescale 1ns/1ps\n$display(\"a // b\"); x <= 8'hFF; y = a === b; /* c */");
  std::vector<std::string> texts;
  for (const auto& t : toks) texts.push_back(t.text);
  EXPECT_EQ(toks[0].kind, TokenKind::Directive);
  EXPECT_NE(std::find(texts.begin(), texts.end(), "\"a // b\""), texts.end());
  EXPECT_NE(std::find(texts.begin(), texts.end(), "8'hFF"), texts.end());
  EXPECT_NE(std::find(texts.begin(), texts.end(), "<="), texts.end());
  EXPECT_NE(std::find(texts.begin(), texts.end(), "==="), texts.end());
  EXPECT_EQ(toks.back().kind, TokenKind::Comment);
  bool saw_system = false;
  for (const auto& t : toks) saw_system |= t.kind == TokenKind::SystemIdentifier && t.text == "$display";
  EXPECT_TRUE(saw_system);
}

TEST(Tokenize, GarbageBecomesUnknown) {
  const auto toks = tokenize("a \x01 \xFF b");
  ASSERT_GE(toks.size(), 3u);
  bool unknown = false;
  for (const auto& t : toks) unknown |= t.kind == TokenKind::Unknown;
  EXPECT_TRUE(unknown);
}

TEST(Facts, ToyMuxHandCounted) {
  const auto f = extract_facts(read_file(testing::data_dir() / "reference" / "mux2.v"));
  EXPECT_TRUE(f.has_module_decl);
  EXPECT_TRUE(f.has_endmodule);
  EXPECT_EQ(f.module_name, "top_module");
  EXPECT_EQ(f.assign_count, 1u);
  EXPECT_EQ(f.port_count, 4u);
  EXPECT_EQ(f.ports_missing_direction, 0u);
  EXPECT_TRUE(f.always_blocks.empty());
  EXPECT_EQ(f.token_count, 26u);
  EXPECT_EQ(f.driven_signals.at("out"), 1u);
}

TEST(Facts, TwoAlwaysBlocksDrivingQ) {
  const auto f = extract_facts(R"(
module m(input clk, input a, input b, output reg q);
  always @(posedge clk) q <= a;
  always @(posedge clk) begin
    q <= b;
  end
endmodule
)");
  EXPECT_EQ(f.driven_signals.at("q"), 2u);
  ASSERT_EQ(f.always_blocks.size(), 2u);
  EXPECT_EQ(f.always_blocks[0].sensitivity, Sensitivity::EdgeTriggered);
  EXPECT_TRUE(f.always_blocks[1].uses_nonblocking);
  EXPECT_FALSE(f.has_reset_in_sequential);
}

TEST(Facts, EmptySource) {
  const auto f = extract_facts("");
  EXPECT_FALSE(f.has_module_decl);
  EXPECT_FALSE(f.has_endmodule);
  EXPECT_FALSE(f.module_name);
  EXPECT_FALSE(f.has_reset_in_sequential);
  EXPECT_EQ(f.port_count, 0u);
  EXPECT_EQ(f.assign_count, 0u);
  EXPECT_EQ(f.case_without_default, 0u);
  EXPECT_EQ(f.token_count, 0u);
  EXPECT_TRUE(f.always_blocks.empty());
  EXPECT_TRUE(f.driven_signals.empty());
  // 0 begins == 0 ends
  EXPECT_TRUE(f.begin_end_balanced);
}

TEST(Facts, CombinationalBlockShapes) {
  const auto f = extract_facts(R"(
module m(input [1:0] s, input a, input en, output reg y, output reg z, output reg w);
  always @(*) begin
    case (s)
      2'd0: y = a;
      2'd1: y = ~a;
    endcase
    if (en) z = a;
    w <= a;
  end
endmodule
)");
  ASSERT_EQ(f.always_blocks.size(), 1u);
  const auto& b = f.always_blocks[0];
  EXPECT_EQ(b.sensitivity, Sensitivity::Combinational);
  EXPECT_TRUE(b.uses_blocking);
  EXPECT_TRUE(b.uses_nonblocking);
  EXPECT_TRUE(b.has_incomplete_conditional);
  EXPECT_EQ(f.case_count, 1u);
  EXPECT_EQ(f.case_without_default, 1u);
  EXPECT_EQ(b.assigned_signals, (std::set<std::string>{"w", "y", "z"}));
  EXPECT_TRUE(b.read_signals.contains("a"));
}

TEST(Facts, DefaultAssignmentPreventsLatch) {
  const auto f = extract_facts(R"(
module m(input a, input en, output reg z);
  always @* begin
    z = 1'b0;
    if (en) z = a;
  end
endmodule
)");
  ASSERT_EQ(f.always_blocks.size(), 1u);
  EXPECT_FALSE(f.always_blocks[0].has_incomplete_conditional);
}

TEST(Facts, CompleteIfElseIsNotLatch) {
  const auto f = extract_facts(R"(
module m(input a, input en, output reg z);
  always @(a or en) if (en) z = a; else z = 1'b0;
endmodule
)");
  ASSERT_EQ(f.always_blocks.size(), 1u);
  EXPECT_EQ(f.always_blocks[0].sensitivity, Sensitivity::Combinational);
  EXPECT_FALSE(f.always_blocks[0].has_incomplete_conditional);
}

TEST(Facts, ResetDetection) {
  const auto f = extract_facts(read_file(testing::data_dir() / "reference" / "dff_rst.v"));
  ASSERT_EQ(f.always_blocks.size(), 1u);
  EXPECT_TRUE(f.always_blocks[0].references_reset);
  EXPECT_TRUE(f.has_reset_in_sequential);
  const auto g = extract_facts(read_file(testing::data_dir() / "wrong" / "dff_rst.v"));
  EXPECT_FALSE(g.has_reset_in_sequential);
}

TEST(Facts, AsyncResetInSensitivity) {
  const auto f = extract_facts(R"(
module m(input clk, input rst_n, input d, output reg q);
  always @(posedge clk or negedge rst_n)
    if (!rst_n) q <= 0; else q <= d;
endmodule
)");
  EXPECT_TRUE(f.has_reset_in_sequential);
}

TEST(Facts, NonAnsiPortsAndMissingDirection) {
  const auto f = extract_facts(R"(
module m(a, b, c);
  input a;
  output b;
  assign b = a;
endmodule
)");
  EXPECT_EQ(f.port_count, 3u);
  EXPECT_EQ(f.ports_missing_direction, 1u);
}

TEST(Facts, UnbalancedBeginEnd) {
  const auto f = extract_facts("module m; initial begin begin end endmodule");
  EXPECT_EQ(f.begin_count, 2u);
  EXPECT_EQ(f.end_count, 1u);
  EXPECT_FALSE(f.begin_end_balanced);
}

TEST(Facts, MultipleModulesTakeMaxDrivers) {
  const auto f = extract_facts(R"(
module a(output y); assign y = 1'b0; endmodule
module b(output y); assign y = 1'b1; endmodule
)");
  EXPECT_EQ(f.driven_signals.at("y"), 1u);
  EXPECT_EQ(f.module_name, "a");
}

TEST(Facts, JsonHasEveryField) {
  const auto j = to_json(extract_facts(read_file(testing::data_dir() / "reference" / "counter4.v")));
  for (const char* key : {"has_module_decl", "has_endmodule", "module_name", "port_count", "always_blocks",
                          "assign_count", "case_without_default", "begin_end_balanced", "driven_signals",
                          "has_reset_in_sequential", "token_count"})
    EXPECT_TRUE(j.contains(key)) << key;
}

std::string random_source(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces = {
      "module", "endmodule", "m", "(", ")", ";", "input", "output", "reg", "wire", "always", "@", "(*)",
      "posedge", "clk", "begin", "end", "if", "else", "case", "endcase", "default", ":", "=", "<=", "assign",
      "q", "d", "rst", "1'b0", "8'hx", "//c\n", "/*", "*/", "\"s", "\n", " ", "`define", "$x", "\xC3", "\xFF", "{",
      "}", ",", "?", "#5", "fork", "join", "for", "while"};
  std::uniform_int_distribution<std::size_t> len(0, 60), pick(0, pieces.size() - 1);
  std::string s;
  for (std::size_t i = 0, n = len(rng); i < n; ++i) s += pieces[pick(rng)] + " ";
  return s;
}

TEST(FactsProperty, TotalDeterministicAndBalancedDefinition) {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int i = 0; i < 3000; ++i) {
    std::string src;
    if (i % 3 == 0) {
      for (int j = 0; j < 80; ++j) src.push_back(static_cast<char>(byte(rng)));
    } else {
      src = random_source(rng);
    }
    StructuralFacts a, b;
    ASSERT_NO_THROW(a = extract_facts(src));
    ASSERT_NO_THROW(b = extract_facts(src));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.begin_end_balanced, a.begin_count == a.end_count);
    EXPECT_EQ(a.module_name.has_value(), a.has_module_decl);
    std::size_t begins = 0, ends = 0;
    for (const auto& t : tokenize(src)) {
      begins += t.kind == TokenKind::Keyword && t.text == "begin";
      ends += t.kind == TokenKind::Keyword && t.text == "end";
    }
    EXPECT_EQ(a.begin_count, begins);
    EXPECT_EQ(a.end_count, ends);
    // closing any open block comment first, a trailing endmodule is always seen
    EXPECT_TRUE(extract_facts(src + "\n*/ endmodule\n").has_endmodule);
  }
}

}  // namespace
}  // namespace verimoa::verilog
