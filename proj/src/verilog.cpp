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

#include "verimoa/verilog.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

#include "verimoa/util.hpp"

namespace verimoa::verilog {

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::SystemIdentifier: return "system_identifier";
    case TokenKind::Number: return "number";
    case TokenKind::String: return "string";
    case TokenKind::Comment: return "comment";
    case TokenKind::Directive: return "directive";
    case TokenKind::Operator: return "operator";
    case TokenKind::Unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(Sensitivity s) {
  switch (s) {
    case Sensitivity::Combinational: return "combinational";
    case Sensitivity::EdgeTriggered: return "edge_triggered";
    case Sensitivity::Unknown: return "unknown";
  }
  return "unknown";
}

bool is_keyword(std::string_view word) {
  static const std::unordered_set<std::string_view> kKeywords = {
      "always", "always_comb", "always_ff", "always_latch", "and", "assign", "automatic",
      "begin", "bit", "buf", "byte", "case", "casex", "casez", "default", "defparam",
      "disable", "else", "end", "endcase", "endfunction", "endgenerate", "endmodule",
      "endprimitive", "endspecify", "endtable", "endtask", "enum", "event", "for", "force",
      "forever", "fork", "function", "generate", "genvar", "if", "initial", "inout",
      "input", "int", "integer", "join", "join_any", "join_none", "localparam", "logic",
      "longint", "macromodule", "module", "nand", "negedge", "nor", "not", "or", "output",
      "packed", "parameter", "posedge", "primitive", "priority", "real", "reg", "release",
      "repeat", "shortint", "signed", "specify", "struct", "supply0", "supply1", "table",
      "task", "time", "tri", "typedef", "unique", "unsigned", "void", "wait", "while",
      "wire", "xnor", "xor"};
  return kKeywords.contains(word);
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool based_digit(char c) {
  return std::isxdigit(static_cast<unsigned char>(c)) || c == '_' || c == '?' || c == 'x' ||
         c == 'X' || c == 'z' || c == 'Z';
}

constexpr std::array<std::string_view, 30> kOperators = {
    "<<<=", ">>>=", "===", "!==", "<<<", ">>>", "<<=", ">>=", "==", "!=",
    "<=",   ">=",   "&&",  "||",  "<<",  ">>",  "**",  "~&",  "~|", "~^",
    "^~",   "->",   "+:",  "-:",  "::",  "++",  "--",  "+=",  "-=", "|="};

}  // namespace

std::vector<Token> tokenize(std::string_view raw) {
  const std::string text = sanitize_utf8(raw);
  const std::string_view src = text;
  std::vector<Token> out;
  std::size_t i = 0;
  std::size_t line = 1;
  auto emit = [&](TokenKind kind, std::size_t begin, std::size_t end, std::size_t at_line) {
    out.push_back({kind, std::string(src.substr(begin, end - begin)), at_line});
  };
  auto count_lines = [&](std::size_t begin, std::size_t end) {
    line += static_cast<std::size_t>(std::count(src.begin() + begin, src.begin() + end, '\n'));
  };

  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    const std::size_t start_line = line;

    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      const auto nl = src.find('\n', i);
      i = nl == std::string_view::npos ? src.size() : nl;
      emit(TokenKind::Comment, start, i, start_line);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      const auto close = src.find("*/", i + 2);
      i = close == std::string_view::npos ? src.size() : close + 2;
      count_lines(start, i);
      emit(TokenKind::Comment, start, i, start_line);
      continue;
    }
    if (c == '"') {
      ++i;
      while (i < src.size() && src[i] != '"' && src[i] != '\n') {
        if (src[i] == '\\' && i + 1 < src.size() && src[i + 1] != '\n') ++i;
        ++i;
      }
      if (i < src.size() && src[i] == '"') ++i;
      emit(TokenKind::String, start, i, start_line);
      continue;
    }
    if (ident_start(c)) {
      while (i < src.size() && ident_char(src[i])) ++i;
      const auto word = src.substr(start, i - start);
      emit(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, start, i, start_line);
      continue;
    }
    if (c == '\\') {
      ++i;
      while (i < src.size() && !std::isspace(static_cast<unsigned char>(src[i])) &&
             static_cast<unsigned char>(src[i]) < 0x80)
        ++i;
      emit(i - start > 1 ? TokenKind::Identifier : TokenKind::Unknown, start, i, start_line);
      continue;
    }
    if (c == '$' && i + 1 < src.size() && ident_start(src[i + 1])) {
      ++i;
      while (i < src.size() && ident_char(src[i])) ++i;
      emit(TokenKind::SystemIdentifier, start, i, start_line);
      continue;
    }
    if (c == '`' && i + 1 < src.size() && ident_start(src[i + 1])) {
      ++i;
      while (i < src.size() && ident_char(src[i])) ++i;
      emit(TokenKind::Directive, start, i, start_line);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '\'' && i + 1 < src.size() &&
         (based_digit(src[i + 1]) || std::strchr("sSbBoOdDhH", src[i + 1]) != nullptr))) {
      // Optional size / decimal literal.
      while (i < src.size() && (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
      if (i + 1 < src.size() && src[i] == '.' && std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
        ++i;
        while (i < src.size() && (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E') && i > start) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          i = j;
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      // Based part: 'h1F, 'sb101, '0.
      std::size_t j = i;
      while (j < src.size() && (src[j] == ' ' || src[j] == '\t')) ++j;
      if (j < src.size() && src[j] == '\'') {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == 's' || src[k] == 'S')) ++k;
        if (k < src.size() && std::strchr("bBoOdDhH", src[k]) != nullptr) {
          ++k;
          while (k < src.size() && (src[k] == ' ' || src[k] == '\t')) ++k;
          while (k < src.size() && based_digit(src[k])) ++k;
          i = k;
        } else if (k < src.size() && based_digit(src[k]) && j == start) {
          i = k + 1;  // unbased unsized fill: '0 '1 'x 'z
        }
      }
      if (i == start) ++i;
      emit(TokenKind::Number, start, i, start_line);
      continue;
    }
    const auto uc = static_cast<unsigned char>(c);
    if (uc >= 0x80 || uc < 0x20 || uc == 0x7F) {
      // One Unknown token per UTF-8 sequence or control byte.
      std::size_t len = 1;
      if ((uc & 0xE0) == 0xC0) len = 2;
      else if ((uc & 0xF0) == 0xE0) len = 3;
      else if ((uc & 0xF8) == 0xF0) len = 4;
      i = std::min(src.size(), i + len);
      emit(TokenKind::Unknown, start, i, start_line);
      continue;
    }
    bool matched = false;
    for (auto op : kOperators) {
      if (src.substr(i, op.size()) == op) {
        i += op.size();
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
    emit(TokenKind::Operator, start, i, start_line);
  }
  return out;
}

namespace {

bool is_reset_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return lower.find("rst") != std::string::npos || lower.find("reset") != std::string::npos;
}

bool is_direction(std::string_view w) { return w == "input" || w == "output" || w == "inout"; }

bool is_case(std::string_view w) { return w == "case" || w == "casez" || w == "casex"; }

// Statement walker over code tokens (comments removed). Every routine
// consumes at least one token unless it sits at end of input or on a
// closing keyword it does not own, so malformed input always terminates.
class Walker {
 public:
  explicit Walker(const std::vector<Token>& toks) : t_(toks) {}

  struct StmtInfo {
    std::set<std::string> assigned;
    bool is_if = false;
    bool if_complete = true;
  };

  bool at_end(std::size_t i) const { return i >= t_.size(); }
  const std::string& text(std::size_t i) const {
    static const std::string kEmpty;
    return i < t_.size() ? t_[i].text : kEmpty;
  }
  bool is_name(std::size_t i) const { return i < t_.size() && t_[i].kind == TokenKind::Identifier; }

  // Index just past the bracket matching the opener at i.
  std::size_t skip_group(std::size_t i) const {
    int depth = 0;
    for (; i < t_.size(); ++i) {
      const auto& s = t_[i].text;
      if (t_[i].kind != TokenKind::Operator) {
        if (t_[i].kind == TokenKind::Keyword && (s == "endmodule")) return i;
        continue;
      }
      if (s == "(" || s == "[" || s == "{") ++depth;
      else if (s == ")" || s == "]" || s == "}") {
        if (--depth <= 0) return i + 1;
      }
    }
    return i;
  }

  // Identifiers read in [begin, end), with bracketed indices included.
  void collect_reads(std::size_t begin, std::size_t end, std::set<std::string>& out) const {
    for (std::size_t i = begin; i < end && i < t_.size(); ++i)
      if (t_[i].kind == TokenKind::Identifier) out.insert(t_[i].text);
  }

  // LHS targets in [begin, end): identifiers outside [] at bracket depth of
  // the LHS; identifiers inside [] count as reads.
  void collect_lhs(std::size_t begin, std::size_t end, std::set<std::string>& assigned,
                   std::set<std::string>& reads) const {
    int square = 0;
    for (std::size_t i = begin; i < end && i < t_.size(); ++i) {
      const auto& s = t_[i].text;
      if (t_[i].kind == TokenKind::Operator) {
        if (s == "[") ++square;
        else if (s == "]") square = std::max(0, square - 1);
        continue;
      }
      if (t_[i].kind != TokenKind::Identifier) continue;
      if (square > 0) reads.insert(s);
      else assigned.insert(s);
    }
  }

  bool closes(std::size_t i) const {
    if (at_end(i) || t_[i].kind != TokenKind::Keyword) return false;
    const auto& s = t_[i].text;
    return s == "end" || s == "endcase" || s == "endmodule" || s == "join" || s == "join_any" ||
           s == "join_none" || s == "endfunction" || s == "endtask" || s == "else";
  }

  std::size_t statement(std::size_t i, AlwaysBlockFacts& blk, StmtInfo& info) {
    if (at_end(i)) return i;
    if (closes(i)) return i;
    const auto& s = text(i);
    const auto kind = t_[i].kind;

    if (kind == TokenKind::Keyword && (s == "begin" || s == "fork")) {
      ++i;
      if (text(i) == ":" && is_name(i + 1)) i += 2;
      while (!at_end(i) && !closes(i)) {
        StmtInfo child;
        const auto next = statement(i, blk, child);
        info.assigned.insert(child.assigned.begin(), child.assigned.end());
        i = next > i ? next : i + 1;
      }
      if (!at_end(i) && (text(i) == "end" || text(i).starts_with("join"))) ++i;
      if (text(i) == ":" && is_name(i + 1)) i += 2;
      return i;
    }
    if (kind == TokenKind::Keyword && (s == "unique" || s == "priority")) return statement(i + 1, blk, info);
    if (kind == TokenKind::Keyword && s == "if") {
      info.is_if = true;
      ++i;
      if (text(i) == "(") {
        const auto close = skip_group(i);
        collect_reads(i, close, blk.read_signals);
        for (std::size_t k = i; k < close; ++k)
          if (t_[k].kind == TokenKind::Identifier && is_reset_name(t_[k].text)) blk.references_reset = true;
        i = close;
      }
      StmtInfo then_info;
      i = statement(i, blk, then_info);
      info.assigned.insert(then_info.assigned.begin(), then_info.assigned.end());
      if (text(i) == "else") {
        StmtInfo else_info;
        const auto next = statement(i + 1, blk, else_info);
        info.assigned.insert(else_info.assigned.begin(), else_info.assigned.end());
        info.if_complete = else_info.is_if ? else_info.if_complete : true;
        return next;
      }
      info.if_complete = false;
      return i;
    }
    if (kind == TokenKind::Keyword && is_case(s)) {
      ++i;
      if (text(i) == "(") {
        const auto close = skip_group(i);
        collect_reads(i, close, blk.read_signals);
        i = close;
      }
      while (!at_end(i) && text(i) != "endcase" && text(i) != "endmodule") {
        if (text(i) == "default") {
          ++i;
          if (text(i) == ":") ++i;
        } else {
          // Item label up to the ':' at bracket depth zero.
          int depth = 0;
          while (!at_end(i)) {
            const auto& w = text(i);
            if (w == "(" || w == "[" || w == "{") ++depth;
            else if (w == ")" || w == "]" || w == "}") --depth;
            else if (w == ":" && depth <= 0) break;
            else if (w == "endcase" || w == "endmodule") break;
            ++i;
          }
          if (text(i) == ":") ++i;
        }
        if (at_end(i) || text(i) == "endcase" || text(i) == "endmodule") break;
        StmtInfo child;
        const auto next = statement(i, blk, child);
        info.assigned.insert(child.assigned.begin(), child.assigned.end());
        i = next > i ? next : i + 1;
      }
      if (text(i) == "endcase") ++i;
      return i;
    }
    if (kind == TokenKind::Keyword && (s == "for" || s == "while" || s == "repeat")) {
      ++i;
      if (text(i) == "(") i = skip_group(i);
      return statement(i, blk, info);
    }
    if (kind == TokenKind::Keyword && s == "forever") return statement(i + 1, blk, info);
    if (kind == TokenKind::Operator && s == "@") {
      ++i;
      if (text(i) == "(") i = skip_group(i);
      else ++i;
      return statement(i, blk, info);
    }
    if (kind == TokenKind::Operator && s == "#") {
      ++i;
      if (text(i) == "(") i = skip_group(i);
      else ++i;
      return statement(i, blk, info);
    }
    if (kind == TokenKind::Operator && s == ";") return i + 1;

    // Simple statement up to ';' at depth zero.
    const std::size_t begin = i;
    std::size_t assign_op = t_.size();
    bool nonblocking = false;
    int depth = 0;
    for (; !at_end(i); ++i) {
      const auto& w = text(i);
      if (t_[i].kind == TokenKind::Keyword && closes(i)) break;
      if (t_[i].kind == TokenKind::Keyword &&
          (w == "begin" || w == "if" || is_case(w) || w == "always" || w == "assign"))
        break;
      if (t_[i].kind != TokenKind::Operator) continue;
      if (w == "(" || w == "[" || w == "{") ++depth;
      else if (w == ")" || w == "]" || w == "}") --depth;
      else if (depth <= 0 && w == ";") break;
      else if (depth <= 0 && assign_op == t_.size() && (w == "=" || w == "<=")) {
        assign_op = i;
        nonblocking = w == "<=";
      }
    }
    const std::size_t end = i;
    if (assign_op != t_.size()) {
      collect_lhs(begin, assign_op, info.assigned, blk.read_signals);
      collect_reads(assign_op + 1, end, blk.read_signals);
      (nonblocking ? blk.uses_nonblocking : blk.uses_blocking) = true;
    } else {
      collect_reads(begin, end, blk.read_signals);
    }
    if (text(i) == ";") ++i;
    return i > begin ? i : begin + 1;
  }

  // Parses `always ...` starting at i; returns index past the block.
  std::size_t always_block(std::size_t i, AlwaysBlockFacts& blk) {
    const std::string head = text(i);
    ++i;
    bool has_list = false;
    if (text(i) == "@") {
      has_list = true;
      ++i;
      if (text(i) == "(") {
        const auto close = skip_group(i);
        bool edge = false;
        for (std::size_t k = i; k < close; ++k) {
          if (text(k) == "posedge" || text(k) == "negedge") edge = true;
          if (t_[k].kind == TokenKind::Identifier && is_reset_name(t_[k].text)) blk.references_reset = true;
        }
        blk.sensitivity = edge ? Sensitivity::EdgeTriggered : Sensitivity::Combinational;
        i = close;
      } else {
        blk.sensitivity = Sensitivity::Combinational;  // @*
        ++i;
      }
    }
    if (head == "always_comb" || head == "always_latch") blk.sensitivity = Sensitivity::Combinational;
    else if (!has_list) blk.sensitivity = Sensitivity::Unknown;

    std::vector<std::size_t> top_level;
    StmtInfo body;
    std::set<std::string> unconditional;
    if (text(i) == "begin") {
      std::size_t k = i + 1;
      if (text(k) == ":" && is_name(k + 1)) k += 2;
      while (!at_end(k) && !closes(k)) {
        StmtInfo child;
        const auto next = statement(k, blk, child);
        if (blk.sensitivity == Sensitivity::Combinational) {
          if (child.is_if && !child.if_complete) {
            for (const auto& sig : child.assigned)
              if (!unconditional.contains(sig)) blk.has_incomplete_conditional = true;
          } else if (!child.is_if) {
            unconditional.insert(child.assigned.begin(), child.assigned.end());
          }
        }
        body.assigned.insert(child.assigned.begin(), child.assigned.end());
        k = next > k ? next : k + 1;
      }
      if (text(k) == "end") ++k;
      if (text(k) == ":" && is_name(k + 1)) k += 2;
      i = k;
    } else {
      i = statement(i, blk, body);
      if (blk.sensitivity == Sensitivity::Combinational && body.is_if && !body.if_complete &&
          !body.assigned.empty())
        blk.has_incomplete_conditional = true;
    }
    blk.assigned_signals = std::move(body.assigned);
    return i;
  }

 private:
  const std::vector<Token>& t_;
};

}  // namespace

StructuralFacts extract_facts(std::string_view source) {
  StructuralFacts facts;
  std::vector<Token> code;
  for (auto& tok : tokenize(source))
    if (tok.kind != TokenKind::Comment) code.push_back(std::move(tok));
  facts.token_count = code.size();

  for (std::size_t i = 0; i < code.size(); ++i) {
    const auto& tok = code[i];
    if (tok.kind != TokenKind::Keyword) continue;
    const auto& s = tok.text;
    if (s == "begin") ++facts.begin_count;
    else if (s == "end") ++facts.end_count;
    else if (s == "endmodule") facts.has_endmodule = true;
    else if (s == "if") ++facts.if_count;
    else if (is_case(s)) {
      ++facts.case_count;
      int nesting = 0;
      bool has_default = false;
      for (std::size_t k = i + 1; k < code.size(); ++k) {
        if (code[k].kind != TokenKind::Keyword) continue;
        const auto& w = code[k].text;
        if (is_case(w)) ++nesting;
        else if (w == "endcase") {
          if (nesting-- == 0) break;
        } else if (w == "default" && nesting == 0) has_default = true;
        else if (w == "endmodule") break;
      }
      if (!has_default) ++facts.case_without_default;
    }
  }
  facts.begin_end_balanced = facts.begin_count == facts.end_count;

  Walker walk(code);
  bool first_module = true;
  std::size_t i = 0;
  while (i < code.size()) {
    if (!(code[i].kind == TokenKind::Keyword && (code[i].text == "module" || code[i].text == "macromodule"))) {
      ++i;
      continue;
    }
    facts.has_module_decl = true;
    ++i;
    std::string name;
    if (walk.is_name(i)) name = code[i++].text;
    if (first_module) facts.module_name = name;

    // Header: optional #(...) parameters, then the port list.
    if (walk.text(i) == "#" && walk.text(i + 1) == "(") i = walk.skip_group(i + 1);
    std::size_t ports = 0;
    std::vector<std::string> undirected;
    if (walk.text(i) == "(") {
      const auto close = walk.skip_group(i);
      std::size_t seg_begin = i + 1;
      bool have_direction = false;
      int depth = 0;
      for (std::size_t k = i + 1; k < close; ++k) {
        const auto& w = code[k].text;
        const bool last = k + 1 == close;
        if (code[k].kind == TokenKind::Operator) {
          if (w == "(" || w == "[" || w == "{") ++depth;
          else if ((w == ")" || w == "]" || w == "}") && !last) --depth;
        }
        if (!((w == "," && depth == 0) || last)) continue;
        std::string port;
        bool seg_dir = false;
        int sq = 0;
        for (std::size_t m = seg_begin; m < k; ++m) {
          if (code[m].text == "[") ++sq;
          else if (code[m].text == "]") --sq;
          else if (is_direction(code[m].text)) seg_dir = true;
          else if (sq == 0 && code[m].kind == TokenKind::Identifier) port = code[m].text;
        }
        if (!port.empty()) {
          ++ports;
          have_direction = have_direction || seg_dir;
          if (!have_direction) undirected.push_back(port);
        }
        seg_begin = k + 1;
      }
      i = close;
    }

    std::map<std::string, std::size_t> driven;
    std::set<std::string> declared;
    while (i < code.size() && !(code[i].kind == TokenKind::Keyword && code[i].text == "endmodule")) {
      const auto& tok = code[i];
      if (tok.kind == TokenKind::Keyword && (tok.text == "module" || tok.text == "macromodule")) break;
      if (tok.kind != TokenKind::Keyword) {
        ++i;
        continue;
      }
      const auto& s = tok.text;
      if (s.starts_with("always")) {
        AlwaysBlockFacts blk;
        const auto next = walk.always_block(i, blk);
        for (const auto& sig : blk.assigned_signals) ++driven[sig];
        facts.always_blocks.push_back(std::move(blk));
        i = next > i ? next : i + 1;
      } else if (s == "assign") {
        ++facts.assign_count;
        AlwaysBlockFacts scratch;
        Walker::StmtInfo info;
        const auto next = walk.statement(i + 1, scratch, info);
        for (const auto& sig : info.assigned) ++driven[sig];
        i = next > i ? next : i + 1;
      } else if (s == "initial") {
        AlwaysBlockFacts scratch;
        Walker::StmtInfo info;
        const auto next = walk.statement(i + 1, scratch, info);
        i = next > i ? next : i + 1;
      } else if (s == "function" || s == "task") {
        const std::string closer = "end" + s;
        while (i < code.size() && code[i].text != closer && code[i].text != "endmodule") ++i;
        if (i < code.size() && code[i].text == closer) ++i;
      } else if (is_direction(s)) {
        int sq = 0;
        for (++i; i < code.size() && code[i].text != ";"; ++i) {
          if (code[i].text == "[") ++sq;
          else if (code[i].text == "]") --sq;
          else if (sq == 0 && code[i].kind == TokenKind::Identifier) declared.insert(code[i].text);
          if (code[i].kind == TokenKind::Keyword && code[i].text == "endmodule") break;
        }
      } else {
        ++i;
      }
    }
    if (i < code.size() && code[i].text == "endmodule") ++i;

    for (const auto& port : undirected)
      if (!declared.contains(port)) ++facts.ports_missing_direction;
    if (first_module) facts.port_count = ports;
    for (const auto& [sig, count] : driven) {
      auto& slot = facts.driven_signals[sig];
      slot = std::max(slot, count);
    }
    first_module = false;
  }

  bool any_edge = false;
  bool all_reset = true;
  for (const auto& blk : facts.always_blocks) {
    if (blk.sensitivity != Sensitivity::EdgeTriggered) continue;
    any_edge = true;
    all_reset = all_reset && blk.references_reset;
  }
  facts.has_reset_in_sequential = any_edge && all_reset;
  return facts;
}

nlohmann::json to_json(const StructuralFacts& facts) {
  using nlohmann::json;
  json blocks = json::array();
  for (const auto& b : facts.always_blocks) {
    blocks.push_back({{"sensitivity", to_string(b.sensitivity)},
                      {"uses_blocking", b.uses_blocking},
                      {"uses_nonblocking", b.uses_nonblocking},
                      {"has_incomplete_conditional", b.has_incomplete_conditional},
                      {"references_reset", b.references_reset},
                      {"assigned_signals", b.assigned_signals},
                      {"read_signals", b.read_signals}});
  }
  return {{"has_module_decl", facts.has_module_decl},
          {"has_endmodule", facts.has_endmodule},
          {"module_name", facts.module_name ? json(*facts.module_name) : json(nullptr)},
          {"port_count", facts.port_count},
          {"ports_missing_direction", facts.ports_missing_direction},
          {"always_blocks", blocks},
          {"assign_count", facts.assign_count},
          {"case_count", facts.case_count},
          {"case_without_default", facts.case_without_default},
          {"if_count", facts.if_count},
          {"begin_count", facts.begin_count},
          {"end_count", facts.end_count},
          {"begin_end_balanced", facts.begin_end_balanced},
          {"driven_signals", facts.driven_signals},
          {"has_reset_in_sequential", facts.has_reset_in_sequential},
          {"token_count", facts.token_count}};
}

}  // namespace verimoa::verilog
