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

#include "verimoa/quality.hpp"

#include <algorithm>

#include "verimoa/error.hpp"

namespace verimoa {

using verilog::Sensitivity;
using verilog::StructuralFacts;

const std::vector<RuleInfo>& penalty_rules() {
  static const std::vector<RuleInfo> kRules = {
      {rules::kMultiDriven, Severity::Severe, 0.15},
      {rules::kCombFeedback, Severity::Severe, 0.15},
      {rules::kBlockingInSequential, Severity::Moderate, 0.05},
      {rules::kNonblockingInCombinational, Severity::Moderate, 0.05},
      {rules::kCaseWithoutDefault, Severity::Moderate, 0.05},
      {rules::kMissingReset, Severity::Moderate, 0.05},
      {rules::kLatchInference, Severity::Moderate, 0.05},
      {rules::kUnbalancedBeginEnd, Severity::Minor, 0.02},
      {rules::kExcessiveLength, Severity::Minor, 0.02},
      {rules::kMissingPortDirection, Severity::Minor, 0.02},
  };
  return kRules;
}

double ScoreConstants::weight(std::string_view rule_id) const {
  if (auto it = rule_weights.find(std::string(rule_id)); it != rule_weights.end()) return it->second;
  for (const auto& r : penalty_rules())
    if (r.id == rule_id) return r.default_weight;
  return 0.0;
}

void validate(const ScoreConstants& c) {
  auto bad = [](const std::string& why) { fail(ErrorCode::InvariantViolation, "score_constants: " + why); };
  for (double v : {c.q_perfect, c.q_base, c.cap_severe, c.cap_moderate, c.cap_minor, c.cap_structure,
                   c.cap_logic, c.cap_format})
    if (!(v >= 0)) bad("constants and caps must be >= 0");
  for (const auto& [id, w] : c.rule_weights) {
    if (!(w >= 0)) bad("rule weight '" + id + "' must be >= 0");
    const bool known = std::any_of(penalty_rules().begin(), penalty_rules().end(),
                                   [&](const RuleInfo& r) { return r.id == id; });
    if (!known) bad("unknown rule id '" + id + "'");
  }
  if (!(c.fallback_scale > 0 && c.fallback_scale <= 1)) bad("fallback_scale must be in (0, 1]");
  const double beta = c.cap_structure + c.cap_logic + c.cap_format;
  if (!(c.q_perfect > c.q_base)) bad("q_perfect must exceed q_base");
  if (!(c.q_base > beta)) bad("q_base must exceed cap_structure + cap_logic + cap_format");
  if (!(c.functional_fail_floor() >= beta))
    bad("q_base - cap_severe - cap_moderate - cap_minor must be >= cap_structure + cap_logic + cap_format");
}

std::string_view to_string(ScoreBranch branch) {
  switch (branch) {
    case ScoreBranch::Perfect: return "Perfect";
    case ScoreBranch::FunctionalFail: return "FunctionalFail";
    case ScoreBranch::SyntaxFail: return "SyntaxFail";
  }
  return "SyntaxFail";
}

std::optional<ScoreBranch> parse_branch(std::string_view text) {
  if (text == "Perfect") return ScoreBranch::Perfect;
  if (text == "FunctionalFail") return ScoreBranch::FunctionalFail;
  if (text == "SyntaxFail") return ScoreBranch::SyntaxFail;
  return std::nullopt;
}

double QualityScore::branch_base(ScoreBranch branch, const ScoreConstants& c) {
  switch (branch) {
    case ScoreBranch::Perfect: return c.q_perfect;
    case ScoreBranch::FunctionalFail: return c.q_base;
    case ScoreBranch::SyntaxFail: return 0.0;
  }
  return 0.0;
}

nlohmann::json to_json(const QualityScore& s) {
  nlohmann::json breakdown = nlohmann::json::array();
  for (const auto& [id, v] : s.breakdown) breakdown.push_back({{"rule", id}, {"contribution", v}});
  return {{"value", s.value},
          {"branch", to_string(s.branch)},
          {"breakdown", breakdown},
          {"syntax_pass", s.syntax_pass},
          {"functional_pass", s.functional_pass}};
}

QualityScore quality_score_from_json(const nlohmann::json& doc) {
  QualityScore s;
  s.value = doc.at("value").get<double>();
  const auto branch = parse_branch(doc.at("branch").get<std::string>());
  if (!branch) throw std::invalid_argument("unknown branch");
  s.branch = *branch;
  for (const auto& e : doc.at("breakdown"))
    s.breakdown.emplace_back(e.at("rule").get<std::string>(), e.at("contribution").get<double>());
  s.syntax_pass = doc.at("syntax_pass").get<bool>();
  s.functional_pass = doc.at("functional_pass").get<bool>();
  return s;
}

namespace {

bool fires(std::string_view id, const StructuralFacts& f, const ScoreConstants& c) {
  auto any_block = [&](auto pred) { return std::any_of(f.always_blocks.begin(), f.always_blocks.end(), pred); };
  if (id == rules::kMultiDriven)
    return std::any_of(f.driven_signals.begin(), f.driven_signals.end(),
                       [](const auto& kv) { return kv.second >= 2; });
  if (id == rules::kCombFeedback)
    return any_block([](const verilog::AlwaysBlockFacts& b) {
      if (b.sensitivity != Sensitivity::Combinational) return false;
      return std::any_of(b.assigned_signals.begin(), b.assigned_signals.end(),
                         [&](const std::string& s) { return b.read_signals.contains(s); });
    });
  if (id == rules::kBlockingInSequential)
    return any_block([](const auto& b) { return b.sensitivity == Sensitivity::EdgeTriggered && b.uses_blocking; });
  if (id == rules::kNonblockingInCombinational)
    return any_block(
        [](const auto& b) { return b.sensitivity == Sensitivity::Combinational && b.uses_nonblocking; });
  if (id == rules::kCaseWithoutDefault) return f.case_without_default > 0;
  if (id == rules::kMissingReset)
    return any_block([](const auto& b) { return b.sensitivity == Sensitivity::EdgeTriggered; }) &&
           !f.has_reset_in_sequential;
  if (id == rules::kLatchInference)
    return any_block(
        [](const auto& b) { return b.sensitivity == Sensitivity::Combinational && b.has_incomplete_conditional; });
  if (id == rules::kUnbalancedBeginEnd) return !f.begin_end_balanced;
  if (id == rules::kExcessiveLength) return f.token_count > c.long_source_tokens;
  if (id == rules::kMissingPortDirection) return f.ports_missing_direction > 0;
  return false;
}

}  // namespace

Penalties severity_penalties(const StructuralFacts& facts, const ScoreConstants& c) {
  Penalties p;
  for (const auto& rule : penalty_rules()) {
    if (!fires(rule.id, facts, c)) continue;
    const double w = c.weight(rule.id);
    p.fired.emplace_back(std::string(rule.id), w);
    switch (rule.severity) {
      case Severity::Severe: p.severe += w; break;
      case Severity::Moderate: p.moderate += w; break;
      case Severity::Minor: p.minor += w; break;
    }
  }
  p.severe = std::min(p.severe, c.cap_severe);
  p.moderate = std::min(p.moderate, c.cap_moderate);
  p.minor = std::min(p.minor, c.cap_minor);
  return p;
}

Credits fallback_credits(const StructuralFacts& f, const ScoreConstants& c) {
  Credits cr;
  auto award = [&](double& component, const char* id, bool condition, double fraction, double cap) {
    if (!condition) return;
    const double amount = fraction * cap;
    component += amount;
    cr.awarded.emplace_back(id, amount);
  };
  const bool has_logic = !f.always_blocks.empty() || f.assign_count > 0;
  award(cr.structure, "structure.module_decl", f.has_module_decl, 0.4, c.cap_structure);
  award(cr.structure, "structure.endmodule", f.has_endmodule, 0.3, c.cap_structure);
  award(cr.structure, "structure.ports", f.port_count > 0, 0.3, c.cap_structure);
  award(cr.logic, "logic.constructs", has_logic, 0.5, c.cap_logic);
  award(cr.logic, "logic.begin_end_balanced", has_logic && f.begin_end_balanced, 0.25, c.cap_logic);
  award(cr.logic, "logic.control_flow", !f.always_blocks.empty() && (f.case_count > 0 || f.if_count > 0), 0.25,
        c.cap_logic);
  award(cr.format, "format.non_empty", f.token_count > 0, 0.5, c.cap_format);
  award(cr.format, "format.min_tokens", f.token_count >= 10, 0.5, c.cap_format);
  cr.structure = std::min(cr.structure, c.cap_structure);
  cr.logic = std::min(cr.logic, c.cap_logic);
  cr.format = std::min(cr.format, c.cap_format);
  return cr;
}

QualityScore score_from_verdicts(const StructuralFacts& facts, bool syntax_pass, bool functional_pass,
                                 const ScoreConstants& c) {
  QualityScore s;
  s.syntax_pass = syntax_pass;
  s.functional_pass = syntax_pass && functional_pass;
  if (syntax_pass && functional_pass) {
    s.branch = ScoreBranch::Perfect;
    s.value = c.q_perfect;
    return s;
  }
  if (syntax_pass) {
    s.branch = ScoreBranch::FunctionalFail;
    const auto p = severity_penalties(facts, c);
    double severe = 0, moderate = 0, minor = 0;
    for (const auto& [id, w] : p.fired) {
      s.breakdown.emplace_back(id, -w);
      if (id.starts_with("severe.")) severe += w;
      else if (id.starts_with("moderate.")) moderate += w;
      else minor += w;
    }
    if (severe > p.severe) s.breakdown.emplace_back("cap.severe", severe - p.severe);
    if (moderate > p.moderate) s.breakdown.emplace_back("cap.moderate", moderate - p.moderate);
    if (minor > p.minor) s.breakdown.emplace_back("cap.minor", minor - p.minor);
    s.value = c.q_base - p.severe - p.moderate - p.minor;
    return s;
  }
  s.branch = ScoreBranch::SyntaxFail;
  const auto cr = fallback_credits(facts, c);
  double structure = 0, logic = 0, format = 0;
  for (const auto& [id, v] : cr.awarded) {
    s.breakdown.emplace_back(id, v);
    if (id.starts_with("structure.")) structure += v;
    else if (id.starts_with("logic.")) logic += v;
    else format += v;
  }
  if (structure > cr.structure) s.breakdown.emplace_back("cap.structure", cr.structure - structure);
  if (logic > cr.logic) s.breakdown.emplace_back("cap.logic", cr.logic - logic);
  if (format > cr.format) s.breakdown.emplace_back("cap.format", cr.format - format);
  const double sum = cr.structure + cr.logic + cr.format;
  if (c.fallback_scale != 1.0 && sum > 0) s.breakdown.emplace_back("fallback.scale", (c.fallback_scale - 1.0) * sum);
  s.value = c.fallback_scale * sum;
  return s;
}

const std::string& Evaluation::failure_log() const {
  if (!syntax.passed || !functional) return syntax.log;
  return functional->log;
}

Evaluation evaluate(std::string_view source, const DesignProblem& problem, Simulator& sim,
                    const ScoreConstants& constants, const EvaluateOptions& options) {
  Evaluation ev;
  ev.syntax = sim.syntax_test(source, problem);
  bool functional_pass = false;
  if (ev.syntax.passed && options.functional_gate) {
    ev.functional = sim.function_test(source, problem);
    functional_pass = ev.functional->passed;
  }
  ev.score = score_from_verdicts(verilog::extract_facts(source), ev.syntax.passed, functional_pass, constants);
  return ev;
}

}  // namespace verimoa
