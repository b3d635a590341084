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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "verimoa/problem.hpp"
#include "verimoa/simulator.hpp"
#include "verimoa/verilog.hpp"

namespace verimoa {

// Rule identifiers used in score breakdowns and as keys of
// ScoreConstants::rule_weights.
namespace rules {
inline constexpr std::string_view kMultiDriven = "severe.multi_driven";
inline constexpr std::string_view kCombFeedback = "severe.comb_feedback";
inline constexpr std::string_view kBlockingInSequential = "moderate.blocking_in_sequential";
inline constexpr std::string_view kNonblockingInCombinational = "moderate.nonblocking_in_combinational";
inline constexpr std::string_view kCaseWithoutDefault = "moderate.case_without_default";
inline constexpr std::string_view kMissingReset = "moderate.missing_reset";
inline constexpr std::string_view kLatchInference = "moderate.latch_inference";
inline constexpr std::string_view kUnbalancedBeginEnd = "minor.unbalanced_begin_end";
inline constexpr std::string_view kExcessiveLength = "minor.excessive_length";
inline constexpr std::string_view kMissingPortDirection = "minor.missing_port_direction";
}  // namespace rules

enum class Severity { Severe, Moderate, Minor };

struct RuleInfo {
  std::string_view id;
  Severity severity;
  double default_weight;
};

// Every penalty rule, in breakdown order.
const std::vector<RuleInfo>& penalty_rules();

struct ScoreConstants {
  double q_perfect = 1.0;
  double q_base = 0.8;
  double cap_severe = 0.30;
  double cap_moderate = 0.15;
  double cap_minor = 0.05;
  double cap_structure = 0.15;
  double cap_logic = 0.10;
  double cap_format = 0.05;
  // Multiplier on the syntax-fail credit sum, strictly below the
  // functional-fail floor when < 1.
  double fallback_scale = 0.999;
  // Code-token count above which the excessive-length rule fires.
  std::size_t long_source_tokens = 5000;
  std::map<std::string, double> rule_weights;

  double weight(std::string_view rule_id) const;
  double syntax_fail_ceiling() const {
    return fallback_scale * (cap_structure + cap_logic + cap_format);
  }
  double functional_fail_floor() const { return q_base - cap_severe - cap_moderate - cap_minor; }

  bool operator==(const ScoreConstants&) const = default;
};

// Throws InvariantViolation when the branch-ordering invariants fail.
void validate(const ScoreConstants& constants);

enum class ScoreBranch { Perfect, FunctionalFail, SyntaxFail };

std::string_view to_string(ScoreBranch branch);
std::optional<ScoreBranch> parse_branch(std::string_view text);

struct QualityScore {
  double value = 0.0;
  ScoreBranch branch = ScoreBranch::SyntaxFail;
  // (rule id, signed contribution) relative to the branch base.
  std::vector<std::pair<std::string, double>> breakdown;
  bool syntax_pass = false;
  bool functional_pass = false;

  // q_perfect, q_base or 0 depending on the branch.
  static double branch_base(ScoreBranch branch, const ScoreConstants& constants);
};

nlohmann::json to_json(const QualityScore& score);
QualityScore quality_score_from_json(const nlohmann::json& doc);

struct Penalties {
  double severe = 0;
  double moderate = 0;
  double minor = 0;
  std::vector<std::pair<std::string, double>> fired;  // uncapped rule weights
};

struct Credits {
  double structure = 0;
  double logic = 0;
  double format = 0;
  std::vector<std::pair<std::string, double>> awarded;
};

// Rule-table penalties for syntax-valid but functionally failing code.
// Each component is min(sum of fired weights, cap).
Penalties severity_penalties(const verilog::StructuralFacts& facts, const ScoreConstants& constants);

// Structural credits for code that fails the syntax gate.
Credits fallback_credits(const verilog::StructuralFacts& facts, const ScoreConstants& constants);

// The branch selection of the hierarchical evaluator as a pure function of
// the gate verdicts.
QualityScore score_from_verdicts(const verilog::StructuralFacts& facts, bool syntax_pass,
                                 bool functional_pass, const ScoreConstants& constants);

struct Evaluation {
  QualityScore score;
  SimVerdict syntax;
  std::optional<SimVerdict> functional;

  // Log of the first failing gate, for refinement prompts.
  const std::string& failure_log() const;
};

struct EvaluateOptions {
  // When false the functional gate is skipped and counts as failed.
  bool functional_gate = true;
};

// Syntax gate, then (if it passed) the functional gate, then scoring.
// SimulatorUnavailable propagates; timeouts count as gate failures.
Evaluation evaluate(std::string_view candidate_source, const DesignProblem& problem, Simulator& sim,
                    const ScoreConstants& constants, const EvaluateOptions& options = {});

}  // namespace verimoa
