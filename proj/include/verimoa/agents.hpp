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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "verimoa/cache.hpp"
#include "verimoa/config.hpp"
#include "verimoa/llm.hpp"
#include "verimoa/problem.hpp"
#include "verimoa/quality.hpp"
#include "verimoa/simulator.hpp"
#include "verimoa/templates.hpp"

namespace verimoa {

struct AgentSpec {
  AgentPath path = AgentPath::Base;
  int slot = 1;
};

// One backend call as seen by the trace.
struct GenerationRecord {
  CandidateId id;
  std::string stage;  // direct, stage1, stage1_refine, stage2, sim_refine, aggregate
  std::string request_tag;
  std::string prompt;
  std::string response;
};

// Per-agent log; agents write only to their own.
struct AgentLog {
  std::vector<GenerationRecord> generations;
  std::vector<std::string> warnings;
};

struct AgentContext {
  const DesignProblem& problem;
  const RunConfig& config;
  const prompts::PromptLibrary& prompts;
  Backend& backend;
  int trial = 0;
  std::uint64_t seed = 0;
  AgentLog& log;
};

// `{problem}/t{trial}/L{layer}/S{slot}/{path}/{stage}/r{round}`; the
// aggregator uses `{problem}/t{trial}/agg/{stage}/r{round}`.
std::string request_tag(const AgentContext& ctx, const CandidateId& id, std::string_view stage);

// Stage-1 syntax check for intermediate code.
class IntermediateChecker {
 public:
  IntermediateChecker() = default;
  IntermediateChecker(IntermediateLanguage language, std::string check_cmd, int max_rounds,
                      std::int64_t timeout_ms = 10000);

  struct Outcome {
    bool passed = false;
    // The checker itself could not run (missing binary, timeout).
    bool process_failed = false;
    std::string log;
  };

  Outcome check(std::string_view source) const;

  IntermediateLanguage language() const { return language_; }
  int max_rounds() const { return max_rounds_; }
  bool enabled() const { return !check_cmd_.empty() && max_rounds_ > 0; }

 private:
  IntermediateLanguage language_ = IntermediateLanguage::Cpp;
  std::string check_cmd_;
  int max_rounds_ = 0;
  std::int64_t timeout_ms_ = 10000;
};

struct HdlDraft {
  CandidateId id;
  std::string source;
};

struct IntermediateDraft {
  CandidateId id;
  IntermediateLanguage language = IntermediateLanguage::Cpp;
  std::string source;
  int refine_rounds_used = 0;
};

// Direct HDL generation. At layer 1 `hdl_refs` is empty and the prompt is
// the description alone.
HdlDraft run_base_agent(const AgentSpec& agent, int layer, std::span<const HdlCacheEntry> hdl_refs,
                        AgentContext& ctx);

struct TwoStageDraft {
  IntermediateDraft intermediate;
  HdlDraft hdl;
};

// Specification -> intermediate code (checked and self-refined) -> HDL.
TwoStageDraft run_twostage_agent(const AgentSpec& agent, int layer, std::span<const HdlCacheEntry> hdl_refs,
                                 std::span<const IntermediateCacheEntry> int_refs,
                                 const IntermediateChecker& checker, AgentContext& ctx);

// The intermediate inherits the score of the HDL translated from it.
IntermediateCacheEntry assign_intermediate_score(IntermediateDraft draft, const QualityScore& hdl_score);

struct RefinementRound {
  CandidateId id;
  std::string source;
  Evaluation evaluation;
};

// Evaluates the draft, then while it is not Perfect and rounds remain,
// feeds the failing log back through the sim_refine template. Every round
// is returned. Backend errors stop refinement early; simulator errors
// propagate.
std::vector<RefinementRound> sim_refine(HdlDraft draft, AgentPath templates_of, Simulator& sim, int max_rounds,
                                        AgentContext& ctx);

// Highest-scoring round; ties go to the later round.
const RefinementRound& best_round(std::span<const RefinementRound> rounds);

struct AggregatorOutcome {
  std::string final_source;
  bool fallback = false;
  std::optional<std::string> fallback_reason;
  std::vector<RefinementRound> rounds;  // empty unless simulator refinement ran
};

// One call over the top-n references. On backend failure the best cached
// candidate is returned instead. Throws PipelineFailure when `refs` is
// empty.
AggregatorOutcome run_aggregator(std::span<const HdlCacheEntry> refs, Simulator* refine_sim, AgentContext& ctx);

}  // namespace verimoa
