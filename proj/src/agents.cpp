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

#include "verimoa/agents.hpp"

#include <filesystem>
#include <cstdlib>

#include "verimoa/error.hpp"
#include "verimoa/subprocess.hpp"
#include "verimoa/util.hpp"

namespace verimoa {

namespace fs = std::filesystem;

namespace {

std::uint64_t fnv1a(std::string_view text, std::uint64_t h) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string language_name(IntermediateLanguage lang) { return lang == IntermediateLanguage::Cpp ? "C++" : "Python"; }
std::string fence_of(IntermediateLanguage lang) { return lang == IntermediateLanguage::Cpp ? "cpp" : "python"; }

IntermediateLanguage language_of(AgentPath path) {
  if (path == AgentPath::Cpp) return IntermediateLanguage::Cpp;
  if (path == AgentPath::Py) return IntermediateLanguage::Python;
  fail(ErrorCode::InvariantViolation, "path has no intermediate language: " + std::string(to_string(path)));
}

std::string call(AgentContext& ctx, const CandidateId& id, std::string_view stage, AgentPath templates_of,
                 std::string prompt) {
  GenerationRequest req;
  req.system_prompt = ctx.prompts.get(templates_of, prompts::kSystem);
  req.user_prompt = std::move(prompt);
  req.temperature = ctx.config.sampling.temperature;
  req.top_p = ctx.config.sampling.top_p;
  req.max_tokens = ctx.config.max_tokens;
  req.request_tag = request_tag(ctx, id, stage);
  req.seed = fnv1a(req.request_tag, 0xcbf29ce484222325ULL ^ ctx.seed);
  auto resp = ctx.backend.generate(req);
  ctx.log.generations.push_back({id, std::string(stage), req.request_tag, req.user_prompt, resp.text});
  return resp.text;
}

}  // namespace

std::string request_tag(const AgentContext& ctx, const CandidateId& id, std::string_view stage) {
  std::string tag = ctx.problem.id + "/t" + std::to_string(ctx.trial) + "/";
  if (id.path == AgentPath::Aggregator)
    tag += "agg/";
  else
    tag += "L" + std::to_string(id.layer) + "/S" + std::to_string(id.slot) + "/" + std::string(to_string(id.path)) + "/";
  tag += std::string(stage) + "/r" + std::to_string(id.refine_round);
  return tag;
}

IntermediateChecker::IntermediateChecker(IntermediateLanguage language, std::string check_cmd, int max_rounds,
                                         std::int64_t timeout_ms)
    : language_(language), check_cmd_(std::move(check_cmd)), max_rounds_(max_rounds), timeout_ms_(timeout_ms) {}

IntermediateChecker::Outcome IntermediateChecker::check(std::string_view source) const {
  Outcome out;
  std::string tmpl = (fs::temp_directory_path() / "verimoa-check-XXXXXX").string();
  if (!::mkdtemp(tmpl.data())) {
    out.process_failed = true;
    out.log = "cannot create checker workspace";
    return out;
  }
  const fs::path dir = tmpl;
  const auto file = dir / (language_ == IntermediateLanguage::Cpp ? "model.cpp" : "model.py");
  try {
    write_file_atomic(file, source);
    CommandOptions opts;
    opts.working_dir = dir;
    opts.timeout = std::chrono::milliseconds(timeout_ms_);
    auto res = run_command(replace_all(check_cmd_, "{source}", shell_quote(file.string())), opts);
    out.log = truncate_log(res.output);
    if (res.not_found || res.timed_out) {
      out.process_failed = true;
      if (res.timed_out) out.log = "checker timed out after " + std::to_string(timeout_ms_) + " ms";
    } else {
      out.passed = res.exit_code == 0;
    }
  } catch (const Error& e) {
    out.process_failed = true;
    out.log = e.what();
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return out;
}

HdlDraft run_base_agent(const AgentSpec& agent, int layer, std::span<const HdlCacheEntry> hdl_refs,
                        AgentContext& ctx) {
  const CandidateId id{layer, agent.slot, AgentPath::Base, 0};
  auto prompt = prompts::render(ctx.prompts.get(AgentPath::Base, prompts::kDirect),
                                {{"description", ctx.problem.description},
                                 {"references", prompts::format_hdl_references(hdl_refs)}});
  auto text = call(ctx, id, "direct", AgentPath::Base, std::move(prompt));
  return {id, extract_code_block(text, "verilog")};
}

TwoStageDraft run_twostage_agent(const AgentSpec& agent, int layer, std::span<const HdlCacheEntry> hdl_refs,
                                 std::span<const IntermediateCacheEntry> int_refs,
                                 const IntermediateChecker& checker, AgentContext& ctx) {
  const auto lang = language_of(agent.path);
  const auto fence = fence_of(lang);
  const CandidateId id{layer, agent.slot, agent.path, 0};

  auto prompt = prompts::render(ctx.prompts.get(agent.path, prompts::kStage1),
                                {{"description", ctx.problem.description},
                                 {"references", prompts::format_intermediate_references(int_refs)},
                                 {"language", language_name(lang)}});
  auto code = extract_code_block(call(ctx, id, "stage1", agent.path, std::move(prompt)), fence);

  int used = 0;
  if (checker.enabled()) {
    for (int round = 1; round <= checker.max_rounds(); ++round) {
      const auto outcome = checker.check(code);
      if (outcome.process_failed) {
        ctx.log.warnings.push_back("stage-1 checker unavailable for " + to_string(id) + ": " + outcome.log);
        break;
      }
      if (outcome.passed) break;
      CandidateId rid = id;
      rid.refine_round = round;
      auto fix = prompts::render(ctx.prompts.get(agent.path, prompts::kStage1Refine),
                                 {{"description", ctx.problem.description},
                                  {"intermediate", code},
                                  {"feedback", tail_bytes(outcome.log, kLogTailBytes)},
                                  {"language", language_name(lang)}});
      code = extract_code_block(call(ctx, rid, "stage1_refine", agent.path, std::move(fix)), fence);
      ++used;
    }
  }

  auto translate = prompts::render(ctx.prompts.get(agent.path, prompts::kStage2),
                                   {{"description", ctx.problem.description},
                                    {"intermediate", code},
                                    {"references", prompts::format_hdl_references(hdl_refs)},
                                    {"language", language_name(lang)}});
  auto hdl = extract_code_block(call(ctx, id, "stage2", agent.path, std::move(translate)), "verilog");
  return {{id, lang, std::move(code), used}, {id, std::move(hdl)}};
}

IntermediateCacheEntry assign_intermediate_score(IntermediateDraft draft, const QualityScore& hdl_score) {
  return {draft.id, draft.language, std::move(draft.source), hdl_score.value};
}

std::vector<RefinementRound> sim_refine(HdlDraft draft, AgentPath templates_of, Simulator& sim, int max_rounds,
                                        AgentContext& ctx) {
  const EvaluateOptions opts{ctx.config.in_loop_functional_test};
  std::vector<RefinementRound> rounds;
  auto eval = evaluate(draft.source, ctx.problem, sim, ctx.config.score_constants, opts);
  rounds.push_back({draft.id, std::move(draft.source), std::move(eval)});
  for (int r = 1; r <= max_rounds; ++r) {
    const auto& last = rounds.back();
    if (last.evaluation.score.branch == ScoreBranch::Perfect) break;
    CandidateId id = last.id;
    id.refine_round = r;
    auto prompt = prompts::render(ctx.prompts.get(templates_of, prompts::kSimRefine),
                                  {{"description", ctx.problem.description},
                                   {"candidate", last.source},
                                   {"feedback", tail_bytes(last.evaluation.failure_log(), kLogTailBytes)}});
    std::string text;
    try {
      text = call(ctx, id, "sim_refine", templates_of, std::move(prompt));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BackendExhausted && e.code() != ErrorCode::TranscriptMiss) throw;
      ctx.log.warnings.push_back("refinement of " + to_string(last.id) + " stopped: " + e.what());
      break;
    }
    auto source = extract_code_block(text, "verilog");
    auto next = evaluate(source, ctx.problem, sim, ctx.config.score_constants, opts);
    rounds.push_back({id, std::move(source), std::move(next)});
  }
  return rounds;
}

const RefinementRound& best_round(std::span<const RefinementRound> rounds) {
  if (rounds.empty()) fail(ErrorCode::InvariantViolation, "no refinement rounds");
  const RefinementRound* best = &rounds.front();
  for (const auto& r : rounds)
    if (r.evaluation.score.value >= best->evaluation.score.value) best = &r;
  return *best;
}

AggregatorOutcome run_aggregator(std::span<const HdlCacheEntry> refs, Simulator* refine_sim, AgentContext& ctx) {
  if (refs.empty()) fail(ErrorCode::PipelineFailure, "no cached candidates for " + ctx.problem.id);
  const CandidateId id{ctx.config.proposer_layers + 1, 1, AgentPath::Aggregator, 0};
  AggregatorOutcome out;
  auto prompt = prompts::render(ctx.prompts.get(AgentPath::Aggregator, prompts::kAggregate),
                                {{"description", ctx.problem.description},
                                 {"references", prompts::format_hdl_references(refs)}});
  std::string text;
  try {
    text = call(ctx, id, "aggregate", AgentPath::Aggregator, std::move(prompt));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SimulatorUnavailable) throw;
    out.final_source = refs.front().source;
    out.fallback = true;
    out.fallback_reason = std::string(to_string(e.code())) + ": " + e.what();
    return out;
  }
  out.final_source = extract_code_block(text, "verilog");
  if (refine_sim && ctx.config.enable_sim_refinement) {
    out.rounds = sim_refine({id, out.final_source}, AgentPath::Aggregator, *refine_sim,
                            ctx.config.max_sim_refine_rounds, ctx);
    out.final_source = best_round(out.rounds).source;
  }
  return out;
}

}  // namespace verimoa
