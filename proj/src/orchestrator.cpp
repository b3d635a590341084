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

#include "verimoa/orchestrator.hpp"

#include <chrono>
#include <ctime>
#include <future>
#include <mutex>
#include <thread>

#include "verimoa/error.hpp"
#include "verimoa/harness.hpp"
#include "verimoa/quality.hpp"
#include "verimoa/util.hpp"

namespace verimoa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json id_json(const CandidateId& id) {
  return {{"id", to_string(id)}, {"layer", id.layer}, {"slot", id.slot}, {"path", to_string(id.path)},
          {"round", id.refine_round}};
}

json stats_json(const std::optional<LayerStats>& s) {
  if (!s) return nullptr;
  return {{"layer", s->layer}, {"min_top_n", s->min_top_n}, {"mean_top_n", s->mean_top_n},
          {"vendi_top_n", s->vendi_top_n}, {"ranked_scores", s->ranked_scores}};
}

void emit(TraceWriter* trace, const json& record) {
  if (trace) trace->write(record);
}

void emit_log(TraceWriter* trace, const AgentLog& log, int layer, int slot) {
  for (const auto& g : log.generations) {
    auto rec = id_json(g.id);
    rec["type"] = "generation";
    rec["stage"] = g.stage;
    rec["tag"] = g.request_tag;
    rec["prompt"] = g.prompt;
    rec["response"] = g.response;
    emit(trace, rec);
  }
  for (const auto& w : log.warnings) emit(trace, {{"type", "warning"}, {"layer", layer}, {"slot", slot}, {"message", w}});
}

struct SlotOutcome {
  AgentLog log;
  std::vector<RefinementRound> rounds;
  std::optional<IntermediateDraft> intermediate;
  std::optional<std::pair<std::string, std::string>> error;  // code, message
};

SlotOutcome run_slot(const AgentSpec& agent, int layer, const std::vector<HdlCacheEntry>& hdl_refs,
                     const std::vector<IntermediateCacheEntry>& int_refs, const DesignProblem& problem,
                     const RunConfig& config, TrialEnv& env, int trial, std::uint64_t seed) {
  SlotOutcome out;
  AgentContext ctx{problem, config, env.prompts, env.backend, trial, seed, out.log};
  const int refine_rounds = config.enable_sim_refinement ? config.max_sim_refine_rounds : 0;
  try {
    HdlDraft draft;
    if (agent.path == AgentPath::Base) {
      draft = run_base_agent(agent, layer, hdl_refs, ctx);
    } else {
      const auto& checker = agent.path == AgentPath::Cpp ? env.cpp_checker : env.py_checker;
      auto two = run_twostage_agent(agent, layer, hdl_refs, int_refs, checker, ctx);
      out.intermediate = std::move(two.intermediate);
      draft = std::move(two.hdl);
    }
    out.rounds = sim_refine(std::move(draft), agent.path, env.sim, refine_rounds, ctx);
  } catch (const Error& e) {
    out.error = {std::string(to_string(e.code())), e.what()};
  } catch (const std::exception& e) {
    out.error = {"InternalError", e.what()};
  }
  if (out.rounds.empty()) out.intermediate.reset();
  return out;
}

std::optional<LayerStats> window_stats(const GlobalCache& cache, int layer, std::size_t n) {
  try {
    auto w = cache.layer_quality_stats(layer, n);
    std::vector<std::string> sources;
    for (const auto& e : cache.top_n_hdl(layer + 1, n)) sources.push_back(e.source);
    return LayerStats{layer, w.min, w.mean, vendi_score(sources), std::move(w.ranked_scores)};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EmptyWindow) throw;
    return std::nullopt;
  }
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

json to_json(const TrialResult& r, bool with_timing) {
  json stats = json::array();
  for (const auto& s : r.per_layer_stats) stats.push_back(stats_json(s));
  json doc = {{"problem_id", r.problem_id},
              {"trial_index", r.trial_index},
              {"seed", r.seed},
              {"final_source", r.final_source},
              {"final_verdicts", {{"syntax", r.syntax_pass}, {"functional", r.functional_pass}}},
              {"final_branch", r.final_branch ? json(to_string(*r.final_branch)) : json(nullptr)},
              {"per_layer_stats", stats},
              {"candidate_count", r.candidate_count},
              {"aggregator_fallback", r.aggregator_fallback},
              {"pipeline_failure", r.pipeline_failure},
              {"error", r.error ? json(*r.error) : json(nullptr)}};
  if (with_timing) doc["wall_ms"] = r.wall_ms;
  return doc;
}

IntermediateChecker make_checker(const RunConfig& config, IntermediateLanguage lang) {
  const auto& cfg = lang == IntermediateLanguage::Cpp ? config.cpp_checker : config.py_checker;
  if (!cfg) return IntermediateChecker(lang, "", 0);
  return IntermediateChecker(lang, cfg->check_cmd, config.max_stage1_refine_rounds, cfg->timeout_ms);
}

TrialResult run_trial(const DesignProblem& problem, const RunConfig& config, TrialEnv& env, int trial_index,
                      std::uint64_t seed, TraceWriter* trace) {
  const auto t0 = std::chrono::steady_clock::now();
  TrialResult result;
  result.problem_id = problem.id;
  result.trial_index = trial_index;
  result.seed = seed;
  emit(trace, {{"type", "trial_start"}, {"problem", problem.id}, {"trial", trial_index}, {"seed", seed},
               {"proposer_layers", config.proposer_layers}, {"layer_width", config.layer_width}});

  const auto n = static_cast<std::size_t>(config.top_n_hdl);
  const auto k = static_cast<std::size_t>(config.top_k_intermediate);
  GlobalCache cache;
  for (int layer = 1; layer <= config.proposer_layers; ++layer) {
    // snapshot: references come only from layers < current
    const auto hdl_refs = cache.top_n_hdl(layer, n);
    const auto cpp_refs = cache.top_k_intermediate(IntermediateLanguage::Cpp, layer, k);
    const auto py_refs = cache.top_k_intermediate(IntermediateLanguage::Python, layer, k);

    std::vector<std::future<SlotOutcome>> tasks;
    for (int j = 0; j < config.layer_width; ++j) {
      const AgentSpec agent{config.mixture[static_cast<std::size_t>(j)], j + 1};
      const auto& int_refs = agent.path == AgentPath::Py ? py_refs : cpp_refs;
      tasks.push_back(std::async(std::launch::async, [&, agent, layer] {
        return run_slot(agent, layer, hdl_refs, agent.path == AgentPath::Base ? std::vector<IntermediateCacheEntry>{}
                                                                              : int_refs,
                        problem, config, env, trial_index, seed);
      }));
    }

    // barrier
    std::vector<HdlCacheEntry> hdl_batch;
    std::vector<IntermediateCacheEntry> int_batch;
    for (int j = 0; j < config.layer_width; ++j) {
      auto out = tasks[static_cast<std::size_t>(j)].get();
      emit_log(trace, out.log, layer, j + 1);
      if (out.error)
        emit(trace, {{"type", "agent_error"}, {"layer", layer}, {"slot", j + 1},
                     {"path", to_string(config.mixture[static_cast<std::size_t>(j)])},
                     {"error_code", out.error->first}, {"message", out.error->second},
                     {"rounds_kept", out.rounds.size()}});
      if (out.intermediate)
        int_batch.push_back(assign_intermediate_score(std::move(*out.intermediate), out.rounds.front().evaluation.score));
      for (auto& r : out.rounds) hdl_batch.push_back({r.id, std::move(r.source), std::move(r.evaluation.score)});
    }
    for (const auto& e : hdl_batch) {
      auto rec = id_json(e.id);
      rec["type"] = "hdl_entry";
      rec["source"] = e.source;
      rec["score"] = to_json(e.score);
      emit(trace, rec);
    }
    for (const auto& e : int_batch) {
      auto rec = id_json(e.id);
      rec["type"] = "int_entry";
      rec["language"] = to_string(e.language);
      rec["source"] = e.source;
      rec["score"] = e.score;
      emit(trace, rec);
    }
    cache.insert_batch(std::move(hdl_batch), std::move(int_batch));

    auto stats = window_stats(cache, layer, n);
    auto rec = json{{"type", "layer_stats"}, {"layer", layer}, {"stats", stats_json(stats)}};
    emit(trace, rec);
    result.per_layer_stats.push_back(std::move(stats));
  }
  result.candidate_count = cache.size();

  AgentLog agg_log;
  AgentContext ctx{problem, config, env.prompts, env.backend, trial_index, seed, agg_log};
  const auto refs = cache.top_n_hdl(config.proposer_layers + 1, n);
  try {
    auto agg = run_aggregator(refs, &env.sim, ctx);
    emit_log(trace, agg_log, config.proposer_layers + 1, 1);
    result.aggregator_fallback = agg.fallback;
    result.final_source = std::move(agg.final_source);
    json rounds = json::array();
    for (const auto& r : agg.rounds) rounds.push_back({{"round", r.id.refine_round}, {"score", to_json(r.evaluation.score)}});
    emit(trace, {{"type", "aggregator"},
                 {"references", [&] {
                    json ids = json::array();
                    for (const auto& r : refs) ids.push_back(to_string(r.id));
                    return ids;
                  }()},
                 {"fallback", agg.fallback},
                 {"fallback_reason", agg.fallback_reason ? json(*agg.fallback_reason) : json(nullptr)},
                 {"rounds", rounds}});

    auto final_eval = evaluate(result.final_source, problem, env.sim, config.score_constants, {true});
    result.syntax_pass = final_eval.syntax.passed;
    result.functional_pass = final_eval.functional && final_eval.functional->passed;
    result.final_branch = final_eval.score.branch;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PipelineFailure) throw;
    emit_log(trace, agg_log, config.proposer_layers + 1, 1);
    result.pipeline_failure = true;
    result.error = std::string(to_string(e.code())) + ": " + e.what();
  }
  emit(trace, {{"type", "final"},
               {"source", result.final_source},
               {"syntax_pass", result.syntax_pass},
               {"functional_pass", result.functional_pass},
               {"branch", result.final_branch ? json(to_string(*result.final_branch)) : json(nullptr)},
               {"pipeline_failure", result.pipeline_failure},
               {"aggregator_fallback", result.aggregator_fallback},
               {"candidate_count", result.candidate_count}});
  result.wall_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

std::vector<TrialResult> run_benchmark(const Benchmark& benchmark, const RunConfig& config, TrialEnv& env,
                                       const RunOptions& options) {
  validate(config);
  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create " + options.out_dir.string() + ": " + ec.message());

  json seeds = json::array();
  for (int t = 0; t < config.trials; ++t) seeds.push_back(config.random_seed + static_cast<std::uint64_t>(t));
  json problems = json::array();
  for (const auto& p : benchmark.problems) problems.push_back(p.id);
  json manifest = {{"run_id", options.run_id},
                   {"created_at", utc_timestamp()},
                   {"version", VERIMOA_VERSION},
                   {"benchmark", benchmark.name},
                   {"problems", problems},
                   {"trials", config.trials},
                   {"trial_seeds", seeds},
                   {"config", to_json(config)}};
  manifest.update(options.manifest_extra);
  write_file_atomic(options.out_dir / "manifest.json", manifest.dump(2) + "\n");

  struct Job {
    std::size_t problem;
    int trial;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < benchmark.problems.size(); ++p)
    for (int t = 0; t < config.trials; ++t) jobs.push_back({p, t});

  std::vector<std::optional<TrialResult>> slots(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex done_mutex;
  std::exception_ptr io_failure;

  auto worker = [&] {
    for (;;) {
      if (options.stop && options.stop->load()) return;
      const auto i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const auto& problem = benchmark.problems[jobs[i].problem];
      const int trial = jobs[i].trial;
      const auto seed = config.random_seed + static_cast<std::uint64_t>(trial);
      const auto dir = options.out_dir / problem.id / std::to_string(trial);
      TrialResult result;
      try {
        TraceWriter trace(dir / "trace.jsonl");
        try {
          result = run_trial(problem, config, env, trial, seed, &trace);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::IoError) throw;
          result.problem_id = problem.id;
          result.trial_index = trial;
          result.seed = seed;
          result.error = std::string(to_string(e.code())) + ": " + e.what();
          trace.write({{"type", "trial_error"}, {"error_code", to_string(e.code())}, {"message", e.what()}});
        }
        write_file_atomic(dir / "result.json", to_json(result).dump(2) + "\n");
      } catch (...) {
        std::lock_guard lock(done_mutex);
        if (!io_failure) io_failure = std::current_exception();
        return;
      }
      std::lock_guard lock(done_mutex);
      if (options.on_trial_done) options.on_trial_done(result);
      slots[i] = std::move(result);
    }
  };

  const int workers = std::max(1, std::min<int>(options.jobs, static_cast<int>(jobs.size())));
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (io_failure) std::rethrow_exception(io_failure);

  std::vector<TrialResult> results;
  for (auto& s : slots)
    if (s) results.push_back(std::move(*s));
  return results;
}

}  // namespace verimoa
