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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "verimoa/agents.hpp"
#include "verimoa/cache.hpp"
#include "verimoa/config.hpp"
#include "verimoa/llm.hpp"
#include "verimoa/problem.hpp"
#include "verimoa/simulator.hpp"
#include "verimoa/templates.hpp"
#include "verimoa/trace.hpp"

namespace verimoa {

struct LayerStats {
  int layer = 1;
  double min_top_n = 0;
  double mean_top_n = 0;
  double vendi_top_n = 0;
  std::vector<double> ranked_scores;
};

struct TrialResult {
  std::string problem_id;
  int trial_index = 0;
  std::uint64_t seed = 0;
  std::string final_source;
  bool syntax_pass = false;
  bool functional_pass = false;
  std::optional<ScoreBranch> final_branch;
  // One entry per proposer layer; null while the cache is still empty.
  std::vector<std::optional<LayerStats>> per_layer_stats;
  std::size_t candidate_count = 0;
  bool aggregator_fallback = false;
  bool pipeline_failure = false;
  // Set when the trial aborted; the trial counts as not passing.
  std::optional<std::string> error;
  std::int64_t wall_ms = 0;
};

nlohmann::json to_json(const TrialResult& result, bool with_timing = true);

// Everything a trial talks to. Backend and simulator must tolerate
// concurrent calls.
struct TrialEnv {
  Backend& backend;
  Simulator& sim;
  const prompts::PromptLibrary& prompts;
  IntermediateChecker cpp_checker;
  IntermediateChecker py_checker;
};

// Checkers as configured (disabled when the config has none).
IntermediateChecker make_checker(const RunConfig& config, IntermediateLanguage lang);

// One full pipeline run: proposer layers with barriers, then the
// aggregator and the final golden test. A trial whose cache is empty at
// aggregation is returned with pipeline_failure set.
TrialResult run_trial(const DesignProblem& problem, const RunConfig& config, TrialEnv& env, int trial_index,
                      std::uint64_t seed, TraceWriter* trace = nullptr);

struct RunOptions {
  std::filesystem::path out_dir;
  int jobs = 4;
  std::string run_id;
  // Checked before each trial starts; trials already running finish.
  const std::atomic<bool>* stop = nullptr;
  // Merged into manifest.json.
  nlohmann::json manifest_extra = nlohmann::json::object();
  std::function<void(const TrialResult&)> on_trial_done;
};

// Trials x problems. Writes <out>/manifest.json and
// <out>/<problem>/<trial>/{trace.jsonl,result.json}. Results come back in
// (problem, trial) order; trials skipped by a stop request are absent.
std::vector<TrialResult> run_benchmark(const Benchmark& benchmark, const RunConfig& config, TrialEnv& env,
                                       const RunOptions& options);

}  // namespace verimoa
