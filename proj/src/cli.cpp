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

#include "verimoa/cli.hpp"

#include <unistd.h>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <iomanip>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "verimoa/error.hpp"
#include "verimoa/harness.hpp"
#include "verimoa/http_backend.hpp"
#include "verimoa/llm.hpp"
#include "verimoa/orchestrator.hpp"
#include "verimoa/problem.hpp"
#include "verimoa/quality.hpp"
#include "verimoa/report.hpp"
#include "verimoa/simulator.hpp"
#include "verimoa/subprocess.hpp"
#include "verimoa/util.hpp"
#include "verimoa/verilog.hpp"

namespace verimoa::cli {

namespace fs = std::filesystem;

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_interrupt(int) { g_stop.store(true); }

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SimulatorUnavailable:
    case ErrorCode::AuthError:
    case ErrorCode::BackendExhausted:
    case ErrorCode::WorkspaceError:
    case ErrorCode::IoError:
      return kEnvironmentError;
    case ErrorCode::PipelineFailure:
      return kPipelineFailure;
    default:
      return kUserError;
  }
}

fs::path self_exe() {
  std::error_code ec;
  auto p = fs::read_symlink("/proc/self/exe", ec);
  return ec ? fs::path() : p;
}

// Smoke design used by `simcheck`.
constexpr std::string_view kSmokeDesign =
    "module top_module(input a, input b, output y);\n"
    "  assign y = a & b;\n"
    "endmodule\n";

constexpr std::string_view kSmokeBench =
    "`timescale 1ns/1ps\n"
    "module tb;\n"
    "  reg a, b;\n"
    "  wire y;\n"
    "  integer errors = 0;\n"
    "  integer i;\n"
    "  top_module dut(.a(a), .b(b), .y(y));\n"
    "  // STUB_EXPECT: assign y = a & b;\n"
    "  initial begin\n"
    "    for (i = 0; i < 4; i = i + 1) begin\n"
    "      {a, b} = i[1:0];\n"
    "      #1;\n"
    "      if (y !== (a & b)) errors = errors + 1;\n"
    "    end\n"
    "    if (errors == 0) $display(\"ALL_TESTS_PASSED\");\n"
    "    else $display(\"FAILED %0d\", errors);\n"
    "    $finish;\n"
    "  end\n"
    "endmodule\n";

struct SimChoice {
  std::string kind = "external";
  std::string config;
  bool keep = false;
};

std::unique_ptr<ProcessSimulator> make_simulator(const std::string& kind, const RunConfig* config,
                                                 const fs::path& keep_root, bool keep) {
  SimulatorConfig sc;
  if (kind == "stub") {
    sc = stub_simulator_config(stub_binary_path());
    if (config && config->simulator) sc.timeout_ms = config->simulator->timeout_ms;
  } else if (config && config->simulator) {
    sc = *config->simulator;
  }
  if (keep) {
    sc.keep_workspaces = true;
    sc.workspace_root = keep_root;
  }
  auto sim = std::make_unique<ProcessSimulator>(sc);
  sim->check_available();
  return sim;
}

std::shared_ptr<Backend> make_backend(const std::string& spec, const RunConfig& config) {
  if (spec == "http") return HttpBackend::from_environment(config.http);
  if (spec.rfind("replay:", 0) == 0) return std::make_shared<ReplayBackend>(fs::path(spec.substr(7)));
  if (spec.rfind("scripted:", 0) == 0) return ScriptedBackend::from_file(spec.substr(9));
  fail(ErrorCode::UsageError, "--backend must be http, replay:<file> or scripted:<file>, got '" + spec + "'");
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

int cmd_run(const std::string& config_path, const std::string& bench_path, const std::string& out_path,
            const std::string& backend_spec, const std::string& sim_kind, int jobs, bool keep, std::ostream& out,
            std::ostream& err) {
  auto config = load_config(config_path);
  auto bench = load_benchmark(bench_path);
  const fs::path out_dir = out_path;
  auto prompts = config.templates_dir ? prompts::PromptLibrary::load(*config.templates_dir) : prompts::PromptLibrary();

  if (sim_kind == "stub") {
    const auto check = shell_quote(stub_binary_path().string()) + " check {source}";
    if (!config.cpp_checker) config.cpp_checker = CheckerConfig{check, 10000};
    if (!config.py_checker) config.py_checker = CheckerConfig{check, 10000};
  }
  auto sim = make_simulator(sim_kind, &config, out_dir / "workspaces", keep);

  auto inner = make_backend(backend_spec, config);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
  auto transcript = std::make_shared<Transcript>(out_dir / "transcript.jsonl");
  auto backend = std::make_shared<ThrottledBackend>(std::make_shared<RecordingBackend>(inner, transcript),
                                                    static_cast<std::size_t>(config.backend_concurrency));

  TrialEnv env{*backend, *sim, prompts, make_checker(config, IntermediateLanguage::Cpp),
               make_checker(config, IntermediateLanguage::Python)};
  RunOptions opts;
  opts.out_dir = out_dir;
  opts.jobs = jobs;
  opts.run_id = out_dir.filename().string();
  opts.stop = &g_stop;
  opts.manifest_extra = {{"backend", backend_spec}, {"sim", sim_kind}, {"jobs", jobs}};

  g_stop.store(false);
  auto previous = std::signal(SIGINT, on_interrupt);
  std::vector<TrialResult> results;
  try {
    results = run_benchmark(bench, config, env, opts);
  } catch (...) {
    std::signal(SIGINT, previous);
    throw;
  }
  std::signal(SIGINT, previous);

  const std::vector<int> ks = {1};
  auto report = write_report(out_dir, ks, false);
  for (const auto& w : report["warnings"]) err << "warning: " << w.get<std::string>() << "\n";

  std::size_t failed = 0;
  for (const auto& r : results)
    if (r.error || r.pipeline_failure) {
      ++failed;
      err << "trial " << r.problem_id << "/" << r.trial_index << ": " << r.error.value_or("pipeline failure") << "\n";
    }
  const auto& per_k = report["pass_at_k"]["per_k"];
  const std::string p1 = per_k.contains("1") ? fixed(per_k["1"].get<double>(), 3) : "n/a";
  out << "problems=" << bench.problems.size() << " trials=" << config.trials << " completed=" << results.size()
      << " pass@1=" << p1 << " out=" << out_dir.string() << "\n";
  if (g_stop.load()) {
    err << "interrupted: " << results.size() << " trial(s) finished\n";
    return kEnvironmentError;
  }
  if (!results.empty() && failed == results.size()) {
    err << "PipelineFailure: every trial failed\n";
    return kPipelineFailure;
  }
  return kOk;
}

}  // namespace

fs::path stub_binary_path() {
  if (const char* env = std::getenv("VERIMOA_STUBSIM"); env && *env) return env;
  const auto exe = self_exe();
  if (!exe.empty()) {
    const auto sibling = exe.parent_path() / "verimoa-stubsim";
    if (fs::exists(sibling)) return sibling;
  }
#ifdef VERIMOA_STUBSIM_DEFAULT
  return VERIMOA_STUBSIM_DEFAULT;
#else
  return "verimoa-stubsim";
#endif
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"verimoa: layered multi-agent Verilog generation and evaluation"};
  app.name("verimoa");
  app.set_version_flag("--version", VERIMOA_VERSION);
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the pipeline over a benchmark");
  std::string config_path, bench_path, out_path, backend_spec = "http", sim_kind = "external";
  int jobs = 4;
  bool keep = false;
  run->add_option("--config", config_path, "Run config (JSON)")->required();
  run->add_option("--benchmark", bench_path, "Benchmark root directory")->required();
  run->add_option("--out", out_path, "Output run directory")->required();
  run->add_option("--backend", backend_spec, "http | replay:<file> | scripted:<file>")->capture_default_str();
  run->add_option("--sim", sim_kind, "Simulator: external or stub")
      ->check(CLI::IsMember({"external", "stub"}))
      ->capture_default_str();
  run->add_option("--jobs", jobs, "Trials run concurrently")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_flag("--keep-workspaces", keep, "Keep simulator workspaces under <out>/workspaces");

  auto* score = app.add_subcommand("score", "Score one Verilog source against a problem");
  std::string problem_dir, source_path, score_sim = "external", score_config;
  bool no_functional = false, score_json = false;
  score->add_option("--problem", problem_dir, "Problem directory")->required();
  score->add_option("--hdl,--source", source_path, "Candidate Verilog file")->required();
  score->add_flag("--json", score_json, "Print the full score as JSON");
  score->add_option("--sim", score_sim, "Simulator: external or stub")
      ->check(CLI::IsMember({"external", "stub"}))
      ->capture_default_str();
  score->add_option("--config", score_config, "Run config for score constants and simulator settings");
  score->add_flag("--no-functional", no_functional, "Skip the functional gate");

  auto* passk = app.add_subcommand("passk", "pass@k table of a run");
  std::string passk_run;
  std::vector<int> passk_ks = {1};
  passk->add_option("--run", passk_run, "Run directory")->required();
  passk->add_option("--k", passk_ks, "Comma-separated k values")->delimiter(',')->capture_default_str();

  auto* report = app.add_subcommand("report", "Write report.json for a run");
  std::string report_run;
  std::vector<int> report_ks = {1, 5, 10};
  bool csv = false;
  report->add_option("--run", report_run, "Run directory")->required();
  report->add_option("--k", report_ks, "Comma-separated k values")->delimiter(',')->capture_default_str();
  report->add_flag("--csv", csv, "Also write curves.csv");

  auto* facts = app.add_subcommand("facts", "Print structural facts of a Verilog source");
  std::string facts_source;
  facts->add_option("source,--source", facts_source, "Verilog file")->required();

  auto* simcheck = app.add_subcommand("simcheck", "Check that the simulator works");
  std::string check_sim = "external", check_config;
  simcheck->add_option("--sim", check_sim, "Simulator: external or stub")
      ->check(CLI::IsMember({"external", "stub"}))
      ->capture_default_str();
  simcheck->add_option("--config", check_config, "Run config with simulator settings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << to_string(ErrorCode::UsageError) << ": " << e.what() << "\n";
    auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kUserError;
  }

  try {
    if (run->parsed())
      return cmd_run(config_path, bench_path, out_path, backend_spec, sim_kind, jobs, keep, out, err);

    if (score->parsed()) {
      const auto problem = load_problem(problem_dir);
      const auto source = read_file(source_path);
      std::optional<RunConfig> cfg;
      if (!score_config.empty()) cfg = load_config(score_config);
      auto sim = make_simulator(score_sim, cfg ? &*cfg : nullptr, {}, false);
      const auto constants = cfg ? cfg->score_constants : ScoreConstants{};
      auto eval = evaluate(source, problem, *sim, constants, {!no_functional});
      if (score_json) {
        auto doc = to_json(eval.score);
        doc["syntax_log"] = eval.syntax.log;
        if (eval.functional) doc["functional_log"] = eval.functional->log;
        out << doc.dump(2) << "\n";
        return kOk;
      }
      out << "score=" << fixed(eval.score.value, 6) << " branch=" << to_string(eval.score.branch) << "\n";
      for (const auto& [rule, v] : eval.score.breakdown) out << "  " << rule << " " << fixed(v, 6) << "\n";
      return kOk;
    }

    if (passk->parsed()) {
      const auto rep = build_report(passk_run, passk_ks);
      const auto& table = rep["pass_at_k"];
      out << "n=" << table["n"].get<int>() << "\n";
      for (const auto& [k, v] : table["per_k"].items()) out << "pass@" << k << "=" << fixed(v.get<double>(), 6) << "\n";
      for (const auto& w : rep["warnings"]) err << "warning: " << w.get<std::string>() << "\n";
      return kOk;
    }

    if (report->parsed()) {
      const auto rep = write_report(report_run, report_ks, csv);
      for (const auto& w : rep["warnings"]) err << "warning: " << w.get<std::string>() << "\n";
      out << (fs::path(report_run) / "report.json").string() << "\n";
      return kOk;
    }

    if (facts->parsed()) {
      out << verilog::to_json(verilog::extract_facts(read_file(facts_source))).dump(2) << "\n";
      return kOk;
    }

    if (simcheck->parsed()) {
      std::optional<RunConfig> cfg;
      if (!check_config.empty()) cfg = load_config(check_config);
      auto sim = make_simulator(check_sim, cfg ? &*cfg : nullptr, {}, false);
      DesignProblem smoke;
      smoke.id = "simcheck";
      smoke.description = "2-input AND";
      smoke.top_module = "top_module";
      smoke.testbench_source = std::string(kSmokeBench);
      const auto syntax = sim->syntax_test(kSmokeDesign, smoke);
      if (!syntax.passed) {
        err << to_string(ErrorCode::SimulatorUnavailable) << ": smoke design failed to compile\n" << syntax.log;
        return kEnvironmentError;
      }
      const auto func = sim->function_test(kSmokeDesign, smoke);
      if (!func.passed) {
        err << to_string(ErrorCode::SimulatorUnavailable) << ": smoke testbench did not pass\n" << func.log;
        return kEnvironmentError;
      }
      out << "simcheck: ok (" << check_sim << ", compile " << syntax.duration_ms << " ms, run "
          << func.duration_ms << " ms)\n";
      return kOk;
    }
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "InternalError: " << e.what() << "\n";
    return kEnvironmentError;
  }
  return kUserError;
}

}  // namespace verimoa::cli
