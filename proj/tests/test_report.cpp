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

#include <fstream>

#include "oracles.hpp"
#include "support.hpp"
#include "verimoa/report.hpp"
#include "verimoa/util.hpp"

namespace verimoa {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::code_of;
using testing::TempDir;

void write_manifest(const fs::path& run, const std::vector<std::string>& problems, int trials, int layers = 2) {
  json m = {{"run_id", run.filename().string()},
            {"created_at", "2026-01-01T00:00:00Z"},
            {"benchmark", "synthetic"},
            {"problems", problems},
            {"trials", trials},
            {"config", {{"proposer_layers", layers}}}};
  write_file_atomic(run / "manifest.json", m.dump(2));
}

json stats(int layer, double min, double mean, double vendi, std::vector<double> ranked) {
  return {{"type", "layer_stats"},
          {"layer", layer},
          {"stats", {{"layer", layer}, {"min_top_n", min}, {"mean_top_n", mean}, {"vendi_top_n", vendi},
                     {"ranked_scores", ranked}}}};
}

void write_trial(const fs::path& run, const std::string& p, int t, bool pass, std::vector<json> extra = {},
                 bool finished = true) {
  const auto dir = run / p / std::to_string(t);
  fs::create_directories(dir);
  std::ofstream out(dir / "trace.jsonl");
  out << json{{"type", "trial_start"}, {"problem", p}, {"trial", t}}.dump() << "\n";
  out << json{{"type", "hdl_entry"}, {"score", {{"branch", pass ? "Perfect" : "FunctionalFail"}}}}.dump() << "\n";
  for (const auto& e : extra) out << e.dump() << "\n";
  if (finished)
    out << json{{"type", "final"},
                {"functional_pass", pass},
                {"branch", pass ? "Perfect" : "FunctionalFail"},
                {"pipeline_failure", false}}
               .dump()
        << "\n";
}

json without_timestamp(json report) {
  report.erase("generated_at");
  return report;
}

TEST(Report, ThreeOfFivePass) {
  TempDir dir;
  const auto run = dir / "run";
  const std::vector<std::string> problems = {"a", "b", "c", "d", "e"};
  write_manifest(run, problems, 10);
  for (std::size_t i = 0; i < problems.size(); ++i)
    for (int t = 0; t < 10; ++t) write_trial(run, problems[i], t, i < 3);
  const std::vector<int> ks = {1, 5};
  const auto r = build_report(run, ks);
  EXPECT_EQ(r["pass_at_k"]["n"], 10);
  EXPECT_NEAR(r["pass_at_k"]["per_k"]["1"].get<double>(), 0.6, 1e-15);
  EXPECT_NEAR(r["pass_at_k"]["per_k"]["5"].get<double>(), 0.6, 1e-15);
  EXPECT_EQ(r["pass_at_k"]["per_problem_c"]["a"], 10);
  EXPECT_EQ(r["pass_at_k"]["per_problem_c"]["e"], 0);
  EXPECT_TRUE(r["warnings"].empty());
  EXPECT_EQ(r["problems"]["d"]["final_branches"]["FunctionalFail"], 10);
  EXPECT_EQ(r["problems"]["a"]["candidate_branches"]["Perfect"], 10);
  EXPECT_EQ(r["diversity"]["similarity_kind"], "cosine-char3-tf");
}

TEST(Report, PassAtKIsMeanOfPerProblemValues) {
  TempDir dir;
  const auto run = dir / "run";
  write_manifest(run, {"x", "y"}, 6);
  // x passes trials 0,2,5; y passes trial 1
  for (int t = 0; t < 6; ++t) {
    write_trial(run, "x", t, t == 0 || t == 2 || t == 5);
    write_trial(run, "y", t, t == 1);
  }
  for (int k = 1; k <= 6; ++k) {
    const std::vector<int> ks = {k};
    const auto r = build_report(run, ks);
    const double expect =
        (oracle::pass_at_k_enumerated(6, 3, k) + oracle::pass_at_k_enumerated(6, 1, k)) / 2.0;
    EXPECT_NEAR(r["pass_at_k"]["per_k"][std::to_string(k)].get<double>(), expect, 1e-12);
  }
}

TEST(Report, KBeyondNIsWarnedAndSkipped) {
  TempDir dir;
  const auto run = dir / "run";
  write_manifest(run, {"a"}, 1);
  write_trial(run, "a", 0, true);
  const std::vector<int> ks = {1, 3};
  const auto r = build_report(run, ks);
  EXPECT_TRUE(r["pass_at_k"]["per_k"].contains("1"));
  EXPECT_FALSE(r["pass_at_k"]["per_k"].contains("3"));
  ASSERT_EQ(r["warnings"].size(), 1u);
  EXPECT_NE(r["warnings"][0].get<std::string>().find("DomainError"), std::string::npos);
}

TEST(Report, UnfinishedTrialsShrinkN) {
  TempDir dir;
  const auto run = dir / "run";
  write_manifest(run, {"a", "b"}, 3);
  for (int t = 0; t < 3; ++t) write_trial(run, "a", t, true);
  write_trial(run, "b", 0, true);
  write_trial(run, "b", 1, true, {}, false);  // interrupted
  const std::vector<int> ks = {1};
  const auto r = build_report(run, ks);
  EXPECT_EQ(r["pass_at_k"]["n"], 1);
  EXPECT_FALSE(r["warnings"].empty());
}

TEST(Report, TrialErrorCountsAsFailure) {
  TempDir dir;
  const auto run = dir / "run";
  write_manifest(run, {"a"}, 2);
  write_trial(run, "a", 0, true);
  write_trial(run, "a", 1, true, {{{"type", "trial_error"}, {"error_code", "AuthError"}, {"message", "x"}}}, false);
  const std::vector<int> ks = {1};
  const auto r = build_report(run, ks);
  EXPECT_EQ(r["pass_at_k"]["n"], 2);
  EXPECT_EQ(r["pass_at_k"]["per_problem_c"]["a"], 1);
  EXPECT_EQ(r["problems"]["a"]["final_branches"]["error"], 1);
}

TEST(Report, LayerAveragesAndCsv) {
  TempDir dir;
  const auto run = dir / "run";
  write_manifest(run, {"a"}, 2, 2);
  write_trial(run, "a", 0, true, {stats(1, 0.5, 0.7, 2.0, {0.9, 0.7, 0.5}), stats(2, 0.8, 0.9, 3.0, {1.0, 0.9, 0.8})});
  write_trial(run, "a", 1, true, {stats(1, 0.0, 0.3, 1.0, {0.9}), json{{"type", "layer_stats"}, {"layer", 2}, {"stats", nullptr}}});
  const std::vector<int> ks = {1};
  const auto r = build_report(run, ks);
  const auto& l1 = r["layers"][0];
  EXPECT_EQ(l1["trials"], 2);
  EXPECT_NEAR(l1["mean_top_n"].get<double>(), 0.5, 1e-15);
  EXPECT_NEAR(l1["min_top_n"].get<double>(), 0.25, 1e-15);
  EXPECT_EQ(l1["per_rank"], json({0.9, 0.35, 0.25}));
  EXPECT_EQ(r["layers"][1]["trials"], 1);
  EXPECT_EQ(r["diversity"]["per_layer_vendi"], json({1.5, 3.0}));

  const auto csv = curves_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "layer,trials,min_top_n,mean_top_n,vendi_top_n,rank1,rank2,rank3");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Report, CorruptTraceNamesFileAndLine) {
  TempDir dir;
  const auto run = dir / "run";
  write_manifest(run, {"a"}, 1);
  write_trial(run, "a", 0, true);
  {
    std::ofstream out(run / "a" / "0" / "trace.jsonl", std::ios::app);
    out << "{broken\n";
  }
  try {
    const std::vector<int> ks = {1};
    build_report(run, ks);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CorruptTrace);
    EXPECT_NE(std::string(e.what()).find("trace.jsonl:4"), std::string::npos) << e.what();
  }
}

TEST(Report, MissingFieldIsCorrupt) {
  TempDir dir;
  const auto run = dir / "run";
  write_manifest(run, {"a"}, 1);
  write_trial(run, "a", 0, true, {json{{"type", "layer_stats"}, {"stats", {{"min_top_n", 1}}}}});
  const std::vector<int> ks = {1};
  EXPECT_EQ(code_of([&] { build_report(run, ks); }), ErrorCode::CorruptTrace);
  write_file_atomic(run / "manifest.json", "{}");
  EXPECT_EQ(code_of([&] { build_report(run, ks); }), ErrorCode::CorruptTrace);
}

TEST(Report, DeterministicApartFromTimestamp) {
  TempDir dir;
  const auto run = dir / "run";
  write_manifest(run, {"a", "b"}, 2);
  for (int t = 0; t < 2; ++t) {
    write_trial(run, "a", t, t == 0, {stats(1, 0.5, 0.7, 2.0, {0.9, 0.7})});
    write_trial(run, "b", t, false, {stats(1, 0.1, 0.2, 1.0, {0.3, 0.1})});
  }
  const std::vector<int> ks = {1, 2};
  const auto first = write_report(run, ks, true);
  const auto csv = read_file(run / "curves.csv");
  const auto second = write_report(run, ks, true);
  EXPECT_EQ(without_timestamp(first).dump(), without_timestamp(second).dump());
  EXPECT_EQ(csv, read_file(run / "curves.csv"));
  EXPECT_TRUE(json::parse(read_file(run / "report.json")).contains("generated_at"));
}

}  // namespace
}  // namespace verimoa
