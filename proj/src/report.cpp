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

#include "verimoa/report.hpp"

#include <chrono>
#include <ctime>
#include <map>
#include <optional>
#include <sstream>
#include <iomanip>

#include "verimoa/error.hpp"
#include "verimoa/harness.hpp"
#include "verimoa/trace.hpp"
#include "verimoa/util.hpp"

namespace verimoa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct LayerPoint {
  double min = 0, mean = 0, vendi = 0;
  std::vector<double> ranked;
};

struct TrialSummary {
  bool finished = false;
  bool passed = false;
  std::string branch = "none";
  std::map<int, LayerPoint> layers;
  std::map<std::string, int> candidate_branches;
};

[[noreturn]] void corrupt(const fs::path& file, std::size_t line, const std::string& what) {
  fail(ErrorCode::CorruptTrace, file.string() + ":" + std::to_string(line) + ": " + what);
}

template <typename T>
T field(const TraceRecord& rec, const char* key, const fs::path& file) {
  const auto it = rec.data.find(key);
  if (it == rec.data.end()) corrupt(file, rec.line, std::string("missing field '") + key + "'");
  try {
    return it->template get<T>();
  } catch (const json::exception&) {
    corrupt(file, rec.line, std::string("bad field '") + key + "'");
  }
}

TrialSummary summarize(const fs::path& file) {
  TrialSummary s;
  for (const auto& rec : read_trace(file)) {
    const auto type = rec.data["type"].get<std::string>();
    if (type == "layer_stats") {
      const int layer = field<int>(rec, "layer", file);
      const auto& stats = rec.data.contains("stats") ? rec.data["stats"] : json();
      if (stats.is_null()) continue;
      if (!stats.is_object()) corrupt(file, rec.line, "bad field 'stats'");
      TraceRecord inner{rec.line, stats};
      s.layers[layer] = {field<double>(inner, "min_top_n", file), field<double>(inner, "mean_top_n", file),
                         field<double>(inner, "vendi_top_n", file),
                         field<std::vector<double>>(inner, "ranked_scores", file)};
    } else if (type == "hdl_entry") {
      const auto& score = rec.data.contains("score") ? rec.data["score"] : json();
      if (!score.is_object() || !score.contains("branch") || !score["branch"].is_string())
        corrupt(file, rec.line, "hdl_entry without score branch");
      ++s.candidate_branches[score["branch"].get<std::string>()];
    } else if (type == "final") {
      s.finished = true;
      s.passed = field<bool>(rec, "functional_pass", file);
      const auto& b = rec.data.contains("branch") ? rec.data["branch"] : json();
      s.branch = b.is_string() ? b.get<std::string>() : "none";
      if (field<bool>(rec, "pipeline_failure", file)) s.branch = "pipeline_failure";
    } else if (type == "trial_error") {
      s.finished = true;
      s.passed = false;
      s.branch = "error";
    }
  }
  return s;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Averages layer points over trials; ranks are padded with 0 to the
// longest window seen.
json average_layers(const std::vector<const TrialSummary*>& trials, int layers) {
  json out = json::array();
  for (int l = 1; l <= layers; ++l) {
    double min = 0, mean = 0, vendi = 0;
    std::vector<double> ranks;
    int count = 0;
    for (const auto* t : trials) {
      const auto it = t->layers.find(l);
      if (it == t->layers.end()) continue;
      ++count;
      min += it->second.min;
      mean += it->second.mean;
      vendi += it->second.vendi;
      if (ranks.size() < it->second.ranked.size()) ranks.resize(it->second.ranked.size(), 0.0);
      for (std::size_t r = 0; r < it->second.ranked.size(); ++r) ranks[r] += it->second.ranked[r];
    }
    if (count == 0) {
      out.push_back({{"layer", l}, {"trials", 0}, {"min_top_n", nullptr}, {"mean_top_n", nullptr},
                     {"vendi_top_n", nullptr}, {"per_rank", json::array()}});
      continue;
    }
    for (auto& r : ranks) r /= count;
    out.push_back({{"layer", l}, {"trials", count}, {"min_top_n", min / count}, {"mean_top_n", mean / count},
                   {"vendi_top_n", vendi / count}, {"per_rank", ranks}});
  }
  return out;
}

}  // namespace

json build_report(const fs::path& run_dir, std::span<const int> ks) {
  const auto manifest_path = run_dir / "manifest.json";
  json manifest;
  try {
    manifest = json::parse(read_file(manifest_path));
  } catch (const json::exception& e) {
    fail(ErrorCode::CorruptTrace, manifest_path.string() + ":1: " + e.what());
  }
  std::vector<std::string> problems;
  int trials = 0, layers = 0;
  try {
    problems = manifest.at("problems").get<std::vector<std::string>>();
    trials = manifest.at("trials").get<int>();
    layers = manifest.at("config").at("proposer_layers").get<int>();
  } catch (const json::exception& e) {
    fail(ErrorCode::CorruptTrace, manifest_path.string() + ":1: " + e.what());
  }

  std::map<std::string, std::vector<TrialSummary>> finished;
  for (const auto& p : problems) {
    auto& list = finished[p];
    for (int t = 0; t < trials; ++t) {
      const auto file = run_dir / p / std::to_string(t) / "trace.jsonl";
      if (!fs::exists(file)) continue;
      auto s = summarize(file);
      if (s.finished) list.push_back(std::move(s));
    }
  }

  json warnings = json::array();
  int n = problems.empty() ? 0 : trials;
  for (const auto& p : problems) n = std::min<int>(n, static_cast<int>(finished[p].size()));
  if (n < trials) warnings.push_back("only " + std::to_string(n) + " of " + std::to_string(trials) +
                                     " trials finished for every problem; pass@k uses n=" + std::to_string(n));

  json per_problem_c = json::object();
  std::map<std::string, int> c_of;
  for (const auto& p : problems) {
    int c = 0;
    for (int t = 0; t < n; ++t) c += finished[p][static_cast<std::size_t>(t)].passed ? 1 : 0;
    c_of[p] = c;
    per_problem_c[p] = c;
  }
  json per_k = json::object();
  for (int k : ks) {
    try {
      double sum = 0;
      for (const auto& p : problems) sum += pass_at_k(n, c_of[p], k);
      per_k[std::to_string(k)] = problems.empty() ? 0.0 : sum / static_cast<double>(problems.size());
    } catch (const Error& e) {
      warnings.push_back("k=" + std::to_string(k) + " skipped: " + std::string(to_string(e.code())) + ": " + e.what());
    }
  }

  std::vector<const TrialSummary*> all;
  json problem_docs = json::object();
  for (const auto& p : problems) {
    std::vector<const TrialSummary*> mine;
    json final_branches = json::object(), candidate_branches = json::object();
    for (const auto& s : finished[p]) {
      mine.push_back(&s);
      all.push_back(&s);
      final_branches[s.branch] = final_branches.value(s.branch, 0) + 1;
      for (const auto& [b, count] : s.candidate_branches)
        candidate_branches[b] = candidate_branches.value(b, 0) + count;
    }
    problem_docs[p] = {{"finished_trials", mine.size()},
                       {"c", c_of[p]},
                       {"final_branches", final_branches},
                       {"candidate_branches", candidate_branches},
                       {"layers", average_layers(mine, layers)}};
  }

  auto layer_doc = average_layers(all, layers);
  json vendi = json::array();
  for (const auto& l : layer_doc) vendi.push_back(l["vendi_top_n"]);

  return {{"generated_at", utc_timestamp()},
          {"run_id", manifest.value("run_id", "")},
          {"benchmark", manifest.value("benchmark", "")},
          {"pass_at_k", {{"n", n}, {"per_k", per_k}, {"per_problem_c", per_problem_c}}},
          {"layers", layer_doc},
          {"diversity", {{"similarity_kind", kSimilarityKind}, {"per_layer_vendi", vendi}}},
          {"problems", problem_docs},
          {"warnings", warnings}};
}

std::string curves_csv(const json& report) {
  std::ostringstream out;
  out << std::setprecision(17);
  std::size_t ranks = 0;
  for (const auto& l : report.at("layers")) ranks = std::max(ranks, l.at("per_rank").size());
  out << "layer,trials,min_top_n,mean_top_n,vendi_top_n";
  for (std::size_t r = 1; r <= ranks; ++r) out << ",rank" << r;
  out << "\n";
  auto cell = [&](const json& v) {
    if (v.is_number()) out << v.get<double>();
  };
  for (const auto& l : report.at("layers")) {
    out << l.at("layer").get<int>() << "," << l.at("trials").get<int>() << ",";
    cell(l.at("min_top_n"));
    out << ",";
    cell(l.at("mean_top_n"));
    out << ",";
    cell(l.at("vendi_top_n"));
    const auto& pr = l.at("per_rank");
    for (std::size_t r = 0; r < ranks; ++r) {
      out << ",";
      if (r < pr.size()) cell(pr[r]);
    }
    out << "\n";
  }
  return out.str();
}

json write_report(const fs::path& run_dir, std::span<const int> ks, bool with_csv) {
  auto report = build_report(run_dir, ks);
  write_file_atomic(run_dir / "report.json", report.dump(2) + "\n");
  if (with_csv) write_file_atomic(run_dir / "curves.csv", curves_csv(report));
  return report;
}

}  // namespace verimoa
