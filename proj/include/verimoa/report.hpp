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

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

namespace verimoa {

// Aggregates a run directory (manifest.json plus per-trial traces) into
// the report document: pass@k table, per-layer quality and diversity
// curves averaged over trials, and branch counts per problem. The only
// time-dependent field is "generated_at".
//
// n is the smallest number of finished trials over all problems; each
// problem contributes its first n finished trials. A k outside [1, n] is
// skipped with an entry in "warnings". Throws CorruptTrace.
nlohmann::json build_report(const std::filesystem::path& run_dir, std::span<const int> ks);

// Curves as CSV: one row per layer.
std::string curves_csv(const nlohmann::json& report);

// build_report, then report.json (and curves.csv) written atomically.
nlohmann::json write_report(const std::filesystem::path& run_dir, std::span<const int> ks, bool with_csv);

}  // namespace verimoa
