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

#include "verimoa/cache.hpp"

#include "verimoa/error.hpp"

namespace verimoa {

std::string to_string(const CandidateId& id) {
  return "L" + std::to_string(id.layer) + ".S" + std::to_string(id.slot) + "." + std::string(to_string(id.path)) +
         ".r" + std::to_string(id.refine_round);
}

std::string_view to_string(IntermediateLanguage lang) {
  return lang == IntermediateLanguage::Cpp ? "cpp" : "python";
}

AgentPath path_of(IntermediateLanguage lang) {
  return lang == IntermediateLanguage::Cpp ? AgentPath::Cpp : AgentPath::Py;
}

bool GlobalCache::contains_hdl(const CandidateId& id) const {
  return std::any_of(hdl_.begin(), hdl_.end(), [&](const auto& e) { return e.id == id; });
}

bool GlobalCache::contains_intermediate(IntermediateLanguage lang, const CandidateId& id) const {
  const auto& store = lang == IntermediateLanguage::Cpp ? cpp_ : py_;
  return std::any_of(store.begin(), store.end(), [&](const auto& e) { return e.id == id; });
}

void GlobalCache::insert_hdl(HdlCacheEntry entry) {
  if (contains_hdl(entry.id)) fail(ErrorCode::DuplicateId, "HDL cache already holds " + to_string(entry.id));
  hdl_.push_back(std::move(entry));
}

void GlobalCache::insert_intermediate(IntermediateCacheEntry entry) {
  if (entry.id.path != path_of(entry.language))
    fail(ErrorCode::InvariantViolation, "intermediate " + to_string(entry.id) + " does not match language " +
                                            std::string(to_string(entry.language)));
  if (contains_intermediate(entry.language, entry.id))
    fail(ErrorCode::DuplicateId, "intermediate cache already holds " + to_string(entry.id));
  (entry.language == IntermediateLanguage::Cpp ? cpp_ : py_).push_back(std::move(entry));
}

void GlobalCache::insert_batch(std::vector<HdlCacheEntry> hdl, std::vector<IntermediateCacheEntry> intermediate) {
  GlobalCache staged = *this;
  for (auto& e : hdl) staged.insert_hdl(std::move(e));
  for (auto& e : intermediate) staged.insert_intermediate(std::move(e));
  *this = std::move(staged);
}

std::vector<HdlCacheEntry> GlobalCache::top_n_hdl(int before_layer, std::size_t n) const {
  return top_ranked<HdlCacheEntry>(hdl_, before_layer, n);
}

std::vector<IntermediateCacheEntry> GlobalCache::top_k_intermediate(IntermediateLanguage lang, int before_layer,
                                                                    std::size_t k) const {
  return top_ranked<IntermediateCacheEntry>(intermediate_entries(lang), before_layer, k);
}

WindowStats GlobalCache::layer_quality_stats(int through_layer, std::size_t n) const {
  const auto window = top_n_hdl(through_layer + 1, n);
  if (window.empty())
    fail(ErrorCode::EmptyWindow, "no cached HDL at or before layer " + std::to_string(through_layer));
  WindowStats stats;
  double sum = 0;
  stats.min = window.size() < n ? 0.0 : entry_score(window.back());
  for (const auto& e : window) {
    sum += e.score.value;
    stats.ranked_scores.push_back(e.score.value);
  }
  stats.mean = sum / static_cast<double>(n);
  return stats;
}

}  // namespace verimoa
